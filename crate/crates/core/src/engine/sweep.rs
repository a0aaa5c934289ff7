//! Length-lexicographic sweeps over word prefixes.

pub(crate) enum Flow {
    /// No extension of this prefix needs to be visited.
    Prune,
    Extend,
}

/// Visits prefixes over `alphabet` up to `max_len` in length-lexicographic order,
/// descending only below prefixes for which `f` returns [`Flow::Extend`].
pub(crate) fn sweep<E>(
    alphabet: &[u8],
    max_len: usize,
    mut f: impl FnMut(&[u8]) -> Result<Flow, E>,
) -> Result<(), E> {
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    for len in 0..=max_len {
        let mut next = Vec::new();
        for p in &level {
            if let Flow::Extend = f(p)? {
                if len < max_len {
                    for &s in alphabet {
                        let mut c = Vec::with_capacity(p.len() + 1);
                        c.extend_from_slice(p);
                        c.push(s);
                        next.push(c);
                    }
                }
            }
        }
        level = next;
        if level.is_empty() {
            break;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn visits_in_length_lex_order() {
        let mut seen = Vec::new();
        sweep::<()>(&[2, 3], 2, |p| {
            seen.push(p.to_vec());
            Ok(if p == [3] { Flow::Prune } else { Flow::Extend })
        })
        .unwrap();
        assert_eq!(seen, vec![vec![], vec![2], vec![3], vec![2, 2], vec![2, 3]]);
    }
}
