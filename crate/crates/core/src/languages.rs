//! Input, basic, proper and h-proper languages: deciders, enumeration, comparison.

use std::collections::BTreeSet;
use std::fmt;

use crate::catalog::Oracle;
use crate::engine::cycle::{Budget, Explorer};
use crate::engine::decider::{Decider, Reason, Status};
use crate::engine::machine::Machine;
use crate::engine::sweep::{sweep, Flow};
use crate::engine::{Decision, Limits, Verdict};
use crate::error::EngineError;
use crate::grammar::GnfGrammar;
use crate::model::{apply_morphism, project, AutomatonSpec};
use crate::symbol::{Symbol, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LanguageKind {
    /// L(M): input words accepted from the initial configuration.
    Input,
    /// L_C(M): working words accepted from restarting configurations.
    Basic,
    /// Projection of the basic language onto the input alphabet.
    Proper,
    /// Image of the basic language under h.
    HProper,
}

impl std::str::FromStr for LanguageKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "input" => Ok(LanguageKind::Input),
            "basic" => Ok(LanguageKind::Basic),
            "proper" => Ok(LanguageKind::Proper),
            "hproper" => Ok(LanguageKind::HProper),
            _ => Err(format!("unknown language kind {s:?}")),
        }
    }
}

impl fmt::Display for LanguageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LanguageKind::Input => "input",
            LanguageKind::Basic => "basic",
            LanguageKind::Proper => "proper",
            LanguageKind::HProper => "hproper",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LanguageQuery {
    pub kind: LanguageKind,
    /// Maximal word length; for proper languages, the length of the basic word.
    pub max_len: usize,
    pub limits: Limits,
}

impl LanguageQuery {
    pub fn new(kind: LanguageKind, max_len: usize) -> LanguageQuery {
        LanguageQuery { kind, max_len, limits: Limits::default() }
    }
}

/// Sorts words by length, then lexicographically by rank in `alphabet`.
pub fn sort_length_lex(words: &mut [Word], alphabet: &[Symbol]) {
    let rank = |s: &Symbol| alphabet.iter().position(|a| a == s).unwrap_or(usize::MAX);
    words.sort_by_cached_key(|w| (w.len(), w.iter().map(rank).collect::<Vec<_>>()));
}

/// Largest word count for which the length-indexed table is used.
const TABLE_WORDS: u128 = 1 << 25;

fn word_count(base: usize, n: usize) -> u128 {
    (0..=n).map(|i| (base as u128).saturating_pow(i as u32)).fold(0u128, |a, b| a.saturating_add(b))
}

fn exceeded(what: &str) -> EngineError {
    EngineError::ResourceExceeded(what.to_string())
}

/// All words over `alphabet` (symbol ids) of length ≤ n accepted from restarting configurations.
pub(crate) fn accepted_words(m: &Machine, alphabet: &[u8], n: usize, limits: &Limits) -> Result<Vec<Vec<u8>>, EngineError> {
    let closed_under_restart = alphabet.len() == m.work_ids.len();
    if !m.shrinking && closed_under_restart && word_count(alphabet.len(), n) <= TABLE_WORDS {
        table_words(m, alphabet, n, limits)
    } else {
        sweep_words(m, alphabet, n, limits)
    }
}

/// Length-indexed table: a word is a member iff one cycle accepts or restarts on a shorter member.
fn table_words(m: &Machine, alphabet: &[u8], n: usize, limits: &Limits) -> Result<Vec<Vec<u8>>, EngineError> {
    let base = alphabet.len();
    let mut rank = [usize::MAX; 256];
    for (i, &s) in alphabet.iter().enumerate() {
        rank[s as usize] = i;
    }
    let mut member: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    let mut out = Vec::new();
    let mut ex = Explorer::default();
    let mut tape = Vec::with_capacity(n + 2);
    for len in 0..=n {
        let count = base.pow(len as u32);
        let mut bits = vec![0u64; count.div_ceil(64).max(1)];
        let mut digits = vec![0usize; len];
        for idx in 0..count {
            tape.clear();
            tape.push(super::engine::machine::LEFT);
            tape.extend(digits.iter().map(|&d| alphabet[d]));
            tape.push(super::engine::machine::RIGHT);
            let mut budget = Budget::new(limits);
            let res = ex.explore(m, &tape, false, true, &mut budget);
            let mut yes = res.accept.is_some();
            if !yes {
                if res.limit {
                    return Err(exceeded("cycle search"));
                }
                yes = res.restarts.iter().any(|(r, _, _)| {
                    let inner = &r[1..r.len() - 1];
                    let i = inner.iter().fold(0usize, |acc, &c| acc * base + rank[c as usize]);
                    member[inner.len()][i / 64] >> (i % 64) & 1 == 1
                });
            }
            if yes {
                bits[idx / 64] |= 1 << (idx % 64);
                out.push(tape[1..tape.len() - 1].to_vec());
            }
            // next word in lexicographic order, most significant digit first
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < base {
                    break;
                }
                *d = 0;
            }
        }
        member.push(bits);
    }
    Ok(out)
}

fn all_extensions(p: &[u8], alphabet: &[u8], up_to: usize, out: &mut Vec<Vec<u8>>) {
    let mut level = vec![p.to_vec()];
    out.push(p.to_vec());
    for _ in p.len()..up_to {
        level = level
            .iter()
            .flat_map(|w| alphabet.iter().map(move |&s| [w.as_slice(), &[s]].concat()))
            .collect();
        out.extend(level.iter().cloned());
    }
}

/// Prefix sweep: verdicts that hold for every extension prune the search.
fn sweep_words(m: &Machine, alphabet: &[u8], n: usize, limits: &Limits) -> Result<Vec<Vec<u8>>, EngineError> {
    let mut d = Decider::new(m, *limits);
    let mut out = Vec::new();
    sweep(alphabet, n, |p| {
        match d.status(&Machine::open_tape(p), true) {
            Status::Member => {
                all_extensions(p, alphabet, n, &mut out);
                Ok(Flow::Prune)
            }
            Status::NonMember => Ok(Flow::Prune),
            Status::Unknown(Reason::Limit) => Err(exceeded("membership search")),
            Status::Unknown(Reason::Open) => {
                match d.status(&Machine::closed_tape(p), false) {
                    Status::Member => out.push(p.to_vec()),
                    Status::NonMember => {}
                    Status::Unknown(_) => return Err(exceeded("membership search")),
                }
                Ok(Flow::Extend)
            }
        }
    })?;
    out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(out)
}

/// The words of a language up to the query's bound, length-lexicographically ordered.
pub fn enumerate_language(spec: &AutomatonSpec, query: &LanguageQuery) -> Result<Vec<Word>, EngineError> {
    let m = spec.machine()?;
    let n = query.max_len;
    let l = &query.limits;
    match query.kind {
        LanguageKind::Input => {
            let ws = accepted_words(&m, &m.input_ids, n, l)?;
            Ok(ws.iter().map(|w| m.decode(w)).collect())
        }
        LanguageKind::Basic => {
            let ws = accepted_words(&m, &m.work_ids, n, l)?;
            Ok(ws.iter().map(|w| m.decode(w)).collect())
        }
        LanguageKind::Proper | LanguageKind::HProper => {
            let h = match query.kind {
                LanguageKind::HProper => Some(spec.morphism().ok_or(EngineError::NoMorphism)?),
                _ => None,
            };
            let ws = accepted_words(&m, &m.work_ids, n, l)?;
            let mut set = BTreeSet::new();
            for w in ws {
                let w = m.decode(&w);
                let img = match h {
                    Some(h) => apply_morphism(h, &w)?,
                    None => project(&w, spec.input_alphabet(), spec.work_alphabet())?,
                };
                set.insert(img);
            }
            let mut v: Vec<Word> = set.into_iter().collect();
            sort_length_lex(&mut v, spec.input_alphabet());
            Ok(v)
        }
    }
}

/// Decides `v ∈ h(L_C(M))`, returning an extended version as witness.
pub fn decide_hproper_membership(
    spec: &AutomatonSpec,
    v: &[Symbol],
    limits: &Limits,
) -> Result<Decision, EngineError> {
    let h = spec.morphism().ok_or(EngineError::NoMorphism)?;
    let m = spec.machine()?;
    m.encode_input(v)?;
    let pre: Vec<Vec<u8>> = v
        .iter()
        .map(|a| m.work_ids.iter().copied().filter(|&d| h.get(&m.symbols[d as usize]) == Some(a)).collect())
        .collect();
    let mut d = Decider::new(&m, *limits);
    let mut calls = 0u64;
    let mut exhausted = false;
    let mut found: Option<Vec<u8>> = None;
    let mut stack: Vec<Vec<u8>> = vec![Vec::new()];
    while let Some(p) = stack.pop() {
        calls += 1;
        if calls > limits.max_configs {
            exhausted = true;
            break;
        }
        if p.len() == v.len() {
            match d.status(&Machine::closed_tape(&p), false) {
                Status::Member => {
                    found = Some(p);
                    break;
                }
                Status::NonMember => continue,
                Status::Unknown(_) => {
                    exhausted = true;
                    continue;
                }
            }
        }
        match d.status(&Machine::open_tape(&p), true) {
            Status::Member => {
                let mut w = p.clone();
                w.extend(pre[p.len()..].iter().map(|c| c[0]));
                found = Some(w);
                break;
            }
            Status::NonMember => continue,
            Status::Unknown(Reason::Limit) => {
                exhausted = true;
                continue;
            }
            Status::Unknown(Reason::Open) => {}
        }
        for &c in pre[p.len()].iter().rev() {
            let mut q = p.clone();
            q.push(c);
            stack.push(q);
        }
    }
    match found {
        Some(w) => {
            let tape = Machine::closed_tape(&w);
            if d.status(&tape, false) != Status::Member {
                return Err(exceeded("witness replay"));
            }
            let trace = d.accepting_trace(&tape);
            Ok(Decision { verdict: Verdict::Member, witness: Some(m.decode(&w)), trace: Some(trace) })
        }
        None => Ok(Decision {
            verdict: if exhausted { Verdict::ResourceExceeded } else { Verdict::NonMember },
            witness: None,
            trace: None,
        }),
    }
}

/// One side of a language comparison.
#[derive(Clone, Copy, Debug)]
pub enum LanguageSource<'a> {
    Automaton(&'a AutomatonSpec, LanguageKind),
    Oracle(&'a Oracle),
    Grammar(&'a GnfGrammar),
}

impl LanguageSource<'_> {
    fn alphabet(&self) -> Vec<Symbol> {
        match self {
            LanguageSource::Automaton(s, LanguageKind::Basic) => s.work_alphabet().to_vec(),
            LanguageSource::Automaton(s, _) => s.input_alphabet().to_vec(),
            LanguageSource::Oracle(o) => o.alphabet(),
            LanguageSource::Grammar(g) => g.terminals().to_vec(),
        }
    }

    /// Members up to length `n`.
    pub fn words(&self, n: usize, limits: &Limits) -> Result<Vec<Word>, EngineError> {
        match self {
            LanguageSource::Automaton(s, kind) => {
                enumerate_language(s, &LanguageQuery { kind: *kind, max_len: n, limits: *limits })
            }
            LanguageSource::Oracle(o) => Ok(o.members(n)),
            LanguageSource::Grammar(g) => Ok(g.language(n)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Comparison {
    Equal { bound: usize },
    /// The first word of the symmetric difference; `in_first` tells which side contains it.
    Differ { word: Word, in_first: bool },
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Comparison::Equal { bound } => write!(f, "equal <= {bound}"),
            Comparison::Differ { word, in_first } => {
                let w = if word.is_empty() { "-".to_string() } else { crate::symbol::spaced(word) };
                write!(f, "counterexample {w} (only in {})", if *in_first { "first" } else { "second" })
            }
        }
    }
}

/// Compares two languages on all words up to length `n`.
pub fn compare_languages(
    a: &LanguageSource<'_>,
    b: &LanguageSource<'_>,
    n: usize,
    limits: &Limits,
) -> Result<Comparison, EngineError> {
    let wa: BTreeSet<Word> = a.words(n, limits)?.into_iter().collect();
    let wb: BTreeSet<Word> = b.words(n, limits)?.into_iter().collect();
    let mut alphabet = a.alphabet();
    for s in b.alphabet() {
        if !alphabet.contains(&s) {
            alphabet.push(s);
        }
    }
    let mut diff: Vec<Word> = wa.symmetric_difference(&wb).cloned().collect();
    if diff.is_empty() {
        return Ok(Comparison::Equal { bound: n });
    }
    sort_length_lex(&mut diff, &alphabet);
    let word = diff.swap_remove(0);
    let in_first = wa.contains(&word);
    Ok(Comparison::Differ { word, in_first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dyck1, l_k, m_e};
    use crate::symbol::symbols;

    #[test]
    fn m_e_input_up_to_nine() {
        let got = enumerate_language(&m_e(), &LanguageQuery::new(LanguageKind::Input, 9)).unwrap();
        let lens: Vec<usize> = got.iter().map(Vec::len).collect();
        assert_eq!(lens, vec![1, 2, 4, 8]);
    }

    #[test]
    fn dyck_input_up_to_four() {
        let got = enumerate_language(&dyck1(), &LanguageQuery::new(LanguageKind::Input, 4)).unwrap();
        let want = vec![
            vec![],
            symbols(&["a1", "ā1"]),
            symbols(&["a1", "a1", "ā1", "ā1"]),
            symbols(&["a1", "ā1", "a1", "ā1"]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn sweep_and_table_agree() {
        for spec in [m_e(), dyck1(), l_k(2)] {
            let m = spec.machine().unwrap();
            let l = Limits::default();
            let a = table_words(&m, &m.work_ids, 7, &l).unwrap();
            let b = sweep_words(&m, &m.work_ids, 7, &l).unwrap();
            assert_eq!(a, b, "{}", spec.name());
        }
    }

    #[test]
    fn compare_finds_first_difference() {
        let l = Limits::default();
        let d = dyck1();
        let c = compare_languages(&LanguageSource::Automaton(&d, LanguageKind::Input), &LanguageSource::Automaton(&d, LanguageKind::Input), 6, &l).unwrap();
        assert_eq!(c, Comparison::Equal { bound: 6 });
        let o = Oracle::PowersOfTwo(Symbol::new("a").unwrap());
        let e = m_e();
        let c = compare_languages(&LanguageSource::Automaton(&e, LanguageKind::Input), &LanguageSource::Oracle(&o), 16, &l).unwrap();
        assert_eq!(c, Comparison::Equal { bound: 16 });
    }
}
