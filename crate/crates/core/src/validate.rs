//! Structural validation and subtype classification.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::model::{AutomatonSpec, AuxUse, Direction, Instruction, RewriteForm, State};
use crate::symbol::{spaced, Symbol, Word};

/// Largest supported window.
pub const MAX_WINDOW: usize = 16;
/// Largest supported working alphabet.
pub const MAX_SYMBOLS: usize = 253;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    pub state: Option<State>,
    pub window: Option<Word>,
    pub message: String,
    /// Structural violations make the automaton unusable by the engine.
    pub structural: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.state, &self.window) {
            (Some(q), Some(u)) => write!(f, "({q}, {}): {}", spaced(u), self.message),
            (Some(q), None) => write!(f, "({q}): {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

/// Outcome of [`validate_automaton`]: an empty violation list means the spec is legal.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Tolerated deviations, such as rewrite targets outside PC^{≤k-1}.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_legal(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_structural(&self) -> bool {
        self.violations.iter().any(|v| v.structural)
    }

    fn push(&mut self, key: Option<(&State, &Word)>, structural: bool, message: String) {
        self.violations.push(Violation {
            state: key.map(|(q, _)| q.clone()),
            window: key.map(|(_, u)| u.clone()),
            message,
            structural,
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            writeln!(f, "legal")?;
        }
        for v in &self.violations {
            writeln!(f, "violation: {v}")?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

/// Result of [`classify_rewrite`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RewriteClass {
    Cl,
    DlNotCl,
    SlNotDl,
    Illegal,
}

impl RewriteClass {
    pub fn form(self) -> Option<RewriteForm> {
        match self {
            RewriteClass::Cl => Some(RewriteForm::Cl),
            RewriteClass::DlNotCl => Some(RewriteForm::Dl),
            RewriteClass::SlNotDl => Some(RewriteForm::Sl),
            RewriteClass::Illegal => None,
        }
    }
}

fn sentinels_match(u: &[Symbol], v: &[Symbol]) -> bool {
    let left = |w: &[Symbol]| w.first().is_some_and(Symbol::is_left);
    let right = |w: &[Symbol]| w.last().is_some_and(Symbol::is_right);
    left(u) == left(v) && right(u) == right(v)
}

/// Minimum number of contiguous blocks deleted from `u` to obtain `v`, if `v`
/// is a subsequence of `u`.
pub fn min_deleted_blocks(u: &[Symbol], v: &[Symbol]) -> Option<usize> {
    const INF: usize = usize::MAX / 2;
    let (n, m) = (u.len(), v.len());
    // dp[j][d]: processed u[..i], matched v[..j], d = whether u[i-1] was deleted
    let mut dp = vec![[INF; 2]; m + 1];
    dp[0][0] = 0;
    for i in 0..n {
        let mut next = vec![[INF; 2]; m + 1];
        for j in 0..=m {
            for d in 0..2 {
                let cur = dp[j][d];
                if cur >= INF {
                    continue;
                }
                let del = cur + usize::from(d == 0);
                next[j][1] = next[j][1].min(del);
                if j < m && u[i] == v[j] {
                    next[j + 1][0] = next[j + 1][0].min(cur);
                }
            }
        }
        dp = next;
    }
    let best = dp[m][0].min(dp[m][1]);
    (best < INF).then_some(best)
}

/// Classifies a rewrite `u → v` by the number of deleted blocks.
pub fn classify_rewrite(u: &[Symbol], v: &[Symbol]) -> RewriteClass {
    if v.len() >= u.len() || !sentinels_match(u, v) {
        return RewriteClass::Illegal;
    }
    match min_deleted_blocks(u, v) {
        Some(b) if b <= 2 => RewriteClass::Cl,
        Some(_) => RewriteClass::DlNotCl,
        None => RewriteClass::SlNotDl,
    }
}

/// Checks that `w` is a member of PC^{≤k}.
pub fn window_shape_error(w: &[Symbol], k: usize) -> Option<String> {
    if w.is_empty() {
        return Some("empty window content".into());
    }
    if w.len() > k {
        return Some(format!("window content longer than {k}"));
    }
    if let Some(e) = fragment_error(w) {
        return Some(e);
    }
    if !w[w.len() - 1].is_right() && w.len() != k {
        return Some(format!("window content without $ must have length {k}"));
    }
    None
}

/// Every member of PC^{≤k} over `alphabet`.
pub fn legal_windows(alphabet: &[Symbol], k: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=k {
        for left in [true, false] {
            for right in [true, false] {
                let fixed = usize::from(left) + usize::from(right);
                if fixed > len || (!right && len != k) {
                    continue;
                }
                let mut words: Vec<Word> = vec![Vec::new()];
                for _ in 0..len - fixed {
                    words = words
                        .iter()
                        .flat_map(|w| {
                            alphabet.iter().map(move |a| {
                                let mut x = w.clone();
                                x.push(a.clone());
                                x
                            })
                        })
                        .collect();
                }
                for mid in words {
                    let mut w = Vec::with_capacity(len);
                    if left {
                        w.push(Symbol::left());
                    }
                    w.extend(mid);
                    if right {
                        w.push(Symbol::right());
                    }
                    out.push(w);
                }
            }
        }
    }
    out
}

/// Checks sentinel placement inside a tape fragment.
fn fragment_error(w: &[Symbol]) -> Option<String> {
    for (i, s) in w.iter().enumerate() {
        if s.is_left() && i != 0 {
            return Some("^ may only occur first".into());
        }
        if s.is_right() && i + 1 != w.len() {
            return Some("$ may only occur last".into());
        }
    }
    None
}

fn in_short_windows(v: &[Symbol], k: usize) -> bool {
    k >= 2 && window_shape_error(v, k - 1).is_none()
}

/// Lists every way in which `spec` departs from the definition and from its declared flags.
pub fn validate_automaton(spec: &AutomatonSpec) -> ValidationReport {
    let mut r = ValidationReport::default();
    let k = spec.window;
    if k == 0 || k > MAX_WINDOW {
        r.push(None, true, format!("window size {k} outside 1..={MAX_WINDOW}"));
    }
    if spec.work.len() > MAX_SYMBOLS {
        r.push(None, true, format!("more than {MAX_SYMBOLS} working symbols"));
    }
    let work: BTreeSet<&Symbol> = spec.work.iter().collect();
    let input: BTreeSet<&Symbol> = spec.input.iter().collect();
    if work.len() != spec.work.len() {
        r.push(None, true, "duplicate working symbol".into());
    }
    if input.len() != spec.input.len() {
        r.push(None, true, "duplicate input symbol".into());
    }
    for s in &spec.work {
        if s.is_sentinel() {
            r.push(None, true, "sentinel declared as working symbol".into());
        }
    }
    for a in &spec.input {
        if !work.contains(a) {
            r.push(None, true, format!("input symbol {a} is not a working symbol"));
        }
    }
    let states: BTreeSet<&State> = spec.states.iter().collect();
    if states.len() != spec.states.len() {
        r.push(None, true, "duplicate state".into());
    }
    if !states.contains(&spec.initial) {
        r.push(None, true, format!("initial state {} is not declared", spec.initial));
    }
    if spec.flags.mr_degree == 0 {
        r.push(None, false, "rewrite degree must be at least 1".into());
    }

    let known = |s: &Symbol| s.is_sentinel() || work.contains(s);
    let not_restart_only = states_with_other_than_restart(spec);

    for ((q, u), set) in &spec.table {
        let key = Some((q, u));
        if !states.contains(q) {
            r.push(key, true, "undeclared state".into());
        }
        if let Some(s) = u.iter().find(|s| !known(s)) {
            r.push(key, true, format!("unknown symbol {s} in window"));
            continue;
        }
        if k >= 1 && k <= MAX_WINDOW {
            if let Some(e) = window_shape_error(u, k) {
                r.push(key, true, format!("malformed window content: {e}"));
                continue;
            }
        }
        if spec.flags.deterministic && set.len() > 1 {
            r.push(key, false, format!("{} instructions under deterministic flag", set.len()));
        }
        for instr in set {
            if let Some(n) = instr.next_state() {
                if !states.contains(n) {
                    r.push(key, true, format!("undeclared state {n}"));
                }
            }
            match instr {
                Instruction::MoveRight(_) => {
                    if u.len() == 1 && u[0].is_right() {
                        r.push(key, false, "MVR on window $".into());
                    }
                }
                Instruction::MoveLeft(_) => {
                    if u[0].is_left() {
                        r.push(key, false, "MVL on a window starting with ^".into());
                    }
                    if spec.flags.direction != Direction::RL {
                        r.push(key, false, "MVL under a right-only direction flag".into());
                    }
                }
                Instruction::Rewrite { target: v, next } => {
                    if let Some(s) = v.iter().find(|s| !known(s)) {
                        r.push(key, true, format!("unknown symbol {s} in rewrite target"));
                        continue;
                    }
                    if let Some(e) = fragment_error(v) {
                        r.push(key, true, format!("malformed rewrite target: {e}"));
                        continue;
                    }
                    check_rewrite(spec, &mut r, q, u, v);
                    if spec.flags.direction == Direction::R && not_restart_only.contains(next) {
                        r.push(
                            key,
                            false,
                            format!("R direction but state {next} after a rewrite does not only restart"),
                        );
                    }
                }
                _ => {}
            }
        }
    }

    if spec.flags.aux != AuxUse::WW && work != input {
        r.push(None, false, "auxiliary symbols present under a W-less flag".into());
    }

    if let Some(h) = &spec.morphism {
        for d in &spec.work {
            match h.get(d) {
                None => r.push(None, false, format!("morphism undefined on {d}")),
                Some(a) if !input.contains(a) => {
                    r.push(None, false, format!("morphism maps {d} outside the input alphabet"))
                }
                Some(a) if input.contains(d) && a != d => {
                    r.push(None, false, format!("morphism moves input symbol {d}"))
                }
                _ => {}
            }
        }
        for (d, _) in h.iter() {
            if !work.contains(d) {
                r.push(None, false, format!("morphism defined on unknown symbol {d}"));
            }
        }
    }

    match &spec.weights {
        Some(w) => {
            for d in &spec.work {
                match w.get(d) {
                    None => r.push(None, spec.flags.shrinking, format!("weight undefined on {d}")),
                    Some(0) => r.push(None, spec.flags.shrinking, format!("weight of {d} is 0")),
                    _ => {}
                }
            }
        }
        None if spec.flags.shrinking => {
            r.push(None, true, "shrinking flag without a weight function".into())
        }
        None => {}
    }
    r
}

fn check_rewrite(spec: &AutomatonSpec, r: &mut ValidationReport, q: &State, u: &Word, v: &Word) {
    let key = Some((q, u));
    if !sentinels_match(u, v) {
        r.push(key, true, "sentinel mismatch between window and rewrite target".into());
        return;
    }
    let class = if spec.flags.shrinking {
        if v.len() > u.len() {
            r.push(key, true, "rewrite target longer than window".into());
            return;
        }
        if let Some(w) = &spec.weights {
            if let (Ok(wu), Ok(wv)) = (w.weight(u), w.weight(v)) {
                if wv >= wu {
                    r.push(key, true, "rewrite does not decrease weight".into());
                }
            }
        }
        if v.len() == u.len() {
            RewriteClass::SlNotDl
        } else {
            classify_rewrite(u, v)
        }
    } else {
        if v.len() >= u.len() {
            r.push(key, true, "SL target not shorter".into());
            return;
        }
        classify_rewrite(u, v)
    };
    if !in_short_windows(v, spec.window) {
        r.notes.push(format!(
            "({q}, {}): rewrite target {} is outside PC^(<=k-1)",
            spaced(u),
            if v.is_empty() { "λ".to_string() } else { spaced(v) }
        ));
    }
    let Some(form) = class.form() else { return };
    if form > spec.flags.form {
        r.push(key, false, format!("rewrite is {form:?}-form, flag requires {:?}", spec.flags.form));
    }
    if spec.flags.aux == AuxUse::None && form == RewriteForm::Sl {
        r.push(key, false, "non-deleting rewrite under the W-less flag".into());
    }
}

fn states_with_other_than_restart(spec: &AutomatonSpec) -> BTreeSet<&State> {
    spec.table
        .iter()
        .filter(|(_, set)| set.iter().any(|i| *i != Instruction::Restart))
        .map(|((q, _), _)| q)
        .collect()
}

/// The strongest subtype tags consistent with a table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TypeTags {
    pub deterministic: bool,
    pub direction: Direction,
    pub form: RewriteForm,
    pub aux: AuxUse,
    pub window: usize,
    /// Longest number of rewrites on a state path; `None` if unbounded.
    pub mr_degree: Option<usize>,
    pub shrinking: bool,
    pub lexicalized: bool,
}

impl TypeTags {
    /// Conventional class name such as `det-RC` or `det-mrRRC(2)`.
    pub fn class_name(&self) -> String {
        let mut s = String::new();
        if self.deterministic {
            s.push_str("det-");
        }
        if self.lexicalized {
            s.push_str("h-");
        }
        if self.shrinking {
            s.push('s');
        }
        let multi = self.mr_degree.is_none_or(|j| j >= 2);
        if multi {
            s.push_str("mr");
        }
        s.push_str(match self.direction {
            Direction::R => "R",
            Direction::RR => "RR",
            Direction::RL => "RL",
        });
        s.push_str(match self.aux {
            AuxUse::None => "",
            AuxUse::W => "W",
            AuxUse::WW => "WW",
        });
        s.push_str(match (self.aux, self.form) {
            (_, RewriteForm::Cl) => "C",
            (AuxUse::None, RewriteForm::Dl) => "",
            (_, RewriteForm::Dl) => "D",
            (_, RewriteForm::Sl) => "",
        });
        if multi {
            match self.mr_degree {
                Some(j) => s.push_str(&format!("({j})")),
                None => s.push_str("(*)"),
            }
        }
        s
    }
}

impl fmt::Display for TypeTags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={}", self.class_name(), self.window)?;
        if let Some(j) = self.mr_degree {
            write!(f, " mr={j}")?;
        }
        Ok(())
    }
}

/// Infers the strongest tags from the table alone.
pub fn classify_automaton(spec: &AutomatonSpec) -> TypeTags {
    let deterministic = spec.table.values().all(|s| s.len() <= 1);
    let has_mvl = spec.rules().any(|(_, _, i)| matches!(i, Instruction::MoveLeft(_)));
    let not_restart_only = states_with_other_than_restart(spec);
    let restart_after_rewrite = spec.rules().all(|(_, _, i)| match i {
        Instruction::Rewrite { next, .. } => !not_restart_only.contains(next),
        _ => true,
    });
    let direction = if has_mvl {
        Direction::RL
    } else if restart_after_rewrite {
        Direction::R
    } else {
        Direction::RR
    };
    let mut form = RewriteForm::Cl;
    for (_, u, i) in spec.rules() {
        if let Instruction::Rewrite { target, .. } = i {
            let f = match classify_rewrite(u, target).form() {
                Some(f) => f,
                None => RewriteForm::Sl,
            };
            form = form.max(f);
        }
    }
    let same_alphabets = spec.work.iter().all(|s| spec.input.contains(s));
    let aux = if !same_alphabets {
        AuxUse::WW
    } else if form <= RewriteForm::Dl {
        AuxUse::None
    } else {
        AuxUse::W
    };
    TypeTags {
        deterministic,
        direction,
        form,
        aux,
        window: spec.window,
        mr_degree: rewrite_depth(spec),
        shrinking: spec.flags.shrinking,
        lexicalized: spec.morphism.is_some(),
    }
}

/// Maximum number of rewrite edges on a path of the state graph starting in
/// the initial state, or `None` if a rewrite edge lies on a cycle.
fn rewrite_depth(spec: &AutomatonSpec) -> Option<usize> {
    let idx: BTreeMap<&State, usize> = spec.states.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let n = spec.states.len();
    let mut edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (q, _, i) in spec.rules() {
        let (Some(&from), Some(next)) = (idx.get(q), i.next_state()) else { continue };
        let Some(&to) = idx.get(next) else { continue };
        edges[from].push((to, usize::from(i.is_rewrite())));
    }
    for e in &mut edges {
        e.sort_unstable();
        e.dedup();
    }
    let start = *idx.get(&spec.initial)?;
    let comp = tarjan(&edges);
    // reachable rewrite edges inside a strongly connected component
    let mut seen = vec![false; n];
    let mut stack = vec![start];
    seen[start] = true;
    while let Some(v) = stack.pop() {
        for &(w, rw) in &edges[v] {
            if rw == 1 && comp[v] == comp[w] {
                return None;
            }
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    // longest path over the condensation; tarjan numbers components in reverse topological order
    let ncomp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut best = vec![0usize; ncomp];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in 0..n {
        members[comp[v]].push(v);
    }
    for c in 0..ncomp {
        for &v in &members[c] {
            for &(w, rw) in &edges[v] {
                if comp[w] != c {
                    best[c] = best[c].max(best[comp[w]] + rw);
                }
            }
        }
    }
    Some(best[comp[start]])
}

fn tarjan(edges: &[Vec<(usize, usize)>]) -> Vec<usize> {
    let n = edges.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = Vec::new();
    let mut counter = 0;
    let mut ncomp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on[root] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < edges[v].len() {
                let w = edges[v][*ei].0;
                *ei += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on[w] = true;
                    call.push((w, 0));
                } else if on[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on[w] = false;
                        comp[w] = ncomp;
                        if w == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::symbols;

    #[test]
    fn classify_rewrite_examples() {
        let c = |u: &[&str], v: &[&str]| classify_rewrite(&symbols(u), &symbols(v));
        assert_eq!(c(&["a", "b", "c"], &["a", "c"]), RewriteClass::Cl);
        assert_eq!(
            c(&["a", "b", "c", "d", "e", "f", "g"], &["a", "c", "e", "g"]),
            RewriteClass::DlNotCl
        );
        assert_eq!(c(&["a", "a", "$"], &["b", "$"]), RewriteClass::SlNotDl);
        assert_eq!(c(&["a", "a", "$"], &["a", "b", "$"]), RewriteClass::Illegal);
        assert_eq!(c(&["^", "a"], &["a"]), RewriteClass::Illegal);
        assert_eq!(c(&["a", "b"], &[]), RewriteClass::Cl);
    }

    #[test]
    fn min_blocks_minimizes_over_embeddings() {
        // a a b → a b: the deleted a can be chosen to form one block
        let u = symbols(&["a", "b", "a", "b"]);
        let v = symbols(&["a", "b"]);
        assert_eq!(min_deleted_blocks(&u, &v), Some(1));
        let u = symbols(&["a", "x", "a", "y", "a"]);
        assert_eq!(min_deleted_blocks(&u, &symbols(&["a", "a", "a"])), Some(2));
        assert_eq!(min_deleted_blocks(&u, &symbols(&["y", "x"])), None);
    }

    #[test]
    fn window_shapes() {
        let k = 3;
        let ok = |w: &[&str]| window_shape_error(&symbols(w), k).is_none();
        assert!(ok(&["^", "a", "a"]));
        assert!(ok(&["a", "a", "a"]));
        assert!(ok(&["a", "$"]));
        assert!(ok(&["$"]));
        assert!(ok(&["^", "$"]));
        assert!(ok(&["^", "a", "$"]));
        assert!(!ok(&["^", "a"]));
        assert!(!ok(&["a", "a"]));
        assert!(!ok(&["a", "^", "a"]));
        assert!(!ok(&["a", "a", "a", "a"]));
        assert!(!ok(&["$", "a", "a"]));
    }

    #[test]
    fn legal_windows_match_shape_filter() {
        let cells = symbols(&["^", "$", "a", "b"]);
        for k in 1..=4 {
            let mut all: Vec<Word> = vec![Vec::new()];
            let mut expected = Vec::new();
            for _ in 0..k {
                all = all
                    .iter()
                    .flat_map(|w| cells.iter().map(move |c| [w.clone(), vec![c.clone()]].concat()))
                    .collect();
                expected.extend(all.iter().filter(|w| window_shape_error(w, k).is_none()).cloned());
            }
            let mut got = legal_windows(&cells[2..], k);
            got.sort();
            expected.sort();
            assert_eq!(got, expected, "k={k}");
        }
    }
}
