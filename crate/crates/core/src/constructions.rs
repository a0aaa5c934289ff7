//! The grammar-to-automaton pipeline and the shrinking transform.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::classifiers::{check_cycle_soundness, check_monotone, CheckVerdict};
use crate::engine::Limits;
use crate::error::{EngineError, ModelError};
use crate::grammar::{GnfGrammar, GnfRule};
use crate::languages::{compare_languages, Comparison, LanguageKind, LanguageSource};
use crate::model::{
    AutomatonSpec, AuxUse, ClassFlags, Direction, HMorphism, Instruction, RewriteForm, State, WeightFunction,
};
use crate::symbol::{spaced, Symbol, Word};
use crate::validate::legal_windows;

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("synthesis failed up to window {}:\n{}", .0.window, .0)]
    SynthesisFailed(Box<SynthesisReport>),
    #[error("synthesis needs a window of at least 2, got {0}")]
    WindowTooSmall(usize),
    #[error("automaton has no morphism")]
    NoMorphism,
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// The rule-indexed symbols `(i,a)` and their projection onto the heads.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationAlphabet {
    pub symbols: Vec<Symbol>,
    pub morphism: HMorphism,
}

/// Replaces the head `a` of every rule `i` by the symbol `(i,a)`.
pub fn derivation_encode(g: &GnfGrammar) -> Result<(GnfGrammar, DerivationAlphabet), ModelError> {
    let mut symbols = Vec::new();
    let mut morphism = HMorphism::new();
    let mut rules = Vec::new();
    for (i, r) in g.rules().iter().enumerate() {
        let b = Symbol::nabla(i + 1, &r.head);
        morphism.insert(b.clone(), r.head.clone());
        symbols.push(b.clone());
        rules.push(GnfRule { lhs: r.lhs.clone(), head: b, tail: r.tail.clone() });
    }
    let name = format!("{}'", g.name());
    let gp = GnfGrammar::new(&name, g.nonterminals().to_vec(), symbols.clone(), g.start().clone(), rules)?;
    Ok((gp, DerivationAlphabet { symbols, morphism }))
}

/// Replays `omega` as a leftmost derivation of `gp`, one rule per symbol.
pub fn derivation_check(gp: &GnfGrammar, omega: &[Symbol]) -> bool {
    let mut stack = vec![gp.start().clone()];
    for s in omega {
        let mut rules = gp.rules().iter().filter(|r| r.head == *s);
        let (Some(r), None) = (rules.next(), rules.next()) else {
            // heads are not rule-unique: fall back to a general search
            return gp.rules().iter().filter(|r| r.head == *s).count() > 1 && gp.derives(omega);
        };
        if stack.pop().as_ref() != Some(&r.lhs) {
            return false;
        }
        stack.extend(r.tail.iter().rev().cloned());
    }
    stack.is_empty()
}

/// |h⁻¹(a)| for an input symbol `a`.
pub fn dga(spec: &AutomatonSpec, a: &Symbol) -> usize {
    spec.dga(a)
}

#[derive(Clone, Copy, Debug)]
pub struct SynthesisOptions {
    /// First window size tried.
    pub window: usize,
    /// Largest window size tried.
    pub max_window: usize,
    pub train_len: usize,
    pub validate_len: usize,
    pub limits: Limits,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions { window: 3, max_window: 8, train_len: 8, validate_len: 12, limits: Limits::default() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SynthesisReport {
    /// Window of the returned automaton, or the last one tried.
    pub window: usize,
    /// Reduction rules `u → v` on whole window contents.
    pub rules: Vec<(Word, Word)>,
    pub train_len: usize,
    pub validate_len: usize,
    pub validated: bool,
    /// Rejected window sizes with the reason.
    pub failures: Vec<(usize, String)>,
}

impl fmt::Display for SynthesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "window {}", self.window)?;
        writeln!(f, "train-length {}", self.train_len)?;
        writeln!(f, "validate-length {}", self.validate_len)?;
        let verdict = if self.validated {
            format!("equal to the grammar up to length {}", self.validate_len)
        } else {
            "not validated".to_string()
        };
        writeln!(f, "verdict {verdict}")?;
        for (k, why) in &self.failures {
            writeln!(f, "rejected window {k}: {why}")?;
        }
        for (u, v) in &self.rules {
            let v = if v.is_empty() { "-".to_string() } else { spaced(v) };
            writeln!(f, "rule {} -> {v}", spaced(u))?;
        }
        Ok(())
    }
}

fn inner(t: &[Symbol]) -> Word {
    t.iter().filter(|s| !s.is_sentinel()).cloned().collect()
}

/// Stack effects of factors of `L(gp)` on packed words (terminal `i` is `i + 2`).
///
/// Requires every terminal to head exactly one rule, as derivation symbols do.
/// Two factors with equal effects are interchangeable in every context.
struct Effects {
    /// Per terminal: lhs and tail as nonterminal indices.
    rules: Vec<(usize, Vec<usize>)>,
    start: usize,
}

#[derive(PartialEq, Eq)]
struct Effect {
    /// Nonterminals popped below the factor, top first; empty if the factor starts at `¢`.
    need: Vec<usize>,
    /// What the factor leaves, top last.
    push: Vec<usize>,
}

impl Effects {
    fn new(gp: &GnfGrammar) -> Result<Effects, ConstructionError> {
        let nt = |x: &Symbol| gp.nonterminals().iter().position(|y| y == x).expect("nonterminal");
        let mut rules = Vec::new();
        for t in gp.terminals() {
            let mut rs = gp.rules().iter().filter(|r| r.head == *t);
            match (rs.next(), rs.next()) {
                (Some(r), None) => rules.push((nt(&r.lhs), r.tail.iter().map(nt).collect())),
                _ => {
                    return Err(ModelError::Grammar(format!("terminal {t} must head exactly one rule")).into());
                }
            }
        }
        Ok(Effects { rules, start: nt(gp.start()) })
    }

    /// The effect of a window content, or `None` if it occurs in no member.
    fn of(&self, u: &[u8]) -> Option<Effect> {
        let closed_left = u.first() == Some(&0);
        let closed_right = u.last() == Some(&1);
        let mut need = Vec::new();
        let mut push = if closed_left { vec![self.start] } else { Vec::new() };
        for &c in u.iter().filter(|&&c| c >= 2) {
            let (lhs, tail) = &self.rules[c as usize - 2];
            match push.pop() {
                Some(x) if x == *lhs => {}
                Some(_) => return None,
                None if closed_left => return None,
                None => need.push(*lhs),
            }
            push.extend(tail.iter().rev());
        }
        if closed_right && !push.is_empty() {
            return None;
        }
        Some(Effect { need, push })
    }
}

/// Every result of deleting one or two nonempty blocks of non-sentinel cells.
fn cl_targets(u: &[u8]) -> BTreeSet<Vec<u8>> {
    let lo = usize::from(u[0] == 0);
    let hi = u.len() - usize::from(u[u.len() - 1] == 1);
    let mut out = BTreeSet::new();
    for a in lo..hi {
        for b in a + 1..=hi {
            out.insert([&u[..a], &u[b..]].concat());
            for c in b + 1..hi {
                for d in c + 1..=hi {
                    out.insert([&u[..a], &u[b..c], &u[d..]].concat());
                }
            }
        }
    }
    out
}

struct Harvest {
    rules: BTreeMap<Word, Word>,
    /// Windows that occur in some member (by effect).
    valid: BTreeSet<Word>,
    irreducible: BTreeSet<Word>,
}

/// Collects one deletion rule per window whose result has the same stack
/// effect, preferring the least deletion; irreducible members come from training.
fn harvest(gp: &GnfGrammar, k: usize, train_len: usize) -> Result<Harvest, ConstructionError> {
    let fx = Effects::new(gp)?;
    let alphabet = gp.terminals();
    let unpack = |w: &[u8]| -> Word {
        w.iter()
            .map(|&c| match c {
                0 => Symbol::left(),
                1 => Symbol::right(),
                c => alphabet[c as usize - 2].clone(),
            })
            .collect()
    };
    let pack = |w: &[Symbol]| -> Vec<u8> {
        w.iter()
            .map(|s| match alphabet.iter().position(|t| t == s) {
                Some(i) => i as u8 + 2,
                None if s.is_left() => 0,
                None => 1,
            })
            .collect()
    };
    let mut rules = BTreeMap::new();
    let mut valid = BTreeSet::new();
    for u in legal_windows(alphabet, k) {
        let pu = pack(&u);
        let Some(e) = fx.of(&pu) else { continue };
        valid.insert(u.clone());
        let best = cl_targets(&pu)
            .into_iter()
            .filter(|v| fx.of(v).is_some_and(|ev| ev == e))
            .min_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        if let Some(v) = best {
            rules.insert(u, unpack(&v));
        }
    }
    let reducible = |w: &[Symbol]| {
        let t = [&[Symbol::left()], w, &[Symbol::right()]].concat();
        (0..t.len() - 1).any(|p| rules.contains_key(&t[p..(p + k).min(t.len())]))
    };
    let irreducible = gp.language(train_len).into_iter().filter(|w| !reducible(w)).collect();
    Ok(Harvest { rules, valid, irreducible })
}

/// Assembles the leftmost-rewriting scanner for a harvested rule set.
fn assemble(gp: &GnfGrammar, k: usize, h: &Harvest) -> AutomatonSpec {
    let b = gp.terminals().to_vec();
    let q0 = State::named("q0");
    let scan = State::named("scan");
    let r = State::named("r");
    let mut prefixes: BTreeMap<Word, State> = BTreeMap::new();
    for w in &h.irreducible {
        for i in 0..=w.len() {
            let next = prefixes.len();
            prefixes.entry(w[..i].to_vec()).or_insert_with(|| State::named(&format!("p{next}")));
        }
    }
    let next_state = |p: &Word| prefixes.get(p).cloned().unwrap_or_else(|| scan.clone());
    let flags = ClassFlags {
        direction: Direction::RR,
        form: RewriteForm::Cl,
        aux: AuxUse::None,
        deterministic: true,
        mr_degree: 1,
        shrinking: false,
    };
    let mut bl = AutomatonSpec::builder(&format!("{}_scanner", gp.name()), k)
        .input(&b)
        .initial(&q0)
        .state(&q0)
        .flags(flags);
    let emit = |bl: &mut crate::model::AutomatonBuilder, q: &State, prefix: Option<&Word>, u: &Word| {
        if let Some(v) = h.rules.get(u) {
            bl.add(q, u.clone(), Instruction::Rewrite { target: v.clone(), next: r.clone() });
        } else if u[u.len() - 1].is_right() {
            if let Some(p) = prefix {
                let w = [p.as_slice(), &inner(u)].concat();
                if h.irreducible.contains(&w) {
                    bl.add(q, u.clone(), Instruction::Accept);
                }
            }
        } else {
            let next = match prefix {
                _ if u[0].is_left() => next_state(&Vec::new()),
                Some(p) => next_state(&[p.as_slice(), &u[..1]].concat()),
                None => scan.clone(),
            };
            bl.add(q, u.clone(), Instruction::MoveRight(next));
        }
    };
    let empty = Vec::new();
    for u in h.valid.iter().filter(|u| u[0].is_left()) {
        emit(&mut bl, &q0, Some(&empty), u);
    }
    for u in h.valid.iter().filter(|u| !u[0].is_left()) {
        for (p, q) in &prefixes {
            emit(&mut bl, q, Some(p), u);
        }
        emit(&mut bl, &scan, None, u);
    }
    let uses_rules = !h.rules.is_empty();
    let mut spec = bl.build();
    if uses_rules {
        spec = add_restarts(spec, &r, &b);
    }
    spec
}

fn add_restarts(spec: AutomatonSpec, r: &State, alphabet: &[Symbol]) -> AutomatonSpec {
    let mut spec = spec;
    if !spec.states.contains(r) {
        spec.states.push(r.clone());
    }
    for u in legal_windows(alphabet, spec.window) {
        spec.table.entry((r.clone(), u)).or_default().insert(Instruction::Restart);
    }
    spec.refresh();
    spec
}

fn validation_failure(spec: &AutomatonSpec, gp: &GnfGrammar, opts: &SynthesisOptions) -> Result<Option<String>, EngineError> {
    let n = opts.validate_len;
    let l = &opts.limits;
    match compare_languages(&LanguageSource::Automaton(spec, LanguageKind::Input), &LanguageSource::Grammar(gp), n, l) {
        Ok(Comparison::Equal { .. }) => {}
        Ok(c) => return Ok(Some(format!("language: {c}"))),
        Err(EngineError::ResourceExceeded(e)) => return Ok(Some(format!("resource limits: {e}"))),
        Err(e) => return Err(e),
    }
    for r in [check_monotone(spec, n, l)?, check_cycle_soundness(spec, n, l)?] {
        match r.verdict {
            CheckVerdict::HoldsUpToBound => {}
            CheckVerdict::Violated => {
                let w = r.counterexample.map(|c| spaced(&c.word)).unwrap_or_default();
                return Ok(Some(format!("{} violated on {w}", r.property)));
            }
            CheckVerdict::ResourceExceeded => return Ok(Some(format!("{}: resource limits", r.property))),
        }
    }
    Ok(None)
}

/// Learns a deterministic leftmost-deleting automaton for `L(gp)` from its
/// short members, growing the window until validation succeeds.
pub fn synthesize_reduction_system(
    gp: &GnfGrammar,
    opts: &SynthesisOptions,
) -> Result<(AutomatonSpec, SynthesisReport), ConstructionError> {
    if opts.window < 2 {
        return Err(ConstructionError::WindowTooSmall(opts.window));
    }
    let mut report = SynthesisReport {
        window: opts.window,
        rules: Vec::new(),
        train_len: opts.train_len,
        validate_len: opts.validate_len,
        validated: false,
        failures: Vec::new(),
    };
    for k in opts.window..=opts.max_window.max(opts.window) {
        let h = harvest(gp, k, opts.train_len)?;
        let spec = assemble(gp, k, &h);
        report.window = k;
        report.rules = h.rules.iter().map(|(u, v)| (u.clone(), v.clone())).collect();
        match validation_failure(&spec, gp, opts)? {
            None => {
                report.validated = true;
                return Ok((spec, report));
            }
            Some(why) => report.failures.push((k, why)),
        }
    }
    Err(ConstructionError::SynthesisFailed(Box::new(report)))
}

/// Builds a deterministic h-RRWWC automaton whose h-proper language is `L(g)`:
/// a synthesized scanner over the rule symbols, with the terminals added as
/// input symbols that no computation accepts.
pub fn build_hrrwwc(g: &GnfGrammar, opts: &SynthesisOptions) -> Result<(AutomatonSpec, SynthesisReport), ConstructionError> {
    let (gp, da) = derivation_encode(g)?;
    let (m, report) = synthesize_reduction_system(&gp, opts)?;
    let sigma = g.terminals().to_vec();
    let mut work = sigma.clone();
    work.extend(da.symbols.iter().cloned());
    let h = HMorphism::extending(&sigma, da.morphism.iter().map(|(a, b)| (a.clone(), b.clone())));
    let mut spec = m;
    spec.name = format!("{}_hrrwwc", g.name());
    spec.input = sigma;
    spec.work = work.clone();
    spec.flags.aux = AuxUse::WW;
    spec.morphism = Some(h);
    let r = State::named("r");
    let spec = if spec.states.contains(&r) { add_restarts(spec, &r, &work) } else { spec.refreshed() };
    Ok((spec, report))
}

fn fresh(name: &str, taken: &BTreeSet<State>) -> State {
    let mut s = name.to_string();
    while taken.contains(&State::named(&s)) {
        s.push('\'');
    }
    State::named(&s)
}

/// The two-phase shrinking automaton: right-to-left lexical disambiguation of
/// the input, then simulation of `spec` with `a^` standing for input symbol `a`.
pub fn to_shrinking(spec: &AutomatonSpec) -> Result<(AutomatonSpec, WeightFunction), ConstructionError> {
    let h = spec.morphism.as_ref().ok_or(ConstructionError::NoMorphism)?;
    let sigma = spec.input.clone();
    let is_input = |s: &Symbol| sigma.contains(s);
    let hat = |s: &Symbol| if is_input(s) { Symbol::hat(s) } else { s.clone() };
    let hats: Vec<Symbol> = sigma.iter().map(Symbol::hat).collect();
    let mut work = spec.work.clone();
    work.extend(hats.iter().cloned());
    let renamed: Vec<Symbol> = spec.work.iter().filter(|s| !is_input(s)).cloned().chain(hats.iter().cloned()).collect();

    let mut hs = h.clone();
    for (a, ah) in sigma.iter().zip(&hats) {
        hs.insert(ah.clone(), a.clone());
    }
    let mut weights = WeightFunction::new();
    for s in &work {
        let w = if is_input(s) { spec.dga(s) as u32 + 1 } else { 1 };
        weights.set(s.clone(), w);
    }

    let k = spec.window;
    let ks = k.max(2);
    let taken: BTreeSet<State> = spec.states.iter().cloned().collect();
    let init = fresh("init", &taken);
    let lex = fresh("lex", &taken);
    let lexr = fresh("lexr", &taken);
    let flags = ClassFlags {
        form: RewriteForm::Sl,
        aux: AuxUse::WW,
        deterministic: spec.flags.deterministic && sigma.iter().all(|a| spec.dga(a) == 1),
        shrinking: true,
        ..spec.flags
    };
    let mut b = AutomatonSpec::builder(&format!("{}_s", spec.name), ks)
        .input_exact(sigma.clone())
        .work_exact(work.clone())
        .initial(&init)
        .state(&init)
        .state(&lex)
        .state(&lexr)
        .flags(flags)
        .morphism(hs)
        .weights(weights.clone());
    for q in &spec.states {
        b = b.state(q);
    }

    for u in legal_windows(&work, ks) {
        if u.len() < 2 || !is_input(&u[1]) {
            continue;
        }
        if u[0].is_left() {
            b.add(&init, u.clone(), Instruction::MoveRight(lex.clone()));
            continue;
        }
        if !is_input(&u[0]) {
            continue;
        }
        b.add(&lex, u.clone(), Instruction::MoveRight(lex.clone()));
    }
    for u in legal_windows(&work, ks) {
        if u.len() < 2 || u[0].is_sentinel() || !is_input(&u[0]) || is_input(&u[1]) {
            continue;
        }
        for d in spec.work.iter().filter(|d| h.get(d) == Some(&u[0])) {
            let target = [std::slice::from_ref(&hat(d)), &u[1..]].concat();
            b.add(&lex, u.clone(), Instruction::Rewrite { target, next: lexr.clone() });
        }
    }
    for u in legal_windows(&work, ks) {
        b.add(&lexr, u, Instruction::Restart);
    }

    let mut ends: Vec<Symbol> = renamed.clone();
    ends.push(Symbol::right());
    for (q, u, ins) in spec.rules() {
        let ru: Word = u.iter().map(hat).collect();
        let extended: Vec<Word> = if ru.len() < ks && !ru[ru.len() - 1].is_right() {
            ends.iter().map(|y| [ru.as_slice(), std::slice::from_ref(y)].concat()).collect()
        } else {
            vec![ru.clone()]
        };
        for w in extended {
            let tr = match ins {
                Instruction::Rewrite { target, next } => {
                    let t: Word = target.iter().map(hat).chain(w[ru.len()..].iter().cloned()).collect();
                    Instruction::Rewrite { target: t, next: next.clone() }
                }
                other => other.clone(),
            };
            b.add(q, w.clone(), tr.clone());
            if *q == spec.initial && w[0].is_left() {
                b.add(&init, w, tr);
            }
        }
    }
    Ok((b.build(), weights))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::anbn_gnf;
    use crate::symbol::symbols;

    fn n(i: usize, a: &str) -> Symbol {
        Symbol::nabla(i, &Symbol::new(a).unwrap())
    }

    #[test]
    fn encode_anbn() {
        let (gp, da) = derivation_encode(&anbn_gnf()).unwrap();
        assert_eq!(da.symbols, vec![n(1, "a"), n(2, "a"), n(3, "b")]);
        assert_eq!(gp.rules()[0].head, n(1, "a"));
        assert_eq!(gp.rules()[0].tail, symbols(&["S", "B"]));
        assert!(derivation_check(&gp, &[n(1, "a"), n(2, "a"), n(3, "b"), n(3, "b")]));
        assert!(derivation_check(&gp, &[n(2, "a"), n(3, "b")]));
        assert!(!derivation_check(&gp, &[n(3, "b")]));
        assert!(!derivation_check(&gp, &[]));
    }

    #[test]
    fn cl_targets_of_three_cells() {
        let t = cl_targets(&[2, 3, 4]);
        assert!(t.contains(&vec![3]));
        assert!(t.contains(&Vec::new()));
        assert_eq!(t.len(), 7);
    }
}
