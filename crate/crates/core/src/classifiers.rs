//! Bounded verifiers for determinism, monotonicity, cycle discipline,
//! correctness/error preservation and shrinking weights.

use std::fmt;

use crate::engine::decider::{Decider, Reason, Status};
use crate::engine::graph::{Check, Event, Graph, Monitor, SearchResult};
use crate::engine::machine::Machine;
use crate::engine::sweep::{sweep, Flow};
use crate::engine::{successors, Configuration, Limits, Outcome, Successor, Trace};
use crate::error::EngineError;
use crate::model::{AutomatonSpec, State, WeightFunction};
use crate::symbol::{spaced, Symbol, Word};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckVerdict {
    HoldsUpToBound,
    Violated,
    ResourceExceeded,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Counterexample {
    pub word: Word,
    /// Computation from the restarting configuration of `word` up to and including the offending step.
    pub trace: Trace,
    pub explanation: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub property: String,
    pub bound: usize,
    pub verdict: CheckVerdict,
    pub counterexample: Option<Counterexample>,
    /// Keys with more than one instruction (determinism check only).
    pub conflicts: Vec<(State, Word)>,
}

impl CheckReport {
    fn new(property: &str, bound: usize) -> CheckReport {
        CheckReport {
            property: property.to_string(),
            bound,
            verdict: CheckVerdict::HoldsUpToBound,
            counterexample: None,
            conflicts: Vec::new(),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == CheckVerdict::HoldsUpToBound
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            CheckVerdict::HoldsUpToBound if self.bound == 0 => "holds".to_string(),
            CheckVerdict::HoldsUpToBound => format!("holds up to length {}", self.bound),
            CheckVerdict::Violated => "violated".to_string(),
            CheckVerdict::ResourceExceeded => "resource exceeded".to_string(),
        };
        writeln!(f, "{}: {verdict}", self.property)?;
        for (q, u) in &self.conflicts {
            writeln!(f, "conflict at ({q}, {})", spaced(u))?;
        }
        if let Some(c) = &self.counterexample {
            let w = if c.word.is_empty() { "-".to_string() } else { spaced(&c.word) };
            writeln!(f, "word: {w}")?;
            writeln!(f, "reason: {}", c.explanation)?;
            for s in &c.trace.steps {
                writeln!(f, "  {} | {}", s.config, s.instruction)?;
            }
        }
        Ok(())
    }
}

/// Lists every key with two or more instructions.
pub fn check_determinism(spec: &AutomatonSpec) -> CheckReport {
    let mut r = CheckReport::new("determinism", 0);
    r.conflicts = spec.table.iter().filter(|(_, s)| s.len() > 1).map(|((q, u), _)| (q.clone(), u.clone())).collect();
    if !r.conflicts.is_empty() {
        r.verdict = CheckVerdict::Violated;
    }
    r
}

/// Root verdict of a monitored property for one (possibly open) tape.
enum Root {
    /// Nothing to verify on this tape or any extension.
    Skip,
    Start(u32),
    /// Undecided for an open tape; look at the closed tape and extensions.
    Unknown,
    Limit,
}

trait Property: Monitor {
    fn root(&mut self, m: &Machine, tape: &[u8], open: bool) -> Root;
    fn permissive(&self) -> bool {
        false
    }
    fn limit_hit(&self) -> bool {
        false
    }
}

enum Found {
    Violation(Counterexample),
    Limit,
}

fn closed_check(
    m: &Machine,
    p: &[u8],
    prop: &mut dyn Property,
    graph: &mut Graph,
    limits: &Limits,
) -> Result<(), Found> {
    let tape = Machine::closed_tape(p);
    let mark = match prop.root(m, &tape, false) {
        Root::Skip => return Ok(()),
        Root::Start(mk) => mk,
        Root::Unknown | Root::Limit => return Err(Found::Limit),
    };
    let permissive = prop.permissive();
    match graph.search(m, &tape, false, permissive, mark, prop, limits) {
        SearchResult::Clean { .. } => Ok(()),
        SearchResult::Violation { node, op, message } => {
            let steps = graph.steps(m, node, op);
            let last = steps.last().map(|s| s.config.clone()).unwrap_or_else(|| {
                crate::engine::config_of(m, &tape, m.initial, 0, 0)
            });
            Err(Found::Violation(Counterexample {
                word: m.decode(p),
                trace: Trace { steps, outcome: Outcome::Partial, last },
                explanation: message,
            }))
        }
        SearchResult::Limit | SearchResult::Inconclusive => Err(Found::Limit),
    }
}

/// Runs a property over all words up to `n` over the working alphabet.
fn run_property(
    m: &Machine,
    n: usize,
    limits: &Limits,
    prop: &mut dyn Property,
    report: &mut CheckReport,
) {
    let mut graph = Graph::default();
    let alphabet = m.work_ids.clone();
    let res = sweep(&alphabet, n, |p| {
        let open = Machine::open_tape(p);
        match prop.root(m, &open, true) {
            Root::Skip => return Ok(Flow::Prune),
            Root::Limit => return Err(Found::Limit),
            Root::Unknown => {
                closed_check(m, p, prop, &mut graph, limits)?;
                return Ok(Flow::Extend);
            }
            Root::Start(mark) => {
                let permissive = prop.permissive();
                match graph.search(m, &open, true, permissive, mark, prop, limits) {
                    SearchResult::Clean { touched: false } => Ok(Flow::Prune),
                    SearchResult::Limit => Err(Found::Limit),
                    SearchResult::Clean { touched: true } | SearchResult::Inconclusive | SearchResult::Violation { .. } => {
                        if prop.limit_hit() {
                            return Err(Found::Limit);
                        }
                        closed_check(m, p, prop, &mut graph, limits)?;
                        Ok(Flow::Extend)
                    }
                }
            }
        }
    });
    match res {
        Ok(()) if prop.limit_hit() => report.verdict = CheckVerdict::ResourceExceeded,
        Ok(()) => {}
        Err(Found::Limit) => report.verdict = CheckVerdict::ResourceExceeded,
        Err(Found::Violation(c)) => {
            report.verdict = CheckVerdict::Violated;
            report.counterexample = Some(c);
        }
    }
}

struct Monotone;

impl Monitor for Monotone {
    fn on(&mut self, _: &Machine, mark: u32, event: Event<'_>) -> Check {
        match event {
            Event::Rewrite { distance, .. } => {
                let d = distance as u32;
                if mark != 0 && d > mark - 1 {
                    Check::Violation(format!("right distance of rewrites increases from {} to {d}", mark - 1))
                } else {
                    Check::Continue(d + 1)
                }
            }
            _ => Check::Continue(mark),
        }
    }
}

impl Property for Monotone {
    fn root(&mut self, _: &Machine, _: &[u8], _: bool) -> Root {
        Root::Start(0)
    }
}

/// Checks that right distances at rewrite configurations never increase along any computation.
pub fn check_monotone(spec: &AutomatonSpec, n: usize, limits: &Limits) -> Result<CheckReport, EngineError> {
    let m = spec.machine()?;
    let mut r = CheckReport::new("monotone", n);
    run_property(&m, n, limits, &mut Monotone, &mut r);
    Ok(r)
}

struct CycleSound {
    j: u16,
}

impl Monitor for CycleSound {
    fn on(&mut self, _: &Machine, mark: u32, event: Event<'_>) -> Check {
        match event {
            Event::Rewrite { rw, .. } if rw > self.j => {
                Check::Violation(format!("{rw} rewrites in one cycle, more than {}", self.j))
            }
            Event::Restart { rw: 0, .. } => Check::Violation("cycle without a rewrite".into()),
            Event::Halt { rw, stuck, .. } if rw > 0 => Check::Violation(format!(
                "rewrite in a tail: {} after {rw} rewrite(s) without restarting",
                if stuck { "stuck" } else { "halts" }
            )),
            _ => Check::Continue(mark),
        }
    }
}

impl Property for CycleSound {
    fn root(&mut self, _: &Machine, _: &[u8], _: bool) -> Root {
        Root::Start(0)
    }
    fn permissive(&self) -> bool {
        true
    }
}

/// Checks that every cycle performs between 1 and `j` rewrites and no tail rewrites,
/// where `j` is the declared rewrite degree.
pub fn check_cycle_soundness(spec: &AutomatonSpec, n: usize, limits: &Limits) -> Result<CheckReport, EngineError> {
    let m = spec.machine()?;
    let j = spec.flags.mr_degree.clamp(1, u16::MAX as usize) as u16;
    let mut r = CheckReport::new(&format!("cycle discipline (1..{j} rewrites per cycle)"), n);
    run_property(&m, n, limits, &mut CycleSound { j }, &mut r);
    Ok(r)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PreservationMode {
    /// Every tape visited from a member is a member.
    CompleteCorrectness,
    /// After the first non-member tape, every later tape is a non-member.
    CompleteError,
    /// Every restart tape reached from a member is a member.
    CycleCorrectness,
    /// After the first non-member restart tape, every later restart tape is a non-member.
    CycleError,
}

impl std::str::FromStr for PreservationMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "complete-correctness" | "cpp" => Ok(PreservationMode::CompleteCorrectness),
            "complete-error" | "epp" => Ok(PreservationMode::CompleteError),
            "cycle-correctness" => Ok(PreservationMode::CycleCorrectness),
            "cycle-error" => Ok(PreservationMode::CycleError),
            _ => Err(format!("unknown preservation mode {s:?}")),
        }
    }
}

impl fmt::Display for PreservationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PreservationMode::CompleteCorrectness => "complete-correctness",
            PreservationMode::CompleteError => "complete-error",
            PreservationMode::CycleCorrectness => "cycle-correctness",
            PreservationMode::CycleError => "cycle-error",
        })
    }
}

struct Preservation<'m> {
    d: Decider<'m>,
    mode: PreservationMode,
    open: bool,
    limit: bool,
}

const MEMBER: u32 = 1;
const NON_MEMBER: u32 = 2;

impl Preservation<'_> {
    fn correctness(&self) -> bool {
        matches!(self.mode, PreservationMode::CompleteCorrectness | PreservationMode::CycleCorrectness)
    }

    fn complete(&self) -> bool {
        matches!(self.mode, PreservationMode::CompleteCorrectness | PreservationMode::CompleteError)
    }

    fn judge(&mut self, mark: u32, tape: &[u8], what: &str) -> Check {
        let s = match self.d.status(tape, self.open) {
            Status::Member => MEMBER,
            Status::NonMember => NON_MEMBER,
            Status::Unknown(Reason::Open) => return Check::Inconclusive,
            Status::Unknown(Reason::Limit) => {
                self.limit = true;
                return Check::Inconclusive;
            }
        };
        if self.correctness() {
            if s != MEMBER {
                return Check::Violation(format!("{what} of a member is not a member"));
            }
            Check::Continue(mark)
        } else if mark == NON_MEMBER && s == MEMBER {
            Check::Violation(format!("{what} is a member after a non-member"))
        } else {
            Check::Continue(if mark == NON_MEMBER { NON_MEMBER } else { s })
        }
    }
}

impl Monitor for Preservation<'_> {
    fn on(&mut self, _: &Machine, mark: u32, event: Event<'_>) -> Check {
        match event {
            Event::Rewrite { after, .. } if self.complete() => {
                let t = after.to_vec();
                self.judge(mark, &t, "tape after a rewrite")
            }
            Event::Restart { tape, .. } if !self.complete() => {
                let t = tape.to_vec();
                self.judge(mark, &t, "restart tape")
            }
            _ => Check::Continue(mark),
        }
    }
}

impl Property for Preservation<'_> {
    fn root(&mut self, _: &Machine, tape: &[u8], open: bool) -> Root {
        self.open = open;
        match self.d.status(tape, open) {
            Status::Member => Root::Start(MEMBER),
            Status::NonMember if self.correctness() => Root::Skip,
            Status::NonMember => Root::Start(NON_MEMBER),
            Status::Unknown(Reason::Open) => Root::Unknown,
            Status::Unknown(Reason::Limit) => Root::Limit,
        }
    }

    fn limit_hit(&self) -> bool {
        self.limit
    }
}

/// Checks a correctness or error preservation property on all words up to `n`.
pub fn check_preservation(
    spec: &AutomatonSpec,
    n: usize,
    mode: PreservationMode,
    limits: &Limits,
) -> Result<CheckReport, EngineError> {
    let m = spec.machine()?;
    let needs_det = !matches!(mode, PreservationMode::CycleError);
    if needs_det && !m.deterministic {
        return Err(EngineError::Nondeterministic);
    }
    let mut r = CheckReport::new(&format!("{mode} preservation"), n);
    let mut prop = Preservation { d: Decider::new(&m, *limits), mode, open: false, limit: false };
    run_property(&m, n, limits, &mut prop, &mut r);
    Ok(r)
}

struct Shrinking {
    weights: Vec<u32>,
}

impl Shrinking {
    fn weight(&self, tape: &[u8]) -> u32 {
        tape.iter().map(|&c| self.weights[c as usize]).sum()
    }
}

impl Monitor for Shrinking {
    fn on(&mut self, _: &Machine, mark: u32, event: Event<'_>) -> Check {
        match event {
            Event::Restart { tape, .. } => {
                let w = self.weight(tape);
                if w >= mark {
                    Check::Violation(format!("cycle changes weight from {mark} to {w}"))
                } else {
                    Check::Continue(w)
                }
            }
            _ => Check::Continue(mark),
        }
    }
}

impl Property for Shrinking {
    fn root(&mut self, _: &Machine, tape: &[u8], _: bool) -> Root {
        Root::Start(self.weight(tape))
    }
}

/// Checks that every cycle-rewrite up to length `n` strictly decreases the weight.
pub fn check_shrinking(
    spec: &AutomatonSpec,
    weights: &WeightFunction,
    n: usize,
    limits: &Limits,
) -> Result<CheckReport, EngineError> {
    let m = spec.machine()?;
    let mut r = CheckReport::new("shrinking", n);
    let mut w = vec![0u32; m.symbols.len()];
    for &id in &m.work_ids {
        let s = &m.symbols[id as usize];
        match weights.get(s) {
            Some(x) if x >= 1 => w[id as usize] = x,
            _ => {
                r.verdict = CheckVerdict::Violated;
                r.counterexample = Some(Counterexample {
                    word: vec![s.clone()],
                    trace: Trace {
                        steps: Vec::new(),
                        outcome: Outcome::Partial,
                        last: Configuration::restarting(spec, std::slice::from_ref(s)),
                    },
                    explanation: format!("weight of {s} is missing or not positive"),
                });
                return Ok(r);
            }
        }
    }
    run_property(&m, n, limits, &mut Shrinking { weights: w }, &mut r);
    Ok(r)
}

/// Checks that consecutive steps of a trace follow the step relation of `spec`.
pub fn replay_trace(spec: &AutomatonSpec, trace: &Trace) -> Result<bool, EngineError> {
    for (i, s) in trace.steps.iter().enumerate() {
        let succ = successors(spec, &s.config)?;
        let Some((_, next)) = succ.into_iter().find(|(ins, _)| *ins == s.instruction) else {
            return Ok(false);
        };
        if let (Successor::Config(c), Some(n)) = (&next, trace.steps.get(i + 1)) {
            if *c != n.config {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Result of [`window_hierarchy_sweep`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SweepReport {
    pub window: usize,
    pub max_n: usize,
    pub rewrites: usize,
    /// Rewrites `(w, w')` that changed both the `a` prefix and the `b` suffix,
    /// or whose result is still of the form `a^m c^(k-1) b^m`.
    pub exceptions: Vec<(Word, Word)>,
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "window {} sweep, n <= {}: {} rewrites, {} exceptions",
            self.window,
            self.max_n,
            self.rewrites,
            self.exceptions.len()
        )?;
        for (w, v) in &self.exceptions {
            writeln!(f, "  {} => {}", spaced(w), spaced(v))?;
        }
        Ok(())
    }
}

/// Applies every length-reducing rewrite of a factor of at most `k` cells to
/// `a^n c^(k-1) b^n` for `n <= max_n`, with targets over `{a, b, c}`.
///
/// A window of `k` cells cannot reach both an `a` and a `b`, so each result
/// keeps the prefix `a^n` or the suffix `b^n` and is too short to be
/// `a^m c^(k-1) b^m` with `m >= n`. The sweep confirms both facts word by word.
pub fn window_hierarchy_sweep(k: usize, max_n: usize) -> SweepReport {
    rewrite_sweep(k, k, max_n)
}

/// The sweep of [`window_hierarchy_sweep`] with factors of up to `width` cells.
pub fn rewrite_sweep(k: usize, width: usize, max_n: usize) -> SweepReport {
    let sym = |t: &str| Symbol::new(t).expect("plain symbol");
    let (a, b, c) = (sym("a"), sym("b"), sym("c"));
    let abc = [a.clone(), b.clone(), c.clone()];
    let targets: Vec<Vec<Word>> = (0..width).map(|l| words_of_length(&abc, l)).collect();
    let in_lk = |w: &[Symbol]| {
        let na = w.iter().take_while(|s| **s == a).count();
        let nb = w.iter().rev().take_while(|s| **s == b).count();
        na == nb && w.len() == na + nb + k - 1 && w[na..w.len() - nb].iter().all(|s| *s == c)
    };
    let mut r = SweepReport { window: width, max_n, ..SweepReport::default() };
    for n in 0..=max_n {
        let w = [vec![a.clone(); n], vec![c.clone(); k - 1], vec![b.clone(); n]].concat();
        for i in 0..w.len() {
            for len in 1..=width.min(w.len() - i) {
                for v in targets[..len].iter().flatten() {
                    let out = [&w[..i], v.as_slice(), &w[i + len..]].concat();
                    r.rewrites += 1;
                    let prefix = out.len() >= n && out[..n].iter().all(|s| *s == a);
                    let suffix = out.len() >= n && out[out.len() - n..].iter().all(|s| *s == b);
                    if !(prefix || suffix) || in_lk(&out) {
                        r.exceptions.push((w.clone(), out));
                    }
                }
            }
        }
    }
    r
}

/// Words over `alphabet` of length `len`.
pub(crate) fn words_of_length(alphabet: &[Symbol], len: usize) -> Vec<Word> {
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..len {
        level = level
            .iter()
            .flat_map(|w| alphabet.iter().map(move |s| [w.as_slice(), std::slice::from_ref(s)].concat()))
            .collect();
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{dyck1, l_k, lm_j, m_e};
    use crate::model::Instruction;
    use crate::symbol::symbols;

    #[test]
    fn sweep_finds_no_exceptions() {
        for k in 2..=4 {
            let r = window_hierarchy_sweep(k, 4);
            assert!(r.rewrites > 0);
            assert!(r.exceptions.is_empty(), "{r}");
            // one more cell reaches across the c block
            assert!(!rewrite_sweep(k, k + 1, 4).exceptions.is_empty());
        }
    }

    #[test]
    fn determinism_conflicts() {
        assert!(check_determinism(&m_e()).holds());
        let mut spec = m_e();
        spec.table
            .get_mut(&(State::named("q0"), symbols(&["a", "a", "a"])))
            .unwrap()
            .insert(Instruction::Accept);
        let r = check_determinism(&spec);
        assert_eq!(r.verdict, CheckVerdict::Violated);
        assert_eq!(r.conflicts, vec![(State::named("q0"), symbols(&["a", "a", "a"]))]);
    }

    #[test]
    fn monotone_examples() {
        let l = Limits::default();
        assert!(check_monotone(&dyck1(), 10, &l).unwrap().holds());
        assert!(check_monotone(&l_k(3), 12, &l).unwrap().holds());
        let r = check_monotone(&m_e(), 8, &l).unwrap();
        assert_eq!(r.verdict, CheckVerdict::Violated);
        let c = r.counterexample.unwrap();
        assert!(c.word.len() <= 8);
        assert!(replay_trace(&m_e(), &c.trace).unwrap());
    }

    #[test]
    fn cycle_soundness_examples() {
        let l = Limits::default();
        assert!(check_cycle_soundness(&m_e(), 8, &l).unwrap().holds());
        assert!(check_cycle_soundness(&lm_j(1), 8, &l).unwrap().holds());
        let r = check_cycle_soundness(&lm_j(1).with_mr_degree(1), 8, &l).unwrap();
        assert_eq!(r.verdict, CheckVerdict::Violated);
    }
}
