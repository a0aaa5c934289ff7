//! Operational semantics: steps, cycles, runs and membership.

pub(crate) mod brute;
pub(crate) mod cycle;
pub(crate) mod decider;
pub(crate) mod graph;
pub(crate) mod machine;
pub(crate) mod sweep;

use std::fmt;

use crate::error::EngineError;
use crate::model::{AutomatonSpec, Instruction, State};
use crate::symbol::{spaced, Symbol, Word};

use cycle::{Budget, CycleOutcome, Explorer};
use decider::{Decider, Status};
use machine::Machine;

pub use brute::decide_basic_exhaustive;

/// Resource bounds for a single decision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_steps_per_cycle: u64,
    pub max_configs: u64,
    pub max_total_cycles: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_steps_per_cycle: 10_000, max_configs: 1_000_000, max_total_cycles: 100_000 }
    }
}

impl Limits {
    /// Parses `configs=N,steps=N,cycles=N`; omitted keys keep their defaults.
    pub fn parse(text: &str) -> Result<Limits, String> {
        let mut l = Limits::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("bad limit {part:?}"))?;
            let n: u64 = value.trim().parse().map_err(|_| format!("bad number in {part:?}"))?;
            if n == 0 {
                return Err(format!("limit {key} must be positive"));
            }
            match key.trim() {
                "configs" => l.max_configs = n,
                "steps" => l.max_steps_per_cycle = n,
                "cycles" => l.max_total_cycles = n,
                other => return Err(format!("unknown limit {other:?}")),
            }
        }
        Ok(l)
    }

    /// Defaults overridden by the `REDUKTO_LIMITS` environment variable, if set.
    pub fn from_env() -> Result<Limits, String> {
        match std::env::var("REDUKTO_LIMITS") {
            Ok(v) => Limits::parse(&v),
            Err(_) => Ok(Limits::default()),
        }
    }
}

/// A configuration: tape `¢ w $`, control state, window position and rewrites in the current cycle.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Configuration {
    pub tape: Word,
    pub state: State,
    pub pos: usize,
    pub rewrites: usize,
}

impl Configuration {
    /// The restarting configuration for `word`.
    pub fn restarting(spec: &AutomatonSpec, word: &[Symbol]) -> Configuration {
        let mut tape = Vec::with_capacity(word.len() + 2);
        tape.push(Symbol::left());
        tape.extend_from_slice(word);
        tape.push(Symbol::right());
        Configuration { tape, state: spec.initial.clone(), pos: 0, rewrites: 0 }
    }

    /// The window content for window size `k`.
    pub fn window(&self, k: usize) -> &[Symbol] {
        let end = (self.pos + k).min(self.tape.len());
        &self.tape[self.pos..end]
    }

    /// The tape without sentinels.
    pub fn word(&self) -> Word {
        self.tape.iter().filter(|s| !s.is_sentinel()).cloned().collect()
    }

    pub fn is_restarting(&self, spec: &AutomatonSpec) -> bool {
        self.state == spec.initial && self.pos == 0 && self.rewrites == 0
    }

    pub fn right_distance(&self) -> usize {
        right_distance(self)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} pos={} [{}]", self.state, self.pos, spaced(&self.tape))
    }
}

/// D_r: the number of tape cells from the window start through `$`.
pub fn right_distance(config: &Configuration) -> usize {
    config.tape.len() - config.pos
}

/// The result of applying one instruction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Successor {
    Config(Configuration),
    Accept,
    Reject,
}

/// All single-step successors of a configuration, in search order.
///
/// This is the raw step relation; cycle discipline is not applied. A missing
/// table entry yields no successors.
pub fn successors(
    spec: &AutomatonSpec,
    config: &Configuration,
) -> Result<Vec<(Instruction, Successor)>, EngineError> {
    let k = spec.window;
    let t = &config.tape;
    let well_formed = t.len() >= 2
        && t[0].is_left()
        && t[t.len() - 1].is_right()
        && t[1..t.len() - 1].iter().all(|s| spec.work.contains(s))
        && config.pos < t.len();
    if !well_formed {
        return Err(EngineError::BadConfiguration(config.to_string()));
    }
    let u = config.window(k).to_vec();
    let mut out = Vec::new();
    for instr in spec.instructions(&config.state, &u) {
        let next = match &instr {
            Instruction::MoveRight(q) => {
                if u.len() == 1 && u[0].is_right() {
                    continue;
                }
                Successor::Config(Configuration { state: q.clone(), pos: config.pos + 1, ..config.clone() })
            }
            Instruction::MoveLeft(q) => {
                if u[0].is_left() {
                    continue;
                }
                Successor::Config(Configuration { state: q.clone(), pos: config.pos - 1, ..config.clone() })
            }
            Instruction::Rewrite { target, next } => {
                let mut tape = t[..config.pos].to_vec();
                tape.extend_from_slice(target);
                tape.extend_from_slice(&t[config.pos + u.len()..]);
                let shift = u.len() - target.len().min(u.len());
                Successor::Config(Configuration {
                    tape,
                    state: next.clone(),
                    pos: config.pos.saturating_sub(shift),
                    rewrites: config.rewrites + 1,
                })
            }
            Instruction::Restart => Successor::Config(Configuration {
                tape: t.clone(),
                state: spec.initial.clone(),
                pos: 0,
                rewrites: 0,
            }),
            Instruction::Accept => Successor::Accept,
            Instruction::Reject => Successor::Reject,
        };
        out.push((instr, next));
    }
    Ok(out)
}

/// One executed step.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Step {
    pub config: Configuration,
    pub instruction: Instruction,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Accept,
    /// `stuck` marks a missing transition rather than an explicit Reject.
    Reject { stuck: bool },
    Diverges,
    LimitExceeded,
    InvalidCycle,
    /// The trace is a prefix of a computation, cut at the point of interest.
    Partial,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Accept => f.write_str("accept"),
            Outcome::Reject { stuck: false } => f.write_str("reject"),
            Outcome::Reject { stuck: true } => f.write_str("reject (stuck)"),
            Outcome::Diverges => f.write_str("diverges"),
            Outcome::LimitExceeded => f.write_str("limit exceeded"),
            Outcome::InvalidCycle => f.write_str("invalid cycle"),
            Outcome::Partial => f.write_str("partial"),
        }
    }
}

/// A computation record.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Trace {
    pub steps: Vec<Step>,
    pub outcome: Outcome,
    /// The configuration in which the computation stopped.
    pub last: Configuration,
}

impl Trace {
    /// The cycle reductions `u ⇒ v` in order; cycle boundaries are the Restart steps.
    pub fn reductions(&self) -> Vec<(Word, Word)> {
        let mut out = Vec::new();
        let mut start: Option<Word> = None;
        for s in &self.steps {
            if start.is_none() {
                start = Some(s.config.word());
            }
            if s.instruction == Instruction::Restart {
                out.push((start.take().unwrap_or_default(), s.config.word()));
            }
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.steps.iter().filter(|s| s.instruction == Instruction::Restart).count()
    }

    /// Right distances of the configurations at which rewrites were applied.
    pub fn rewrite_distances(&self) -> Vec<usize> {
        self.steps.iter().filter(|s| s.instruction.is_rewrite()).map(|s| s.config.right_distance()).collect()
    }
}

/// An element of the cycle-rewriting relation `u ⇒ v`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycleRewrite {
    pub from: Word,
    pub to: Word,
    /// Steps of the cycle, ending with the Restart step.
    pub witness: Vec<Step>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Member,
    NonMember,
    ResourceExceeded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non-member",
            Verdict::ResourceExceeded => "resource exceeded",
        })
    }
}

/// Answer of a membership decider.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decision {
    pub verdict: Verdict,
    /// For h-proper queries: the extended version found.
    pub witness: Option<Word>,
    /// An accepting computation for members; the unique computation for deterministic automata.
    pub trace: Option<Trace>,
}

pub(crate) fn config_of(m: &Machine, tape: &[u8], state: u16, pos: u16, rw: u16) -> Configuration {
    Configuration {
        tape: m.decode(tape),
        state: m.states[state as usize].clone(),
        pos: pos as usize,
        rewrites: rw as usize,
    }
}

/// Steps along an explored cycle path, with `last_op` applied at the final node.
pub(crate) fn path_steps(m: &Machine, ex: &Explorer, node: u32, last_op: Option<u32>) -> Vec<Step> {
    let path = ex.path(node);
    let mut steps = Vec::with_capacity(path.len());
    for w in path.windows(2) {
        let n = ex.nodes[w[0] as usize];
        let op = ex.nodes[w[1] as usize].op;
        steps.push(Step {
            config: config_of(m, &ex.tapes[n.tape as usize], n.state, n.pos, n.rw),
            instruction: m.instruction(op).clone(),
        });
    }
    if let Some(op) = last_op {
        let n = ex.nodes[node as usize];
        steps.push(Step {
            config: config_of(m, &ex.tapes[n.tape as usize], n.state, n.pos, n.rw),
            instruction: m.instruction(op).clone(),
        });
    }
    steps
}

fn node_config(m: &Machine, ex: &Explorer, node: u32) -> Configuration {
    let n = ex.nodes[node as usize];
    config_of(m, &ex.tapes[n.tape as usize], n.state, n.pos, n.rw)
}

fn check_len(word: &[Symbol]) -> Result<(), EngineError> {
    if word.len() + 2 > u16::MAX as usize {
        return Err(EngineError::BadConfiguration("word too long".into()));
    }
    Ok(())
}

/// Runs a deterministic automaton on `word` from its restarting configuration.
pub fn run_deterministic(spec: &AutomatonSpec, word: &[Symbol], limits: &Limits) -> Result<Trace, EngineError> {
    let m = spec.machine()?;
    if !m.deterministic {
        return Err(EngineError::Nondeterministic);
    }
    check_len(word)?;
    let mut tape = Machine::closed_tape(&m.encode(word)?);
    let mut budget = Budget::new(limits);
    let mut ex = Explorer::default();
    let mut steps = Vec::new();
    loop {
        let out = ex.explore(&m, &tape, false, true, &mut budget);
        let end = ex.nodes.len() as u32 - 1;
        if let Some((node, op)) = out.accept {
            steps.extend(path_steps(&m, &ex, node, Some(op)));
            let last = node_config(&m, &ex, node);
            return Ok(Trace { steps, outcome: Outcome::Accept, last });
        }
        if let Some((t, node, op)) = out.restarts.first() {
            steps.extend(path_steps(&m, &ex, *node, Some(*op)));
            tape = t.clone();
            continue;
        }
        let (outcome, last_op) = det_ending(&m, &ex, &out, end);
        steps.extend(path_steps(&m, &ex, end, last_op));
        let last = if out.limit && ex.nodes.len() == 1 {
            config_of(&m, &tape, m.initial, 0, 0)
        } else {
            node_config(&m, &ex, end)
        };
        return Ok(Trace { steps, outcome, last });
    }
}

/// Classifies the end of a deterministic cycle that neither accepted nor restarted.
fn det_ending(m: &Machine, ex: &Explorer, out: &CycleOutcome, end: u32) -> (Outcome, Option<u32>) {
    let n = ex.nodes[end as usize];
    let tape = &ex.tapes[n.tape as usize];
    let op = match cycle::window_ops(m, tape, false, n.state, n.pos as usize) {
        cycle::WindowOps::Ops(s, 1) => Some(s),
        _ => None,
    };
    if out.limit {
        (Outcome::LimitExceeded, None)
    } else if out.diverged {
        (Outcome::Diverges, None)
    } else if out.invalid {
        (Outcome::InvalidCycle, op)
    } else if out.rejected {
        (Outcome::Reject { stuck: false }, op)
    } else {
        (Outcome::Reject { stuck: true }, None)
    }
}

fn verdict_of(s: Status) -> Verdict {
    match s {
        Status::Member => Verdict::Member,
        Status::NonMember => Verdict::NonMember,
        Status::Unknown(_) => Verdict::ResourceExceeded,
    }
}

pub(crate) fn decide_encoded(
    spec: &AutomatonSpec,
    m: &Machine,
    word: &[u8],
    limits: &Limits,
) -> Result<Decision, EngineError> {
    let mut d = Decider::new(m, *limits);
    let tape = Machine::closed_tape(word);
    let verdict = verdict_of(d.status(&tape, false));
    let trace = match verdict {
        Verdict::Member => Some(d.accepting_trace(&tape)),
        _ if m.deterministic => Some(run_deterministic(spec, &m.decode(word), limits)?),
        _ => None,
    };
    Ok(Decision { verdict, witness: None, trace })
}

/// Decides `word ∈ L_C(M)` for a word over the working alphabet.
pub fn decide_basic_membership(
    spec: &AutomatonSpec,
    word: &[Symbol],
    limits: &Limits,
) -> Result<Decision, EngineError> {
    let m = spec.machine()?;
    check_len(word)?;
    let w = m.encode(word)?;
    decide_encoded(spec, &m, &w, limits)
}

/// Decides `word ∈ L(M)` for a word over the input alphabet.
pub fn decide_input_membership(
    spec: &AutomatonSpec,
    word: &[Symbol],
    limits: &Limits,
) -> Result<Decision, EngineError> {
    let m = spec.machine()?;
    check_len(word)?;
    let w = m.encode_input(word)?;
    decide_encoded(spec, &m, &w, limits)
}

/// All `v` with `word ⇒ v` in one strict cycle, each with a witness.
pub fn cycle_rewrites(
    spec: &AutomatonSpec,
    word: &[Symbol],
    limits: &Limits,
) -> Result<Vec<CycleRewrite>, EngineError> {
    let m = spec.machine()?;
    check_len(word)?;
    let tape = Machine::closed_tape(&m.encode(word)?);
    let mut budget = Budget::new(limits);
    let mut ex = Explorer::default();
    let out = ex.explore(&m, &tape, false, false, &mut budget);
    if out.limit {
        return Err(EngineError::BadConfiguration("limits exceeded while exploring the cycle".into()));
    }
    let mut rewrites: Vec<CycleRewrite> = out
        .restarts
        .iter()
        .map(|(t, node, op)| CycleRewrite {
            from: word.to_vec(),
            to: m.decode(&t[1..t.len() - 1]),
            witness: path_steps(&m, &ex, *node, Some(*op)),
        })
        .collect();
    rewrites.sort_by(|a, b| a.to.cmp(&b.to));
    Ok(rewrites)
}
