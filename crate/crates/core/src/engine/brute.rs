//! Unmemoized breadth-first search over whole computations.
//!
//! Shares no search code with the cycle explorer or the decider; it serves
//! as the independent reference for membership.

use std::collections::{HashSet, VecDeque};

use crate::error::EngineError;
use crate::model::{AutomatonSpec, Instruction, State};
use crate::symbol::{Symbol, Word};

use super::{Limits, Verdict};

#[derive(Clone, PartialEq, Eq, Hash)]
struct Config {
    tape: Word,
    state: State,
    pos: usize,
    rewrites: usize,
}

/// Decides basic membership by exhaustive search over configurations, without memoizing tape verdicts.
pub fn decide_basic_exhaustive(
    spec: &AutomatonSpec,
    word: &[Symbol],
    limits: &Limits,
) -> Result<Verdict, EngineError> {
    if let Some(s) = word.iter().find(|s| !spec.work.contains(s)) {
        return Err(EngineError::NotWorking(s.to_string()));
    }
    let k = spec.window;
    let j = spec.flags.mr_degree.max(1);
    let mut tape = vec![Symbol::left()];
    tape.extend_from_slice(word);
    tape.push(Symbol::right());
    let start = Config { tape, state: spec.initial.clone(), pos: 0, rewrites: 0 };
    let mut seen: HashSet<Config> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(c) = queue.pop_front() {
        if seen.len() as u64 > limits.max_configs {
            return Ok(Verdict::ResourceExceeded);
        }
        let end = (c.pos + k).min(c.tape.len());
        let u = &c.tape[c.pos..end];
        let Some(set) = spec.table.get(&(c.state.clone(), u.to_vec())) else { continue };
        for instr in set {
            let next = match instr {
                Instruction::Accept if c.rewrites == 0 => return Ok(Verdict::Member),
                Instruction::Accept | Instruction::Reject => None,
                Instruction::Restart if c.rewrites == 0 => None,
                Instruction::Restart => Some(Config {
                    tape: c.tape.clone(),
                    state: spec.initial.clone(),
                    pos: 0,
                    rewrites: 0,
                }),
                Instruction::MoveRight(q) if !(u.len() == 1 && u[0].is_right()) => {
                    Some(Config { state: q.clone(), pos: c.pos + 1, ..c.clone() })
                }
                Instruction::MoveLeft(q) if !u[0].is_left() => {
                    Some(Config { state: q.clone(), pos: c.pos - 1, ..c.clone() })
                }
                Instruction::MoveRight(_) | Instruction::MoveLeft(_) => None,
                Instruction::Rewrite { .. } if c.rewrites >= j => None,
                Instruction::Rewrite { target, next } => {
                    let mut t: Word = c.tape[..c.pos].to_vec();
                    t.extend(target.iter().cloned());
                    t.extend(c.tape[end..].iter().cloned());
                    let pos = c.pos.saturating_sub(u.len() - target.len());
                    Some(Config { tape: t, state: next.clone(), pos, rewrites: c.rewrites + 1 })
                }
            };
            if let Some(n) = next {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
    }
    Ok(Verdict::NonMember)
}
