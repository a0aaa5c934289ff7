//! Compiled form of an automaton: symbols as byte ids, windows as packed keys.

use rustc_hash::FxHashMap;

use crate::error::EngineError;
use crate::model::{AutomatonSpec, Instruction, State};
use crate::symbol::{Symbol, Word};
use crate::validate::validate_automaton;

pub(crate) const LEFT: u8 = 0;
pub(crate) const RIGHT: u8 = 1;

#[derive(Clone, Debug)]
pub(crate) enum Op {
    Mvr(u16),
    Mvl(u16),
    Sl { target: Box<[u8]>, next: u16 },
    Restart,
    Accept,
    Reject,
}

#[derive(Debug)]
pub(crate) struct Machine {
    pub k: usize,
    pub initial: u16,
    pub mr: u16,
    pub shrinking: bool,
    /// Every key carries at most one instruction.
    pub deterministic: bool,
    pub symbols: Vec<Symbol>,
    pub index: FxHashMap<Symbol, u8>,
    pub states: Vec<State>,
    pub input_ids: Vec<u8>,
    pub work_ids: Vec<u8>,
    table: FxHashMap<(u16, u128), (u32, u32)>,
    ops: Vec<Op>,
    instrs: Vec<Instruction>,
    /// Per state: the common instruction range if the state acts identically on every legal window.
    uniform: Vec<Option<(u32, u32)>>,
}

pub(crate) fn pack(cells: &[u8]) -> u128 {
    cells.iter().fold(0u128, |acc, &c| (acc << 8) | (u128::from(c) + 1))
}

impl Machine {
    pub fn compile(spec: &AutomatonSpec) -> Result<Machine, EngineError> {
        let report = validate_automaton(spec);
        if report.has_structural() {
            return Err(EngineError::Invalid(report));
        }
        let mut symbols = vec![Symbol::left(), Symbol::right()];
        symbols.extend(spec.work.iter().cloned());
        let index: FxHashMap<Symbol, u8> =
            symbols.iter().enumerate().map(|(i, s)| (s.clone(), i as u8)).collect();
        let state_index: FxHashMap<State, u16> =
            spec.states.iter().enumerate().map(|(i, q)| (q.clone(), i as u16)).collect();
        let ids = |w: &[Symbol]| -> Vec<u8> { w.iter().map(|s| index[s]).collect() };

        let mut table = FxHashMap::default();
        let mut ops = Vec::new();
        let mut instrs = Vec::new();
        let mut per_state: Vec<Vec<(u32, u32)>> = vec![Vec::new(); spec.states.len()];
        let mut deterministic = true;
        for ((q, u), set) in &spec.table {
            let start = ops.len() as u32;
            for i in set {
                let op = match i {
                    Instruction::MoveRight(n) => Op::Mvr(state_index[n]),
                    Instruction::MoveLeft(n) => Op::Mvl(state_index[n]),
                    Instruction::Rewrite { target, next } => Op::Sl {
                        target: ids(target).into_boxed_slice(),
                        next: state_index[next],
                    },
                    Instruction::Restart => Op::Restart,
                    Instruction::Accept => Op::Accept,
                    Instruction::Reject => Op::Reject,
                };
                ops.push(op);
                instrs.push(i.clone());
            }
            let len = set.len() as u32;
            deterministic &= len <= 1;
            let qi = state_index[q];
            table.insert((qi, pack(&ids(u))), (start, len));
            per_state[qi as usize].push((start, len));
        }

        let g = spec.work.len() as f64;
        let k = spec.window as i32;
        let geo = |n: i32| (0..=n.max(-1)).map(|i| g.powi(i)).sum::<f64>();
        let legal = g.powi(k) + g.powi(k - 1) + geo(k - 1) + geo(k - 2);
        let uniform = per_state
            .iter()
            .map(|entries| {
                if entries.is_empty() || (entries.len() as f64) < legal {
                    return None;
                }
                let first = entries[0];
                let halting = (0..first.1).all(|o| {
                    matches!(
                        instrs[(first.0 + o) as usize],
                        Instruction::Restart | Instruction::Accept | Instruction::Reject
                    )
                });
                let same = halting
                    && entries.iter().all(|&(s, l)| {
                        l == first.1
                            && (0..l).all(|o| {
                                instrs[(s + o) as usize] == instrs[(first.0 + o) as usize]
                            })
                    });
                same.then_some(first)
            })
            .collect();

        Ok(Machine {
            k: spec.window,
            initial: state_index[&spec.initial],
            mr: spec.flags.mr_degree.clamp(1, u16::MAX as usize) as u16,
            shrinking: spec.flags.shrinking,
            deterministic,
            input_ids: ids(&spec.input),
            work_ids: ids(&spec.work),
            symbols,
            index,
            states: spec.states.clone(),
            table,
            ops,
            instrs,
            uniform,
        })
    }

    /// Instruction range for a state and window cells.
    #[inline]
    pub fn lookup(&self, state: u16, window: &[u8]) -> Option<(u32, u32)> {
        self.table.get(&(state, pack(window))).copied()
    }

    #[inline]
    pub fn uniform(&self, state: u16) -> Option<(u32, u32)> {
        self.uniform[state as usize]
    }

    #[inline]
    pub fn op(&self, i: u32) -> &Op {
        &self.ops[i as usize]
    }

    pub fn instruction(&self, i: u32) -> &Instruction {
        &self.instrs[i as usize]
    }

    pub fn encode(&self, word: &[Symbol]) -> Result<Vec<u8>, EngineError> {
        word.iter()
            .map(|s| match self.index.get(s) {
                Some(&i) if i > RIGHT => Ok(i),
                _ => Err(EngineError::NotWorking(s.to_string())),
            })
            .collect()
    }

    pub fn encode_input(&self, word: &[Symbol]) -> Result<Vec<u8>, EngineError> {
        word.iter()
            .map(|s| match self.index.get(s) {
                Some(i) if self.input_ids.contains(i) => Ok(*i),
                _ => Err(EngineError::NotInput(s.to_string())),
            })
            .collect()
    }

    pub fn decode(&self, cells: &[u8]) -> Word {
        cells.iter().map(|&c| self.symbols[c as usize].clone()).collect()
    }

    /// Tape `¢ w $` for a word of working-symbol ids.
    pub fn closed_tape(word: &[u8]) -> Vec<u8> {
        let mut t = Vec::with_capacity(word.len() + 2);
        t.push(LEFT);
        t.extend_from_slice(word);
        t.push(RIGHT);
        t
    }

    /// Tape `¢ p` for a prefix whose continuation is unknown.
    pub fn open_tape(prefix: &[u8]) -> Vec<u8> {
        let mut t = Vec::with_capacity(prefix.len() + 1);
        t.push(LEFT);
        t.extend_from_slice(prefix);
        t
    }
}
