//! Search over whole computations with a property monitor.
//!
//! Nodes carry a monitor mark, so that a property of the computation path
//! (e.g. the last right distance seen) is tracked exactly despite merging.

use rustc_hash::{FxHashMap, FxHashSet};

use super::cycle::{splice, window_len, window_ops, WindowOps, ROOT};
use super::machine::{Machine, Op, LEFT, RIGHT};
use super::{config_of, Limits, Step};

pub(crate) enum Event<'a> {
    /// A rewrite applied at right distance `distance` (relative to the known tape).
    Rewrite { after: &'a [u8], distance: usize, rw: u16 },
    Restart { tape: &'a [u8], rw: u16 },
    Halt { stuck: bool, rw: u16 },
}

pub(crate) enum Check {
    Continue(u32),
    Violation(String),
    /// The monitor cannot decide for this prefix; the caller must look at extensions.
    Inconclusive,
}

pub(crate) trait Monitor {
    fn on(&mut self, m: &Machine, mark: u32, event: Event<'_>) -> Check;
}

pub(crate) enum SearchResult {
    Clean { touched: bool },
    /// Violation at `node` while applying `op` (none for a stuck halt).
    Violation { node: u32, op: Option<u32>, message: String },
    Limit,
    Inconclusive,
}

#[derive(Clone, Copy)]
struct GNode {
    tape: u32,
    state: u16,
    pos: u16,
    rw: u16,
    mark: u32,
    parent: u32,
    op: u32,
}

#[derive(Default)]
pub(crate) struct Graph {
    nodes: Vec<GNode>,
    tapes: Vec<Vec<u8>>,
    tape_ids: FxHashMap<Vec<u8>, u32>,
    visited: FxHashSet<(u32, u16, u16, u16, u32)>,
}

impl Graph {
    fn intern(&mut self, t: Vec<u8>) -> u32 {
        if let Some(&i) = self.tape_ids.get(&t) {
            return i;
        }
        let i = self.tapes.len() as u32;
        self.tapes.push(t.clone());
        self.tape_ids.insert(t, i);
        i
    }

    /// Explores every computation from the restarting configuration on `tape`.
    ///
    /// `permissive` lets cycles violate the rewrite-count discipline so that a
    /// monitor can observe it; otherwise such branches are cut.
    pub fn search(
        &mut self,
        m: &Machine,
        tape: &[u8],
        open: bool,
        permissive: bool,
        initial_mark: u32,
        monitor: &mut dyn Monitor,
        limits: &Limits,
    ) -> SearchResult {
        self.nodes.clear();
        self.tapes.clear();
        self.tape_ids.clear();
        self.visited.clear();
        let t0 = self.intern(tape.to_vec());
        self.nodes.push(GNode { tape: t0, state: m.initial, pos: 0, rw: 0, mark: initial_mark, parent: ROOT, op: ROOT });
        self.visited.insert((t0, m.initial, 0, 0, initial_mark));
        let mut stack = vec![0u32];
        let mut touched = false;
        let mut inconclusive = false;
        while let Some(cur) = stack.pop() {
            let n = self.nodes[cur as usize];
            let pos = n.pos as usize;
            let (s, l) = match window_ops(m, &self.tapes[n.tape as usize], open, n.state, pos) {
                WindowOps::Ops(s, l) => (s, l),
                WindowOps::Touch => {
                    touched = true;
                    continue;
                }
                WindowOps::Missing => (0, 0),
            };
            if l == 0 {
                match monitor.on(m, n.mark, Event::Halt { stuck: true, rw: n.rw }) {
                    Check::Violation(message) => return SearchResult::Violation { node: cur, op: None, message },
                    Check::Inconclusive => inconclusive = true,
                    _ => {}
                }
                continue;
            }
            let mut children = Vec::new();
            for oi in s..s + l {
                let tape = &self.tapes[n.tape as usize];
                let child = match m.op(oi) {
                    Op::Mvr(q) => {
                        if tape[pos] == RIGHT {
                            continue;
                        }
                        (n.tape, None, *q, n.pos + 1, n.rw, n.mark)
                    }
                    Op::Mvl(q) => {
                        if tape[pos] == LEFT {
                            continue;
                        }
                        (n.tape, None, *q, n.pos - 1, n.rw, n.mark)
                    }
                    Op::Sl { target, next } => {
                        if !permissive && n.rw >= m.mr {
                            continue;
                        }
                        let wl = window_len(m, tape, pos);
                        let t = splice(tape, pos, wl, target);
                        let np = pos.saturating_sub(wl - target.len());
                        let ev = Event::Rewrite { after: &t, distance: tape.len() - pos, rw: n.rw + 1 };
                        let mark = match monitor.on(m, n.mark, ev) {
                            Check::Continue(mk) => mk,
                            Check::Inconclusive => {
                                inconclusive = true;
                                continue;
                            }
                            Check::Violation(message) => {
                                return SearchResult::Violation { node: cur, op: Some(oi), message }
                            }
                        };
                        (u32::MAX, Some(t), *next, np as u16, n.rw + 1, mark)
                    }
                    Op::Restart => {
                        if !permissive && n.rw == 0 {
                            continue;
                        }
                        let mark = match monitor.on(m, n.mark, Event::Restart { tape, rw: n.rw }) {
                            Check::Continue(mk) => mk,
                            Check::Inconclusive => {
                                inconclusive = true;
                                continue;
                            }
                            Check::Violation(message) => {
                                return SearchResult::Violation { node: cur, op: Some(oi), message }
                            }
                        };
                        (n.tape, None, m.initial, 0, 0, mark)
                    }
                    Op::Accept | Op::Reject => {
                        if !permissive && n.rw > 0 {
                            continue;
                        }
                        match monitor.on(m, n.mark, Event::Halt { stuck: false, rw: n.rw }) {
                            Check::Violation(message) => {
                                return SearchResult::Violation { node: cur, op: Some(oi), message }
                            }
                            Check::Inconclusive => inconclusive = true,
                            _ => {}
                        }
                        continue;
                    }
                };
                children.push((oi, child));
            }
            for (oi, (tid, new_tape, state, pos, rw, mark)) in children.into_iter().rev() {
                let tid = match new_tape {
                    Some(t) => self.intern(t),
                    None => tid,
                };
                if self.visited.insert((tid, state, pos, rw, mark)) {
                    if self.nodes.len() as u64 >= limits.max_configs {
                        return SearchResult::Limit;
                    }
                    self.nodes.push(GNode { tape: tid, state, pos, rw, mark, parent: cur, op: oi });
                    stack.push((self.nodes.len() - 1) as u32);
                }
            }
        }
        if inconclusive {
            SearchResult::Inconclusive
        } else {
            SearchResult::Clean { touched }
        }
    }

    /// Steps from the root to `node`, followed by `op` applied there.
    pub fn steps(&self, m: &Machine, node: u32, op: Option<u32>) -> Vec<Step> {
        let mut path = vec![node];
        let mut cur = node;
        while self.nodes[cur as usize].parent != ROOT {
            cur = self.nodes[cur as usize].parent;
            path.push(cur);
        }
        path.reverse();
        let cfg = |i: u32| {
            let n = self.nodes[i as usize];
            config_of(m, &self.tapes[n.tape as usize], n.state, n.pos, n.rw)
        };
        let mut steps: Vec<Step> = path
            .windows(2)
            .map(|w| Step { config: cfg(w[0]), instruction: m.instruction(self.nodes[w[1] as usize].op).clone() })
            .collect();
        if let Some(op) = op {
            steps.push(Step { config: cfg(node), instruction: m.instruction(op).clone() });
        }
        steps
    }
}
