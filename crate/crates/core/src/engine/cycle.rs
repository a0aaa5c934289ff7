//! Exploration of a single cycle from a restarting configuration.

use rustc_hash::FxHashSet;

use super::machine::{Machine, Op, LEFT, RIGHT};

pub(crate) const ROOT: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
pub(crate) struct Node {
    pub tape: u32,
    pub state: u16,
    pub pos: u16,
    pub rw: u16,
    pub parent: u32,
    /// Index of the instruction that produced this node.
    pub op: u32,
}

#[derive(Debug)]
pub(crate) struct Budget {
    pub configs: u64,
    pub steps_per_cycle: u64,
    pub cycles: u64,
    pub exhausted: bool,
}

impl Budget {
    pub fn new(limits: &super::Limits) -> Budget {
        Budget {
            configs: limits.max_configs,
            steps_per_cycle: limits.max_steps_per_cycle,
            cycles: limits.max_total_cycles,
            exhausted: false,
        }
    }
}

#[derive(Debug, Default)]
pub(crate) struct CycleOutcome {
    /// Node at which an Accept step fired.
    pub accept: Option<(u32, u32)>,
    /// Distinct restart tapes, with the node and instruction that restarted.
    pub restarts: Vec<(Vec<u8>, u32, u32)>,
    /// Some branch needed cells beyond a known prefix.
    pub touched: bool,
    pub limit: bool,
    pub diverged: bool,
    pub stuck: bool,
    pub rejected: bool,
    pub invalid: bool,
}

pub(crate) enum WindowOps {
    Ops(u32, u32),
    Missing,
    Touch,
}

/// Instructions applicable at a configuration; `open` tapes lack the right sentinel.
#[inline]
pub(crate) fn window_ops(m: &Machine, tape: &[u8], open: bool, state: u16, pos: usize) -> WindowOps {
    let end = pos + m.k;
    let found = if end > tape.len() {
        if open {
            return match m.uniform(state) {
                Some((s, l)) => WindowOps::Ops(s, l),
                None => WindowOps::Touch,
            };
        }
        m.lookup(state, &tape[pos..])
    } else {
        m.lookup(state, &tape[pos..end])
    };
    match found {
        Some((s, l)) => WindowOps::Ops(s, l),
        None => WindowOps::Missing,
    }
}

#[inline]
pub(crate) fn window_len(m: &Machine, tape: &[u8], pos: usize) -> usize {
    m.k.min(tape.len() - pos)
}

pub(crate) fn splice(tape: &[u8], pos: usize, wl: usize, target: &[u8]) -> Vec<u8> {
    let mut t = Vec::with_capacity(tape.len() + target.len() - wl);
    t.extend_from_slice(&tape[..pos]);
    t.extend_from_slice(target);
    t.extend_from_slice(&tape[pos + wl..]);
    t
}

#[derive(Default)]
pub(crate) struct Explorer {
    pub nodes: Vec<Node>,
    pub tapes: Vec<Vec<u8>>,
    visited: FxHashSet<(u32, u16, u16, u16)>,
    stack: Vec<u32>,
}

impl Explorer {
    /// Explores every strict computation of one cycle from `q0` at the left end of `tape`.
    pub fn explore(
        &mut self,
        m: &Machine,
        tape: &[u8],
        open: bool,
        stop_on_accept: bool,
        budget: &mut Budget,
    ) -> CycleOutcome {
        self.nodes.clear();
        self.tapes.clear();
        self.visited.clear();
        self.stack.clear();
        self.tapes.push(tape.to_vec());
        self.nodes.push(Node { tape: 0, state: m.initial, pos: 0, rw: 0, parent: ROOT, op: ROOT });
        let mut out = CycleOutcome::default();
        if budget.cycles == 0 {
            out.limit = true;
            budget.exhausted = true;
            return out;
        }
        budget.cycles -= 1;
        if m.deterministic {
            self.run_single(m, open, budget, &mut out);
        } else {
            self.run_search(m, open, stop_on_accept, budget, &mut out);
        }
        out
    }

    fn push_restart(out: &mut CycleOutcome, tape: &[u8], node: u32, op: u32) {
        if !out.restarts.iter().any(|(t, _, _)| t == tape) {
            out.restarts.push((tape.to_vec(), node, op));
        }
    }

    fn run_single(&mut self, m: &Machine, open: bool, budget: &mut Budget, out: &mut CycleOutcome) {
        let mut cur = 0u32;
        let mut since_change = 0u64;
        let mut steps = 0u64;
        loop {
            let n = self.nodes[cur as usize];
            let tape = &self.tapes[n.tape as usize];
            let pos = n.pos as usize;
            let (s, l) = match window_ops(m, tape, open, n.state, pos) {
                WindowOps::Ops(s, l) => (s, l),
                WindowOps::Missing => {
                    out.stuck = true;
                    return;
                }
                WindowOps::Touch => {
                    out.touched = true;
                    return;
                }
            };
            debug_assert!(l <= 1);
            if l == 0 {
                out.stuck = true;
                return;
            }
            steps += 1;
            if budget.configs == 0 || steps > budget.steps_per_cycle {
                out.limit = true;
                budget.exhausted = true;
                return;
            }
            budget.configs -= 1;
            let limit_loop = (m.states.len() as u64) * (tape.len() as u64 + 1);
            let next = match m.op(s) {
                Op::Mvr(q) => {
                    if tape[pos] == RIGHT {
                        out.stuck = true;
                        return;
                    }
                    since_change += 1;
                    Node { tape: n.tape, state: *q, pos: n.pos + 1, rw: n.rw, parent: cur, op: s }
                }
                Op::Mvl(q) => {
                    if tape[pos] == LEFT {
                        out.stuck = true;
                        return;
                    }
                    since_change += 1;
                    Node { tape: n.tape, state: *q, pos: n.pos - 1, rw: n.rw, parent: cur, op: s }
                }
                Op::Sl { target, next } => {
                    if n.rw + 1 > m.mr {
                        out.invalid = true;
                        return;
                    }
                    let wl = window_len(m, tape, pos);
                    let t = splice(tape, pos, wl, target);
                    let np = pos.saturating_sub(wl - target.len());
                    self.tapes.push(t);
                    since_change = 0;
                    Node {
                        tape: (self.tapes.len() - 1) as u32,
                        state: *next,
                        pos: np as u16,
                        rw: n.rw + 1,
                        parent: cur,
                        op: s,
                    }
                }
                Op::Restart => {
                    if n.rw == 0 {
                        out.invalid = true;
                    } else {
                        let t = self.tapes[n.tape as usize].clone();
                        out.restarts.push((t, cur, s));
                    }
                    return;
                }
                Op::Accept => {
                    if n.rw > 0 {
                        out.invalid = true;
                    } else {
                        out.accept = Some((cur, s));
                    }
                    return;
                }
                Op::Reject => {
                    if n.rw > 0 {
                        out.invalid = true;
                    } else {
                        out.rejected = true;
                    }
                    return;
                }
            };
            if since_change > limit_loop {
                out.diverged = true;
                return;
            }
            self.nodes.push(next);
            cur = (self.nodes.len() - 1) as u32;
        }
    }

    fn run_search(
        &mut self,
        m: &Machine,
        open: bool,
        stop_on_accept: bool,
        budget: &mut Budget,
        out: &mut CycleOutcome,
    ) {
        self.stack.push(0);
        self.visited.insert((0, m.initial, 0, 0));
        let mut steps = 0u64;
        while let Some(cur) = self.stack.pop() {
            let n = self.nodes[cur as usize];
            let pos = n.pos as usize;
            let (s, l) = {
                let tape = &self.tapes[n.tape as usize];
                match window_ops(m, tape, open, n.state, pos) {
                    WindowOps::Ops(s, l) => (s, l),
                    WindowOps::Missing => {
                        out.stuck = true;
                        continue;
                    }
                    WindowOps::Touch => {
                        out.touched = true;
                        continue;
                    }
                }
            };
            let mut children: Vec<Node> = Vec::new();
            for oi in s..s + l {
                let tape = &self.tapes[n.tape as usize];
                match m.op(oi) {
                    Op::Mvr(q) => {
                        if tape[pos] != RIGHT {
                            children.push(Node { state: *q, pos: n.pos + 1, parent: cur, op: oi, ..n });
                        }
                    }
                    Op::Mvl(q) => {
                        if tape[pos] != LEFT {
                            children.push(Node { state: *q, pos: n.pos - 1, parent: cur, op: oi, ..n });
                        }
                    }
                    Op::Sl { target, next } => {
                        if n.rw + 1 > m.mr {
                            out.invalid = true;
                            continue;
                        }
                        let wl = window_len(m, tape, pos);
                        let t = splice(tape, pos, wl, target);
                        let np = pos.saturating_sub(wl - target.len());
                        self.tapes.push(t);
                        children.push(Node {
                            tape: (self.tapes.len() - 1) as u32,
                            state: *next,
                            pos: np as u16,
                            rw: n.rw + 1,
                            parent: cur,
                            op: oi,
                        });
                    }
                    Op::Restart => {
                        if n.rw == 0 {
                            out.invalid = true;
                        } else {
                            let t = tape.clone();
                            Self::push_restart(out, &t, cur, oi);
                        }
                    }
                    Op::Accept => {
                        if n.rw > 0 {
                            out.invalid = true;
                        } else if out.accept.is_none() {
                            out.accept = Some((cur, oi));
                            if stop_on_accept {
                                return;
                            }
                        }
                    }
                    Op::Reject => {
                        if n.rw > 0 {
                            out.invalid = true;
                        } else {
                            out.rejected = true;
                        }
                    }
                }
            }
            // push in reverse so that the first instruction is explored first
            for child in children.into_iter().rev() {
                if self.visited.insert((child.tape, child.state, child.pos, child.rw)) {
                    steps += 1;
                    if budget.configs == 0 || steps > budget.steps_per_cycle {
                        out.limit = true;
                        budget.exhausted = true;
                        return;
                    }
                    budget.configs -= 1;
                    self.nodes.push(child);
                    self.stack.push((self.nodes.len() - 1) as u32);
                }
            }
        }
    }

    /// Node indices from the root to `node`.
    pub fn path(&self, node: u32) -> Vec<u32> {
        let mut p = vec![node];
        let mut cur = node;
        while self.nodes[cur as usize].parent != ROOT {
            cur = self.nodes[cur as usize].parent;
            p.push(cur);
        }
        p.reverse();
        p
    }
}
