//! Memoized membership search over restarting tapes.

use rustc_hash::FxHashMap;

use super::cycle::{Budget, Explorer};
use super::machine::Machine;
use super::{config_of, path_steps, Limits, Outcome, Trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Reason {
    /// The verdict depends on cells beyond a known prefix.
    Open,
    Limit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Status {
    Member,
    NonMember,
    Unknown(Reason),
}

#[derive(Clone, Debug)]
enum Entry {
    InProgress,
    /// Accepted in a tail from this tape.
    Tail,
    /// Accepted after restarting with the given tape.
    Via(Vec<u8>),
    NonMember,
    Unknown(Reason),
}

impl Entry {
    fn status(&self) -> Status {
        match self {
            Entry::Tail | Entry::Via(_) => Status::Member,
            Entry::NonMember => Status::NonMember,
            Entry::Unknown(r) => Status::Unknown(*r),
            Entry::InProgress => Status::Unknown(Reason::Limit),
        }
    }
}

struct Frame {
    tape: Vec<u8>,
    restarts: Vec<Vec<u8>>,
    next: usize,
    unknown: Option<Reason>,
}

fn merge(a: Option<Reason>, b: Reason) -> Option<Reason> {
    match (a, b) {
        (Some(Reason::Limit), _) | (_, Reason::Limit) => Some(Reason::Limit),
        _ => Some(Reason::Open),
    }
}

pub(crate) struct Decider<'m> {
    m: &'m Machine,
    memo: FxHashMap<(Vec<u8>, bool), Entry>,
    ex: Explorer,
    limits: Limits,
    /// Memo entries kept between top-level queries.
    pub max_memo: usize,
}

enum Expanded {
    Done(Entry),
    Frame(Frame),
}

impl<'m> Decider<'m> {
    pub fn new(m: &'m Machine, limits: Limits) -> Decider<'m> {
        Decider { m, memo: FxHashMap::default(), ex: Explorer::default(), limits, max_memo: 1_000_000 }
    }

    fn expand(&mut self, tape: &[u8], open: bool, budget: &mut Budget) -> Expanded {
        let out = self.ex.explore(self.m, tape, open, true, budget);
        if out.accept.is_some() {
            return Expanded::Done(Entry::Tail);
        }
        if out.limit {
            return Expanded::Done(Entry::Unknown(Reason::Limit));
        }
        let unknown = out.touched.then_some(Reason::Open);
        let restarts: Vec<Vec<u8>> = out.restarts.into_iter().map(|(t, _, _)| t).collect();
        if restarts.is_empty() {
            return Expanded::Done(match unknown {
                Some(r) => Entry::Unknown(r),
                None => Entry::NonMember,
            });
        }
        Expanded::Frame(Frame { tape: tape.to_vec(), restarts, next: 0, unknown })
    }

    /// Membership status of the restarting tape `tape` (closed `¢w$`, or open `¢p`).
    pub fn status(&mut self, tape: &[u8], open: bool) -> Status {
        if let Some(e) = self.memo.get(&(tape.to_vec(), open)) {
            return e.status();
        }
        if self.memo.len() > self.max_memo {
            self.memo.clear();
        }
        let mut budget = Budget::new(&self.limits);
        let mut stack: Vec<Frame> = Vec::new();
        match self.expand(tape, open, &mut budget) {
            Expanded::Done(e) => {
                let s = e.status();
                self.memo.insert((tape.to_vec(), open), e);
                return s;
            }
            Expanded::Frame(f) => {
                self.memo.insert((tape.to_vec(), open), Entry::InProgress);
                stack.push(f);
            }
        }
        // result of the most recently finished frame, to be applied to its parent
        let mut finished: Option<(Vec<u8>, Status)> = None;
        loop {
            let Some(top) = stack.last_mut() else { break };
            if let Some((child, st)) = finished.take() {
                match st {
                    Status::Member => {
                        let f = stack.pop().expect("frame");
                        let s = Status::Member;
                        self.memo.insert((f.tape.clone(), open), Entry::Via(child));
                        finished = Some((f.tape, s));
                        continue;
                    }
                    Status::NonMember => {}
                    Status::Unknown(r) => top.unknown = merge(top.unknown, r),
                }
            }
            let top = stack.last_mut().expect("frame");
            if top.next == top.restarts.len() {
                let f = stack.pop().expect("frame");
                let e = match f.unknown {
                    Some(r) => Entry::Unknown(r),
                    None => Entry::NonMember,
                };
                let s = e.status();
                self.memo.insert((f.tape.clone(), open), e);
                finished = Some((f.tape, s));
                continue;
            }
            let r = top.restarts[top.next].clone();
            top.next += 1;
            if let Some(e) = self.memo.get(&(r.clone(), open)) {
                finished = Some((r, e.status()));
                continue;
            }
            match self.expand(&r, open, &mut budget) {
                Expanded::Done(e) => {
                    let s = e.status();
                    self.memo.insert((r.clone(), open), e);
                    finished = Some((r, s));
                }
                Expanded::Frame(f) => {
                    self.memo.insert((r, open), Entry::InProgress);
                    stack.push(f);
                }
            }
        }
        let (_, s) = finished.expect("root result");
        if matches!(s, Status::Unknown(Reason::Limit)) {
            // budget-dependent results must not leak into later queries
            self.memo.retain(|_, e| !matches!(e, Entry::Unknown(Reason::Limit) | Entry::InProgress));
        }
        s
    }

    /// The restart chain of an accepting computation from a closed member tape.
    pub fn chain(&self, tape: &[u8]) -> Vec<Vec<u8>> {
        let mut out = vec![tape.to_vec()];
        let mut cur = tape.to_vec();
        while let Some(Entry::Via(next)) = self.memo.get(&(cur.clone(), false)) {
            out.push(next.clone());
            cur = next.clone();
        }
        out
    }

    /// An accepting computation for a closed tape already decided as a member.
    pub fn accepting_trace(&mut self, tape: &[u8]) -> Trace {
        let chain = self.chain(tape);
        let mut steps = Vec::new();
        let m = self.m;
        for (i, t) in chain.iter().enumerate() {
            let mut budget = Budget::new(&self.limits);
            let last = i + 1 == chain.len();
            let out = self.ex.explore(m, t, false, last, &mut budget);
            if last {
                let (node, op) = out.accept.expect("tail acceptance replays");
                steps.extend(path_steps(m, &self.ex, node, Some(op)));
                let n = self.ex.nodes[node as usize];
                let cfg = config_of(m, &self.ex.tapes[n.tape as usize], n.state, n.pos, n.rw);
                return Trace { steps, outcome: Outcome::Accept, last: cfg };
            }
            let (_, node, op) = out
                .restarts
                .iter()
                .find(|(r, _, _)| *r == chain[i + 1])
                .expect("restart replays");
            steps.extend(path_steps(m, &self.ex, *node, Some(*op)));
        }
        unreachable!("chain ends in a tail")
    }
}
