//! Built-in automata, grammars and closed-form language oracles.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::grammar::GnfGrammar;
use crate::model::{
    AutomatonBuilder, AutomatonSpec, AuxUse, ClassFlags, Direction, HMorphism, Instruction,
    RewriteForm, State,
};
use crate::symbol::{Symbol, Word};
use crate::validate::legal_windows;

/// A closed-form language, used as a reference for an entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Oracle {
    /// `{ a^(2^n) | n ≥ 0 }`.
    PowersOfTwo(Symbol),
    /// Balanced words over an opening and a closing bracket, λ included.
    Dyck { open: Symbol, close: Symbol },
    /// `{ a^n c^(k-1) b^n | n ≥ 0 }`.
    CenteredBlock { k: usize },
    /// `{ (u c)^j u | u ∈ {a,b}* }`.
    Copies { j: usize },
    /// `a* b*`.
    AStarBStar,
    /// The language generated by a grammar.
    Grammar(GnfGrammar),
}

fn sym(t: &str) -> Symbol {
    Symbol::new(t).unwrap_or_else(|e| panic!("{e}"))
}

impl Oracle {
    pub fn contains(&self, w: &[Symbol]) -> bool {
        match self {
            Oracle::PowersOfTwo(a) => w.iter().all(|s| s == a) && w.len().is_power_of_two(),
            Oracle::Dyck { open, close } => {
                let mut depth = 0usize;
                for s in w {
                    if s == open {
                        depth += 1;
                    } else if s == close && depth > 0 {
                        depth -= 1;
                    } else {
                        return false;
                    }
                }
                depth == 0
            }
            Oracle::CenteredBlock { k } => {
                let (a, b, c) = (sym("a"), sym("b"), sym("c"));
                let na = w.iter().take_while(|s| **s == a).count();
                let nc = w[na..].iter().take_while(|s| **s == c).count();
                let rest = &w[na + nc..];
                nc + 1 == *k && rest.len() == na && rest.iter().all(|s| *s == b)
            }
            Oracle::Copies { j } => {
                let c = sym("c");
                let parts: Vec<&[Symbol]> = w.split(|s| *s == c).collect();
                parts.len() == j + 1
                    && parts.iter().all(|p| p.iter().all(|s| s.as_str() == "a" || s.as_str() == "b"))
                    && parts.windows(2).all(|x| x[0] == x[1])
            }
            Oracle::AStarBStar => {
                let na = w.iter().take_while(|s| s.as_str() == "a").count();
                w[na..].iter().all(|s| s.as_str() == "b")
            }
            Oracle::Grammar(g) => g.derives(w),
        }
    }

    /// Members up to length `n`, length-lexicographically in [`Oracle::alphabet`] order.
    pub fn members(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = match self {
            Oracle::PowersOfTwo(a) => {
                (0..usize::BITS).map(|i| 1usize << i).take_while(|&l| l <= n).map(|l| vec![a.clone(); l]).collect()
            }
            Oracle::Dyck { open, close } => {
                let mut out = Vec::new();
                let mut stack: Vec<(Word, usize)> = vec![(Vec::new(), 0)];
                while let Some((w, depth)) = stack.pop() {
                    if depth == 0 {
                        out.push(w.clone());
                    }
                    if w.len() + depth + 2 <= n {
                        stack.push(([w.clone(), vec![open.clone()]].concat(), depth + 1));
                    }
                    if depth > 0 {
                        stack.push(([w, vec![close.clone()]].concat(), depth - 1));
                    }
                }
                out
            }
            Oracle::CenteredBlock { k } => (0..)
                .take_while(|i| 2 * i + k - 1 <= n)
                .map(|i| [vec![sym("a"); i], vec![sym("c"); k - 1], vec![sym("b"); i]].concat())
                .collect(),
            Oracle::Copies { j } => {
                let mut out = Vec::new();
                let mut us: Vec<Word> = vec![Vec::new()];
                let mut len = 0;
                while (j + 1) * len + j <= n {
                    for u in &us {
                        let mut w = Vec::new();
                        for _ in 0..*j {
                            w.extend(u.iter().cloned());
                            w.push(sym("c"));
                        }
                        w.extend(u.iter().cloned());
                        out.push(w);
                    }
                    us = us
                        .iter()
                        .flat_map(|u| ["a", "b"].map(|x| [u.clone(), vec![sym(x)]].concat()))
                        .collect();
                    len += 1;
                }
                out
            }
            Oracle::AStarBStar => {
                (0..=n).flat_map(|l| (0..=l).map(move |i| [vec![sym("a"); i], vec![sym("b"); l - i]].concat())).collect()
            }
            Oracle::Grammar(g) => g.language(n),
        };
        crate::languages::sort_length_lex(&mut out, &self.alphabet());
        out
    }

    /// The alphabet the oracle is total on.
    pub fn alphabet(&self) -> Vec<Symbol> {
        match self {
            Oracle::PowersOfTwo(a) => vec![a.clone()],
            Oracle::Dyck { open, close } => vec![open.clone(), close.clone()],
            Oracle::CenteredBlock { .. } | Oracle::Copies { .. } => vec![sym("a"), sym("b"), sym("c")],
            Oracle::AStarBStar => vec![sym("a"), sym("b")],
            Oracle::Grammar(g) => g.terminals().to_vec(),
        }
    }
}

impl fmt::Display for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Oracle::PowersOfTwo(a) => write!(f, "{{ {a}^(2^n) | n >= 0 }}"),
            Oracle::Dyck { open, close } => write!(f, "balanced words over {open} {close}"),
            Oracle::CenteredBlock { k } => write!(f, "{{ a^n c^{} b^n | n >= 0 }}", k - 1),
            Oracle::Copies { j } => write!(f, "{{ (u c)^{j} u | u in {{a,b}}* }}"),
            Oracle::AStarBStar => f.write_str("a* b*"),
            Oracle::Grammar(g) => write!(f, "L({})", g.name()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CatalogItem {
    Automaton(AutomatonSpec),
    Grammar(GnfGrammar),
}

/// A catalog entry: an automaton or grammar with its reference language.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub item: CatalogItem,
    /// The input language (automata) or generated language (grammars).
    pub oracle: Oracle,
    /// Declared class tags, e.g. `det-mon-RC k=2`.
    pub tags: String,
    /// Word length up to which agreement with the oracle is tested.
    pub test_bound: usize,
}

impl CatalogEntry {
    pub fn automaton(&self) -> Option<&AutomatonSpec> {
        match &self.item {
            CatalogItem::Automaton(a) => Some(a),
            CatalogItem::Grammar(_) => None,
        }
    }

    pub fn grammar(&self) -> Option<&GnfGrammar> {
        match &self.item {
            CatalogItem::Grammar(g) => Some(g),
            CatalogItem::Automaton(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    Unknown(String),
    #[error("bad parameter for {0}: {1}")]
    BadParam(String, String),
}

fn restart_everywhere(b: &mut AutomatonBuilder, q: &State, work: &[Symbol], k: usize) {
    for w in legal_windows(work, k) {
        b.add(q, w, Instruction::Restart);
    }
}

fn cells(tokens: &[&str]) -> Word {
    crate::symbol::symbols(tokens)
}

fn mvr(q: &State) -> Instruction {
    Instruction::MoveRight(q.clone())
}

fn sl(target: &[&str], next: &State) -> Instruction {
    Instruction::Rewrite { target: cells(target), next: next.clone() }
}

/// The automaton accepting `{ a^(2^n) }` by halving runs of `a` and `b` from right to left.
pub fn m_e() -> AutomatonSpec {
    let (q0, q1) = (State::named("q0"), State::named("q1"));
    let a = sym("a");
    let work = vec![a.clone(), sym("b")];
    let mut b = AutomatonSpec::builder("m_e", 3)
        .input(&[a])
        .work(&work)
        .initial(&q0)
        .state(&q1)
        .flags(ClassFlags {
            direction: Direction::R,
            form: RewriteForm::Sl,
            aux: AuxUse::WW,
            deterministic: true,
            mr_degree: 1,
            shrinking: false,
        });
    let rules: [(&[&str], Instruction); 12] = [
        (&["^", "a", "$"], Instruction::Accept),
        (&["^", "b", "$"], Instruction::Accept),
        (&["^", "a", "a"], mvr(&q0)),
        (&["^", "b", "b"], mvr(&q0)),
        (&["a", "a", "a"], mvr(&q0)),
        (&["b", "b", "b"], mvr(&q0)),
        (&["a", "a", "$"], sl(&["b", "$"], &q1)),
        (&["b", "b", "$"], sl(&["a", "$"], &q1)),
        (&["a", "a", "b"], sl(&["b", "b"], &q1)),
        (&["b", "b", "a"], sl(&["a", "a"], &q1)),
        (&["^", "a", "b"], Instruction::Reject),
        (&["^", "b", "a"], Instruction::Reject),
    ];
    for (w, i) in rules {
        b.add(&q0, cells(w), i);
    }
    restart_everywhere(&mut b, &q1, &work, 3);
    b.build()
}

/// [`m_e`] read as an h-automaton with `h(b) = a`.
pub fn m_e_h() -> AutomatonSpec {
    let h = HMorphism::extending(&[sym("a")], [(sym("b"), sym("a"))]);
    m_e().with_morphism("m_e_h", h)
}

/// Dyck language over `a1 ā1`: delete the first factor `a1 ā1`, restart.
pub fn dyck1() -> AutomatonSpec {
    let (q0, r) = (State::named("q0"), State::named("r"));
    let work = vec![sym("a1"), sym("ā1")];
    let mut b = AutomatonSpec::builder("dyck1", 2).input(&work).initial(&q0).state(&r).flags(ClassFlags {
        direction: Direction::R,
        form: RewriteForm::Cl,
        aux: AuxUse::None,
        deterministic: true,
        mr_degree: 1,
        shrinking: false,
    });
    let rules: [(&[&str], Instruction); 6] = [
        (&["^", "a1"], mvr(&q0)),
        (&["^", "ā1"], Instruction::Reject),
        (&["^", "$"], Instruction::Accept),
        (&["a1", "a1"], mvr(&q0)),
        (&["a1", "ā1"], sl(&[], &r)),
        (&["a1", "$"], Instruction::Reject),
    ];
    for (w, i) in rules {
        b.add(&q0, cells(w), i);
    }
    restart_everywhere(&mut b, &r, &work, 2);
    b.build()
}

/// `a^n c^(k-1) b^n` with window `k+1`: delete the `a` and `b` around the `c` block.
///
/// For `k = 1` this is [`dyck1`] over its own alphabet.
pub fn l_k(k: usize) -> AutomatonSpec {
    assert!(k >= 1, "l_k needs k >= 1");
    if k == 1 {
        let mut s = dyck1();
        s.name = "l_1".into();
        return s;
    }
    let (q0, r) = (State::named("q0"), State::named("r"));
    let (a, bb, c) = (sym("a"), sym("b"), sym("c"));
    let work = vec![a.clone(), bb.clone(), c.clone()];
    let w = k + 1;
    let mut b = AutomatonSpec::builder(&format!("l_{k}"), w).input(&work).initial(&q0).state(&r).flags(ClassFlags {
        direction: Direction::R,
        form: RewriteForm::Cl,
        aux: AuxUse::None,
        deterministic: true,
        mr_degree: 1,
        shrinking: false,
    });
    let block = vec![c.clone(); k - 1];
    let mut accept = vec![Symbol::left()];
    accept.extend(block.iter().cloned());
    accept.push(Symbol::right());
    b.add(&q0, accept, Instruction::Accept);
    let mut site = vec![a.clone()];
    site.extend(block.iter().cloned());
    site.push(bb.clone());
    b.add(&q0, site, Instruction::Rewrite { target: block.clone(), next: r.clone() });
    // windows left of the rewrite site in ¢ a^n c^(k-1) b^n $
    for n in 1..=w + 1 {
        let mut tape = vec![Symbol::left()];
        tape.extend(std::iter::repeat(a.clone()).take(n));
        tape.extend(block.iter().cloned());
        tape.extend(std::iter::repeat(bb.clone()).take(n));
        tape.push(Symbol::right());
        for p in 0..n {
            let end = (p + w).min(tape.len());
            b.add(&q0, tape[p..end].to_vec(), mvr(&q0));
        }
    }
    restart_everywhere(&mut b, &r, &work, w);
    b.build()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
enum Lm {
    Start,
    /// Copy 0 is empty; `n` separators seen.
    Tail(usize),
    /// Scanning; the window's first cell is accounted for.
    Scan { x: u8, m: usize, cs: usize, bad: bool, res: usize, pending: bool },
    /// After deleting a copy's first symbol the window sits one cell to the left.
    Skip { x: u8, m: usize, cs: usize, bad: bool, res: usize },
    Restart,
}

impl Lm {
    fn name(&self) -> State {
        let n = match *self {
            Lm::Start => "q0".to_string(),
            Lm::Tail(n) => format!("t{n}"),
            Lm::Scan { x, m, cs, bad, res, pending } => format!(
                "s{}m{m}c{cs}r{res}{}{}",
                if x == 0 { 'a' } else { 'b' },
                if bad { "x" } else { "" },
                if pending { "p" } else { "" }
            ),
            Lm::Skip { x, m, cs, bad, res } => {
                format!("k{}m{m}c{cs}r{res}{}", if x == 0 { 'a' } else { 'b' }, if bad { "x" } else { "" })
            }
            Lm::Restart => "r".to_string(),
        };
        State::named(&n)
    }
}

enum LmAct {
    Mvr(Lm),
    Sl(Vec<Symbol>, Lm),
    Restart,
    Accept,
    Reject,
}

/// Cell codes: 0 a, 1 b, 2 c, 3 ¢, 4 $.
fn lm_act(j: usize, st: Lm, w: &[u8]) -> Option<LmAct> {
    let (w0, w1) = match w {
        [x, y] => (*x, *y),
        _ => return None,
    };
    match st {
        Lm::Start => {
            if w0 != 3 {
                return None;
            }
            Some(match w1 {
                4 => LmAct::Reject,
                2 => LmAct::Mvr(Lm::Tail(1)),
                x => LmAct::Sl(
                    vec![Symbol::left()],
                    Lm::Scan { x, m: 1, cs: 0, bad: false, res: 0, pending: false },
                ),
            })
        }
        Lm::Tail(n) => Some(match w1 {
            2 if n < j => LmAct::Mvr(Lm::Tail(n + 1)),
            4 if n == j => LmAct::Accept,
            _ => LmAct::Reject,
        }),
        Lm::Skip { x, m, cs, bad, res } => {
            Some(LmAct::Mvr(Lm::Scan { x, m, cs, bad, res, pending: false }))
        }
        Lm::Scan { x, m, cs, mut bad, res, pending } => {
            if pending {
                if w0 != 2 {
                    return None;
                }
                if !bad && w1 == x {
                    return Some(LmAct::Sl(
                        vec![sym("c")],
                        Lm::Skip { x, m: m + 1, cs, bad, res },
                    ));
                }
                bad = true;
            }
            let next = |cs, res, pending| Lm::Scan { x, m, cs, bad, res: res % (j + 1), pending };
            Some(match w1 {
                4 => {
                    if cs == j && bad && res % (j + 1) == j % (j + 1) && w0 != 3 {
                        LmAct::Sl(vec![Symbol::right()], Lm::Restart)
                    } else {
                        LmAct::Restart
                    }
                }
                2 if cs + 1 > j => LmAct::Restart,
                2 => LmAct::Mvr(next(cs + 1, res + 1, true)),
                _ => LmAct::Mvr(next(cs, res + 1, false)),
            })
        }
        Lm::Restart => Some(LmAct::Restart),
    }
}

/// `{ (u c)^j u }` with two-cell window and up to `j+1` deletions per cycle.
///
/// A cycle deletes the first symbol `x` of the first copy and then the first
/// symbol of every later copy that equals `x`. After a mismatch no further copy
/// is touched; at `$` the last symbol is deleted if that is needed to make the
/// remaining length differ from `j` modulo `j+1`, so the shortened word is
/// certainly outside the language.
pub fn lm_j(j: usize) -> AutomatonSpec {
    assert!(j >= 1, "lm_j needs j >= 1");
    let work = vec![sym("a"), sym("b"), sym("c")];
    let code = |s: &Symbol| -> u8 {
        if s.is_left() {
            3
        } else if s.is_right() {
            4
        } else {
            work.iter().position(|x| x == s).expect("lm symbol") as u8
        }
    };
    let windows = legal_windows(&work, 2);
    let mut b = AutomatonSpec::builder(&format!("lm_{j}"), 2).input(&work).initial(&Lm::Start.name()).flags(
        ClassFlags {
            direction: Direction::RR,
            form: RewriteForm::Cl,
            aux: AuxUse::None,
            deterministic: true,
            mr_degree: j + 1,
            shrinking: false,
        },
    );
    let mut seen: BTreeMap<Lm, ()> = BTreeMap::new();
    let mut queue = VecDeque::from([Lm::Start]);
    seen.insert(Lm::Start, ());
    while let Some(st) = queue.pop_front() {
        let q = st.name();
        for w in &windows {
            if st == Lm::Restart {
                b.add(&q, w.clone(), Instruction::Restart);
                continue;
            }
            let codes: Vec<u8> = w.iter().map(code).collect();
            let Some(act) = lm_act(j, st, &codes) else { continue };
            let (instr, next) = match act {
                LmAct::Mvr(n) => (Instruction::MoveRight(n.name()), Some(n)),
                LmAct::Sl(target, n) => (Instruction::Rewrite { target, next: n.name() }, Some(n)),
                LmAct::Restart => (Instruction::Restart, None),
                LmAct::Accept => (Instruction::Accept, None),
                LmAct::Reject => (Instruction::Reject, None),
            };
            b.add(&q, w.clone(), instr);
            if let Some(n) = next {
                if seen.insert(n, ()).is_none() {
                    queue.push_back(n);
                }
            }
        }
    }
    b.build()
}

/// `a* b*` with a one-cell window: delete a leading `a` per cycle.
pub fn reg_window1() -> AutomatonSpec {
    let (q0, s1, s2, r) = (State::named("q0"), State::named("s1"), State::named("s2"), State::named("r"));
    let work = vec![sym("a"), sym("b")];
    let mut b = AutomatonSpec::builder("reg_window1", 1).input(&work).initial(&q0).flags(ClassFlags {
        direction: Direction::R,
        form: RewriteForm::Cl,
        aux: AuxUse::None,
        deterministic: true,
        mr_degree: 1,
        shrinking: false,
    });
    b.add(&q0, cells(&["^"]), mvr(&s1));
    b.add(&s1, cells(&["a"]), sl(&[], &r));
    b.add(&s1, cells(&["b"]), mvr(&s2));
    b.add(&s1, cells(&["$"]), Instruction::Accept);
    b.add(&s2, cells(&["b"]), mvr(&s2));
    b.add(&s2, cells(&["a"]), Instruction::Reject);
    b.add(&s2, cells(&["$"]), Instruction::Accept);
    restart_everywhere(&mut b, &r, &work, 1);
    b.build()
}

/// `S → a S B | a B`, `B → b`.
pub fn anbn_gnf() -> GnfGrammar {
    GnfGrammar::from_literals("anbn_gnf", "S", &[("S", "a", &["S", "B"]), ("S", "a", &["B"]), ("B", "b", &[])])
}

/// Nonempty Dyck words by first-return decomposition `a1 x ā1 y`.
pub fn dyck_gnf() -> GnfGrammar {
    GnfGrammar::from_literals(
        "dyck_gnf",
        "S",
        &[
            ("S", "a1", &["B"]),
            ("S", "a1", &["B", "S"]),
            ("S", "a1", &["S", "B"]),
            ("S", "a1", &["S", "B", "S"]),
            ("B", "ā1", &[]),
        ],
    )
}

fn dyck_oracle() -> Oracle {
    Oracle::Dyck { open: sym("a1"), close: sym("ā1") }
}

fn entry(name: &str, description: &str, item: CatalogItem, oracle: Oracle, tags: &str, bound: usize) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        description: description.to_string(),
        item,
        oracle,
        tags: tags.to_string(),
        test_bound: bound,
    }
}

/// Looks up an entry. `param` is `k` for `l_k` and `j` for `lm_j`.
pub fn catalog_get(name: &str, param: Option<usize>) -> Result<CatalogEntry, CatalogError> {
    let need = |lo: usize| -> Result<usize, CatalogError> {
        match param {
            Some(p) if p >= lo => Ok(p),
            Some(p) => Err(CatalogError::BadParam(name.into(), format!("{p} < {lo}"))),
            None => Err(CatalogError::BadParam(name.into(), "missing parameter".into())),
        }
    };
    let none = || -> Result<(), CatalogError> {
        match param {
            None => Ok(()),
            Some(_) => Err(CatalogError::BadParam(name.into(), "takes no parameter".into())),
        }
    };
    Ok(match name {
        "m_e" => {
            none()?;
            entry(
                "m_e",
                "halves runs of a and b from the right; input language a^(2^n)",
                CatalogItem::Automaton(m_e()),
                Oracle::PowersOfTwo(sym("a")),
                "det-RWW k=3 non-monotone",
                16,
            )
        }
        "m_e_h" => {
            none()?;
            entry(
                "m_e_h",
                "m_e with the morphism h(b) = a",
                CatalogItem::Automaton(m_e_h()),
                Oracle::PowersOfTwo(sym("a")),
                "det-h-RWW k=3 non-monotone",
                16,
            )
        }
        "dyck1" => {
            none()?;
            entry(
                "dyck1",
                "Dyck language D1; deletes the first factor a1 ā1",
                CatalogItem::Automaton(dyck1()),
                dyck_oracle(),
                "det-mon-RC k=2",
                14,
            )
        }
        "l_k" => {
            let k = need(1)?;
            if k == 1 {
                let mut e = catalog_get("dyck1", None)?;
                e.name = "l_1".into();
                if let CatalogItem::Automaton(a) = &mut e.item {
                    a.name = "l_1".into();
                }
                return Ok(e);
            }
            entry(
                &format!("l_{k}"),
                &format!("a^n c^{} b^n; deletes the a and b around the c block", k - 1),
                CatalogItem::Automaton(l_k(k)),
                Oracle::CenteredBlock { k },
                &format!("det-mon-RC k={}", k + 1),
                20,
            )
        }
        "lm_j" => {
            let j = need(1)?;
            entry(
                &format!("lm_{j}"),
                &format!("(u c)^{j} u over u in {{a,b}}*; deletes the first symbol of every copy"),
                CatalogItem::Automaton(lm_j(j)),
                Oracle::Copies { j },
                &format!("det-mrRRC({}) k=2", j + 1),
                15,
            )
        }
        "reg_window1" => {
            none()?;
            entry(
                "reg_window1",
                "a* b* with a one-cell window; deletes a leading a",
                CatalogItem::Automaton(reg_window1()),
                Oracle::AStarBStar,
                "det-mon-RC k=1",
                14,
            )
        }
        "anbn_gnf" => {
            none()?;
            let g = anbn_gnf();
            entry("anbn_gnf", "GNF grammar for a^n b^n, n >= 1", CatalogItem::Grammar(g.clone()), Oracle::Grammar(g), "gnf", 12)
        }
        "dyck_gnf" => {
            none()?;
            let g = dyck_gnf();
            entry(
                "dyck_gnf",
                "GNF grammar for nonempty Dyck words over a1 ā1",
                CatalogItem::Grammar(g),
                Oracle::Dyck { open: sym("a1"), close: sym("ā1") },
                "gnf",
                12,
            )
        }
        other => return Err(CatalogError::Unknown(other.to_string())),
    })
}

/// Resolves short names such as `l3`, `lm2`, `l_k:3` or `m_e`.
pub fn catalog_lookup(name: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some((base, p)) = name.split_once(':') {
        let p: usize = p.parse().map_err(|_| CatalogError::BadParam(base.into(), p.into()))?;
        return catalog_get(base, Some(p));
    }
    for (prefix, base) in [("lm_", "lm_j"), ("lm", "lm_j"), ("l_", "l_k"), ("l", "l_k")] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if let Ok(p) = rest.parse::<usize>() {
                return catalog_get(base, Some(p));
            }
        }
    }
    catalog_get(name, None)
}

/// Every entry with its default parameters, in a fixed order.
pub fn catalog_list() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for n in ["m_e", "m_e_h", "dyck1"] {
        out.push(catalog_get(n, None).expect("catalog"));
    }
    for k in 2..=4 {
        out.push(catalog_get("l_k", Some(k)).expect("catalog"));
    }
    for j in 1..=3 {
        out.push(catalog_get("lm_j", Some(j)).expect("catalog"));
    }
    for n in ["reg_window1", "anbn_gnf", "dyck_gnf"] {
        out.push(catalog_get(n, None).expect("catalog"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::symbols;
    use crate::validate::{classify_automaton, validate_automaton};

    #[test]
    fn every_entry_is_legal_and_tagged_as_declared() {
        for e in catalog_list() {
            if let Some(a) = e.automaton() {
                let r = validate_automaton(a);
                assert!(r.is_legal(), "{}: {r}", e.name);
                let class = classify_automaton(a).to_string();
                let declared = e.tags.replace("mon-", "").replace(" non-monotone", "");
                assert!(declared.starts_with(class.split(" mr=").next().unwrap()), "{}: {class} vs {}", e.name, e.tags);
            }
        }
    }

    #[test]
    fn m_e_contains_halving_rule() {
        let a = m_e();
        let got = a.instructions(&State::named("q0"), &symbols(&["a", "a", "b"]));
        assert_eq!(got, vec![Instruction::Rewrite { target: symbols(&["b", "b"]), next: State::named("q1") }]);
    }

    #[test]
    fn oracles() {
        let w = |s: &[&str]| symbols(s);
        let l2 = Oracle::CenteredBlock { k: 2 };
        assert!(l2.contains(&w(&["a", "c", "b"])));
        assert!(l2.contains(&w(&["c"])));
        assert!(!l2.contains(&w(&["a", "c", "b", "b"])));
        let m2 = Oracle::Copies { j: 2 };
        assert!(m2.contains(&w(&["a", "c", "a", "c", "a"])));
        assert!(!m2.contains(&w(&["a", "c", "a", "c"])));
        assert!(m2.contains(&w(&["c", "c"])));
        assert!(Oracle::PowersOfTwo(sym("a")).contains(&w(&["a", "a", "a", "a"])));
        assert!(!Oracle::PowersOfTwo(sym("a")).contains(&[]));
    }

    #[test]
    fn members_agree_with_contains() {
        let oracles = [
            Oracle::PowersOfTwo(sym("a")),
            dyck_oracle(),
            Oracle::CenteredBlock { k: 3 },
            Oracle::Copies { j: 1 },
            Oracle::Copies { j: 2 },
            Oracle::AStarBStar,
            Oracle::Grammar(anbn_gnf()),
        ];
        for o in oracles {
            let alpha = o.alphabet();
            let mut all: Vec<Word> = vec![Vec::new()];
            let mut level: Vec<Word> = vec![Vec::new()];
            for _ in 0..7 {
                level = level.iter().flat_map(|w| alpha.iter().map(move |s| [w.clone(), vec![s.clone()]].concat())).collect();
                all.extend(level.iter().cloned());
            }
            let mut want: Vec<Word> = all.into_iter().filter(|w| o.contains(w)).collect();
            crate::languages::sort_length_lex(&mut want, &alpha);
            assert_eq!(o.members(7), want, "{o}");
        }
    }

    #[test]
    fn lookup_short_names() {
        assert_eq!(catalog_lookup("l3").unwrap().name, "l_3");
        assert_eq!(catalog_lookup("lm1").unwrap().name, "lm_1");
        assert_eq!(catalog_lookup("lm_j:2").unwrap().name, "lm_2");
        assert!(catalog_lookup("nope").is_err());
        assert!(catalog_get("l_k", None).is_err());
    }

    #[test]
    fn listing_is_stable() {
        let a: Vec<String> = catalog_list().into_iter().map(|e| e.name).collect();
        let b: Vec<String> = catalog_list().into_iter().map(|e| e.name).collect();
        assert_eq!(a, b);
    }
}
