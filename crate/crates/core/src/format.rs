//! Line-oriented text formats for automata and grammars.
//!
//! Automaton file:
//!
//! ```text
//! name m_e
//! class det=yes direction=R form=SL aux=WW mr=1 shrinking=no
//! window 3
//! input-alphabet a
//! work-alphabet a b
//! morphism b -> a
//! weight a 2
//! states q0 q1
//! initial q0
//! trans q0 ^ a a -> mvr q0
//! trans q0 a a b -> sl q1 b b
//! ```
//!
//! `^` and `$` are the sentinels, `-` is the empty rewrite target and `#`
//! starts a comment. `morphism` and `weight` lines are optional and may repeat.

use std::fmt::Write as _;

use crate::error::FormatError;
use crate::grammar::{GnfGrammar, GnfRule};
use crate::model::{
    AutomatonSpec, AuxUse, ClassFlags, Direction, HMorphism, Instruction, RewriteForm, State, WeightFunction,
};
use crate::symbol::{Symbol, Word};

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// Non-empty lines with comments removed, as (line number, tokens).
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().take_while(|t| !t.starts_with('#')).collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn symbol(line: usize, t: &str) -> Result<Symbol, FormatError> {
    Symbol::new(t).or_else(|e| err(line, e.to_string()))
}

fn cell(line: usize, t: &str) -> Result<Symbol, FormatError> {
    Symbol::parse_cell(t).or_else(|e| err(line, e.to_string()))
}

fn state(line: usize, t: &str) -> Result<State, FormatError> {
    State::new(t).or_else(|e| err(line, e.to_string()))
}

fn yes_no(line: usize, v: &str) -> Result<bool, FormatError> {
    match v {
        "yes" => Ok(true),
        "no" => Ok(false),
        _ => err(line, format!("expected yes or no, got {v:?}")),
    }
}

fn render_flags(f: &ClassFlags) -> String {
    let yn = |b: bool| if b { "yes" } else { "no" };
    let direction = match f.direction {
        Direction::R => "R",
        Direction::RR => "RR",
        Direction::RL => "RL",
    };
    let form = match f.form {
        RewriteForm::Cl => "CL",
        RewriteForm::Dl => "DL",
        RewriteForm::Sl => "SL",
    };
    let aux = match f.aux {
        AuxUse::None => "none",
        AuxUse::W => "W",
        AuxUse::WW => "WW",
    };
    format!(
        "det={} direction={direction} form={form} aux={aux} mr={} shrinking={}",
        yn(f.deterministic),
        f.mr_degree,
        yn(f.shrinking)
    )
}

fn parse_flags(line: usize, toks: &[&str]) -> Result<ClassFlags, FormatError> {
    let mut f = ClassFlags::default();
    for t in toks {
        let Some((k, v)) = t.split_once('=') else {
            return err(line, format!("expected key=value, got {t:?}"));
        };
        match k {
            "det" => f.deterministic = yes_no(line, v)?,
            "shrinking" => f.shrinking = yes_no(line, v)?,
            "direction" => {
                f.direction = match v {
                    "R" => Direction::R,
                    "RR" => Direction::RR,
                    "RL" => Direction::RL,
                    _ => return err(line, format!("unknown direction {v:?}")),
                }
            }
            "form" => {
                f.form = match v {
                    "CL" => RewriteForm::Cl,
                    "DL" => RewriteForm::Dl,
                    "SL" => RewriteForm::Sl,
                    _ => return err(line, format!("unknown rewrite form {v:?}")),
                }
            }
            "aux" => {
                f.aux = match v {
                    "none" => AuxUse::None,
                    "W" => AuxUse::W,
                    "WW" => AuxUse::WW,
                    _ => return err(line, format!("unknown aux use {v:?}")),
                }
            }
            "mr" => f.mr_degree = v.parse().or_else(|_| err(line, format!("bad mr degree {v:?}")))?,
            _ => return err(line, format!("unknown class key {k:?}")),
        }
    }
    Ok(f)
}

fn cells_text(w: &[Symbol]) -> String {
    if w.is_empty() {
        return "-".to_string();
    }
    w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
}

/// Canonical text of an automaton.
pub fn render_automaton(spec: &AutomatonSpec) -> String {
    let mut s = String::new();
    let join = |w: &[Symbol]| w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ");
    let _ = writeln!(s, "name {}", spec.name());
    let _ = writeln!(s, "class {}", render_flags(&spec.flags()));
    let _ = writeln!(s, "window {}", spec.window());
    let _ = writeln!(s, "input-alphabet {}", join(spec.input_alphabet()));
    let _ = writeln!(s, "work-alphabet {}", join(spec.work_alphabet()));
    if let Some(h) = spec.morphism() {
        for (a, b) in h.iter() {
            let _ = writeln!(s, "morphism {a} -> {b}");
        }
    }
    if let Some(w) = spec.weights() {
        for (a, x) in w.iter() {
            let _ = writeln!(s, "weight {a} {x}");
        }
    }
    let states: Vec<&str> = spec.states().iter().map(State::as_str).collect();
    let _ = writeln!(s, "states {}", states.join(" "));
    let _ = writeln!(s, "initial {}", spec.initial());
    for (q, u, ins) in spec.rules() {
        let ins = match ins {
            Instruction::Rewrite { target, next } => format!("sl {next} {}", cells_text(target)),
            other => other.to_string(),
        };
        let _ = writeln!(s, "trans {q} {} -> {ins}", cells_text(u));
    }
    s
}

fn parse_instruction(line: usize, toks: &[&str]) -> Result<Instruction, FormatError> {
    let next = |i: usize| match toks.get(i) {
        Some(t) => state(line, t),
        None => err(line, "missing next state"),
    };
    let ins = match toks.first().copied() {
        Some("mvr") => Instruction::MoveRight(next(1)?),
        Some("mvl") => Instruction::MoveLeft(next(1)?),
        Some("sl") => {
            let q = next(1)?;
            let target = match &toks[2..] {
                [] => return err(line, "missing rewrite target (use - for the empty word)"),
                ["-"] => Vec::new(),
                ts => ts.iter().map(|t| cell(line, t)).collect::<Result<_, _>>()?,
            };
            return Ok(Instruction::Rewrite { target, next: q });
        }
        Some("restart") => Instruction::Restart,
        Some("accept") => Instruction::Accept,
        Some("reject") => Instruction::Reject,
        Some(t) => return err(line, format!("unknown instruction {t:?}")),
        None => return err(line, "missing instruction"),
    };
    let arity = if matches!(ins, Instruction::MoveRight(_) | Instruction::MoveLeft(_)) { 2 } else { 1 };
    if toks.len() != arity {
        return err(line, "trailing tokens after instruction");
    }
    Ok(ins)
}

/// Parses an automaton file. Structural problems of the table are left to validation.
pub fn parse_automaton(text: &str) -> Result<AutomatonSpec, FormatError> {
    let mut name = None;
    let mut flags = None;
    let mut window = None;
    let mut input: Option<Vec<Symbol>> = None;
    let mut work: Option<Vec<Symbol>> = None;
    let mut morphism: Option<HMorphism> = None;
    let mut weights: Option<WeightFunction> = None;
    let mut states: Option<Vec<State>> = None;
    let mut initial = None;
    let mut trans: Vec<(usize, State, Word, Instruction)> = Vec::new();
    let mut last = 0;
    for (ln, toks) in lines(text) {
        last = ln;
        let rest = &toks[1..];
        let once = |seen: bool| if seen { err(ln, format!("duplicate {} line", toks[0])) } else { Ok(()) };
        match toks[0] {
            "name" => {
                once(name.is_some())?;
                match rest {
                    [n] => name = Some(n.to_string()),
                    _ => return err(ln, "name takes one token"),
                }
            }
            "class" => {
                once(flags.is_some())?;
                flags = Some(parse_flags(ln, rest)?);
            }
            "window" => {
                once(window.is_some())?;
                match rest {
                    [k] => window = Some(k.parse::<usize>().or_else(|_| err(ln, format!("bad window {k:?}")))?),
                    _ => return err(ln, "window takes one number"),
                }
            }
            "input-alphabet" => {
                once(input.is_some())?;
                input = Some(rest.iter().map(|t| symbol(ln, t)).collect::<Result<_, _>>()?);
            }
            "work-alphabet" => {
                once(work.is_some())?;
                work = Some(rest.iter().map(|t| symbol(ln, t)).collect::<Result<_, _>>()?);
            }
            "morphism" => match rest {
                [a, "->", b] => {
                    morphism.get_or_insert_with(HMorphism::new).insert(symbol(ln, a)?, symbol(ln, b)?);
                }
                _ => return err(ln, "expected: morphism <symbol> -> <input symbol>"),
            },
            "weight" => match rest {
                [a, x] => {
                    let x = x.parse::<u32>().or_else(|_| err(ln, format!("bad weight {x:?}")))?;
                    weights.get_or_insert_with(WeightFunction::new).set(symbol(ln, a)?, x);
                }
                _ => return err(ln, "expected: weight <symbol> <positive integer>"),
            },
            "states" => {
                once(states.is_some())?;
                states = Some(rest.iter().map(|t| state(ln, t)).collect::<Result<_, _>>()?);
            }
            "initial" => {
                once(initial.is_some())?;
                match rest {
                    [q] => initial = Some(state(ln, q)?),
                    _ => return err(ln, "initial takes one state"),
                }
            }
            "trans" => {
                let Some(arrow) = rest.iter().position(|t| *t == "->") else {
                    return err(ln, "trans line without ->");
                };
                if arrow < 2 {
                    return err(ln, "expected: trans <state> <window cells> -> <instruction>");
                }
                let q = state(ln, rest[0])?;
                let u: Word = rest[1..arrow].iter().map(|t| cell(ln, t)).collect::<Result<_, _>>()?;
                let ins = parse_instruction(ln, &rest[arrow + 1..])?;
                trans.push((ln, q, u, ins));
            }
            other => return err(ln, format!("unknown section {other:?}")),
        }
    }
    let need = |what: &str| FormatError { line: last + 1, message: format!("missing {what} line") };
    let window = window.ok_or_else(|| need("window"))?;
    let input = input.ok_or_else(|| need("input-alphabet"))?;
    let work = work.ok_or_else(|| need("work-alphabet"))?;
    let states = states.ok_or_else(|| need("states"))?;
    let initial = initial.ok_or_else(|| need("initial"))?;
    if !states.contains(&initial) {
        return err(last, format!("initial state {initial} is not declared"));
    }
    for (ln, q, _, ins) in &trans {
        for s in std::iter::once(q).chain(ins.next_state()) {
            if !states.contains(s) {
                return err(*ln, format!("undeclared state {s}"));
            }
        }
    }
    let mut b = AutomatonSpec::builder(&name.unwrap_or_else(|| "unnamed".into()), window)
        .input_exact(input)
        .work_exact(work)
        .states_exact(states)
        .initial(&initial)
        .flags(flags.unwrap_or_default());
    if let Some(h) = morphism {
        b = b.morphism(h);
    }
    if let Some(w) = weights {
        b = b.weights(w);
    }
    for (_, q, u, ins) in trans {
        b.add(&q, u, ins);
    }
    Ok(b.build())
}

/// Canonical text of a grammar.
pub fn render_grammar(g: &GnfGrammar) -> String {
    let join = |w: &[Symbol]| w.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ");
    let mut s = String::new();
    let _ = writeln!(s, "name {}", g.name());
    let _ = writeln!(s, "nonterminals {}", join(g.nonterminals()));
    let _ = writeln!(s, "terminals {}", join(g.terminals()));
    let _ = writeln!(s, "start {}", g.start());
    for (i, r) in g.rules().iter().enumerate() {
        let _ = writeln!(s, "rule {} {r}", i + 1);
    }
    s
}

/// Parses a grammar file; rule numbers must run 1, 2, … in order.
pub fn parse_grammar(text: &str) -> Result<GnfGrammar, FormatError> {
    let mut name = None;
    let mut nts = None;
    let mut ts = None;
    let mut start = None;
    let mut rules = Vec::new();
    let mut last = 0;
    for (ln, toks) in lines(text) {
        last = ln;
        let rest = &toks[1..];
        match toks[0] {
            "name" => match rest {
                [n] => name = Some(n.to_string()),
                _ => return err(ln, "name takes one token"),
            },
            "nonterminals" => nts = Some(rest.iter().map(|t| symbol(ln, t)).collect::<Result<Vec<_>, _>>()?),
            "terminals" => ts = Some(rest.iter().map(|t| symbol(ln, t)).collect::<Result<Vec<_>, _>>()?),
            "start" => match rest {
                [s] => start = Some(symbol(ln, s)?),
                _ => return err(ln, "start takes one symbol"),
            },
            "rule" => {
                let [num, lhs, "->", head, tail @ ..] = rest else {
                    return err(ln, "expected: rule <i> <A> -> <terminal> <nonterminals…>");
                };
                let want = rules.len() + 1;
                if num.parse::<usize>().ok() != Some(want) {
                    return err(ln, format!("expected rule number {want}, got {num:?}"));
                }
                rules.push((
                    ln,
                    GnfRule {
                        lhs: symbol(ln, lhs)?,
                        head: symbol(ln, head)?,
                        tail: tail.iter().map(|t| symbol(ln, t)).collect::<Result<_, _>>()?,
                    },
                ));
            }
            other => return err(ln, format!("unknown section {other:?}")),
        }
    }
    let need = |what: &str| FormatError { line: last + 1, message: format!("missing {what} line") };
    let nts = nts.ok_or_else(|| need("nonterminals"))?;
    let ts = ts.ok_or_else(|| need("terminals"))?;
    let start = start.ok_or_else(|| need("start"))?;
    // report shape errors at the offending rule
    for (ln, r) in &rules {
        if !ts.contains(&r.head) {
            return err(*ln, format!("{} is not a terminal (rules must start with a terminal)", r.head));
        }
        if let Some(x) = r.tail.iter().find(|x| !nts.contains(x)) {
            return err(*ln, format!("{x} is not a nonterminal"));
        }
    }
    let rules = rules.into_iter().map(|(_, r)| r).collect();
    GnfGrammar::new(&name.unwrap_or_else(|| "unnamed".into()), nts, ts, start, rules)
        .or_else(|e| err(last, e.to_string()))
}

/// Whether a text looks like a grammar file rather than an automaton file.
pub fn is_grammar_text(text: &str) -> bool {
    lines(text).any(|(_, t)| matches!(t[0], "rule" | "nonterminals" | "terminals"))
}
