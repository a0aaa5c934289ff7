//! One pass/fail line per acceptance criterion. Oracles are written here,
//! independently of the library's catalog oracles.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use redukto_core::catalog::{anbn_gnf, catalog_list, dyck1, dyck_gnf, l_k, lm_j, m_e, m_e_h, CatalogItem};
use redukto_core::classifiers::*;
use redukto_core::constructions::{build_hrrwwc, dga, to_shrinking, SynthesisOptions};
use redukto_core::format::{parse_automaton, parse_grammar, render_automaton, render_grammar};
use redukto_core::grammar::GnfGrammar;
use redukto_core::languages::{compare_languages, enumerate_language, Comparison, LanguageKind, LanguageQuery, LanguageSource};
use redukto_core::validate::{classify_rewrite, RewriteClass};
use redukto_core::*;

type Outcome = Result<String, String>;

fn sym(t: &str) -> Symbol {
    Symbol::new(t).unwrap()
}

fn rep(t: &str, n: usize) -> Word {
    vec![sym(t); n]
}

fn words(alphabet: &[Symbol], n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut level = vec![Vec::new()];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|w: &Word| alphabet.iter().map(move |s| [w.clone(), vec![s.clone()]].concat()))
            .collect();
        out.extend(level.iter().cloned());
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn input_set(spec: &AutomatonSpec, kind: LanguageKind, n: usize) -> Result<BTreeSet<Word>, String> {
    Ok(enumerate_language(spec, &LanguageQuery::new(kind, n)).map_err(e)?.into_iter().collect())
}

fn criterion_1() -> Outcome {
    let got = input_set(&m_e(), LanguageKind::Input, 64)?;
    let want: BTreeSet<Word> = (0..=6).map(|i| rep("a", 1 << i)).collect();
    ensure(got == want, || format!("input language up to 64 is {:?}", got.iter().map(Vec::len).collect::<Vec<_>>()))?;
    let l = Limits::default();
    for n in [3, 5, 6, 7, 63] {
        let d = decide_input_membership(&m_e(), &rep("a", n), &l).map_err(e)?;
        ensure(d.verdict == Verdict::NonMember, || format!("a^{n} not rejected"))?;
    }
    Ok("L(m_e) up to 64 is a^1,2,4,...,64; a^3,5,6,7,63 rejected".into())
}

fn criterion_2() -> Outcome {
    let l = Limits::default();
    let mut runs = 0;
    for entry in catalog_list() {
        let Some(spec) = entry.automaton() else { continue };
        let single = spec.flags().mr_degree == 1;
        for mode in [
            PreservationMode::CompleteCorrectness,
            PreservationMode::CompleteError,
            PreservationMode::CycleCorrectness,
            PreservationMode::CycleError,
        ] {
            let complete = matches!(mode, PreservationMode::CompleteCorrectness | PreservationMode::CompleteError);
            let r = check_preservation(spec, 8, mode, &l).map_err(e)?;
            runs += 1;
            if complete && !single {
                // several rewrites per cycle: intermediate tapes may leave the language
                continue;
            }
            ensure(r.holds(), || format!("{} {mode}: {r}", entry.name))?;
        }
    }
    let lm = check_preservation(&lm_j(1), 8, PreservationMode::CompleteCorrectness, &l).map_err(e)?;
    ensure(lm.verdict == CheckVerdict::Violated, || "lm_1 complete-correctness unexpectedly holds".into())?;
    Ok(format!(
        "{runs} checks at n <= 8: complete forms hold on every single-rewrite automaton, cycle forms on all; \
         lm_1 (several rewrites per cycle) violates complete-correctness as expected"
    ))
}

fn criterion_3() -> Outcome {
    let l = Limits::default();
    for spec in [dyck1(), l_k(2), l_k(3), l_k(4)] {
        let r = check_monotone(&spec, 12, &l).map_err(e)?;
        ensure(r.holds(), || format!("{}: {r}", spec.name()))?;
    }
    let r = check_monotone(&m_e(), 8, &l).map_err(e)?;
    let c = r.counterexample.ok_or("m_e monotone: no counterexample")?;
    ensure(c.word.len() <= 8, || format!("witness too long: {}", c.word.len()))?;
    ensure(replay_trace(&m_e(), &c.trace).map_err(e)?, || "witness trace does not replay".into())?;
    let d = c.trace.rewrite_distances();
    ensure(d.windows(2).any(|x| x[1] > x[0]), || format!("witness distances {d:?} are monotone"))?;
    Ok(format!("dyck1, l_2..l_4 monotone <= 12; m_e witness of length {} replays", c.word.len()))
}

fn is_anbn(w: &[Symbol]) -> bool {
    let n = w.len() / 2;
    !w.is_empty() && w.len() % 2 == 0 && w[..n].iter().all(|s| s.as_str() == "a") && w[n..].iter().all(|s| s.as_str() == "b")
}

fn is_dyck(w: &[Symbol]) -> bool {
    let mut depth = 0i64;
    for s in w {
        depth += if s.as_str() == "a1" { 1 } else { -1 };
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn pipeline(g: &GnfGrammar, oracle: fn(&[Symbol]) -> bool) -> Result<(usize, AutomatonSpec), String> {
    let opts = SynthesisOptions { window: 2, max_window: 6, ..SynthesisOptions::default() };
    let (spec, report) = build_hrrwwc(g, &opts).map_err(e)?;
    ensure(report.window <= 6, || format!("window {}", report.window))?;
    ensure(check_determinism(&spec).holds(), || "not deterministic".into())?;
    let all_cl = spec.rules().all(|(_, u, i)| match i {
        Instruction::Rewrite { target, .. } => classify_rewrite(u, target) == RewriteClass::Cl,
        _ => true,
    });
    ensure(all_cl, || "a rewrite is not CL".into())?;
    let l = Limits::default();
    let m = check_monotone(&spec, 10, &l).map_err(e)?;
    ensure(m.holds(), || format!("{m}"))?;
    let got = input_set(&spec, LanguageKind::HProper, 12)?;
    let want: BTreeSet<Word> = words(g.terminals(), 12).into_iter().filter(|w| !w.is_empty() && oracle(w)).collect();
    ensure(got == want, || format!("h-proper language differs: {} vs {} words", got.len(), want.len()))?;
    ensure(input_set(&spec, LanguageKind::Input, 12)?.is_empty(), || "input language not empty".into())?;
    Ok((report.window, spec))
}

fn criterion_4() -> Outcome {
    let (ka, _) = pipeline(&anbn_gnf(), is_anbn)?;
    let (kd, _) = pipeline(&dyck_gnf(), is_dyck)?;
    Ok(format!("anbn_gnf at window {ka}, dyck_gnf at window {kd}: det, CL, monotone <= 10, h-proper = oracle <= 12, input empty"))
}

fn shrinking_case(src: &AutomatonSpec, corr_len: usize) -> Result<(), String> {
    let l = Limits::default();
    let (ms, w) = to_shrinking(src).map_err(e)?;
    for a in src.input_alphabet() {
        ensure(w.get(a) == Some(dga(src, a) as u32 + 1), || format!("weight of {a}"))?;
    }
    let c = compare_languages(
        &LanguageSource::Automaton(&ms, LanguageKind::Input),
        &LanguageSource::Automaton(src, LanguageKind::HProper),
        10,
        &l,
    )
    .map_err(e)?;
    ensure(c == Comparison::Equal { bound: 10 }, || format!("{}: {c}", src.name()))?;
    let r = check_shrinking(&ms, &w, 8, &l).map_err(e)?;
    ensure(r.holds(), || format!("{}: {r}", src.name()))?;
    let hat = |x: &[Symbol]| -> Word {
        x.iter().map(|s| if src.is_input_symbol(s) { Symbol::hat(s) } else { s.clone() }).collect()
    };
    for x in words(src.work_alphabet(), corr_len) {
        let mut a: Vec<Word> = cycle_rewrites(src, &x, &l).map_err(e)?.iter().map(|r| hat(&r.to)).collect();
        let mut b: Vec<Word> = cycle_rewrites(&ms, &hat(&x), &l).map_err(e)?.into_iter().map(|r| r.to).collect();
        a.sort();
        b.sort();
        ensure(a == b, || format!("{}: reductions of {} differ", src.name(), symbol::spaced(&x)))?;
    }
    Ok(())
}

fn criterion_5() -> Outcome {
    shrinking_case(&m_e_h(), 8)?;
    let opts = SynthesisOptions { window: 3, max_window: 6, ..SynthesisOptions::default() };
    let (built, _) = build_hrrwwc(&anbn_gnf(), &opts).map_err(e)?;
    shrinking_case(&built, 8)?;
    Ok("m_e_h and built anbn: L(M_s) = h-proper <= 10, shrinking <= 8, reductions correspond <= 8".into())
}

fn criterion_6() -> Outcome {
    for k in 2..=4 {
        let got = input_set(&l_k(k), LanguageKind::Input, 20)?;
        let want: BTreeSet<Word> =
            (0..).take_while(|n| 2 * n + k - 1 <= 20).map(|n| [rep("a", n), rep("c", k - 1), rep("b", n)].concat()).collect();
        ensure(got == want, || format!("l_{k} differs from a^n c^{} b^n", k - 1))?;
        let s = window_hierarchy_sweep(k, 8);
        ensure(s.exceptions.is_empty(), || s.to_string())?;
    }
    let total: usize = (2..=4).map(|k| window_hierarchy_sweep(k, 8).rewrites).sum();
    Ok(format!("l_2..l_4 = oracle <= 20; {total} window rewrites of a^n c^(k-1) b^n (n <= 8) all leave L_k"))
}

fn copies_oracle(j: usize, n: usize) -> BTreeSet<Word> {
    let ab = [sym("a"), sym("b")];
    let mut out = BTreeSet::new();
    for u in words(&ab, n) {
        if (j + 1) * u.len() + j > n {
            continue;
        }
        let mut w = Vec::new();
        for _ in 0..j {
            w.extend(u.iter().cloned());
            w.push(sym("c"));
        }
        w.extend(u.iter().cloned());
        out.insert(w);
    }
    out
}

fn criterion_7() -> Outcome {
    let l = Limits::default();
    for j in 1..=3 {
        let spec = lm_j(j);
        let got = input_set(&spec, LanguageKind::Input, 15)?;
        ensure(got == copies_oracle(j, 15), || format!("lm_{j} differs from (uc)^{j}u"))?;
        let ok = check_cycle_soundness(&spec.with_mr_degree(j + 1), 10, &l).map_err(e)?;
        ensure(ok.holds(), || format!("lm_{j} at degree {}: {ok}", j + 1))?;
        let bad = check_cycle_soundness(&spec.with_mr_degree(j), 10, &l).map_err(e)?;
        ensure(bad.verdict == CheckVerdict::Violated, || format!("lm_{j} sound at degree {j}"))?;
    }
    Ok("lm_1..lm_3 = oracle <= 15; cycles sound at degree j+1, unsound at j".into())
}

fn criterion_8() -> Outcome {
    let l = Limits::default();
    let mut total = 0;
    for entry in catalog_list() {
        let Some(spec) = entry.automaton() else { continue };
        for w in words(spec.work_alphabet(), 8) {
            let memo = decide_basic_membership(spec, &w, &l).map_err(e)?.verdict;
            let brute = decide_basic_exhaustive(spec, &w, &l).map_err(e)?;
            ensure(memo == brute, || format!("{} on {}: {memo} vs {brute}", entry.name, symbol::spaced(&w)))?;
            total += 1;
        }
    }
    Ok(format!("{total} words: memoized = exhaustive"))
}

fn criterion_9() -> Outcome {
    for (name, args) in common::golden::CASES {
        common::golden::compare(name, args)?;
    }
    let mut n = 0;
    for entry in catalog_list() {
        let same = match &entry.item {
            CatalogItem::Automaton(a) => parse_automaton(&render_automaton(a)).map_err(e)? == *a,
            CatalogItem::Grammar(g) => parse_grammar(&render_grammar(g)).map_err(e)? == *g,
        };
        ensure(same, || format!("{} does not round-trip", entry.name))?;
        n += 1;
    }
    Ok(format!("{} golden outputs match; {n} catalog entries round-trip", common::golden::CASES.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("m_e fidelity", criterion_1),
        ("preservation suite", criterion_2),
        ("monotonicity", criterion_3),
        ("grammar pipeline", criterion_4),
        ("shrinking transform", criterion_5),
        ("window hierarchy", criterion_6),
        ("multi-rewrite hierarchy", criterion_7),
        ("engine cross-validation", criterion_8),
        ("cli", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS {} {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
