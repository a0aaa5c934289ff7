use std::collections::BTreeSet;

use proptest::prelude::*;
use redukto_core::catalog::{anbn_gnf, dyck_gnf, m_e, m_e_h};
use redukto_core::classifiers::{check_determinism, check_monotone, check_shrinking, CheckVerdict};
use redukto_core::constructions::*;
use redukto_core::grammar::GnfGrammar;
use redukto_core::languages::{
    compare_languages, decide_hproper_membership, enumerate_language, Comparison, LanguageKind, LanguageQuery,
    LanguageSource,
};
use redukto_core::symbol::symbols;
use redukto_core::validate::{classify_rewrite, validate_automaton, RewriteClass};
use redukto_core::*;

fn sym(t: &str) -> Symbol {
    Symbol::new(t).unwrap()
}

fn is_anbn(w: &[Symbol]) -> bool {
    let n = w.len() / 2;
    !w.is_empty() && w.len() % 2 == 0 && w[..n].iter().all(|s| s.as_str() == "a") && w[n..].iter().all(|s| s.as_str() == "b")
}

fn is_dyck_nonempty(w: &[Symbol]) -> bool {
    let mut depth = 0i32;
    for s in w {
        depth += if s.as_str() == "a1" { 1 } else { -1 };
        if depth < 0 {
            return false;
        }
    }
    !w.is_empty() && depth == 0
}

/// Rule-number words of all leftmost derivations yielding at most `n` terminals.
fn derivation_words(g: &GnfGrammar, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<(Vec<Symbol>, Word)> = vec![(vec![g.start().clone()], Vec::new())];
    while let Some((form, omega)) = stack.pop() {
        let Some((x, rest)) = form.split_first() else {
            out.insert(omega);
            continue;
        };
        // every pending nonterminal yields at least one terminal
        if omega.len() + form.len() > n {
            continue;
        }
        for (i, r) in g.rules().iter().enumerate() {
            if &r.lhs == x {
                let form = [r.tail.as_slice(), rest].concat();
                let omega = [omega.as_slice(), &[Symbol::nabla(i + 1, &r.head)]].concat();
                stack.push((form, omega));
            }
        }
    }
    out
}

fn all_rewrites_cl(spec: &AutomatonSpec) -> bool {
    spec.rules().all(|(_, u, i)| match i {
        Instruction::Rewrite { target, .. } => classify_rewrite(u, target) == RewriteClass::Cl,
        _ => true,
    })
}

fn built(g: &GnfGrammar, window: usize) -> (AutomatonSpec, SynthesisReport) {
    let opts = SynthesisOptions { window, max_window: 6, ..SynthesisOptions::default() };
    build_hrrwwc(g, &opts).unwrap()
}

#[test]
fn derivation_encoding_of_anbn() {
    let (gp, alpha) = derivation_encode(&anbn_gnf()).unwrap();
    assert_eq!(alpha.symbols, symbols(&["(1,a)", "(2,a)", "(3,b)"]));
    assert_eq!(gp.terminals(), alpha.symbols.as_slice());
    let want = derivation_words(&anbn_gnf(), 10);
    for w in &want {
        assert!(derivation_check(&gp, w), "{w:?}");
    }
    // every word over B up to length 6 is a derivation word exactly when the oracle says so
    let b = &alpha.symbols;
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..6 {
        level = level.iter().flat_map(|w| b.iter().map(move |s| [w.clone(), vec![s.clone()]].concat())).collect();
        for w in &level {
            assert_eq!(derivation_check(&gp, w), want.contains(w), "{w:?}");
        }
    }
}

#[test]
fn anbn_pipeline() {
    let (spec, report) = built(&anbn_gnf(), 2);
    assert_eq!(report.window, 3);
    assert!(report.validated);
    assert_eq!(report.rules, vec![(symbols(&["(1,a)", "(2,a)", "(3,b)"]), symbols(&["(2,a)"]))]);
    assert!(validate_automaton(&spec).is_legal());
    assert!(check_determinism(&spec).holds());
    assert!(all_rewrites_cl(&spec));
    let l = Limits::default();
    assert!(check_monotone(&spec, 10, &l).unwrap().holds());

    let hp = enumerate_language(&spec, &LanguageQuery::new(LanguageKind::HProper, 12)).unwrap();
    let oracle: Vec<Word> = (1..=6).map(|n| [vec![sym("a"); n], vec![sym("b"); n]].concat()).collect();
    assert_eq!(hp, oracle);
    assert!(enumerate_language(&spec, &LanguageQuery::new(LanguageKind::Input, 12)).unwrap().is_empty());

    let basic: BTreeSet<Word> =
        enumerate_language(&spec, &LanguageQuery::new(LanguageKind::Basic, 8)).unwrap().into_iter().collect();
    assert_eq!(basic, derivation_words(&anbn_gnf(), 8));
}

#[test]
fn anbn_window_two_is_rejected() {
    let opts = SynthesisOptions { window: 2, max_window: 2, ..SynthesisOptions::default() };
    match build_hrrwwc(&anbn_gnf(), &opts) {
        Err(ConstructionError::SynthesisFailed(r)) => {
            assert!(!r.validated);
            assert_eq!(r.failures.len(), 1);
            assert_eq!(r.failures[0].0, 2);
        }
        other => panic!("expected failure, got {other:?}"),
    }
}

#[test]
fn dyck_pipeline() {
    let (spec, report) = built(&dyck_gnf(), 2);
    assert!(report.window <= 6);
    assert!(check_determinism(&spec).holds());
    assert!(all_rewrites_cl(&spec));
    let l = Limits::default();
    assert!(check_monotone(&spec, 10, &l).unwrap().holds());
    let hp = enumerate_language(&spec, &LanguageQuery::new(LanguageKind::HProper, 12)).unwrap();
    assert!(hp.iter().all(|w| is_dyck_nonempty(w)));
    // C(1) + C(2) + ... + C(6) nonempty Dyck words of length <= 12
    assert_eq!(hp.len(), 1 + 2 + 5 + 14 + 42 + 132);
    assert!(enumerate_language(&spec, &LanguageQuery::new(LanguageKind::Input, 12)).unwrap().is_empty());
    let basic: BTreeSet<Word> =
        enumerate_language(&spec, &LanguageQuery::new(LanguageKind::Basic, 7)).unwrap().into_iter().collect();
    assert_eq!(basic, derivation_words(&dyck_gnf(), 7));
}

#[test]
fn degree_of_ambiguity() {
    assert_eq!(dga(&m_e_h(), &sym("a")), 2);
    assert_eq!(dga(&m_e(), &sym("a")), 1);
}

#[test]
fn shrinking_m_e_h() {
    let src = m_e_h();
    let (ms, w) = to_shrinking(&src).unwrap();
    assert!(validate_automaton(&ms).is_legal());
    assert_eq!(w.get(&sym("a")), Some(3));
    assert_eq!(w.get(&sym("b")), Some(1));
    assert_eq!(w.get(&Symbol::hat(&sym("a"))), Some(1));
    assert_eq!(ms.weights(), Some(&w));
    // h(b) = a gives a a preimage choice, hence nondeterminism
    assert_eq!(check_determinism(&ms).verdict, CheckVerdict::Violated);

    let l = Limits::default();
    // h of every basic member, by unmemoized search over {a,b}^{<=10}
    let h = src.morphism().unwrap();
    let mut oracle = BTreeSet::new();
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..10 {
        level = level
            .iter()
            .flat_map(|w| src.work_alphabet().iter().map(move |s| [w.clone(), vec![s.clone()]].concat()))
            .collect();
        for w in &level {
            if decide_basic_exhaustive(&src, w, &l).unwrap() == Verdict::Member {
                oracle.insert(apply_morphism(h, w).unwrap());
            }
        }
    }
    let input: BTreeSet<Word> =
        enumerate_language(&ms, &LanguageQuery::new(LanguageKind::Input, 10)).unwrap().into_iter().collect();
    assert_eq!(input, oracle);
    let c = compare_languages(
        &LanguageSource::Automaton(&ms, LanguageKind::Input),
        &LanguageSource::Automaton(&src, LanguageKind::HProper),
        10,
        &l,
    )
    .unwrap();
    assert_eq!(c, Comparison::Equal { bound: 10 });
    assert!(check_shrinking(&ms, &w, 8, &l).unwrap().holds());
}

/// Cycle rewrites of `ms` on hatted source words are the hatted source rewrites.
fn phase_two_matches(src: &AutomatonSpec, ms: &AutomatonSpec, n: usize) {
    let hat = |w: &[Symbol]| -> Word {
        w.iter().map(|s| if src.is_input_symbol(s) { Symbol::hat(s) } else { s.clone() }).collect()
    };
    let l = Limits::default();
    let mut level: Vec<Word> = vec![Vec::new()];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|w| src.work_alphabet().iter().map(move |s| [w.clone(), vec![s.clone()]].concat()))
            .collect();
        for w in &level {
            let a: Vec<Word> = cycle_rewrites(src, w, &l).unwrap().iter().map(|r| hat(&r.to)).collect();
            let mut b: Vec<Word> = cycle_rewrites(ms, &hat(w), &l).unwrap().into_iter().map(|r| r.to).collect();
            let mut a = a;
            a.sort();
            b.sort();
            assert_eq!(a, b, "{w:?}");
        }
    }
}

#[test]
fn shrinking_phase_two_simulates_source() {
    let src = m_e_h();
    let (ms, _) = to_shrinking(&src).unwrap();
    phase_two_matches(&src, &ms, 8);
}

#[test]
fn shrinking_built_anbn() {
    let (src, _) = built(&anbn_gnf(), 3);
    let (ms, w) = to_shrinking(&src).unwrap();
    assert!(validate_automaton(&ms).is_legal());
    let input = enumerate_language(&ms, &LanguageQuery::new(LanguageKind::Input, 8)).unwrap();
    assert!(input.iter().all(|x| is_anbn(x)));
    assert_eq!(input.len(), 4);
    assert!(check_shrinking(&ms, &w, 6, &Limits::default()).unwrap().holds());
    phase_two_matches(&src, &ms, 5);
}

#[test]
fn shrinking_needs_a_morphism() {
    let no_h = AutomatonSpec::builder("plain", 2).input(&symbols(&["a"])).initial(&State::named("q")).build();
    assert!(matches!(to_shrinking(&no_h), Err(ConstructionError::NoMorphism)));
    assert!(matches!(to_shrinking(&m_e()), Err(ConstructionError::NoMorphism)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hproper_membership_of_built_anbn(w in prop::collection::vec(prop_oneof![Just("a"), Just("b")], 0..14)) {
        let (spec, _) = built(&anbn_gnf(), 3);
        let w: Word = w.iter().map(|t| sym(t)).collect();
        let d = decide_hproper_membership(&spec, &w, &Limits::default()).unwrap();
        prop_assert_eq!(d.verdict == Verdict::Member, is_anbn(&w));
        if let Some(x) = d.witness {
            prop_assert_eq!(apply_morphism(spec.morphism().unwrap(), &x).unwrap(), w.clone());
            let n = w.len() / 2;
            let mut want = vec![sym("(1,a)"); n - 1];
            want.push(sym("(2,a)"));
            want.extend(vec![sym("(3,b)"); n]);
            prop_assert_eq!(x, want);
        }
    }

    #[test]
    fn derivation_words_decode_to_grammar_words(pick in 0usize..1000) {
        let g = dyck_gnf();
        let (gp, alpha) = derivation_encode(&g).unwrap();
        let all: Vec<Word> = derivation_words(&g, 8).into_iter().collect();
        let omega = &all[pick % all.len()];
        prop_assert!(derivation_check(&gp, omega));
        let w = apply_morphism(&alpha.morphism, omega).unwrap();
        prop_assert!(is_dyck_nonempty(&w));
        prop_assert!(g.derives(&w));
    }
}
