use redukto_core::catalog::{catalog_list, dyck1, l_k, lm_j, m_e, reg_window1};
use redukto_core::symbol::{symbols, Symbol, Word};
use redukto_core::*;

fn a(n: usize) -> Word {
    vec![Symbol::new("a").unwrap(); n]
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

#[test]
fn m_e_runs_as_hand_simulated() {
    let t = run_deterministic(&m_e(), &a(4), &Limits::default()).unwrap();
    assert_eq!(t.outcome, Outcome::Accept);
    let red: Vec<(Word, Word)> = t.reductions();
    let expect = [(a(4), symbols(&["a", "a", "b"])), (symbols(&["a", "a", "b"]), symbols(&["b", "b"])), (symbols(&["b", "b"]), a(1))];
    assert_eq!(red, expect);
    assert_eq!(t.last.tape, symbols(&["^", "a", "$"]));

    let t = run_deterministic(&m_e(), &a(3), &Limits::default()).unwrap();
    assert_eq!(t.outcome, Outcome::Reject { stuck: false });
    assert_eq!(t.reductions(), vec![(a(3), symbols(&["a", "b"]))]);

    let t = run_deterministic(&m_e(), &[], &Limits::default()).unwrap();
    assert_eq!(t.outcome, Outcome::Reject { stuck: true });
    assert!(t.steps.is_empty());
}

#[test]
fn m_e_rewrite_at_right_end() {
    let spec = m_e();
    let c = Configuration { tape: symbols(&["^", "a", "a", "a", "a", "$"]), state: State::named("q0"), pos: 3, rewrites: 0 };
    assert_eq!(c.window(3), &symbols(&["a", "a", "$"])[..]);
    let succ = successors(&spec, &c).unwrap();
    assert_eq!(succ.len(), 1);
    let Successor::Config(n) = &succ[0].1 else { panic!() };
    assert_eq!(n.tape, symbols(&["^", "a", "a", "b", "$"]));
    assert_eq!(n.pos, 2);
    assert_eq!(n.state, State::named("q1"));
    assert_eq!(n.rewrites, 1);
    let r = Configuration { tape: symbols(&["^", "a", "a", "b", "$"]), state: State::named("q1"), pos: 1, rewrites: 1 };
    assert_eq!(right_distance(&r), 4);
    let at_end = Configuration { pos: 4, ..r.clone() };
    assert_eq!(right_distance(&at_end), 1);
    assert_eq!(right_distance(&Configuration::restarting(&spec, &a(3))), 5);
}

#[test]
fn mvr_not_offered_on_right_sentinel_alone() {
    let spec = reg_window1();
    let c = Configuration { tape: symbols(&["^", "b", "$"]), state: State::named("s2"), pos: 2, rewrites: 0 };
    let succ = successors(&spec, &c).unwrap();
    assert_eq!(succ, vec![(Instruction::Accept, Successor::Accept)]);
}

#[test]
fn membership_examples() {
    let l = Limits::default();
    let spec = m_e();
    let b = symbols(&["b"]);
    let d = decide_basic_membership(&spec, &b, &l).unwrap();
    assert_eq!(d.verdict, Verdict::Member);
    assert_eq!(d.trace.unwrap().cycle_count(), 0);
    assert_eq!(decide_basic_membership(&spec, &a(5), &l).unwrap().verdict, Verdict::NonMember);
    let d = decide_input_membership(&spec, &a(8), &l).unwrap();
    assert_eq!(d.verdict, Verdict::Member);
    assert_eq!(d.trace.unwrap().cycle_count(), 7);
    assert!(matches!(decide_input_membership(&spec, &b, &l), Err(EngineError::NotInput(_))));
    let w = symbols(&["a1", "ā1", "a1", "ā1"]);
    assert_eq!(decide_input_membership(&dyck1(), &w, &l).unwrap().verdict, Verdict::Member);
}

#[test]
fn cycle_rewrites_of_m_e() {
    let rw = cycle_rewrites(&m_e(), &a(4), &Limits::default()).unwrap();
    assert_eq!(rw.len(), 1);
    assert_eq!(rw[0].to, symbols(&["a", "a", "b"]));
    assert_eq!(rw[0].witness.last().unwrap().instruction, Instruction::Restart);
    assert!(cycle_rewrites(&m_e(), &a(1), &Limits::default()).unwrap().is_empty());
}

#[test]
fn memoized_and_exhaustive_search_agree() {
    let l = Limits::default();
    for e in catalog_list() {
        let Some(spec) = e.automaton() else { continue };
        let bound = if spec.work_alphabet().len() > 2 { 6 } else { 8 };
        for w in words(spec.work_alphabet(), bound) {
            let memo = decide_basic_membership(spec, &w, &l).unwrap().verdict;
            let brute = decide_basic_exhaustive(spec, &w, &l).unwrap();
            assert_eq!(memo, brute, "{} on {:?}", e.name, w);
        }
    }
}

#[test]
fn deterministic_run_agrees_with_decider() {
    let l = Limits::default();
    for spec in [m_e(), dyck1(), l_k(2), lm_j(1), reg_window1()] {
        for w in words(spec.work_alphabet(), 6) {
            let t = run_deterministic(&spec, &w, &l).unwrap();
            let d = decide_basic_membership(&spec, &w, &l).unwrap();
            assert_eq!(t.outcome == Outcome::Accept, d.verdict == Verdict::Member, "{} {:?}", spec.name(), w);
        }
    }
}

#[test]
fn catalog_automata_match_oracles() {
    let l = Limits::default();
    for e in catalog_list() {
        let Some(spec) = e.automaton() else { continue };
        let bound = if spec.input_alphabet().len() > 2 { 7 } else { 10 };
        for w in words(spec.input_alphabet(), bound) {
            let d = decide_input_membership(spec, &w, &l).unwrap();
            assert_eq!(d.verdict == Verdict::Member, e.oracle.contains(&w), "{} on {:?}", e.name, w);
        }
    }
}
