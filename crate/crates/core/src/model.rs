//! Automaton specifications, instructions, morphisms and weights.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::engine::machine::Machine;
use crate::error::{EngineError, ModelError};
use crate::symbol::{Symbol, Word};

pub use crate::validate::{
    classify_automaton, classify_rewrite, validate_automaton, RewriteClass, TypeTags,
    ValidationReport, Violation,
};

/// A control state name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(Arc<str>);

impl State {
    pub fn new(name: &str) -> Result<State, ModelError> {
        if name.is_empty()
            || name.chars().any(char::is_whitespace)
            || name.starts_with('#')
            || name == "->"
        {
            return Err(ModelError::BadToken(name.to_string()));
        }
        Ok(State(Arc::from(name)))
    }

    /// Creates a state from a literal name, panicking on malformed names.
    pub fn named(name: &str) -> State {
        State::new(name).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// One transition step type. The variant order is the search order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Instruction {
    MoveRight(State),
    MoveLeft(State),
    /// Replace the window content by `target` and enter `next`.
    Rewrite { target: Word, next: State },
    Restart,
    Accept,
    Reject,
}

impl Instruction {
    pub fn next_state(&self) -> Option<&State> {
        match self {
            Instruction::MoveRight(q) | Instruction::MoveLeft(q) => Some(q),
            Instruction::Rewrite { next, .. } => Some(next),
            _ => None,
        }
    }

    pub fn is_rewrite(&self) -> bool {
        matches!(self, Instruction::Rewrite { .. })
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::MoveRight(q) => write!(f, "mvr {q}"),
            Instruction::MoveLeft(q) => write!(f, "mvl {q}"),
            Instruction::Rewrite { target, next } => {
                write!(f, "sl {next}")?;
                if target.is_empty() {
                    write!(f, " -")
                } else {
                    for s in target {
                        write!(f, " {s}")?;
                    }
                    Ok(())
                }
            }
            Instruction::Restart => f.write_str("restart"),
            Instruction::Accept => f.write_str("accept"),
            Instruction::Reject => f.write_str("reject"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Direction {
    /// No MVL steps; restart immediately after each rewrite.
    R,
    /// No MVL steps.
    RR,
    /// Unrestricted.
    RL,
}

/// Rewrite forms ordered from most to least restrictive.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RewriteForm {
    /// Deletion of at most two contiguous blocks.
    Cl,
    /// Deletion of a scattered subsequence.
    Dl,
    /// Arbitrary length-reducing replacement.
    Sl,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AuxUse {
    /// Γ = Σ and every rewrite deletes.
    None,
    /// Γ = Σ.
    W,
    /// Auxiliary symbols allowed.
    WW,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ClassFlags {
    pub direction: Direction,
    pub form: RewriteForm,
    pub aux: AuxUse,
    pub deterministic: bool,
    /// Maximal number of rewrites per cycle.
    pub mr_degree: usize,
    /// Rewrites need only decrease weight, not length.
    pub shrinking: bool,
}

impl Default for ClassFlags {
    fn default() -> Self {
        ClassFlags {
            direction: Direction::RL,
            form: RewriteForm::Sl,
            aux: AuxUse::WW,
            deterministic: false,
            mr_degree: 1,
            shrinking: false,
        }
    }
}

/// A letter-to-letter morphism from the working alphabet onto the input alphabet.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct HMorphism {
    map: BTreeMap<Symbol, Symbol>,
}

impl HMorphism {
    pub fn new() -> HMorphism {
        HMorphism::default()
    }

    /// The identity on `input` extended by the given auxiliary images.
    pub fn extending(input: &[Symbol], aux: impl IntoIterator<Item = (Symbol, Symbol)>) -> Self {
        let mut h = HMorphism::new();
        for a in input {
            h.insert(a.clone(), a.clone());
        }
        for (d, a) in aux {
            h.insert(d, a);
        }
        h
    }

    pub fn insert(&mut self, from: Symbol, to: Symbol) {
        self.map.insert(from, to);
    }

    pub fn get(&self, s: &Symbol) -> Option<&Symbol> {
        self.map.get(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// All symbols mapped to `a`, in symbol order.
    pub fn preimages(&self, a: &Symbol) -> Vec<Symbol> {
        self.map.iter().filter(|(_, t)| *t == a).map(|(d, _)| d.clone()).collect()
    }
}

/// Positive symbol weights, extended additively to words.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct WeightFunction {
    map: BTreeMap<Symbol, u32>,
}

impl WeightFunction {
    pub fn new() -> WeightFunction {
        WeightFunction::default()
    }

    /// Weight 1 for every symbol.
    pub fn uniform(alphabet: &[Symbol]) -> WeightFunction {
        let mut w = WeightFunction::new();
        for s in alphabet {
            w.set(s.clone(), 1);
        }
        w
    }

    pub fn set(&mut self, s: Symbol, weight: u32) {
        self.map.insert(s, weight);
    }

    pub fn get(&self, s: &Symbol) -> Option<u32> {
        self.map.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, u32)> {
        self.map.iter().map(|(s, w)| (s, *w))
    }

    /// Total weight of a word; sentinels weigh nothing.
    pub fn weight(&self, word: &[Symbol]) -> Result<u64, ModelError> {
        word.iter()
            .filter(|s| !s.is_sentinel())
            .map(|s| {
                self.get(s)
                    .map(u64::from)
                    .ok_or_else(|| ModelError::UnknownSymbol(s.to_string()))
            })
            .sum()
    }
}

/// Erases every symbol outside `input`.
pub fn project(word: &[Symbol], input: &[Symbol], work: &[Symbol]) -> Result<Word, ModelError> {
    let mut out = Vec::new();
    for s in word {
        if input.contains(s) {
            out.push(s.clone());
        } else if !work.contains(s) {
            return Err(ModelError::UnknownSymbol(s.to_string()));
        }
    }
    Ok(out)
}

/// The letter-to-letter image of a word.
pub fn apply_morphism(h: &HMorphism, word: &[Symbol]) -> Result<Word, ModelError> {
    word.iter()
        .map(|s| h.get(s).cloned().ok_or_else(|| ModelError::NotInMorphism(s.to_string())))
        .collect()
}

pub(crate) type Table = BTreeMap<(State, Word), BTreeSet<Instruction>>;

/// A complete automaton description.
///
/// Immutable once built; the compiled form used by the engine is created on
/// first use and cached.
pub struct AutomatonSpec {
    pub(crate) name: String,
    pub(crate) input: Vec<Symbol>,
    pub(crate) work: Vec<Symbol>,
    pub(crate) states: Vec<State>,
    pub(crate) initial: State,
    pub(crate) window: usize,
    pub(crate) table: Table,
    pub(crate) flags: ClassFlags,
    pub(crate) morphism: Option<HMorphism>,
    pub(crate) weights: Option<WeightFunction>,
    machine: OnceLock<Result<Arc<Machine>, EngineError>>,
}

impl Clone for AutomatonSpec {
    fn clone(&self) -> Self {
        AutomatonSpec {
            name: self.name.clone(),
            input: self.input.clone(),
            work: self.work.clone(),
            states: self.states.clone(),
            initial: self.initial.clone(),
            window: self.window,
            table: self.table.clone(),
            flags: self.flags,
            morphism: self.morphism.clone(),
            weights: self.weights.clone(),
            machine: OnceLock::new(),
        }
    }
}

impl PartialEq for AutomatonSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.input == other.input
            && self.work == other.work
            && self.states == other.states
            && self.initial == other.initial
            && self.window == other.window
            && self.table == other.table
            && self.flags == other.flags
            && self.morphism == other.morphism
            && self.weights == other.weights
    }
}

impl Eq for AutomatonSpec {}

impl fmt::Debug for AutomatonSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AutomatonSpec")
            .field("name", &self.name)
            .field("window", &self.window)
            .field("states", &self.states.len())
            .field("rules", &self.rule_count())
            .field("flags", &self.flags)
            .finish()
    }
}

impl AutomatonSpec {
    pub fn builder(name: &str, window: usize) -> AutomatonBuilder {
        AutomatonBuilder::new(name, window)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn input_alphabet(&self) -> &[Symbol] {
        &self.input
    }

    pub fn work_alphabet(&self) -> &[Symbol] {
        &self.work
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn initial(&self) -> &State {
        &self.initial
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn flags(&self) -> ClassFlags {
        self.flags
    }

    pub fn morphism(&self) -> Option<&HMorphism> {
        self.morphism.as_ref()
    }

    pub fn weights(&self) -> Option<&WeightFunction> {
        self.weights.as_ref()
    }

    /// Instructions for a `(state, window)` key, in search order.
    pub fn instructions(&self, state: &State, window: &[Symbol]) -> Vec<Instruction> {
        self.table
            .get(&(state.clone(), window.to_vec()))
            .map(|s| s.iter().cloned().collect())
            .unwrap_or_default()
    }

    /// All table entries in canonical order.
    pub fn rules(&self) -> impl Iterator<Item = (&State, &Word, &Instruction)> {
        self.table
            .iter()
            .flat_map(|((q, u), set)| set.iter().map(move |i| (q, u, i)))
    }

    pub fn rule_count(&self) -> usize {
        self.table.values().map(BTreeSet::len).sum()
    }

    pub fn is_input_symbol(&self, s: &Symbol) -> bool {
        self.input.contains(s)
    }

    pub fn is_work_symbol(&self, s: &Symbol) -> bool {
        self.work.contains(s)
    }

    /// Auxiliary symbols, Γ \ Σ, in declaration order.
    pub fn auxiliary(&self) -> Vec<Symbol> {
        self.work.iter().filter(|s| !self.input.contains(s)).cloned().collect()
    }

    /// Copy with different flags.
    pub fn with_flags(&self, flags: ClassFlags) -> AutomatonSpec {
        let mut s = self.clone();
        s.flags = flags;
        s
    }

    /// Copy with a different per-cycle rewrite cap.
    pub fn with_mr_degree(&self, j: usize) -> AutomatonSpec {
        self.with_flags(ClassFlags { mr_degree: j, ..self.flags })
    }

    /// Copy with a morphism attached.
    pub fn with_morphism(&self, name: &str, h: HMorphism) -> AutomatonSpec {
        let mut s = self.clone();
        s.name = name.to_string();
        s.morphism = Some(h);
        s
    }

    /// Degree of lexical ambiguity of input symbol `a`: |h⁻¹(a)|, or 1 without h.
    pub fn dga(&self, a: &Symbol) -> usize {
        match &self.morphism {
            Some(h) => self.work.iter().filter(|d| h.get(d) == Some(a)).count(),
            None => usize::from(self.input.contains(a)),
        }
    }

    /// Drops the cached compiled form after in-place edits.
    pub(crate) fn refresh(&mut self) {
        self.machine = OnceLock::new();
    }

    pub(crate) fn refreshed(mut self) -> AutomatonSpec {
        self.refresh();
        self
    }

    pub(crate) fn machine(&self) -> Result<Arc<Machine>, EngineError> {
        self.machine.get_or_init(|| Machine::compile(self).map(Arc::new)).clone()
    }
}

/// Incremental construction of an [`AutomatonSpec`].
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    name: String,
    window: usize,
    input: Vec<Symbol>,
    work: Vec<Symbol>,
    states: Vec<State>,
    initial: Option<State>,
    table: Table,
    flags: ClassFlags,
    morphism: Option<HMorphism>,
    weights: Option<WeightFunction>,
}

impl AutomatonBuilder {
    pub fn new(name: &str, window: usize) -> AutomatonBuilder {
        AutomatonBuilder {
            name: name.to_string(),
            window,
            input: Vec::new(),
            work: Vec::new(),
            states: Vec::new(),
            initial: None,
            table: Table::new(),
            flags: ClassFlags::default(),
            morphism: None,
            weights: None,
        }
    }

    /// Declares the input alphabet; its symbols are also added to the working alphabet.
    pub fn input(mut self, symbols: &[Symbol]) -> Self {
        for s in symbols {
            if !self.input.contains(s) {
                self.input.push(s.clone());
            }
            if !self.work.contains(s) {
                self.work.push(s.clone());
            }
        }
        self
    }

    /// Adds working symbols.
    pub fn work(mut self, symbols: &[Symbol]) -> Self {
        for s in symbols {
            if !self.work.contains(s) {
                self.work.push(s.clone());
            }
        }
        self
    }

    /// Replaces the working alphabet verbatim (file loading keeps the declared order).
    pub fn work_exact(mut self, symbols: Vec<Symbol>) -> Self {
        self.work = symbols;
        self
    }

    /// Replaces the input alphabet verbatim.
    pub fn input_exact(mut self, symbols: Vec<Symbol>) -> Self {
        self.input = symbols;
        self
    }

    pub fn state(mut self, q: &State) -> Self {
        if !self.states.contains(q) {
            self.states.push(q.clone());
        }
        self
    }

    pub fn states_exact(mut self, states: Vec<State>) -> Self {
        self.states = states;
        self
    }

    pub fn initial(mut self, q: &State) -> Self {
        self.initial = Some(q.clone());
        self.state(q)
    }

    pub fn flags(mut self, flags: ClassFlags) -> Self {
        self.flags = flags;
        self
    }

    pub fn morphism(mut self, h: HMorphism) -> Self {
        self.morphism = Some(h);
        self
    }

    pub fn weights(mut self, w: WeightFunction) -> Self {
        self.weights = Some(w);
        self
    }

    /// Adds an instruction; states mentioned are declared on the fly.
    pub fn rule(mut self, q: &State, window: Word, instr: Instruction) -> Self {
        self.add(q, window, instr);
        self
    }

    pub fn add(&mut self, q: &State, window: Word, instr: Instruction) {
        if !self.states.contains(q) {
            self.states.push(q.clone());
        }
        if let Some(n) = instr.next_state() {
            if !self.states.contains(n) {
                self.states.push(n.clone());
            }
        }
        self.table.entry((q.clone(), window)).or_default().insert(instr);
    }

    pub fn build(self) -> AutomatonSpec {
        let initial = self
            .initial
            .or_else(|| self.states.first().cloned())
            .unwrap_or_else(|| State::named("q0"));
        let mut states = self.states;
        if !states.contains(&initial) {
            states.insert(0, initial.clone());
        }
        AutomatonSpec {
            name: self.name,
            input: self.input,
            work: self.work,
            states,
            initial,
            window: self.window,
            table: self.table,
            flags: self.flags,
            morphism: self.morphism,
            weights: self.weights,
            machine: OnceLock::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::symbols;

    #[test]
    fn project_examples() {
        let input = symbols(&["a", "b"]);
        let work = symbols(&["a", "b", "A", "B"]);
        assert_eq!(project(&symbols(&["a", "A", "b", "B"]), &input, &work).unwrap(), input);
        assert!(project(&[], &input, &work).unwrap().is_empty());
        assert!(project(&symbols(&["A", "A"]), &input, &work).unwrap().is_empty());
        assert!(project(&symbols(&["z"]), &input, &work).is_err());
    }

    #[test]
    fn morphism_examples() {
        let a = Symbol::new("a").unwrap();
        let n1 = Symbol::nabla(1, &a);
        let n2 = Symbol::nabla(2, &a);
        let hat = Symbol::hat(&a);
        let h = HMorphism::extending(
            &[a.clone()],
            [(n1.clone(), a.clone()), (n2.clone(), a.clone()), (hat.clone(), a.clone())],
        );
        assert_eq!(apply_morphism(&h, &[n1, n2]).unwrap(), vec![a.clone(), a.clone()]);
        assert_eq!(apply_morphism(&h, &[a.clone()]).unwrap(), vec![a.clone()]);
        assert_eq!(apply_morphism(&h, &[hat, a.clone()]).unwrap(), vec![a.clone(), a.clone()]);
        assert!(apply_morphism(&h, &symbols(&["z"])).is_err());
        assert_eq!(h.preimages(&a).len(), 4);
    }

    #[test]
    fn weights_are_additive() {
        let mut w = WeightFunction::uniform(&symbols(&["a", "b"]));
        w.set(Symbol::new("a").unwrap(), 3);
        assert_eq!(w.weight(&symbols(&["^", "a", "b", "a", "$"])).unwrap(), 7);
        assert_eq!(w.weight(&[]).unwrap(), 0);
    }

    #[test]
    fn instruction_order_is_search_order() {
        let q = State::named("q");
        let mut v = vec![
            Instruction::Reject,
            Instruction::Accept,
            Instruction::Restart,
            Instruction::Rewrite { target: symbols(&["b"]), next: q.clone() },
            Instruction::Rewrite { target: symbols(&["a"]), next: q.clone() },
            Instruction::MoveLeft(q.clone()),
            Instruction::MoveRight(q.clone()),
        ];
        v.sort();
        assert!(matches!(v[0], Instruction::MoveRight(_)));
        assert!(matches!(v[1], Instruction::MoveLeft(_)));
        assert_eq!(v[2], Instruction::Rewrite { target: symbols(&["a"]), next: q });
        assert_eq!(v[6], Instruction::Reject);
    }
}
