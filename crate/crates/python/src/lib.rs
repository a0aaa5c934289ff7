//! Python bindings: automata, grammars, deciders, bounded checks and constructions.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList, PyString};

use redukto_core::catalog::{catalog_list, catalog_lookup, CatalogItem};
use redukto_core::classifiers::{
    check_cycle_soundness, check_determinism, check_monotone, check_preservation, check_shrinking, CheckReport,
    CheckVerdict, PreservationMode,
};
use redukto_core::constructions::{build_hrrwwc, to_shrinking, ConstructionError, SynthesisOptions};
use redukto_core::format::{parse_automaton, parse_grammar, render_automaton, render_grammar};
use redukto_core::grammar::GnfGrammar;
use redukto_core::languages::{
    compare_languages, decide_hproper_membership, enumerate_language, Comparison, LanguageKind, LanguageQuery,
    LanguageSource,
};
use redukto_core::symbol::tokenize;
use redukto_core::validate::{classify_automaton, validate_automaton};
use redukto_core::{
    cycle_rewrites, decide_basic_membership, decide_input_membership, run_deterministic, AutomatonSpec, EngineError,
    Limits, Symbol, Trace, Word,
};

create_exception!(redukto, ReduktoError, PyException, "Invalid input, file or automaton.");
create_exception!(redukto, ResourceExceeded, ReduktoError, "A search exceeded its resource limits.");

fn engine_err(e: EngineError) -> PyErr {
    match e {
        EngineError::ResourceExceeded(_) => ResourceExceeded::new_err(e.to_string()),
        _ => ReduktoError::new_err(e.to_string()),
    }
}

fn err(e: impl std::fmt::Display) -> PyErr {
    ReduktoError::new_err(e.to_string())
}

fn limits(text: Option<&str>) -> PyResult<Limits> {
    match text {
        Some(t) => Limits::parse(t),
        None => Limits::from_env(),
    }
    .map_err(err)
}

/// A word given as a string (tokenized against `alphabet`) or a list of symbol tokens.
fn word(obj: &Bound<'_, PyAny>, alphabet: &[Symbol]) -> PyResult<Word> {
    if let Ok(s) = obj.cast::<PyString>() {
        return tokenize(&s.to_cow()?, alphabet).map_err(err);
    }
    let tokens: Vec<String> = obj.extract()?;
    tokens.iter().map(|t| Symbol::new(t).map_err(err)).collect()
}

fn tokens(w: &[Symbol]) -> Vec<String> {
    w.iter().map(|s| s.as_str().to_string()).collect()
}

fn kind(text: &str) -> PyResult<LanguageKind> {
    text.parse().map_err(err)
}

fn trace_dict<'py>(py: Python<'py>, spec: &AutomatonSpec, t: &Trace) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("outcome", t.outcome.to_string())?;
    let steps = PyList::empty(py);
    for s in &t.steps {
        let c = &s.config;
        steps.append((
            c.state.as_str(),
            c.pos,
            tokens(c.window(spec.window())),
            s.instruction.to_string(),
            tokens(&c.tape),
        ))?;
    }
    d.set_item("steps", steps)?;
    let cycles: Vec<(Vec<String>, Vec<String>)> =
        t.reductions().iter().map(|(u, v)| (tokens(u), tokens(v))).collect();
    d.set_item("cycles", cycles)?;
    Ok(d)
}

fn report_dict<'py>(py: Python<'py>, r: &CheckReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("property", &r.property)?;
    d.set_item(
        "verdict",
        match r.verdict {
            CheckVerdict::HoldsUpToBound => "holds",
            CheckVerdict::Violated => "violated",
            CheckVerdict::ResourceExceeded => "resource-exceeded",
        },
    )?;
    d.set_item("holds", r.holds())?;
    d.set_item("bound", r.bound)?;
    match &r.counterexample {
        Some(c) => {
            d.set_item("word", tokens(&c.word))?;
            d.set_item("explanation", &c.explanation)?;
        }
        None => {
            d.set_item("word", py.None())?;
            d.set_item("explanation", py.None())?;
        }
    }
    d.set_item("text", r.to_string())?;
    Ok(d)
}

/// A restarting automaton with an optional morphism and weights.
#[pyclass(module = "redukto", frozen)]
struct Automaton {
    spec: AutomatonSpec,
}

impl Automaton {
    fn checked(spec: AutomatonSpec) -> PyResult<Automaton> {
        let report = validate_automaton(&spec);
        if report.has_structural() {
            return Err(ReduktoError::new_err(format!("invalid automaton:\n{report}")));
        }
        Ok(Automaton { spec })
    }
}

#[pymethods]
impl Automaton {
    /// Parses the automaton file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Automaton> {
        Automaton::checked(parse_automaton(text).map_err(err)?)
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Automaton> {
        let text = std::fs::read_to_string(&path).map_err(err)?;
        Automaton::parse(&text)
    }

    /// A catalog automaton such as `m_e`, `dyck1`, `l_3` or `lm_2`.
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Automaton> {
        match catalog_lookup(name).map_err(err)?.item {
            CatalogItem::Automaton(a) => Ok(Automaton { spec: a }),
            CatalogItem::Grammar(_) => Err(err(format!("{name} is a grammar"))),
        }
    }

    fn render(&self) -> String {
        render_automaton(&self.spec)
    }

    #[getter]
    fn name(&self) -> &str {
        self.spec.name()
    }

    #[getter]
    fn window(&self) -> usize {
        self.spec.window()
    }

    #[getter]
    fn input_alphabet(&self) -> Vec<String> {
        tokens(self.spec.input_alphabet())
    }

    #[getter]
    fn work_alphabet(&self) -> Vec<String> {
        tokens(self.spec.work_alphabet())
    }

    #[getter]
    fn rule_count(&self) -> usize {
        self.spec.rule_count()
    }

    /// Weights per symbol, or None.
    #[getter]
    fn weights(&self) -> Option<Vec<(String, u32)>> {
        self.spec.weights().map(|w| w.iter().map(|(s, x)| (s.as_str().to_string(), x)).collect())
    }

    /// Strongest class name inferred from the table, e.g. `det-mon-RC k=2`.
    fn classify(&self) -> String {
        classify_automaton(&self.spec).to_string()
    }

    /// Validation messages; empty when the automaton is legal.
    fn validate(&self) -> Vec<String> {
        validate_automaton(&self.spec).violations.iter().map(|v| v.to_string()).collect()
    }

    /// Runs a deterministic automaton on an input word.
    #[pyo3(signature = (word, limits=None))]
    fn run<'py>(&self, py: Python<'py>, word: &Bound<'py, PyAny>, limits: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
        let w = self::word(word, self.spec.input_alphabet())?;
        let t = run_deterministic(&self.spec, &w, &self::limits(limits)?).map_err(engine_err)?;
        trace_dict(py, &self.spec, &t)
    }

    /// Decides membership; returns `(verdict, witness)` where the witness is the
    /// extended version found for `hproper` queries.
    #[pyo3(signature = (word, kind="input", limits=None))]
    fn decide(
        &self,
        word: &Bound<'_, PyAny>,
        kind: &str,
        limits: Option<&str>,
    ) -> PyResult<(String, Option<Vec<String>>)> {
        let l = self::limits(limits)?;
        let d = match self::kind(kind)? {
            LanguageKind::Input => {
                decide_input_membership(&self.spec, &self::word(word, self.spec.input_alphabet())?, &l)
            }
            LanguageKind::Basic => {
                decide_basic_membership(&self.spec, &self::word(word, self.spec.work_alphabet())?, &l)
            }
            LanguageKind::HProper => {
                decide_hproper_membership(&self.spec, &self::word(word, self.spec.input_alphabet())?, &l)
            }
            LanguageKind::Proper => return Err(err("proper membership is available through enumerate")),
        }
        .map_err(engine_err)?;
        Ok((d.verdict.to_string(), d.witness.as_deref().map(tokens)))
    }

    /// Members up to `max_len`, length-lexicographically.
    #[pyo3(signature = (kind="input", max_len=8, limits=None))]
    fn enumerate(&self, kind: &str, max_len: usize, limits: Option<&str>) -> PyResult<Vec<Vec<String>>> {
        let q = LanguageQuery { kind: self::kind(kind)?, max_len, limits: self::limits(limits)? };
        let words = enumerate_language(&self.spec, &q).map_err(engine_err)?;
        Ok(words.iter().map(|w| tokens(w)).collect())
    }

    /// Every `v` with `word => v` in one cycle.
    #[pyo3(signature = (word, limits=None))]
    fn cycle_rewrites(&self, word: &Bound<'_, PyAny>, limits: Option<&str>) -> PyResult<Vec<Vec<String>>> {
        let w = self::word(word, self.spec.work_alphabet())?;
        let r = cycle_rewrites(&self.spec, &w, &self::limits(limits)?).map_err(engine_err)?;
        Ok(r.iter().map(|c| tokens(&c.to)).collect())
    }

    /// Bounded check: det, mono, cycle, shrink, cpp, epp, cycle-correctness or cycle-error.
    #[pyo3(signature = (what, max_len=8, mr=None, limits=None))]
    fn check<'py>(
        &self,
        py: Python<'py>,
        what: &str,
        max_len: usize,
        mr: Option<usize>,
        limits: Option<&str>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let l = self::limits(limits)?;
        let spec = match mr {
            Some(j) => self.spec.with_mr_degree(j),
            None => self.spec.clone(),
        };
        let r = match what {
            "det" => check_determinism(&spec),
            "mono" => check_monotone(&spec, max_len, &l).map_err(engine_err)?,
            "cycle" => check_cycle_soundness(&spec, max_len, &l).map_err(engine_err)?,
            "shrink" => {
                let w = spec.weights().ok_or_else(|| err("automaton has no weight function"))?;
                check_shrinking(&spec, w, max_len, &l).map_err(engine_err)?
            }
            other => {
                let mode: PreservationMode = other.parse().map_err(err)?;
                check_preservation(&spec, max_len, mode, &l).map_err(engine_err)?
            }
        };
        report_dict(py, &r)
    }

    /// The shrinking automaton simulating this h-automaton.
    fn to_shrinking(&self) -> PyResult<Automaton> {
        let (s, _) = to_shrinking(&self.spec).map_err(construction_err)?;
        Ok(Automaton { spec: s })
    }

    fn __repr__(&self) -> String {
        format!("<Automaton {} {}>", self.spec.name(), classify_automaton(&self.spec))
    }
}

fn construction_err(e: ConstructionError) -> PyErr {
    match e {
        ConstructionError::Engine(e) => engine_err(e),
        e => err(e),
    }
}

/// A grammar in Greibach normal form.
#[pyclass(module = "redukto", frozen)]
struct Grammar {
    g: GnfGrammar,
}

#[pymethods]
impl Grammar {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Grammar> {
        Ok(Grammar { g: parse_grammar(text).map_err(err)? })
    }

    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Grammar> {
        match catalog_lookup(name).map_err(err)?.item {
            CatalogItem::Grammar(g) => Ok(Grammar { g }),
            CatalogItem::Automaton(_) => Err(err(format!("{name} is an automaton"))),
        }
    }

    fn render(&self) -> String {
        render_grammar(&self.g)
    }

    #[getter]
    fn name(&self) -> &str {
        self.g.name()
    }

    fn derives(&self, word: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.g.derives(&self::word(word, self.g.terminals())?))
    }

    fn language(&self, max_len: usize) -> Vec<Vec<String>> {
        self.g.language(max_len).iter().map(|w| tokens(w)).collect()
    }

    /// Builds the h-automaton for this grammar; returns `(automaton, report text)`.
    #[pyo3(signature = (window=3, max_window=None, train=8, validate=12, limits=None))]
    fn build_hrrwwc(
        &self,
        window: usize,
        max_window: Option<usize>,
        train: usize,
        validate: usize,
        limits: Option<&str>,
    ) -> PyResult<(Automaton, String)> {
        let opts = SynthesisOptions {
            window,
            max_window: max_window.unwrap_or(window),
            train_len: train,
            validate_len: validate,
            limits: self::limits(limits)?,
        };
        let (spec, report) = build_hrrwwc(&self.g, &opts).map_err(construction_err)?;
        Ok((Automaton { spec }, report.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("<Grammar {}>", self.g.name())
    }
}

/// `(name, tags, description)` for every catalog entry.
#[pyfunction]
fn catalog() -> Vec<(String, String, String)> {
    catalog_list().into_iter().map(|e| (e.name, e.tags, e.description)).collect()
}

/// Compares an automaton language with a grammar or another automaton up to `max_len`.
/// Returns None when equal, else `(word, in_first)`.
#[pyfunction]
#[pyo3(signature = (first, second, max_len=8, first_kind="input", second_kind="input", limits=None))]
fn compare(
    first: &Bound<'_, PyAny>,
    second: &Bound<'_, PyAny>,
    max_len: usize,
    first_kind: &str,
    second_kind: &str,
    limits: Option<&str>,
) -> PyResult<Option<(Vec<String>, bool)>> {
    fn source<'a>(obj: &'a Bound<'_, PyAny>, k: &str) -> PyResult<Src> {
        if let Ok(a) = obj.cast::<Automaton>() {
            return Ok(Src::A(a.get().spec.clone(), kind(k)?));
        }
        if let Ok(g) = obj.cast::<Grammar>() {
            return Ok(Src::G(g.get().g.clone()));
        }
        Err(err("expected an Automaton or a Grammar"))
    }
    enum Src {
        A(AutomatonSpec, LanguageKind),
        G(GnfGrammar),
    }
    fn view(s: &Src) -> LanguageSource<'_> {
        match s {
            Src::A(a, k) => LanguageSource::Automaton(a, *k),
            Src::G(g) => LanguageSource::Grammar(g),
        }
    }
    let a = source(first, first_kind)?;
    let b = source(second, second_kind)?;
    let c = compare_languages(&view(&a), &view(&b), max_len, &self::limits(limits)?).map_err(engine_err)?;
    Ok(match c {
        Comparison::Equal { .. } => None,
        Comparison::Differ { word, in_first } => Some((tokens(&word), in_first)),
    })
}

#[pymodule]
fn redukto(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Automaton>()?;
    m.add_class::<Grammar>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(compare, m)?)?;
    m.add("ReduktoError", m.py().get_type::<ReduktoError>())?;
    m.add("ResourceExceeded", m.py().get_type::<ResourceExceeded>())?;
    Ok(())
}
