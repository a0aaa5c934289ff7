use thiserror::Error;

use crate::model::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed symbol token {0:?}")]
    BadToken(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("cannot split {0:?} into alphabet symbols")]
    Unsegmentable(String),
    #[error("{0:?} splits into alphabet symbols in more than one way; separate symbols by spaces")]
    AmbiguousWord(String),
    #[error("symbol {0} has no image under the morphism")]
    NotInMorphism(String),
    #[error("malformed grammar: {0}")]
    Grammar(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("automaton is structurally invalid:\n{0}")]
    Invalid(ValidationReport),
    #[error("automaton is not deterministic")]
    Nondeterministic,
    #[error("symbol {0} is not an input symbol")]
    NotInput(String),
    #[error("symbol {0} is not a working symbol")]
    NotWorking(String),
    #[error("automaton has no morphism")]
    NoMorphism,
    #[error("automaton has no weight function")]
    NoWeights,
    #[error("resource limits exceeded: {0}")]
    ResourceExceeded(String),
    #[error("malformed configuration: {0}")]
    BadConfiguration(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}
