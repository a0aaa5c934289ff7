//! h-lexicalized restarting automata.

pub mod catalog;
pub mod classifiers;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod format;
pub mod grammar;
pub mod languages;
pub mod model;
pub mod symbol;
pub mod validate;

pub use engine::{
    cycle_rewrites, decide_basic_exhaustive, decide_basic_membership, decide_input_membership,
    right_distance, run_deterministic, successors, Configuration, CycleRewrite, Decision, Limits,
    Outcome, Step, Successor, Trace, Verdict,
};
pub use error::{EngineError, FormatError, ModelError};
pub use model::{
    apply_morphism, project, AutomatonBuilder, AutomatonSpec, AuxUse, ClassFlags, Direction,
    HMorphism, Instruction, RewriteForm, State, WeightFunction,
};
pub use symbol::{Symbol, Word};
