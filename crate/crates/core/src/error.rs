use thiserror::Error;

use crate::span::Diagnostic;

/// Errors produced anywhere in the transpiler.
#[derive(Debug, Error)]
pub enum Error {
    /// Lexical, syntactic or semantic problem in a source file.
    #[error("{0}")]
    Source(#[from] Diagnostic),

    #[error("unknown gate '{0}'")]
    UnknownGate(String),

    #[error("recursion detected in gate definitions: {0}")]
    RecursiveGate(String),

    #[error("gate '{name}' expects {expected} {what}, got {got}")]
    Arity {
        name: String,
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("parameter of '{0}' does not evaluate to a finite number")]
    NonNumeric(String),

    #[error("unknown runtime '{0}' (expected emulator, ion or ion-ir)")]
    UnknownRuntime(String),

    #[error("runtime '{runtime}': {message}")]
    RuntimeInconsistent { runtime: String, message: String },

    #[error("rule '{rule}': {message}")]
    RuleEval { rule: String, message: String },

    #[error("invalid mapping: {0}")]
    Mapping(String),

    #[error("invalid qudit parameters: {0}")]
    Params(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("{construct} is not supported by the {target} target (at {span})")]
    Rejected {
        construct: String,
        target: String,
        span: String,
    },

    #[error("cannot route operation {0}: no path in the transition graph")]
    Unroutable(String),

    #[error("operation violates selection rules: {0}")]
    SelectionRule(String),

    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("invalid samples: {0}")]
    Samples(String),

    #[error("dimension {dim} exceeds the simulator cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
