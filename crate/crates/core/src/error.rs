use thiserror::Error;

/// Errors raised by stream construction, evaluation and the axiom harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed stream: {0}")]
    MalformedStream(String),

    #[error("stream `{label}` violates its bound {bound} at t={index}: value {value}")]
    BoundViolation {
        label: String,
        index: u64,
        value: f64,
        bound: f64,
    },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("invalid permutation: {0}")]
    Permutation(String),

    #[error("cannot parse rational `{text}`: {reason}")]
    RationalParse { text: String, reason: String },

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("unknown axiom `{0}`")]
    UnknownAxiom(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("rule `{rule}` cannot be used here: {reason}")]
    RuleDomain { rule: String, reason: String },

    #[error("{path}: {message}")]
    Spec { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
