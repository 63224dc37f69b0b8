use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {modulus} is not strictly inside the unit disc")]
    OutsideDisc { modulus: f64 },
    #[error("|z| = {modulus} exceeds the safe radius {r_max}")]
    NearBoundary { modulus: f64, r_max: f64 },
    #[error("boundary function evaluated off the unit circle (|z| = {modulus})")]
    OffCircle { modulus: f64 },
    #[error("{kind} problem requires field `{field}`")]
    MissingField { kind: String, field: String },
    #[error("{kind} problem does not take field `{field}`")]
    ExtraField { kind: String, field: String },
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported node for symbolic differentiation: {0}")]
    UnsupportedNode(String),
    #[error("finite difference step {h} too large at |z| = {modulus}")]
    StepTooLarge { h: f64, modulus: f64 },
    #[error("nested quadrature needs {evaluations} kernel evaluations, limit is {limit}")]
    BudgetExceeded { evaluations: u64, limit: u64 },
    #[error("invalid quadrature budget: {0}")]
    InvalidBudget(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("malformed problem document: {0}")]
    Document(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
