use thiserror::Error;

/// Errors raised by construction and evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter q must be positive, got {0}")]
    NonPositiveQ(f64),
    #[error("deformation parameters must be positive, got q = {q}, p = {p}")]
    NonPositiveParams { q: f64, p: f64 },
    #[error("evaluation at n = {n} leaves the representable range (|n ln q| = {span:.1})")]
    OutOfRange { n: usize, span: f64 },
    #[error("structure function is negative at n = {n}: {value}")]
    NegativeStructureValue { n: usize, value: f64 },
    #[error("structure function vanishes at n = {n}")]
    ZeroStructureValue { n: usize },
    #[error("truncation dimension {0} is below the minimum of 4")]
    DimensionTooSmall(usize),
    #[error("ladder degree {degree} needs dim > degree + 1, got dim = {dim}")]
    DegreeTooLarge { degree: usize, dim: usize },
    #[error("operator dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("structure function does not match the requested deformation parameters")]
    StructureMismatch,
    #[error("mixing parameter epsilon must lie in (-1, 1), got {0}")]
    EpsilonOutOfRange(f64),
    #[error("mixing parameter epsilon must be nonzero for diagonalization")]
    ZeroEpsilon,
    #[error("multiplier kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("operation requires a canonical transformation (chi = kappa * phi)")]
    NonCanonicalSpec,
    #[error("q = {q} is outside the admissible region of branch {branch}")]
    OutsideAdmissibleRegion { q: f64, branch: String },
    #[error("term filter {0} is only defined for caseA")]
    TermFilterRequiresCaseA(String),
    #[error("bisection bracket [{lo}, {hi}] does not contain a sign change")]
    BracketFailure { lo: f64, hi: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
