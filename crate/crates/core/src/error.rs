use thiserror::Error;

/// Errors raised by the constructions and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0} is not an odd prime below 256")]
    InvalidModulus(u32),
    #[error("linear constraints are inconsistent")]
    NoSolution,
    #[error("algebra carries no bilinear form")]
    FormAbsent,
    #[error("algebra is not unital")]
    NotUnital,
    #[error("no split Hurwitz algebra of dimension {0}")]
    InvalidDimension(usize),
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("not a symmetric composition superalgebra: {0}")]
    NotSymmetricComposition(String),
    #[error("algebra has a nonzero odd part")]
    NotEven,
    #[error("construction requires characteristic {expected}, got {found}")]
    WrongCharacteristic { expected: u32, found: u32 },
    #[error("element is not an idempotent")]
    NotIdempotent,
    #[error("idempotent has trace {0}, expected 1")]
    WrongTrace(u32),
    #[error("axiom check failed: {0}")]
    AxiomFailure(String),
    #[error("map is not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("torus elements do not commute")]
    NotCommuting,
    #[error("torus element is not diagonalizable over GF(p)")]
    NotDiagonalizable,
    #[error("element is not an eigenvector: {0}")]
    NotEigen(String),
    #[error("elements generate a subalgebra of dimension {found}, not {expected}")]
    NotGenerating { expected: usize, found: usize },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("map does not respect the parity blocks")]
    ParityViolation,
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
