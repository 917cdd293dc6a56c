use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-integrable Lévy measure: {0}")]
    NonIntegrableMeasure(String),

    #[error("symbol ω({lambda}) = {value:e} is below the positivity gate")]
    NearZeroSymbol { lambda: f64, value: f64 },

    #[error("non-constant Bernstein function required")]
    ConstantSymbol,

    #[error("grid size error: {0}")]
    Size(String),

    #[error("field carries {fraction:e} of its energy in the zero mode")]
    ZeroModeEnergy { fraction: f64 },

    #[error("field is identically zero")]
    EmptyField,

    #[error("no lattice mode with |ξ|² = {lambda} on the searched boxes")]
    LatticeUnreachable { lambda: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported derivative or layer order {0}")]
    UnsupportedOrder(usize),

    #[error("node budget exceeded: {needed} > {cap}")]
    BudgetExceeded { needed: usize, cap: usize },

    #[error("generator has no eigenvalue equal to 1")]
    NoUnitEigenvalue,

    #[error("matrix is not symmetric (asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
