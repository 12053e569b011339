use thiserror::Error;

/// Failures reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("zero vector is not a ray")]
    ZeroRay,
    #[error("ray {0} is a nonnegative combination of the other rays")]
    RedundantRay(usize),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not full-dimensional")]
    NotFullDimensional,
    #[error("ray index {index} out of range 1..={count}")]
    RayIndexOutOfRange { index: usize, count: usize },
    #[error("lattice tag mismatch: {0}")]
    LatticeMismatch(String),
    #[error("vector is not contained in the lattice spanned by the ambient generators")]
    NotContained,
    #[error("{0} is not a Demazure root")]
    NotARoot(String),
    #[error("exponent {0} lies outside the dual cone")]
    OutsideCone(String),
    #[error("not a supporting face: {0}")]
    NotSupporting(String),
    #[error("operation needs a locally nilpotent component: {0}")]
    NotLocallyNilpotent(String),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// A stable snake-case name for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::ZeroRay => "zero_ray",
            Error::RedundantRay(_) => "redundant_ray",
            Error::NotPointed => "not_pointed",
            Error::NotFullDimensional => "not_full_dimensional",
            Error::RayIndexOutOfRange { .. } => "ray_index_out_of_range",
            Error::LatticeMismatch(_) => "lattice_mismatch",
            Error::NotContained => "not_contained",
            Error::NotARoot(_) => "not_a_root",
            Error::OutsideCone(_) => "outside_cone",
            Error::NotSupporting(_) => "not_supporting",
            Error::NotLocallyNilpotent(_) => "not_locally_nilpotent",
            Error::BudgetExhausted(_) => "budget_exhausted",
            Error::NoSolution(_) => "no_solution",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Parse(_) => "parse",
        }
    }
}
