use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid chart: coordinate {chart} of the point is zero")]
    InvalidChart { chart: usize },

    #[error("point {0} is not a singular point of the hypersurface")]
    NotSingular(String),

    #[error("not an isolated simple singularity within jet bound {n_max}")]
    NoStabilization { n_max: u32 },

    #[error("not a simple singularity: {0}")]
    NotSimple(String),

    #[error(
        "singularity at {point} is not quasi-homogeneous (Milnor {milnor} != Tjurina {tjurina})"
    )]
    NotQuasiHomogeneous {
        point: String,
        milnor: usize,
        tjurina: usize,
    },

    #[error("generator degree mismatch: expected {expected}, found {found}")]
    Setup { expected: u32, found: u32 },

    #[error("polynomial is not in the saturated ideal I_{degree}")]
    NotInIdeal { degree: i64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("non-versal family: evaluation map not surjective in degree {degree}; codimension formula not guaranteed")]
    NonVersal { degree: i64 },

    #[error("undeclared or non-isolated singularities suspected: stabilized dim (A/J) = {stabilized:?}, declared total Tjurina number = {declared}")]
    IncompleteSingularLocus {
        stabilized: Vec<usize>,
        declared: usize,
    },

    #[error("consistency failure: {0}")]
    Consistency(String),

    #[error("degree budget exceeded: {cols} columns requested, budget is {budget}")]
    BudgetExceeded { cols: usize, budget: usize },
}
