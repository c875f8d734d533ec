use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong in the library.
///
/// The CLI maps these onto exit codes via [`Error::is_budget`]: budget
/// errors exit with 2, everything else with 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("support {index} has no points")]
    EmptySupport { index: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("point is not an integer combination of the lattice basis")]
    NotInLattice,

    #[error("cannot project along the zero vector")]
    ZeroVector,

    #[error("polytope of dimension {dim} is not full-dimensional in Z^{ambient}")]
    NotFullDimensional { dim: usize, ambient: usize },

    #[error("rank of the union is {rank}, expected {expected}")]
    RankMismatch { rank: usize, expected: usize },

    #[error("{k} supports exceed the subset enumeration bound of {limit}")]
    TooLarge { k: usize, limit: usize },

    #[error("enumeration of {points} torus points exceeds the budget of {budget}")]
    BudgetExceeded { points: u128, budget: u128 },

    #[error("the polynomials share a common factor (resultant vanishes identically)")]
    CommonFactor,

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("integer overflow converting an exact value to a lattice coordinate")]
    Overflow,
}

impl Error {
    /// Budget errors (enumeration limits) as opposed to bad input.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::BudgetExceeded { .. })
    }
}
