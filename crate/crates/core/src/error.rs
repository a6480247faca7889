use thiserror::Error;

/// Errors raised by the exact algebra routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix is singular")]
    Singular,

    #[error("Gram matrix entry ({row}, {col}) is not an integer")]
    NonIntegerGram { row: usize, col: usize },

    #[error("lattice is degenerate ({nullity} null directions)")]
    DegenerateLattice { nullity: usize },

    #[error("subspace is not invariant under the map: {0}")]
    NotInvariant(String),

    #[error("operator is not an infinitesimal isometry of the pairing")]
    NotInfinitesimalIsometry,

    #[error("matrix does not preserve the pairing")]
    NotIsometry,

    #[error("operators live on different lattices")]
    LatticeMismatch,

    #[error("operator is not nilpotent")]
    NotNilpotent,

    #[error("operator is not unipotent")]
    NotUnipotent,

    #[error("nilpotency index {0} exceeds 3")]
    IndexTooLarge(usize),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cone generators are linearly dependent")]
    NonSimplicial,

    #[error("cone has a zero generator")]
    ZeroGenerator,

    #[error("weight filtration depends on the interior point: samples {first:?} and {second:?} disagree")]
    InteriorDependence { first: Vec<String>, second: Vec<String> },

    #[error("duplicate cone in fan")]
    DuplicateCone,

    #[error("period vector is zero")]
    ZeroPeriod,

    #[error("Q(omega, omega) = {0} is not zero")]
    FirstConditionViolated(String),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
