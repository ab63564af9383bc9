use thiserror::Error;

use crate::scalar::Rational;

/// Why a morphism failed to be invertible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SingularWitness {
    /// A nonzero vector in the kernel (of the degree-0 reduction for ℏ-series).
    Kernel(Vec<Rational>),
    /// Two domain elements with the same image.
    NotInjective { first: usize, second: usize },
    /// A codomain element outside the image.
    NotSurjective { missing: usize },
    /// Domain and codomain have different sizes.
    NotSquare { rows: usize, cols: usize },
}

impl std::fmt::Display for SingularWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SingularWitness::Kernel(v) => {
                let parts: Vec<String> = v.iter().map(|q| q.to_string()).collect();
                write!(f, "kernel vector ({})", parts.join(", "))
            }
            SingularWitness::NotInjective { first, second } => {
                write!(f, "elements {first} and {second} share an image")
            }
            SingularWitness::NotSurjective { missing } => write!(f, "element {missing} is not hit"),
            SingularWitness::NotSquare { rows, cols } => write!(f, "shape {rows}x{cols} is not square"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("singular morphism: {0}")]
    Singular(SingularWitness),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("backend mismatch: {0}")]
    BackendMismatch(String),
    #[error("missing action on atom `{0}`")]
    MissingAction(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid action on atom `{atom}`: {reason}")]
    InvalidAction { atom: String, reason: String },
    #[error("functor is not adapted: {0}")]
    NotAdapted(String),
    #[error("comonoid `{0}` is not cocommutative")]
    NotCocommutative(String),
    #[error("no verified inverse stored for {0}")]
    MissingInverse(String),
    #[error("degree overflow: {0}")]
    DegreeOverflow(String),
    #[error("not a Lie bialgebra twist")]
    NotATwist,
    #[error("Hopf category is not Set-backed")]
    NotSetBacked,
    #[error("hom comonoid ({0}, {1}) is not the diagonal comonoid")]
    NotDiagonal(String, String),
    #[error("pre-Cartier structure violated: {0}")]
    PreCartierViolation(String),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
