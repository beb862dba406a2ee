use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("the columns have rank {rank} but the ambient dimension is {dim}")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("the columns generate a proper sublattice of Z^d (invariants {invariants:?})")]
    LatticeNotFull { invariants: Vec<String> },
    #[error("the semigroup is not pointed")]
    NotPointed,
    #[error("the semigroup is not scored")]
    NotScored,
    #[error("the semigroup is normal")]
    IsNormal,
    #[error("operation supports only d = {expected}, got d = {got}")]
    DimensionUnsupported { expected: usize, got: usize },
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("no interior point found among sums of columns")]
    NoInteriorPoint,
    #[error("degree {degree:?} is not in the semigroup")]
    GeneratorNotInSemigroup { degree: Vec<i64> },
    #[error(
        "search bound {bound} too small to decide membership of {degree:?} modulo face {face} (needs depth {needed})"
    )]
    SearchBoundExceeded {
        degree: Vec<i64>,
        face: usize,
        needed: u64,
        bound: u64,
    },
    #[error("class enumeration did not stabilize up to radius {radius}")]
    EnumerationUnstable { radius: i64 },
    #[error("class poset contains a cycle between classes {0} and {1}")]
    CycleDetected(usize, usize),
    #[error("cohomology rank not constant on class {class_id}: {ranks:?} at sampled degrees")]
    ClassRankMismatch { class_id: usize, ranks: Vec<Vec<usize>> },
    #[error("degree {degree:?} lies in no enumerated class")]
    UnknownClass { degree: Vec<i64> },
    #[error("integer overflow converting to machine integers")]
    Overflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::InvalidMatrix(_) => 4,
            Error::SearchBoundExceeded { .. } | Error::EnumerationUnstable { .. } => 3,
            Error::NotFullDimensional { .. }
            | Error::LatticeNotFull { .. }
            | Error::NotPointed
            | Error::NotScored
            | Error::IsNormal
            | Error::DimensionUnsupported { .. }
            | Error::HypothesisFailed(_)
            | Error::NoInteriorPoint
            | Error::GeneratorNotInSemigroup { .. } => 2,
            _ => 1,
        }
    }
}
