use thiserror::Error;

/// Everything that can go wrong while building frames and mass functions or
/// evaluating measures over them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame must contain at least one element")]
    EmptyFrame,
    #[error("frame has {0} elements; at most 64 are supported")]
    TooManyElements(usize),
    #[error("duplicate frame label {0:?}")]
    DuplicateLabel(String),
    #[error("label {0:?} is empty, padded with whitespace, or contains the reserved ',' separator")]
    ReservedCharacter(String),

    #[error("subset mask {0:#x} does not fit the frame")]
    SubsetOutOfFrame(u64),
    #[error("negative mass {mass} on {subset}")]
    NegativeMass { subset: String, mass: f64 },
    #[error("the empty set carries mass {0}")]
    EmptySetMass(f64),
    #[error("masses sum to {0}, expected 1")]
    SumNotOne(f64),
    #[error("mass {mass} on {subset} is not a finite number")]
    NonFiniteMass { subset: String, mass: f64 },

    #[error("malformed document: {0}")]
    MalformedDocument(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("subset {0} appears more than once")]
    DuplicateSubset(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("order must be a positive integer, got {0}")]
    InvalidOrder(u64),
    #[error("integer overflow evaluating {0}")]
    Overflow(String),
    #[error("split tree would hold {leaves} leaves, above the limit of {limit}")]
    TreeTooLarge { leaves: u128, limit: u64 },
    #[error("no convergence after {iterations} iterations (last increase {last_increase})")]
    NonConvergence { iterations: usize, last_increase: f64 },
    #[error("frame with {0} elements is too large for this operation")]
    FrameTooLarge(usize),
    #[error("invalid grid step {0}")]
    StepInvalid(f64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
