use crate::partitions::Flavor;

/// Crate-wide error type. Variants carry enough context to reconstruct the
/// failing call from a log line.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("partition sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("invalid partition of {{1..{k}}}: {reason}")]
    InvalidPartition { k: usize, reason: String },

    #[error("multi-index has length {got}, expected {expected}")]
    IndexLengthMismatch { expected: usize, got: usize },

    #[error("multi-index entry {value} out of range 1..={n}")]
    IndexOutOfRange { value: usize, n: usize },

    #[error("matrix is singular: rank deficiency detected at pivot stage {stage}")]
    SingularMatrix { stage: usize },

    #[error("matrix dimensions incompatible: {0}")]
    MatrixShape(String),

    #[error("singular Gram matrix for k={k}, n={n}, flavor={flavor}")]
    SingularGram { k: usize, n: i64, flavor: Flavor },

    #[error("dimension n={n} is below the standing assumption n >= 4 (pass the small-n override to proceed)")]
    SmallDimension { n: i64 },

    #[error("truncation parameter s={s} out of range 0..={n}")]
    TruncationOutOfRange { s: i64, n: i64 },

    #[error("series composition requires zero constant term in the inner series")]
    NonzeroConstantTerm,

    #[error("series has no invertible linear term")]
    NonInvertibleLeadingTerm,

    #[error("intervals overlap or exceed 1..={n}")]
    BadIntervals { n: i64 },

    #[error("pattern label {label} does not name an interval (have {count})")]
    UnknownIntervalLabel { label: usize, count: usize },

    #[error("group of signed permutations on {n} symbols is too large to enumerate (limit n <= {limit})")]
    TooLargeForEnumeration { n: usize, limit: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("could not parse rational from {input:?}")]
    BadRational { input: String },
}

pub type Result<T> = std::result::Result<T, Error>;
