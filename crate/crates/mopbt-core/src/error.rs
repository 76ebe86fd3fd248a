use core::fmt;

/// Errors reported by the core algorithms.
///
/// These are contract violations on the inputs; none of the algorithms
/// fail on well-formed data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// An objective vector (or weight vector) contained NaN or infinity.
    NonFiniteValue,
    /// Two vectors that must share a length did not.
    LengthMismatch { expected: usize, actual: usize },
    /// An input collection that must be nonempty was empty.
    EmptyInput,
    /// The operation is only defined for the listed objective counts.
    UnsupportedObjectiveCount { objectives: usize },
    /// A weight vector contained a zero where a positive entry is required.
    ZeroWeight,
    /// A constraint violation must be zero exactly when the point is feasible.
    InconsistentConstraint,
    /// A reference point coordinate was not strictly below every front point.
    InvalidReferencePoint,
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::NonFiniteValue => write!(f, "objective or weight value is not finite"),
            CoreError::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
            CoreError::EmptyInput => write!(f, "input collection is empty"),
            CoreError::UnsupportedObjectiveCount { objectives } => {
                write!(f, "operation not supported for {objectives} objectives")
            }
            CoreError::ZeroWeight => write!(f, "weight vector contains a zero entry"),
            CoreError::InconsistentConstraint => {
                write!(f, "constraint violation inconsistent with feasibility flag")
            }
            CoreError::InvalidReferencePoint => {
                write!(f, "reference point must lie strictly below the evaluated points")
            }
        }
    }
}

impl core::error::Error for CoreError {}
