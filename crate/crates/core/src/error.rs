//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A direction was requested from a vector of (near-)zero length.
    #[error("zero vector where a nonzero direction is required")]
    ZeroVector,
    /// A pure (scalar-free) quaternion was required.
    #[error("quaternion has scalar part {0:e} where a pure quaternion is required")]
    NotPure(f64),
    /// The straight segment underlying a geometric phase passes through the
    /// coordinate origin (antiparallel endpoints), where the phase is singular.
    #[error("translation segment passes through the origin")]
    SingularSegment,
    /// An intermediate polynomial exceeded the configured total-degree cap.
    #[error("total degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },
    /// The right-nested bracket projection failed to reproduce the element.
    #[error("homogeneous element of degree {0} is not a Lie element")]
    NotLieElement(usize),
    /// Malformed user input (expression syntax, family name, point data).
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
