use thiserror::Error;

use crate::group::Group;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group mismatch: expected {expected:?}, found {found:?}")]
    GroupMismatch { expected: Group, found: Group },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The quadrature grid cannot integrate the requested integrand exactly.
    #[error(
        "insufficient Haar grid: integrand needs degree {required}{}, grid is exact to degree {available}{}",
        if *.half_integer { " (half-integer spin)" } else { "" },
        if *.full_cover { "" } else { " (rotation cover only)" }
    )]
    InsufficientGrid {
        required: usize,
        available: usize,
        half_integer: bool,
        full_cover: bool,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numerical invariant (hermiticity, trace, positivity, norm) was violated.
    #[error("numerical contract violated: {0}")]
    Contract(String),
}

pub type Result<T> = std::result::Result<T, Error>;
