use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} of size {size} exceeds the cap of {cap}")]
    SizeCap {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("photon-number mismatch: input carries {input}, output carries {output}")]
    PhotonNumberMismatch { input: u32, output: u32 },

    #[error("occupation {occupation} exceeds the species limit of {limit}")]
    OccupationAboveCutoff { occupation: u32, limit: u32 },

    #[error("numerical overflow while computing {0}")]
    Overflow(&'static str),

    #[error("ill-conditioned parameters: {0}")]
    IllConditioned(String),

    #[error("distributions are defined over different bases")]
    BasisMismatch,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
