use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("matrix has column rank {rank} but {cols} columns")]
    NotFullRank { rank: usize, cols: usize },

    #[error("{what}: {count} elements exceeds the enumeration cap of {cap}")]
    TooLarge {
        what: String,
        count: String,
        cap: u64,
    },

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("relation map in degree {degree} is not equivariant for generator {generator}")]
    EquivarianceViolation { degree: usize, generator: usize },

    #[error("no shift up to {y_max} passed the semi-induced certificate")]
    CertificateExhausted { y_max: usize },

    #[error("no polynomial of degree <= {bound} interpolates the window exactly")]
    NoExactFit { bound: usize },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("coefficient ring mismatch")]
    RingMismatch,

    #[error("invalid representation: {0}")]
    InvalidRep(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn too_large(what: impl Into<String>, count: impl ToString, cap: u64) -> Self {
        Error::TooLarge {
            what: what.into(),
            count: count.to_string(),
            cap,
        }
    }
}
