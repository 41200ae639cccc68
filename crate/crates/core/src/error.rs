use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no modulus for GF({p}^{degree}) in the modulus table")]
    MissingModulus { p: u32, degree: u32 },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("invalid modulus for GF({p}^{degree}): {reason}")]
    InvalidModulus { p: u32, degree: u32, reason: String },

    #[error("malformed modulus table line {line}: {reason}")]
    ModulusTable { line: usize, reason: String },

    #[error("cannot span a subspace from all-zero vectors")]
    EmptySubspace,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters for {kind}: {clause}")]
    Parameter { kind: &'static str, clause: String },

    #[error("{0}")]
    NotDisjoint(&'static str),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("cubic vanishes identically")]
    VanishingCubic,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
