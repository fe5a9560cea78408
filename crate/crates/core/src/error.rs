use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("the set is empty")]
    EmptySet,

    #[error("no element of the set left in residue class {residue} mod {modulus}")]
    NotFound { residue: i128, modulus: i128 },

    #[error("search for an element in residue class {residue} mod {modulus} exceeded the cap {cap}")]
    SearchExhausted { residue: i128, modulus: i128, cap: i64 },

    #[error("enumeration bound {requested} exceeds the declared cap {cap} of set `{set}`")]
    EnumerationCap { set: String, requested: u64, cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("series cap {cap} too small to decide: {context}")]
    CapTooSmall { cap: usize, context: String },

    #[error("cross-check failed: {0}")]
    CrossCheck(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
