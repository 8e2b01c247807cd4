use thiserror::Error;

use crate::precubical::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid precubical set: {0}")]
    Invalid(ValidationReport),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("bad initial cell: {0}")]
    BadInitial(String),
    #[error("illegal path: {0}")]
    IllegalPath(String),
    #[error("HDA is not connected: cell {0} is unreachable")]
    NotConnected(String),
    #[error("HDA has a cycle through {0}")]
    Cyclic(String),
    #[error("HDA has repeating events along {0}")]
    RepeatingEvents(String),
    #[error("HDA is not consistent at {0}")]
    NotConsistent(String),
    #[error("invalid ST-structure: {0}")]
    InvalidSt(String),
    #[error("ST-structure is not regular: {0}")]
    NotRegular(String),
    #[error("Chu space is not extensional: state {0} occurs twice")]
    NonExtensional(String),
    #[error("invalid sculpture: {0}")]
    InvalidSculpture(String),
    #[error("partition is not proper: {0}")]
    NotProper(String),
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("engines disagree: {0}")]
    Disagreement(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid(_) => "Invalid",
            Error::Parse(_) => "Parse",
            Error::UnknownCell(_) => "UnknownCell",
            Error::BadInitial(_) => "BadInitial",
            Error::IllegalPath(_) => "IllegalPath",
            Error::NotConnected(_) => "NotConnected",
            Error::Cyclic(_) => "Cyclic",
            Error::RepeatingEvents(_) => "RepeatingEvents",
            Error::NotConsistent(_) => "NotConsistent",
            Error::InvalidSt(_) => "InvalidSt",
            Error::NotRegular(_) => "NotRegular",
            Error::NonExtensional(_) => "NonExtensional",
            Error::InvalidSculpture(_) => "InvalidSculpture",
            Error::NotProper(_) => "NotProper",
            Error::ResourceLimit(_) => "ResourceLimit",
            Error::InvalidComplex(_) => "InvalidComplex",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::Unsupported(_) => "Unsupported",
            Error::Disagreement(_) => "Disagreement",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
