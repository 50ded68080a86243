use thiserror::Error as ThisError;

/// Crate-wide error type. Validation failures carry the structured
/// violation report of the module that produced them.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParamDomain(String),

    #[error("invalid dissection: {0}")]
    InvalidDissection(#[from] crate::dissection::DissectionViolation),

    #[error("invalid spider collection: {0}")]
    InvalidSpiders(#[from] crate::spiders::SpiderViolation),

    #[error("invalid pairing: {0}")]
    InvalidPairing(#[from] crate::pairings::PairingViolation),

    #[error("malformed code: {0}")]
    MalformedCode(String),

    #[error("diagonal ({0}, {1}) is not part of the dissection")]
    MissingDiagonal(u32, u32),

    #[error("size guard tripped: {0}")]
    SizeGuard(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub(crate) fn domain(cond: bool, msg: &str) -> Result<(), Error> {
    if cond {
        Ok(())
    } else {
        Err(Error::ParamDomain(msg.to_string()))
    }
}
