//! Content-addressed template store and a hash-chained append-only ledger.

mod cid;
mod ledger;
mod store;

use thiserror::Error;

pub use cid::{Cid, CODEC_RAW};
pub use ledger::{AuthAttempt, Ledger, LedgerRecord, Payload, Registration, UserKey, LEDGER_MAGIC, LEDGER_VERSION};
pub use store::Store;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegistryError {
    #[error("refusing to store empty content")]
    Empty,
    #[error("i/o: {0}")]
    Io(String),
    #[error("object {0} not found")]
    NotFound(Cid),
    #[error("object {0} is corrupted")]
    Corrupted(Cid),
    #[error("object {0} is not in the store")]
    Dangling(Cid),
    #[error("unknown user key {0}")]
    UnknownKey(UserKey),
    #[error("ledger chain broken at record {index}: {reason}")]
    Chain { index: usize, reason: String },
    #[error("decode: {0}")]
    Decode(String),
}

impl From<std::io::Error> for RegistryError {
    fn from(e: std::io::Error) -> Self {
        RegistryError::Io(e.to_string())
    }
}
