use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::RegistryError;

/// Multicodec tag for raw bytes.
pub const CODEC_RAW: u8 = 0x55;
/// Multihash prefix: SHA-256, 32-byte digest.
const MULTIHASH_PREFIX: [u8; 2] = [0x12, 0x20];

/// Content identifier: codec tag plus SHA-256 of the content.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cid {
    pub hash: [u8; 32],
    pub codec: u8,
}

impl Cid {
    pub const BYTES: usize = 3 + 32;

    pub fn of(content: &[u8]) -> Self {
        Cid { hash: Sha256::digest(content).into(), codec: CODEC_RAW }
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.hash)
    }

    /// Codec, multihash prefix, digest.
    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        out[0] = self.codec;
        out[1..3].copy_from_slice(&MULTIHASH_PREFIX);
        out[3..].copy_from_slice(&self.hash);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, RegistryError> {
        if bytes.len() != Self::BYTES || bytes[1..3] != MULTIHASH_PREFIX {
            return Err(RegistryError::Decode("not a sha2-256 cid".into()));
        }
        Ok(Cid { codec: bytes[0], hash: bytes[3..].try_into().expect("32 bytes") })
    }

    /// True when `content` hashes to this identifier.
    pub fn matches(&self, content: &[u8]) -> bool {
        Cid::of(content).hash == self.hash
    }
}

impl fmt::Display for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.to_bytes()))
    }
}

impl fmt::Debug for Cid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cid({self})")
    }
}

impl FromStr for Cid {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = hex::decode(s.trim()).map_err(|e| RegistryError::Decode(format!("cid: {e}")))?;
        Cid::from_bytes(&bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trip() {
        let c = Cid::of(b"hello");
        let s = c.to_string();
        assert!(s.starts_with("551220"));
        assert_eq!(s.len(), 70);
        assert_eq!(s.parse::<Cid>().unwrap(), c);
        assert!("5512".parse::<Cid>().is_err());
        assert!(s.replace("551220", "551320").parse::<Cid>().is_err());
    }

    #[test]
    fn matches_content() {
        let c = Cid::of(b"abc");
        assert!(c.matches(b"abc"));
        assert!(!c.matches(b"abd"));
    }
}
