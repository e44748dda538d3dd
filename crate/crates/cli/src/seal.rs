//! Per-user projection seeds, stored sealed under the user key.
//!
//! The file name is a hash of the user key and the seed is masked with a
//! salted hash of it, so the keys directory alone reveals neither.

use std::fs;
use std::path::{Path, PathBuf};

use rand::RngCore;
use sha2::{Digest, Sha256};
use zkfp_core::UserKey;

use crate::Failure;

const MAGIC: &[u8; 4] = b"ZKSD";
const VERSION: u8 = 1;
const RECORD_BYTES: usize = 4 + 1 + 16 + 32 + 16;

/// Key material for the template projection.
pub fn projection_key(seed: &[u8; 32]) -> Vec<u8> {
    let mut h = Sha256::new();
    h.update(b"zkfp/projection");
    h.update(seed);
    h.finalize().to_vec()
}

pub fn random_seed() -> [u8; 32] {
    let mut s = [0u8; 32];
    rand::rngs::OsRng.fill_bytes(&mut s);
    s
}

fn key_id(user_key: &UserKey) -> String {
    let mut h = Sha256::new();
    h.update(b"zkfp/key-id");
    h.update(user_key.0);
    hex::encode(&h.finalize()[..16])
}

fn mask(salt: &[u8; 16], user_key: &UserKey) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"zkfp/seal");
    h.update(salt);
    h.update(user_key.0);
    h.finalize().into()
}

fn tag(salt: &[u8; 16], user_key: &UserKey, seed: &[u8; 32]) -> [u8; 16] {
    let mut h = Sha256::new();
    h.update(b"zkfp/seal-check");
    h.update(salt);
    h.update(user_key.0);
    h.update(seed);
    h.finalize()[..16].try_into().expect("16 bytes")
}

pub fn seal_path(dir: &Path, user_key: &UserKey) -> PathBuf {
    dir.join("users").join(format!("{}.seal", key_id(user_key)))
}

pub fn store_seed(dir: &Path, user_key: &UserKey, seed: &[u8; 32]) -> Result<PathBuf, Failure> {
    let mut salt = [0u8; 16];
    rand::rngs::OsRng.fill_bytes(&mut salt);
    let m = mask(&salt, user_key);
    let mut out = Vec::with_capacity(RECORD_BYTES);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&salt);
    out.extend(seed.iter().zip(m).map(|(a, b)| a ^ b));
    out.extend_from_slice(&tag(&salt, user_key, seed));
    let path = seal_path(dir, user_key);
    fs::create_dir_all(path.parent().expect("users dir")).map_err(|e| Failure::Storage(e.to_string()))?;
    fs::write(&path, out).map_err(|e| Failure::Storage(format!("{}: {e}", path.display())))?;
    Ok(path)
}

pub fn load_seed(dir: &Path, user_key: &UserKey) -> Result<[u8; 32], Failure> {
    let path = seal_path(dir, user_key);
    let bytes = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Failure::UnknownKey(format!("no key material for user key {user_key}")))
        }
        Err(e) => return Err(Failure::Storage(format!("{}: {e}", path.display()))),
    };
    if bytes.len() != RECORD_BYTES || &bytes[..4] != MAGIC || bytes[4] != VERSION {
        return Err(Failure::Storage(format!("{}: malformed key record", path.display())));
    }
    let salt: [u8; 16] = bytes[5..21].try_into().expect("16 bytes");
    let m = mask(&salt, user_key);
    let mut seed = [0u8; 32];
    for (i, s) in seed.iter_mut().enumerate() {
        *s = bytes[21 + i] ^ m[i];
    }
    if bytes[53..] != tag(&salt, user_key, &seed) {
        return Err(Failure::Storage(format!("{}: key record failed its integrity check", path.display())));
    }
    Ok(seed)
}
