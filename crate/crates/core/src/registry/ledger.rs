use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use rand::rngs::OsRng;
use rand::RngCore;
use sha2::{Digest, Sha256};

use super::{Cid, RegistryError, Store};

pub const LEDGER_MAGIC: &[u8; 4] = b"ZKLG";
pub const LEDGER_VERSION: u8 = 1;
const HEADER_BYTES: usize = 5;
const KIND_REGISTER: u8 = 1;
const KIND_AUTH: u8 = 2;

/// 128-bit handle returned at registration.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserKey(pub [u8; 16]);

impl fmt::Display for UserKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&hex::encode(self.0))
    }
}

impl fmt::Debug for UserKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UserKey({self})")
    }
}

impl FromStr for UserKey {
    type Err = RegistryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = hex::decode(s.trim()).map_err(|e| RegistryError::Decode(format!("user key: {e}")))?;
        let arr: [u8; 16] = bytes.try_into().map_err(|_| RegistryError::Decode("user key must be 32 hex characters".into()))?;
        Ok(UserKey(arr))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Registration {
    pub user_key: UserKey,
    pub cid: Cid,
    pub vk_digest: [u8; 32],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuthAttempt {
    pub user_key: UserKey,
    pub proof_digest: [u8; 32],
    pub verdict: bool,
    /// Unix seconds.
    pub timestamp: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Payload {
    Register(Registration),
    AuthAttempt(AuthAttempt),
}

impl Payload {
    pub fn user_key(&self) -> UserKey {
        match self {
            Payload::Register(r) => r.user_key,
            Payload::AuthAttempt(a) => a.user_key,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LedgerRecord {
    pub index: u64,
    pub prev_hash: [u8; 32],
    pub payload: Payload,
    /// Hash of this record, which the next record's `prev_hash` repeats.
    pub hash: [u8; 32],
}

fn genesis() -> [u8; 32] {
    Sha256::digest(b"zkfp/ledger/genesis").into()
}

fn record_hash(body: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"zkfp/ledger/record");
    h.update(body);
    h.finalize().into()
}

fn encode_body(index: u64, prev_hash: &[u8; 32], payload: &Payload) -> Vec<u8> {
    let mut b = Vec::with_capacity(128);
    b.extend_from_slice(&index.to_le_bytes());
    b.extend_from_slice(prev_hash);
    match payload {
        Payload::Register(r) => {
            b.push(KIND_REGISTER);
            b.extend_from_slice(&r.user_key.0);
            b.extend_from_slice(&r.cid.to_bytes());
            b.extend_from_slice(&r.vk_digest);
        }
        Payload::AuthAttempt(a) => {
            b.push(KIND_AUTH);
            b.extend_from_slice(&a.user_key.0);
            b.extend_from_slice(&a.proof_digest);
            b.push(a.verdict as u8);
            b.extend_from_slice(&a.timestamp.to_le_bytes());
        }
    }
    b
}

fn decode_body(body: &[u8]) -> Result<(u64, [u8; 32], Payload), String> {
    let take = |range: std::ops::Range<usize>| body.get(range).ok_or_else(|| "record body too short".to_string());
    let index = u64::from_le_bytes(take(0..8)?.try_into().expect("8 bytes"));
    let prev: [u8; 32] = take(8..40)?.try_into().expect("32 bytes");
    let user_key = UserKey(take(41..57)?.try_into().expect("16 bytes"));
    let (payload, len) = match body.get(40) {
        Some(&KIND_REGISTER) => {
            let cid = Cid::from_bytes(take(57..57 + Cid::BYTES)?).map_err(|e| e.to_string())?;
            let vk_digest = take(92..124)?.try_into().expect("32 bytes");
            (Payload::Register(Registration { user_key, cid, vk_digest }), 124)
        }
        Some(&KIND_AUTH) => {
            let proof_digest = take(57..89)?.try_into().expect("32 bytes");
            let verdict = match take(89..90)?[0] {
                0 => false,
                1 => true,
                v => return Err(format!("verdict byte {v}")),
            };
            let timestamp = u64::from_le_bytes(take(90..98)?.try_into().expect("8 bytes"));
            (Payload::AuthAttempt(AuthAttempt { user_key, proof_digest, verdict, timestamp }), 98)
        }
        k => return Err(format!("unknown record kind {k:?}")),
    };
    if body.len() != len {
        return Err(format!("record body has {} bytes, expected {len}", body.len()));
    }
    Ok((index, prev, payload))
}

/// Walks the whole file, checking framing, indices, the hash chain and that
/// every attempt refers to an earlier registration.
fn parse_verified(bytes: &[u8]) -> Result<Vec<LedgerRecord>, RegistryError> {
    let broken = |index: usize, reason: String| RegistryError::Chain { index, reason };
    if bytes.len() < HEADER_BYTES || &bytes[..4] != LEDGER_MAGIC || bytes[4] != LEDGER_VERSION {
        return Err(broken(0, "bad ledger header".into()));
    }
    let mut out: Vec<LedgerRecord> = Vec::new();
    let mut pos = HEADER_BYTES;
    let mut prev = genesis();
    while pos < bytes.len() {
        let i = out.len();
        let len_bytes = bytes.get(pos..pos + 4).ok_or_else(|| broken(i, "truncated length".into()))?;
        let len = u32::from_le_bytes(len_bytes.try_into().expect("4 bytes")) as usize;
        let body = bytes.get(pos + 4..pos + 4 + len).ok_or_else(|| broken(i, "truncated body".into()))?;
        let stored = bytes.get(pos + 4 + len..pos + 36 + len).ok_or_else(|| broken(i, "truncated hash".into()))?;
        let hash = record_hash(body);
        if stored != hash {
            return Err(broken(i, "record hash mismatch".into()));
        }
        let (index, prev_hash, payload) = decode_body(body).map_err(|e| broken(i, e))?;
        if index != i as u64 {
            return Err(broken(i, format!("index {index} out of sequence")));
        }
        if prev_hash != prev {
            return Err(broken(i, "previous-hash link mismatch".into()));
        }
        let known = out.iter().any(|r| matches!(r.payload, Payload::Register(g) if g.user_key == payload.user_key()));
        match payload {
            Payload::Register(_) if known => return Err(broken(i, "duplicate user key".into())),
            Payload::AuthAttempt(_) if !known => return Err(broken(i, "attempt for unregistered key".into())),
            _ => {}
        }
        out.push(LedgerRecord { index, prev_hash, payload, hash });
        prev = hash;
        pos += 36 + len;
    }
    Ok(out)
}

/// Append-only file of length-prefixed, hash-chained records.
///
/// Appends hold an exclusive file lock; reads hold a shared one.
#[derive(Debug, Clone)]
pub struct Ledger {
    path: PathBuf,
}

impl Ledger {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let path = path.into();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&path)?;
        f.lock()?;
        if f.metadata()?.len() == 0 {
            f.write_all(LEDGER_MAGIC)?;
            f.write_all(&[LEDGER_VERSION])?;
            f.sync_all()?;
        }
        Ok(Ledger { path })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    fn read_locked(f: &mut File) -> Result<Vec<LedgerRecord>, RegistryError> {
        let mut bytes = Vec::new();
        f.read_to_end(&mut bytes)?;
        parse_verified(&bytes)
    }

    /// All records, failing if the chain does not verify.
    pub fn records(&self) -> Result<Vec<LedgerRecord>, RegistryError> {
        let mut f = File::open(&self.path)?;
        f.lock_shared()?;
        Self::read_locked(&mut f)
    }

    /// Number of records when the whole chain verifies.
    pub fn verify_chain(&self) -> Result<usize, RegistryError> {
        self.records().map(|r| r.len())
    }

    fn append(&self, make: impl FnOnce(&[LedgerRecord]) -> Result<Payload, RegistryError>) -> Result<LedgerRecord, RegistryError> {
        let mut f = OpenOptions::new().read(true).append(true).open(&self.path)?;
        f.lock()?;
        let existing = Self::read_locked(&mut f)?;
        let payload = make(&existing)?;
        let index = existing.len() as u64;
        let prev_hash = existing.last().map_or_else(genesis, |r| r.hash);
        let body = encode_body(index, &prev_hash, &payload);
        let hash = record_hash(&body);
        let mut frame = Vec::with_capacity(body.len() + 36);
        frame.extend_from_slice(&(body.len() as u32).to_le_bytes());
        frame.extend_from_slice(&body);
        frame.extend_from_slice(&hash);
        f.write_all(&frame)?;
        f.sync_data()?;
        Ok(LedgerRecord { index, prev_hash, payload, hash })
    }

    pub fn register(&self, store: &Store, cid: Cid, vk_digest: [u8; 32]) -> Result<UserKey, RegistryError> {
        self.register_with_rng(store, cid, vk_digest, &mut OsRng)
    }

    pub fn register_with_rng<R: RngCore + ?Sized>(
        &self,
        store: &Store,
        cid: Cid,
        vk_digest: [u8; 32],
        rng: &mut R,
    ) -> Result<UserKey, RegistryError> {
        match store.get(&cid) {
            Ok(_) => {}
            Err(RegistryError::NotFound(c)) => return Err(RegistryError::Dangling(c)),
            Err(e) => return Err(e),
        }
        let record = self.append(|existing| {
            let taken = |k: &UserKey| existing.iter().any(|r| r.payload.user_key() == *k);
            let mut key = UserKey([0; 16]);
            loop {
                rng.fill_bytes(&mut key.0);
                if !taken(&key) {
                    break;
                }
            }
            Ok(Payload::Register(Registration { user_key: key, cid, vk_digest }))
        })?;
        Ok(record.payload.user_key())
    }

    pub fn lookup(&self, user_key: &UserKey) -> Result<Registration, RegistryError> {
        self.records()?
            .into_iter()
            .find_map(|r| match r.payload {
                Payload::Register(g) if g.user_key == *user_key => Some(g),
                _ => None,
            })
            .ok_or(RegistryError::UnknownKey(*user_key))
    }

    pub fn record_auth(&self, user_key: &UserKey, proof_digest: [u8; 32], verdict: bool) -> Result<LedgerRecord, RegistryError> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        self.append(|existing| {
            let known = existing.iter().any(|r| matches!(r.payload, Payload::Register(g) if g.user_key == *user_key));
            if !known {
                return Err(RegistryError::UnknownKey(*user_key));
            }
            Ok(Payload::AuthAttempt(AuthAttempt { user_key: *user_key, proof_digest, verdict, timestamp }))
        })
    }
}
