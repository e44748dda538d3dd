use std::fs;
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use super::{Cid, RegistryError};

/// One file per object, named by the hex digest, under `root`.
#[derive(Debug, Clone)]
pub struct Store {
    root: PathBuf,
}

impl Store {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, RegistryError> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(Store { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_of(&self, cid: &Cid) -> PathBuf {
        self.root.join(cid.digest_hex())
    }

    pub fn contains(&self, cid: &Cid) -> bool {
        self.path_of(cid).is_file()
    }

    /// Idempotent; a corrupted copy already on disk is replaced.
    pub fn put(&self, content: &[u8]) -> Result<Cid, RegistryError> {
        if content.is_empty() {
            return Err(RegistryError::Empty);
        }
        let cid = Cid::of(content);
        let path = self.path_of(&cid);
        if fs::read(&path).is_ok_and(|b| cid.matches(&b)) {
            return Ok(cid);
        }
        let tmp = self.root.join(format!(".{}.{}.tmp", cid.digest_hex(), std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(content)?;
        f.sync_all()?;
        fs::rename(&tmp, &path)?;
        Ok(cid)
    }

    /// Re-hashes on every read.
    pub fn get(&self, cid: &Cid) -> Result<Vec<u8>, RegistryError> {
        let bytes = match fs::read(self.path_of(cid)) {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::NotFound => return Err(RegistryError::NotFound(*cid)),
            Err(e) => return Err(e.into()),
        };
        if !cid.matches(&bytes) {
            return Err(RegistryError::Corrupted(*cid));
        }
        Ok(bytes)
    }

    /// Every stored object whose contents no longer match its name.
    pub fn corrupted(&self) -> Result<Vec<PathBuf>, RegistryError> {
        let mut bad = Vec::new();
        for entry in fs::read_dir(&self.root)? {
            let path = entry?.path();
            let Some(name) = path.file_name().and_then(|n| n.to_str()) else { continue };
            if name.len() != 64 || !path.is_file() {
                continue;
            }
            let digest = hex::decode(name).ok().and_then(|d| <[u8; 32]>::try_from(d).ok());
            let ok = digest.is_some_and(|hash| Cid { hash, codec: super::CODEC_RAW }.matches(&fs::read(&path).unwrap_or_default()));
            if !ok {
                bad.push(path);
            }
        }
        bad.sort();
        Ok(bad)
    }
}
