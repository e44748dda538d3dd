//! Threshold circuits and their Groth16 keys, cached per score-matrix shape.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use zkfp_core::circuit::DEFAULT_ENTRY_BITS;
use zkfp_core::groth16::circuit_digest;
use zkfp_core::{build_threshold_circuit, setup, to_qap_with, to_r1cs, DomainKind, ProvingKey, ThresholdCircuit, VerificationKey, QAP};

use crate::{Config, Failure};

pub struct CircuitKeys {
    pub circuit: ThresholdCircuit,
    pub qap: QAP,
    pub pk: ProvingKey,
    pub vk: VerificationKey,
    pub pk_path: PathBuf,
    pub vk_path: PathBuf,
    /// Time spent in setup; zero when the keys came from the cache.
    pub setup_time: Duration,
}

/// Digest recorded at registration: every parameter that shapes the
/// statement except the matrix dimensions, which depend on the probe.
pub fn statement_family(cfg: &Config) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"zkfp/statement-family/v1");
    h.update(cfg.template_params().digest());
    h.update(cfg.bit_width.to_le_bytes());
    h.update(DEFAULT_ENTRY_BITS.to_le_bytes());
    h.update(b"radix2");
    h.update(cfg.curve.as_bytes());
    h.finalize().into()
}

pub fn key_paths(cfg: &Config, rows: usize, cols: usize) -> (PathBuf, PathBuf) {
    let spec = cfg.circuit_spec(rows, cols);
    let stem = format!("{rows}x{cols}-{}", &hex::encode(spec.digest())[..16]);
    let dir = cfg.keys.join("circuits");
    (dir.join(format!("{stem}.pk")), dir.join(format!("{stem}.vk")))
}

pub fn build(cfg: &Config, rows: usize, cols: usize) -> Result<(ThresholdCircuit, QAP), Failure> {
    let circuit = build_threshold_circuit(cfg.circuit_spec(rows, cols))?;
    let qap = to_qap_with(&to_r1cs(&circuit.circuit), DomainKind::Radix2)?;
    Ok((circuit, qap))
}

fn read_cached(pk_path: &Path, vk_path: &Path, digest: [u8; 32]) -> Option<(ProvingKey, VerificationKey)> {
    let pk = ProvingKey::from_bytes(&fs::read(pk_path).ok()?).ok()?;
    let vk = VerificationKey::from_bytes(&fs::read(vk_path).ok()?).ok()?;
    (pk.circuit_digest() == digest && vk.circuit_digest() == digest).then_some((pk, vk))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::create_dir_all(path.parent().expect("key directory")).map_err(|e| Failure::Storage(e.to_string()))?;
    fs::write(path, bytes).map_err(|e| Failure::Storage(format!("{}: {e}", path.display())))
}

/// Loads the cached keys for the shape, running setup when they are
/// missing or were made for a different circuit.
pub fn load_or_setup(cfg: &Config, rows: usize, cols: usize) -> Result<CircuitKeys, Failure> {
    let (circuit, qap) = build(cfg, rows, cols)?;
    let (pk_path, vk_path) = key_paths(cfg, rows, cols);
    let digest = circuit_digest(&qap);
    if let Some((pk, vk)) = read_cached(&pk_path, &vk_path, digest) {
        return Ok(CircuitKeys { circuit, qap, pk, vk, pk_path, vk_path, setup_time: Duration::ZERO });
    }
    log::info!("running setup for {rows}x{cols} ({} constraints)", qap.num_constraints());
    let start = Instant::now();
    let (pk, vk) = setup(&qap, cfg.contributors, &mut rand::rngs::OsRng)?;
    let setup_time = start.elapsed();
    write(&pk_path, &pk.to_bytes())?;
    write(&vk_path, &vk.to_bytes())?;
    Ok(CircuitKeys { circuit, qap, pk, vk, pk_path, vk_path, setup_time })
}
