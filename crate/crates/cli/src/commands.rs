use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};
use zkfp_core::groth16::{verify_envelope, ProofEnvelope};
use zkfp_core::matcher::{decide, similarity, to_fixed_point};
use zkfp_core::minutiae::{load_gray_image, load_minutiae, minutiae_from_image, PipelineConfig};
use zkfp_core::registry::Payload;
use zkfp_core::{make_template, prove, verify, CancelableTemplate, FixedPointLSM, Groth16Error, Ledger, Minutia, Store, UserKey, VerificationKey};

use crate::circuits::{self, statement_family};
use crate::seal::{load_seed, projection_key, random_seed, store_seed};
use crate::{Config, Failure};

/// Where the probe or enrollment minutiae come from.
#[derive(Debug, Clone)]
pub enum Source {
    Minutiae(PathBuf),
    Image(PathBuf),
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::Internal(format!("writing output: {e}"))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(out_err)?
    };
}

fn read_minutiae(cfg: &Config, src: &Source) -> Result<Vec<Minutia>, Failure> {
    let m = match src {
        Source::Minutiae(p) => load_minutiae(p)?,
        Source::Image(p) => {
            let img = load_gray_image(p)?;
            minutiae_from_image(&img, &PipelineConfig { resize: cfg.resize, ..PipelineConfig::default() })?
        }
    };
    if m.is_empty() {
        return Err(Failure::Biometric("no minutiae found".into()));
    }
    Ok(m)
}

fn parse_seed(hex_seed: &str) -> Result<[u8; 32], Failure> {
    let bytes = hex::decode(hex_seed.trim()).map_err(|e| Failure::Parse(format!("seed: {e}")))?;
    bytes.try_into().map_err(|_| Failure::Parse("seed must be 64 hex characters".into()))
}

fn open_registry(cfg: &Config) -> Result<(Store, Ledger), Failure> {
    Ok((Store::open(&cfg.store)?, Ledger::open(&cfg.ledger)?))
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Failure::Storage(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| Failure::Storage(format!("{}: {e}", path.display())))
}

pub fn setup(cfg: &Config, rows: usize, cols: usize, out: &mut dyn Write) -> Result<u8, Failure> {
    let keys = circuits::load_or_setup(cfg, rows, cols)?;
    say!(out, "shape: {rows}x{cols}");
    say!(out, "constraints: {}", keys.qap.num_constraints());
    say!(out, "domain: {}", keys.qap.domain_size());
    say!(out, "public inputs: {}", keys.vk.num_public());
    say!(out, "circuit digest: {}", hex::encode(keys.pk.circuit_digest()));
    say!(out, "proving key: {}", keys.pk_path.display());
    say!(out, "verification key: {}", keys.vk_path.display());
    if keys.setup_time.is_zero() {
        say!(out, "setup: cached");
    } else {
        say!(out, "setup: {:.0} ms with {} contributors", ms(keys.setup_time), cfg.contributors);
    }
    Ok(0)
}

pub fn enroll(cfg: &Config, src: &Source, seed: Option<&str>, out: &mut dyn Write) -> Result<u8, Failure> {
    let minutiae = read_minutiae(cfg, src)?;
    let seed = match seed {
        Some(s) => parse_seed(s)?,
        None => random_seed(),
    };
    let template = make_template(&minutiae, &cfg.template_params(), &projection_key(&seed))?;
    let (store, ledger) = open_registry(cfg)?;
    let cid = store.put(&template.to_bytes())?;
    let user_key = ledger.register(&store, cid, statement_family(cfg))?;
    store_seed(&cfg.keys, &user_key, &seed)?;
    say!(out, "user key: {user_key}");
    say!(out, "cid: {cid}");
    say!(out, "entries: {}", template.len());
    Ok(0)
}

pub fn authenticate(
    cfg: &Config,
    user_key: &str,
    src: &Source,
    proof_out: Option<&Path>,
    out: &mut dyn Write,
) -> Result<u8, Failure> {
    let user_key: UserKey = user_key.parse()?;
    let (store, ledger) = open_registry(cfg)?;
    let registration = ledger.lookup(&user_key)?;
    if registration.vk_digest != statement_family(cfg) {
        return Err(Failure::Parse("template or circuit settings differ from those used at enrollment".into()));
    }
    let seed = load_seed(&cfg.keys, &user_key)?;
    let enrolled = CancelableTemplate::from_bytes(&store.get(&registration.cid)?)?;
    let minutiae = read_minutiae(cfg, src)?;
    let query = make_template(&minutiae, &cfg.template_params(), &projection_key(&seed))?;
    drop(minutiae);

    let sim = similarity(&enrolled, &query)?;
    let lsm = to_fixed_point(&sim);
    let decision = decide(&sim, cfg.threshold as f64 / 100.0)?;
    let (circuit, _) = circuits::build(cfg, lsm.rows, lsm.cols)?;

    say!(out, "user key: {user_key}");
    say!(out, "cid: {}", registration.cid);
    say!(out, "lsm: {}x{}", lsm.rows, lsm.cols);
    say!(out, "mean score: {:.2}", lsm.sum() as f64 / lsm.entries.len() as f64);
    say!(out, "gms: {:.4}", decision.gms);
    say!(out, "threshold: {}", cfg.threshold);

    let (verdict, proof_digest, proof_path) = match circuit.witness(&lsm, cfg.threshold) {
        Err(zkfp_core::CircuitError::Unsatisfied { .. }) => (false, [0u8; 32], None),
        Err(e) => return Err(e.into()),
        Ok(witness) => {
            let keys = circuits::load_or_setup(cfg, lsm.rows, lsm.cols)?;
            let proof = prove(&keys.pk, &keys.qap, &witness, &mut rand::rngs::OsRng)?;
            let envelope = ProofEnvelope {
                circuit_digest: keys.pk.circuit_digest(),
                public_inputs: circuit.public_values(&lsm, cfg.threshold)?,
                proof,
            };
            let valid = verify_envelope(&keys.vk, &envelope)?;
            let bytes = envelope.to_bytes()?;
            let path = match proof_out {
                Some(p) => p.to_path_buf(),
                None => {
                    let n = ledger.records()?.len();
                    let dir = cfg.ledger.parent().unwrap_or(Path::new("."));
                    dir.join("proofs").join(format!("{user_key}-{n}.zkfp"))
                }
            };
            write_file(&path, &bytes)?;
            (valid, Sha256::digest(&bytes).into(), Some(path))
        }
    };
    let record = ledger.record_auth(&user_key, proof_digest, verdict)?;
    say!(out, "verdict: {}", if verdict { "accepted" } else { "rejected" });
    match proof_path {
        Some(p) => say!(out, "proof: {}", p.display()),
        None => say!(out, "proof: none (score below threshold)"),
    }
    say!(out, "ledger record: {}", record.index);
    Ok(0)
}

pub fn prove_lsm(cfg: &Config, lsm_path: &Path, threshold: u64, proof_out: &Path, out: &mut dyn Write) -> Result<u8, Failure> {
    if threshold > 100 {
        return Err(Failure::Parse(format!("threshold {threshold} exceeds 100")));
    }
    let text = fs::read_to_string(lsm_path).map_err(|e| Failure::Parse(format!("{}: {e}", lsm_path.display())))?;
    let lsm = FixedPointLSM::from_text(&text).map_err(|e| Failure::Parse(format!("{}: {e}", lsm_path.display())))?;
    if lsm.entries.is_empty() {
        return Err(Failure::Parse("score matrix is empty".into()));
    }
    let (circuit, _) = circuits::build(cfg, lsm.rows, lsm.cols)?;
    let witness = circuit
        .witness(&lsm, threshold)
        .map_err(|e| Failure::Biometric(format!("statement does not hold for threshold {threshold}: {e}")))?;
    let keys = circuits::load_or_setup(cfg, lsm.rows, lsm.cols)?;
    let start = Instant::now();
    let proof = prove(&keys.pk, &keys.qap, &witness, &mut rand::rngs::OsRng)?;
    let elapsed = start.elapsed();
    let envelope = ProofEnvelope {
        circuit_digest: keys.pk.circuit_digest(),
        public_inputs: circuit.public_values(&lsm, threshold)?,
        proof,
    };
    let bytes = envelope.to_bytes()?;
    write_file(proof_out, &bytes)?;
    say!(out, "shape: {}x{}", lsm.rows, lsm.cols);
    say!(out, "threshold: {threshold}");
    say!(out, "proof: {}", proof_out.display());
    say!(out, "proof bytes: {}", zkfp_core::Proof::BYTES);
    say!(out, "envelope bytes: {}", bytes.len());
    say!(out, "verification key: {}", keys.vk_path.display());
    say!(out, "prove time: {:.1} ms", ms(elapsed));
    Ok(0)
}

/// Exit 0 for a valid proof and 1 for an invalid one.
pub fn verify_files(proof_path: &Path, vk_path: &Path, out: &mut dyn Write) -> Result<u8, Failure> {
    let read = |p: &Path| fs::read(p).map_err(|e| Failure::Parse(format!("{}: {e}", p.display())));
    let envelope = ProofEnvelope::from_bytes(&read(proof_path)?)?;
    let vk = VerificationKey::from_bytes(&read(vk_path)?)?;
    if let Some(t) = envelope.public_inputs.first().and_then(|t| t.to_u64()) {
        say!(out, "threshold: {t}");
    }
    say!(out, "public inputs: {}", envelope.public_inputs.len());
    let start = Instant::now();
    let result = verify_envelope(&vk, &envelope);
    let elapsed = start.elapsed();
    let (valid, note) = match result {
        Ok(v) => (v, ""),
        Err(Groth16Error::DigestMismatch) => (false, " (circuit digest mismatch)"),
        Err(Groth16Error::PublicInputCount { .. }) => (false, " (public input count mismatch)"),
        Err(e) => return Err(e.into()),
    };
    say!(out, "result: {}{note}", if valid { "valid" } else { "invalid" });
    say!(out, "verify time: {:.2} ms", ms(elapsed));
    Ok(if valid { 0 } else { 1 })
}

pub fn verify_chain(cfg: &Config, out: &mut dyn Write) -> Result<u8, Failure> {
    let (store, ledger) = open_registry(cfg)?;
    let records = match ledger.records() {
        Ok(r) => r,
        Err(e) => {
            say!(out, "ledger: {e}");
            return Err(e.into());
        }
    };
    say!(out, "ledger: ok ({} records)", records.len());
    let mut registered = 0;
    for r in &records {
        if let Payload::Register(g) = r.payload {
            if let Err(e) = store.get(&g.cid) {
                say!(out, "store: {e}");
                return Err(e.into());
            }
            registered += 1;
        }
    }
    let bad = store.corrupted()?;
    if let Some(p) = bad.first() {
        say!(out, "store: corrupted object {}", p.display());
        return Err(Failure::Storage(format!("{} corrupted objects", bad.len())));
    }
    say!(out, "store: ok ({registered} registered objects)");
    Ok(0)
}

pub fn bench(cfg: &Config, rows: usize, cols: usize, prove_runs: usize, verify_runs: usize, out: &mut dyn Write) -> Result<u8, Failure> {
    let keys = circuits::load_or_setup(cfg, rows, cols)?;
    // a fixed statement well inside the threshold
    let lsm = FixedPointLSM { rows, cols, entries: (0..rows * cols).map(|i| 40 + (i as u64 * 7) % 50).collect() };
    let threshold = cfg.threshold.min(40);
    let witness = keys.circuit.witness(&lsm, threshold)?;
    let public = keys.circuit.public_values(&lsm, threshold)?;

    let mut proofs = Vec::with_capacity(prove_runs.max(1));
    let start = Instant::now();
    for _ in 0..prove_runs.max(1) {
        proofs.push(prove(&keys.pk, &keys.qap, &witness, &mut rand::rngs::OsRng)?);
    }
    let prove_mean = start.elapsed() / prove_runs.max(1) as u32;

    let start = Instant::now();
    for i in 0..verify_runs.max(1) {
        if !verify(&keys.vk, &proofs[i % proofs.len()], &public)? {
            return Err(Failure::Internal("benchmark proof failed to verify".into()));
        }
    }
    let verify_mean = start.elapsed() / verify_runs.max(1) as u32;
    let envelope = ProofEnvelope { circuit_digest: keys.pk.circuit_digest(), public_inputs: public, proof: proofs[0] };

    say!(out, "shape: {rows}x{cols}");
    say!(out, "constraints: {}", keys.qap.num_constraints());
    say!(out, "domain: {}", keys.qap.domain_size());
    if keys.setup_time.is_zero() {
        say!(out, "setup: cached");
    } else {
        say!(out, "setup: {:.0} ms", ms(keys.setup_time));
    }
    say!(out, "proof size: {} bytes", proofs[0].to_bytes().len());
    say!(out, "envelope (header + proof): {} bytes", ProofEnvelope::FIXED_BYTES);
    say!(out, "envelope with public inputs: {} bytes", envelope.to_bytes()?.len());
    say!(out, "prove mean: {:.1} ms over {} runs", ms(prove_mean), prove_runs.max(1));
    say!(out, "verify mean: {:.2} ms over {} runs", ms(verify_mean), verify_runs.max(1));
    Ok(0)
}
