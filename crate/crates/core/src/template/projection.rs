use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use super::{SpectralVector, TemplateError};

/// User-specific `p × q` Gaussian matrix, `p < q`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl ProjectionMatrix {
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self, TemplateError> {
        if entries.len() != rows * cols {
            return Err(TemplateError::Shape { expected: rows * cols, found: entries.len() });
        }
        Ok(ProjectionMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

/// Uniform in `(0, 1]` from the top 53 bits.
fn open_unit(rng: &mut ChaCha20Rng) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Deterministic matrix for `(key, p, q)`.
///
/// Seed: `SHA-256("zkfp/projection/v1" ‖ key ‖ p as u64 LE ‖ q as u64 LE)`
/// into ChaCha20. Entries are standard normal via Box–Muller, consuming
/// two 53-bit uniforms per pair of entries in row-major order.
pub fn derive_projection(key: &[u8], p: usize, q: usize) -> Result<ProjectionMatrix, TemplateError> {
    if key.is_empty() {
        return Err(TemplateError::EmptyKey);
    }
    if p == 0 || p >= q {
        return Err(TemplateError::NonInvertibility { p, q });
    }
    let mut h = Sha256::new();
    h.update(b"zkfp/projection/v1");
    h.update(key);
    h.update((p as u64).to_le_bytes());
    h.update((q as u64).to_le_bytes());
    let mut rng = ChaCha20Rng::from_seed(h.finalize().into());

    let n = p * q;
    let mut entries = Vec::with_capacity(n + 1);
    while entries.len() < n {
        let u1 = open_unit(&mut rng);
        let u2 = open_unit(&mut rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        entries.push(r * c);
        entries.push(r * s);
    }
    entries.truncate(n);
    Ok(ProjectionMatrix { rows: p, cols: q, entries })
}

/// Real matrix times complex vector.
pub fn project(r: &ProjectionMatrix, v: &SpectralVector) -> Result<Vec<Complex64>, TemplateError> {
    if v.len() != r.cols {
        return Err(TemplateError::Shape { expected: r.cols, found: v.len() });
    }
    Ok((0..r.rows).map(|i| r.row(i).iter().zip(&v.values).map(|(a, b)| b * *a).sum()).collect())
}
