//! Keyed cancelable templates built from k-nearest-neighbour structures.
//!
//! Per minutia: neighbour structure → quantized (distance, orientation)
//! grid → bit string → DFT → keyed random projection. The projection has
//! fewer rows than the spectrum length, so a template cannot be inverted
//! back to the bit strings, and re-keying yields an unrelated template.

mod format;
mod knns;
mod projection;
mod quantize;
mod spectral;

pub use self::format::{CancelableTemplate, TEMPLATE_MAGIC, TEMPLATE_VERSION};
pub use self::knns::{compute_knns, rotated_offset, KnnStructure, NeighborDescriptor, RotatedOffset};
pub use self::projection::{derive_projection, project, ProjectionMatrix};
pub use self::quantize::{quantize, to_bitstring, BitString, QuantGrid};
pub use self::spectral::{dft, SpectralVector};

use std::f64::consts::PI;

use num_complex::Complex64;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::minutiae::Minutia;

#[derive(Debug, Error)]
pub enum TemplateError {
    #[error("need at least 2 minutiae, found {found}")]
    InsufficientMinutiae { found: usize },
    #[error("invalid template parameters: {0}")]
    InvalidParams(String),
    #[error("projection must have fewer rows than columns (p={p}, q={q})")]
    NonInvertibility { p: usize, q: usize },
    #[error("projection key is empty")]
    EmptyKey,
    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("template format: {0}")]
    Format(String),
}

/// Grid and projection settings shared by enrolled and query templates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemplateParams {
    pub k: usize,
    /// Pixels per distance cell.
    pub cx: f64,
    /// Radians per orientation cell.
    pub cy: f64,
    pub d_max: f64,
    pub p: usize,
}

impl Default for TemplateParams {
    fn default() -> Self {
        TemplateParams { k: 5, cx: 6.0, cy: PI / 8.0, d_max: 120.0, p: 250 }
    }
}

impl TemplateParams {
    pub fn validate(&self) -> Result<(), TemplateError> {
        if self.k == 0 {
            return Err(TemplateError::InvalidParams("k must be at least 1".into()));
        }
        for (name, v) in [("cx", self.cx), ("cy", self.cy), ("d_max", self.d_max)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(TemplateError::InvalidParams(format!("{name} must be positive")));
            }
        }
        if self.wx() == 0 || self.wy() == 0 {
            return Err(TemplateError::InvalidParams("grid has no cells".into()));
        }
        if self.p == 0 || self.p >= self.t() {
            return Err(TemplateError::NonInvertibility { p: self.p, q: self.t() });
        }
        Ok(())
    }

    pub fn wx(&self) -> usize {
        grid_cells(self.d_max, self.cx)
    }

    pub fn wy(&self) -> usize {
        grid_cells(std::f64::consts::TAU, self.cy)
    }

    /// Bit-string length `wx · wy`.
    pub fn t(&self) -> usize {
        self.wx() * self.wy()
    }

    /// SHA-256 over the canonical little-endian encoding of the parameters.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"zkfp/template-params/v1");
        h.update((self.k as u64).to_le_bytes());
        h.update(self.cx.to_le_bytes());
        h.update(self.cy.to_le_bytes());
        h.update(self.d_max.to_le_bytes());
        h.update((self.p as u64).to_le_bytes());
        h.finalize().into()
    }
}

/// `⌊span / cell⌋`, tolerant of the rounding in e.g. `2π / (π/8)`.
pub(crate) fn grid_cells(span: f64, cell: f64) -> usize {
    (span / cell + 1e-9).floor() as usize
}

/// Full per-minutia pipeline producing one projected vector per minutia.
pub fn make_template(
    minutiae: &[Minutia],
    params: &TemplateParams,
    key: &[u8],
) -> Result<CancelableTemplate, TemplateError> {
    params.validate()?;
    let structures = compute_knns(minutiae, params.k)?;
    let projection = derive_projection(key, params.p, params.t())?;
    let entries = structures
        .iter()
        .map(|s| {
            let grid = quantize(s, params.cx, params.cy, params.d_max);
            let spectrum = dft(&to_bitstring(&grid));
            project(&projection, &spectrum)
        })
        .collect::<Result<Vec<Vec<Complex64>>, _>>()?;
    Ok(CancelableTemplate::new(entries, params.p, params.t(), params.digest()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minutiae::MinutiaKind;

    fn pts() -> Vec<Minutia> {
        vec![
            Minutia::new(10.0, 10.0, 0.3, MinutiaKind::RidgeEnding),
            Minutia::new(40.0, 25.0, 1.2, MinutiaKind::Bifurcation),
        ]
    }

    #[test]
    fn default_grid_is_20_by_16() {
        let p = TemplateParams::default();
        assert_eq!((p.wx(), p.wy(), p.t()), (20, 16, 320));
        p.validate().unwrap();
    }

    #[test]
    fn two_minutiae_give_two_entries() {
        let params = TemplateParams { k: 1, ..Default::default() };
        let t = make_template(&pts(), &params, b"key").unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.entries().iter().all(|e| e.len() == params.p));
    }

    #[test]
    fn template_is_deterministic() {
        let params = TemplateParams::default();
        let a = make_template(&pts(), &params, b"user-key").unwrap();
        let b = make_template(&pts(), &params, b"user-key").unwrap();
        assert_eq!(a, b);
        let c = make_template(&pts(), &params, b"other-key").unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_invertible_projection() {
        let params = TemplateParams { p: 320, ..Default::default() };
        assert!(matches!(make_template(&pts(), &params, b"k"), Err(TemplateError::NonInvertibility { .. })));
    }

    #[test]
    fn rejects_single_minutia() {
        let one = &pts()[..1];
        assert!(matches!(
            make_template(one, &TemplateParams::default(), b"k"),
            Err(TemplateError::InsufficientMinutiae { found: 1 })
        ));
    }

    #[test]
    fn digest_tracks_every_parameter() {
        let base = TemplateParams::default();
        let variants = [
            TemplateParams { k: 6, ..base },
            TemplateParams { cx: 5.0, ..base },
            TemplateParams { cy: 0.5, ..base },
            TemplateParams { d_max: 110.0, ..base },
            TemplateParams { p: 61, ..base },
        ];
        for v in variants {
            assert_ne!(v.digest(), base.digest());
        }
    }
}
