//! Synthetic minutiae corpora for desk-scale evaluation without real
//! fingerprint databases.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::minutiae::{Minutia, MinutiaKind};

/// Perturbation applied to produce a second impression of a finger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    /// Gaussian positional jitter (pixels).
    pub position_sigma: f64,
    /// Gaussian orientation jitter (radians).
    pub angle_sigma: f64,
    /// Fraction of minutiae deleted, and the same fraction of spurious ones inserted.
    pub churn: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Perturbation { position_sigma: 3.0, angle_sigma: 0.1, churn: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FingerShape {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
    pub min_separation: f64,
}

impl Default for FingerShape {
    fn default() -> Self {
        FingerShape { width: 400.0, height: 400.0, margin: 30.0, min_separation: 12.0 }
    }
}

fn random_minutia<R: Rng + ?Sized>(rng: &mut R, shape: &FingerShape) -> Minutia {
    let x = rng.gen_range(shape.margin..shape.width - shape.margin);
    let y = rng.gen_range(shape.margin..shape.height - shape.margin);
    let kind = if rng.gen_bool(0.5) { MinutiaKind::RidgeEnding } else { MinutiaKind::Bifurcation };
    Minutia::new(x, y, rng.gen_range(0.0..TAU), kind)
}

/// Rejection-samples `count` minutiae at least `min_separation` apart.
pub fn random_finger<R: Rng + ?Sized>(rng: &mut R, count: usize, shape: &FingerShape) -> Vec<Minutia> {
    let mut out: Vec<Minutia> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count && attempts < count * 1000 {
        attempts += 1;
        let m = random_minutia(rng, shape);
        if out.iter().all(|o| o.distance(&m) >= shape.min_separation) {
            out.push(m);
        }
    }
    out
}

/// Another impression of the same finger: jitter every minutia, delete
/// `round(churn·N)` of them and insert as many random ones.
pub fn impression<R: Rng + ?Sized>(
    rng: &mut R,
    finger: &[Minutia],
    perturbation: &Perturbation,
    shape: &FingerShape,
) -> Vec<Minutia> {
    let pos = Normal::new(0.0, perturbation.position_sigma).expect("position sigma");
    let ang = Normal::new(0.0, perturbation.angle_sigma).expect("angle sigma");
    let churn = (perturbation.churn * finger.len() as f64).round() as usize;

    let mut out: Vec<Minutia> = finger
        .iter()
        .map(|m| Minutia::new(m.x + pos.sample(rng), m.y + pos.sample(rng), m.theta + ang.sample(rng), m.kind))
        .map(|m| Minutia { x: m.x.clamp(0.0, shape.width - 1.0), y: m.y.clamp(0.0, shape.height - 1.0), ..m })
        .collect();
    out.shuffle(rng);
    out.truncate(out.len().saturating_sub(churn));
    for _ in 0..churn {
        out.push(random_minutia(rng, shape));
    }
    out.shuffle(rng);
    out
}
