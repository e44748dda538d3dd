use std::cmp::Ordering;

use super::TemplateError;
use crate::minutiae::{normalize_angle, Minutia};

/// Neighbour position expressed in the reference minutia's frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedOffset {
    pub chi: f64,
    pub gamma: f64,
}

impl RotatedOffset {
    pub fn distance(&self) -> f64 {
        self.chi.hypot(self.gamma)
    }
}

pub fn rotated_offset(reference: &Minutia, neighbor: &Minutia) -> RotatedOffset {
    let (dx, dy) = (neighbor.x - reference.x, neighbor.y - reference.y);
    let (s, c) = reference.theta.sin_cos();
    RotatedOffset { chi: dx * c + dy * s, gamma: dx * s - dy * c }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborDescriptor {
    pub d: f64,
    /// Circular mean of the two orientations, in `[0, 2π)`.
    pub theta_avg: f64,
    pub(crate) index: usize,
}

impl NeighborDescriptor {
    pub fn neighbor_index(&self) -> usize {
        self.index
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnnStructure {
    pub reference_index: usize,
    /// At most `k` entries, ascending by `d`.
    pub neighbors: Vec<NeighborDescriptor>,
}

fn average_orientation(a: f64, b: f64) -> f64 {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    normalize_angle((sa + sb).atan2(ca + cb))
}

/// Builds one k-nearest-neighbour structure per minutia. Distance ties are
/// broken by the lower minutia index.
pub fn compute_knns(minutiae: &[Minutia], k: usize) -> Result<Vec<KnnStructure>, TemplateError> {
    if minutiae.len() < 2 {
        return Err(TemplateError::InsufficientMinutiae { found: minutiae.len() });
    }
    if k == 0 {
        return Err(TemplateError::InvalidParams("k must be at least 1".into()));
    }
    let out = minutiae
        .iter()
        .enumerate()
        .map(|(r, reference)| {
            let mut neighbors: Vec<NeighborDescriptor> = minutiae
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != r)
                .map(|(j, m)| NeighborDescriptor {
                    d: rotated_offset(reference, m).distance(),
                    theta_avg: average_orientation(m.theta, reference.theta),
                    index: j,
                })
                .collect();
            neighbors.sort_by(|a, b| a.d.partial_cmp(&b.d).unwrap_or(Ordering::Equal).then(a.index.cmp(&b.index)));
            neighbors.truncate(k);
            KnnStructure { reference_index: r, neighbors }
        })
        .collect();
    Ok(out)
}
