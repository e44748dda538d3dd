//! Local/global matching scores between cancelable templates.

use num_complex::Complex64;
use thiserror::Error;

use crate::template::CancelableTemplate;

#[derive(Debug, Error)]
pub enum MatchError {
    #[error("entry length mismatch: {0} vs {1}")]
    Shape(usize, usize),
    #[error("templates were built with different parameters")]
    Incompatible,
    #[error("threshold {0} outside [0, 1]")]
    Threshold(f64),
}

/// `e × q` local matching scores, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    scores: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(rows: usize, cols: usize, scores: Vec<f64>) -> Result<Self, MatchError> {
        if scores.len() != rows * cols {
            return Err(MatchError::Shape(rows * cols, scores.len()));
        }
        Ok(SimilarityMatrix { rows, cols, scores })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.scores[i * self.cols + j]
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `1 − ‖a−b‖ / (‖a‖+‖b‖)` with complex L2 norms; two zero vectors score 1.
pub fn lms(a: &[Complex64], b: &[Complex64]) -> Result<f64, MatchError> {
    if a.len() != b.len() {
        return Err(MatchError::Shape(a.len(), b.len()));
    }
    let denom = norm(a) + norm(b);
    if denom == 0.0 {
        return Ok(1.0);
    }
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    Ok((1.0 - diff / denom).clamp(0.0, 1.0))
}

pub fn similarity(enrolled: &CancelableTemplate, query: &CancelableTemplate) -> Result<SimilarityMatrix, MatchError> {
    if enrolled.params_digest() != query.params_digest() || enrolled.p() != query.p() {
        return Err(MatchError::Incompatible);
    }
    let mut scores = Vec::with_capacity(enrolled.len() * query.len());
    for a in enrolled.entries() {
        for b in query.entries() {
            scores.push(lms(a, b)?);
        }
    }
    SimilarityMatrix::new(enrolled.len(), query.len(), scores)
}

/// Sum of all scores divided by the count of non-zero scores (0 when none).
pub fn gms(s: &SimilarityMatrix) -> f64 {
    let nonzero = s.scores.iter().filter(|&&v| v != 0.0).count();
    if nonzero == 0 {
        return 0.0;
    }
    s.scores.iter().sum::<f64>() / nonzero as f64
}

/// Integer percentages fed to the threshold circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointLSM {
    pub rows: usize,
    pub cols: usize,
    /// Row-major, each in `0..=100`.
    pub entries: Vec<u64>,
}

impl FixedPointLSM {
    pub fn sum(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// Row-major decimal integers, one matrix row per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for row in self.entries.chunks(self.cols.max(1)) {
            let line: Vec<String> = row.iter().map(u64::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut nums = text
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| format!("invalid integer {t:?}")));
        let rows = nums.next().ok_or("missing row count")?? as usize;
        let cols = nums.next().ok_or("missing column count")?? as usize;
        let entries = nums.collect::<Result<Vec<_>, _>>()?;
        if entries.len() != rows * cols {
            return Err(format!("expected {} entries, found {}", rows * cols, entries.len()));
        }
        Ok(FixedPointLSM { rows, cols, entries })
    }
}

/// `round(100·score)` (half away from zero), clamped to `[0, 100]`.
pub fn to_fixed_point(s: &SimilarityMatrix) -> FixedPointLSM {
    let entries = s.scores.iter().map(|&v| (100.0 * v).round().clamp(0.0, 100.0) as u64).collect();
    FixedPointLSM { rows: s.rows, cols: s.cols, entries }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchDecision {
    pub gms: f64,
    pub threshold: f64,
    pub accepted: bool,
}

pub fn decide(s: &SimilarityMatrix, threshold: f64) -> Result<MatchDecision, MatchError> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(MatchError::Threshold(threshold));
    }
    let g = gms(s);
    Ok(MatchDecision { gms: g, threshold, accepted: g >= threshold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cvec(v: &[(f64, f64)]) -> Vec<Complex64> {
        v.iter().map(|&(a, b)| Complex64::new(a, b)).collect()
    }

    #[test]
    fn identical_entries_score_one() {
        let t = cvec(&[(1.0, 2.0), (-3.0, 0.5)]);
        assert_eq!(lms(&t, &t).unwrap(), 1.0);
    }

    #[test]
    fn opposite_entries_score_zero() {
        let t = cvec(&[(1.0, 2.0), (-3.0, 0.5)]);
        let neg: Vec<Complex64> = t.iter().map(|c| -c).collect();
        assert!(lms(&t, &neg).unwrap().abs() < 1e-15);
    }

    #[test]
    fn zero_vectors_score_one() {
        let z = cvec(&[(0.0, 0.0); 3]);
        assert_eq!(lms(&z, &z).unwrap(), 1.0);
    }

    #[test]
    fn four_vectors_match_norm_ratio() {
        let a = cvec(&[(1.0, 0.0), (2.0, 1.0), (0.0, -1.0), (3.0, 3.0)]);
        let b = cvec(&[(0.5, 0.5), (-1.0, 1.0), (2.0, 0.0), (1.0, -2.0)]);
        // ‖a‖² = 1+5+1+18 = 25, ‖b‖² = 0.5+2+4+5 = 11.5
        // a−b = (0.5,−0.5),(3,0),(−2,−1),(2,5) → ‖a−b‖² = 0.5+9+5+29 = 43.5
        let expected = 1.0 - 43.5f64.sqrt() / (5.0 + 11.5f64.sqrt());
        assert!((lms(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(lms(&cvec(&[(1.0, 0.0)]), &cvec(&[])), Err(MatchError::Shape(1, 0))));
    }

    #[test]
    fn gms_examples() {
        let s = SimilarityMatrix::new(2, 2, vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert_eq!(gms(&s), 0.5);
        assert_eq!(gms(&SimilarityMatrix::new(2, 2, vec![0.0; 4]).unwrap()), 0.0);
        assert_eq!(gms(&SimilarityMatrix::new(2, 3, vec![1.0; 6]).unwrap()), 1.0);
        assert_eq!(gms(&SimilarityMatrix::new(0, 3, vec![]).unwrap()), 0.0);
    }

    #[test]
    fn fixed_point_rounding() {
        let s = SimilarityMatrix::new(1, 3, vec![0.305, 1.0, 0.0]).unwrap();
        assert_eq!(to_fixed_point(&s).entries, vec![31, 100, 0]);
    }

    #[test]
    fn fixed_point_text_round_trip() {
        let f = FixedPointLSM { rows: 2, cols: 3, entries: vec![1, 2, 3, 40, 50, 100] };
        assert_eq!(f.to_text(), "2 3\n1 2 3\n40 50 100\n");
        assert_eq!(FixedPointLSM::from_text(&f.to_text()).unwrap(), f);
        assert!(FixedPointLSM::from_text("2 2\n1 2 3").is_err());
    }

    #[test]
    fn decision_boundary_is_inclusive() {
        let s = SimilarityMatrix::new(1, 1, vec![0.30]).unwrap();
        assert!(decide(&s, 0.30).unwrap().accepted);
        let s = SimilarityMatrix::new(1, 1, vec![0.99]).unwrap();
        assert!(decide(&s, 0.30).unwrap().accepted);
        assert!(!decide(&SimilarityMatrix::new(1, 1, vec![0.29]).unwrap(), 0.35).unwrap().accepted);
        assert!(decide(&s, 1.5).is_err());
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
        proptest::collection::vec((-10.0f64..10.0, -10.0f64..10.0), n).prop_map(|v| cvec(&v))
    }

    proptest! {
        #[test]
        fn lms_symmetric_and_bounded(a in vec_strategy(6), b in vec_strategy(6)) {
            let ab = lms(&a, &b).unwrap();
            prop_assert_eq!(ab, lms(&b, &a).unwrap());
            prop_assert!((0.0..=1.0).contains(&ab));
        }

        #[test]
        fn gms_bounded(scores in proptest::collection::vec(0.0f64..=1.0, 0..40)) {
            let n = scores.len();
            let g = gms(&SimilarityMatrix::new(1, n, scores).unwrap());
            prop_assert!((0.0..=1.0 + 1e-12).contains(&g));
        }
    }
}
