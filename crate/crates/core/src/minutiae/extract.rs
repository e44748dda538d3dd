use std::f64::consts::PI;

use super::{normalize_angle, BinaryImage, Minutia, MinutiaKind};

pub const DEFAULT_ORIENTATION_BLOCK: usize = 16;
pub const DEFAULT_MIN_DIST: f64 = 8.0;
pub const DEFAULT_BORDER: f64 = 10.0;

/// Cyclic 8-neighbourhood P1..P8, starting east and turning counter-clockwise
/// in image coordinates.
const CYCLE: [(isize, isize); 8] = [(1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)];

const TRACE_STEPS: usize = 8;

/// `½ Σ |P_i − P_{i+1}|` over the cyclic neighbourhood. Always in `0..=4`.
pub fn crossing_number(skel: &BinaryImage, x: usize, y: usize) -> u8 {
    let p: Vec<u8> = CYCLE
        .iter()
        .map(|(dx, dy)| skel.get_signed(x as isize + dx, y as isize + dy) as u8)
        .collect();
    let transitions: u8 = (0..8).map(|i| p[i].abs_diff(p[(i + 1) % 8])).sum();
    transitions / 2
}

pub fn extract_minutiae(skel: &BinaryImage) -> Vec<Minutia> {
    extract_minutiae_with_block(skel, DEFAULT_ORIENTATION_BLOCK)
}

/// Row-major scan emitting a minutia for every skeleton pixel with CN 1
/// (ridge ending) or CN 3 (bifurcation). Image-border pixels are skipped
/// since their neighbourhood is incomplete.
pub fn extract_minutiae_with_block(skel: &BinaryImage, block: usize) -> Vec<Minutia> {
    let (w, h) = (skel.width(), skel.height());
    let mut out = Vec::new();
    if w < 3 || h < 3 {
        return out;
    }
    let gradients = Gradients::new(skel);
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            if !skel.get(x, y) {
                continue;
            }
            let kind = match crossing_number(skel, x, y) {
                1 => MinutiaKind::RidgeEnding,
                3 => MinutiaKind::Bifurcation,
                _ => continue,
            };
            let axis = gradients.ridge_axis(x, y, block);
            let theta = match kind {
                MinutiaKind::RidgeEnding => orient_ending(skel, x, y, axis),
                MinutiaKind::Bifurcation => axis.rem_euclid(PI),
            };
            out.push(Minutia::new(x as f64, y as f64, theta, kind));
        }
    }
    out
}

/// Sobel gradients of the skeleton, used for least-squares block orientation.
struct Gradients {
    width: usize,
    height: usize,
    gx: Vec<f64>,
    gy: Vec<f64>,
}

impl Gradients {
    fn new(img: &BinaryImage) -> Self {
        let (w, h) = (img.width(), img.height());
        let v = |x: isize, y: isize| img.get_signed(x, y) as u8 as f64;
        let mut gx = vec![0.0; w * h];
        let mut gy = vec![0.0; w * h];
        for y in 0..h as isize {
            for x in 0..w as isize {
                let i = y as usize * w + x as usize;
                gx[i] = (v(x + 1, y - 1) + 2.0 * v(x + 1, y) + v(x + 1, y + 1))
                    - (v(x - 1, y - 1) + 2.0 * v(x - 1, y) + v(x - 1, y + 1));
                gy[i] = (v(x - 1, y + 1) + 2.0 * v(x, y + 1) + v(x + 1, y + 1))
                    - (v(x - 1, y - 1) + 2.0 * v(x, y - 1) + v(x + 1, y - 1));
            }
        }
        Gradients { width: w, height: h, gx, gy }
    }

    /// Ridge direction modulo π from doubled-angle averaging over a block.
    fn ridge_axis(&self, x: usize, y: usize, block: usize) -> f64 {
        let half = (block / 2).max(1);
        let (mut gxx, mut gxy) = (0.0, 0.0);
        for yy in y.saturating_sub(half)..(y + half).min(self.height) {
            for xx in x.saturating_sub(half)..(x + half).min(self.width) {
                let i = yy * self.width + xx;
                let (a, b) = (self.gx[i], self.gy[i]);
                gxx += a * a - b * b;
                gxy += 2.0 * a * b;
            }
        }
        if gxx == 0.0 && gxy == 0.0 {
            return 0.0;
        }
        // gradient direction is normal to the ridges
        0.5 * gxy.atan2(gxx) + PI / 2.0
    }
}

/// Resolves the π ambiguity of an ending by following its ridge backwards:
/// the minutia points away from the ridge body.
fn orient_ending(skel: &BinaryImage, x: usize, y: usize, axis: f64) -> f64 {
    let (mut cx, mut cy) = (x as isize, y as isize);
    let (mut px, mut py) = (cx, cy);
    for _ in 0..TRACE_STEPS {
        let next: Vec<(isize, isize)> = CYCLE
            .iter()
            .map(|(dx, dy)| (cx + dx, cy + dy))
            .filter(|&(nx, ny)| skel.get_signed(nx, ny) && (nx, ny) != (px, py) && (nx, ny) != (x as isize, y as isize))
            .collect();
        if next.len() != 1 {
            break;
        }
        px = cx;
        py = cy;
        cx = next[0].0;
        cy = next[0].1;
    }
    let (dx, dy) = ((x as isize - cx) as f64, (y as isize - cy) as f64);
    if dx == 0.0 && dy == 0.0 {
        return normalize_angle(axis);
    }
    let outward = dy.atan2(dx);
    let theta = if (axis - outward).cos() >= 0.0 { axis } else { axis + PI };
    normalize_angle(theta)
}

/// Drops minutiae inside the border band, then both members of every pair
/// closer than `min_dist`. Survivors keep their input order.
pub fn remove_spurious(minutiae: &[Minutia], skel: &BinaryImage, min_dist: f64, border: f64) -> Vec<Minutia> {
    let (w, h) = (skel.width() as f64, skel.height() as f64);
    let inside: Vec<&Minutia> = minutiae
        .iter()
        .filter(|m| m.x >= border && m.y >= border && m.x < w - border && m.y < h - border)
        .collect();
    let mut keep = vec![true; inside.len()];
    for i in 0..inside.len() {
        for j in i + 1..inside.len() {
            if inside[i].distance(inside[j]) < min_dist {
                keep[i] = false;
                keep[j] = false;
            }
        }
    }
    inside.into_iter().zip(keep).filter(|(_, k)| *k).map(|(m, _)| *m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn neighbourhood(positions: &[usize]) -> BinaryImage {
        let mut img = BinaryImage::empty(3, 3).unwrap();
        img.set(1, 1, true);
        for &p in positions {
            let (dx, dy) = CYCLE[p - 1];
            img.set((1 + dx) as usize, (1 + dy) as usize, true);
        }
        img
    }

    #[test]
    fn isolated_pixel_has_cn_zero() {
        let img = neighbourhood(&[]);
        assert_eq!(crossing_number(&img, 1, 1), 0);
        assert!(extract_minutiae(&img).is_empty());
    }

    #[test]
    fn single_neighbour_is_ridge_ending() {
        // one set neighbour gives exactly two transitions → CN 1
        let img = neighbourhood(&[3]);
        assert_eq!(crossing_number(&img, 1, 1), 1);
        let m = extract_minutiae(&img);
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].kind, MinutiaKind::RidgeEnding);
        assert_eq!((m[0].x, m[0].y), (1.0, 1.0));
    }

    #[test]
    fn three_separated_neighbours_are_bifurcation() {
        // positions 1, 4, 7: six transitions around the cycle → CN 3
        let img = neighbourhood(&[1, 4, 7]);
        assert_eq!(crossing_number(&img, 1, 1), 3);
        let m = extract_minutiae(&img);
        assert_eq!(m.iter().filter(|m| m.kind == MinutiaKind::Bifurcation).count(), 1);
    }

    #[test]
    fn horizontal_ending_points_outward() {
        // ridge running from x=2 to x=12 at y=5; the right end should face east (θ≈0)
        let mut img = BinaryImage::empty(20, 11).unwrap();
        for x in 2..=12 {
            img.set(x, 5, true);
        }
        let m = extract_minutiae_with_block(&img, 8);
        assert_eq!(m.len(), 2);
        let left = m.iter().find(|m| m.x == 2.0).unwrap();
        let right = m.iter().find(|m| m.x == 12.0).unwrap();
        assert!(right.theta.cos() > 0.99, "right theta {}", right.theta);
        assert!(left.theta.cos() < -0.99, "left theta {}", left.theta);
    }

    #[test]
    fn remove_spurious_empty() {
        let skel = BinaryImage::empty(400, 400).unwrap();
        assert!(remove_spurious(&[], &skel, 8.0, 10.0).is_empty());
    }

    #[test]
    fn remove_spurious_border_and_pairs() {
        let skel = BinaryImage::empty(400, 400).unwrap();
        let m = |x, y| Minutia::new(x, y, 0.0, MinutiaKind::RidgeEnding);
        assert!(remove_spurious(&[m(2.0, 2.0)], &skel, 8.0, 10.0).is_empty());
        let pair = [m(100.0, 100.0), m(103.0, 100.0), m(200.0, 200.0)];
        assert_eq!(remove_spurious(&pair, &skel, 5.0, 10.0), vec![m(200.0, 200.0)]);
    }

    proptest! {
        #[test]
        fn crossing_number_in_range(bits in proptest::collection::vec(any::<bool>(), 9)) {
            let img = BinaryImage::new(3, 3, bits).unwrap();
            prop_assert!(crossing_number(&img, 1, 1) <= 4);
        }

        #[test]
        fn extraction_emits_only_endings_and_bifurcations(bits in proptest::collection::vec(any::<bool>(), 144)) {
            let img = BinaryImage::new(12, 12, bits).unwrap();
            for m in extract_minutiae(&img) {
                let cn = crossing_number(&img, m.x as usize, m.y as usize);
                prop_assert!(cn == 1 || cn == 3);
                prop_assert!((0.0..std::f64::consts::TAU).contains(&m.theta));
            }
        }

        #[test]
        fn spurious_removal_is_subset_without_close_pairs(
            pts in proptest::collection::vec((0.0f64..100.0, 0.0f64..100.0), 0..30),
            min_dist in 1.0f64..20.0,
        ) {
            let skel = BinaryImage::empty(100, 100).unwrap();
            let input: Vec<Minutia> = pts.iter().map(|&(x, y)| Minutia::new(x, y, 0.0, MinutiaKind::Bifurcation)).collect();
            let out = remove_spurious(&input, &skel, min_dist, 5.0);
            // stable subsequence of the input
            let mut it = input.iter();
            for m in &out {
                prop_assert!(it.any(|i| i == m));
            }
            for i in 0..out.len() {
                for j in i + 1..out.len() {
                    prop_assert!(out[i].distance(&out[j]) >= min_dist);
                }
            }
        }
    }
}
