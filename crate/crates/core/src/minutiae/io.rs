use std::fmt::Write as _;
use std::path::Path;

use super::{GrayImage, Minutia, MinutiaKind, MinutiaeError};

/// Loads an 8-bit grayscale PNG or binary PGM (P5). Colour inputs are
/// converted to luma.
pub fn load_gray_image(path: impl AsRef<Path>) -> Result<GrayImage, MinutiaeError> {
    let img = image::open(path.as_ref()).map_err(|e| MinutiaeError::Decode(e.to_string()))?;
    let luma = img.into_luma8();
    let (w, h) = luma.dimensions();
    GrayImage::new(w as usize, h as usize, luma.into_raw())
}

pub fn load_minutiae(path: impl AsRef<Path>) -> Result<Vec<Minutia>, MinutiaeError> {
    let text = std::fs::read_to_string(path)?;
    parse_minutiae(&text)
}

/// Parses the `x y theta kind` line format. Blank lines and lines starting
/// with `#` are ignored; line numbers in errors are 1-based.
pub fn parse_minutiae(text: &str) -> Result<Vec<Minutia>, MinutiaeError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(MinutiaeError::Parse { line, message: format!("expected 4 fields, found {}", fields.len()) });
        }
        let num = |s: &str, name: &str| {
            s.parse::<f64>()
                .map_err(|_| MinutiaeError::Parse { line, message: format!("invalid {name} {s:?}") })
        };
        let x = num(fields[0], "x")?;
        let y = num(fields[1], "y")?;
        let theta = num(fields[2], "theta")?;
        for (name, v) in [("x", x), ("y", y), ("theta", theta)] {
            if !v.is_finite() {
                return Err(MinutiaeError::Validation { line, message: format!("{name} is not finite") });
            }
        }
        if x < 0.0 || y < 0.0 {
            return Err(MinutiaeError::Validation { line, message: "negative coordinate".into() });
        }
        let kind = match fields[3] {
            "E" => MinutiaKind::RidgeEnding,
            "B" => MinutiaKind::Bifurcation,
            other => {
                return Err(MinutiaeError::Parse { line, message: format!("unknown kind {other:?}") });
            }
        };
        out.push(Minutia::new(x, y, theta, kind));
    }
    Ok(out)
}

pub fn format_minutiae(minutiae: &[Minutia]) -> String {
    let mut s = String::from("# x y theta kind\n");
    for m in minutiae {
        let _ = writeln!(s, "{} {} {:.6} {}", m.x, m.y, m.theta, m.kind);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_input_is_empty_list() {
        assert!(parse_minutiae("").unwrap().is_empty());
        assert!(parse_minutiae("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn parses_single_line() {
        let m = parse_minutiae("100 200 1.5708 E").unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].x, m[0].y, m[0].kind), (100.0, 200.0, MinutiaKind::RidgeEnding));
        assert!((m[0].theta - PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn negative_theta_is_wrapped() {
        let m = parse_minutiae("100 200 -1.5708 E").unwrap();
        assert!((m[0].theta - 3.0 * PI / 2.0).abs() < 1e-4);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let err = parse_minutiae("# header\n1 2 0.5 E\n1 2 E\n").unwrap_err();
        assert!(matches!(err, MinutiaeError::Parse { line: 3, .. }), "{err:?}");
        let err = parse_minutiae("1 2 0.5 X").unwrap_err();
        assert!(matches!(err, MinutiaeError::Parse { line: 1, .. }));
    }

    #[test]
    fn non_finite_theta_is_validation_error() {
        let err = parse_minutiae("1 2 inf B").unwrap_err();
        assert!(matches!(err, MinutiaeError::Validation { line: 1, .. }));
        let err = parse_minutiae("1 2 NaN B").unwrap_err();
        assert!(matches!(err, MinutiaeError::Validation { .. }));
    }

    #[test]
    fn format_parses_back() {
        let src = vec![
            Minutia::new(10.0, 20.0, 0.25, MinutiaKind::RidgeEnding),
            Minutia::new(30.5, 40.0, 6.0, MinutiaKind::Bifurcation),
        ];
        let back = parse_minutiae(&format_minutiae(&src)).unwrap();
        for (a, b) in src.iter().zip(&back) {
            assert_eq!((a.x, a.y, a.kind), (b.x, b.y, b.kind));
            assert!((a.theta - b.theta).abs() < 1e-6);
        }
    }

    #[test]
    fn reads_pgm_and_png() {
        let dir = tempfile::tempdir().unwrap();
        let pgm = dir.path().join("a.pgm");
        let mut bytes = b"P5\n3 2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 10, 20, 30, 40, 250]);
        std::fs::write(&pgm, bytes).unwrap();
        let img = load_gray_image(&pgm).unwrap();
        assert_eq!((img.width(), img.height()), (3, 2));
        assert_eq!(img.pixels(), &[0, 10, 20, 30, 40, 250]);

        let png = dir.path().join("a.png");
        image::GrayImage::from_raw(3, 2, vec![5, 6, 7, 8, 9, 10]).unwrap().save(&png).unwrap();
        assert_eq!(load_gray_image(&png).unwrap().pixels(), &[5, 6, 7, 8, 9, 10]);
    }
}
