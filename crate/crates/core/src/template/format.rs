use num_complex::Complex64;
use serde::Serialize;

use super::TemplateError;

pub const TEMPLATE_MAGIC: &[u8; 4] = b"KNNT";
pub const TEMPLATE_VERSION: u8 = 1;

/// One projected complex vector per minutia, tagged with the digest of the
/// parameters that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct CancelableTemplate {
    entries: Vec<Vec<Complex64>>,
    p: usize,
    t: usize,
    params_digest: [u8; 32],
}

#[derive(Serialize)]
struct JsonView {
    version: u8,
    p: usize,
    t: usize,
    entries: Vec<Vec<[f64; 2]>>,
    params_digest: String,
}

impl CancelableTemplate {
    pub fn new(entries: Vec<Vec<Complex64>>, p: usize, t: usize, params_digest: [u8; 32]) -> Self {
        debug_assert!(entries.iter().all(|e| e.len() == p));
        CancelableTemplate { entries, p, t, params_digest }
    }

    pub fn entries(&self) -> &[Vec<Complex64>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn params_digest(&self) -> &[u8; 32] {
        &self.params_digest
    }

    /// `KNNT ‖ version ‖ p ‖ t ‖ N` (u32 LE) then `N·p` (re, im) f64 LE pairs,
    /// then the 32-byte parameter digest.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(17 + self.entries.len() * self.p * 16 + 32);
        out.extend_from_slice(TEMPLATE_MAGIC);
        out.push(TEMPLATE_VERSION);
        for v in [self.p, self.t, self.entries.len()] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for c in self.entries.iter().flatten() {
            out.extend_from_slice(&c.re.to_le_bytes());
            out.extend_from_slice(&c.im.to_le_bytes());
        }
        out.extend_from_slice(&self.params_digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, TemplateError> {
        let err = |m: &str| TemplateError::Format(m.to_string());
        if bytes.len() < 17 + 32 {
            return Err(err("truncated header"));
        }
        if &bytes[..4] != TEMPLATE_MAGIC {
            return Err(err("bad magic"));
        }
        if bytes[4] != TEMPLATE_VERSION {
            return Err(TemplateError::Format(format!("unsupported version {}", bytes[4])));
        }
        let word = |i: usize| u32::from_le_bytes(bytes[5 + 4 * i..9 + 4 * i].try_into().unwrap()) as usize;
        let (p, t, n) = (word(0), word(1), word(2));
        let body = n.checked_mul(p).and_then(|x| x.checked_mul(16)).ok_or_else(|| err("size overflow"))?;
        if bytes.len() != 17 + body + 32 {
            return Err(err("length does not match header"));
        }
        let f = |off: usize| f64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
        let entries = (0..n)
            .map(|i| {
                (0..p)
                    .map(|j| {
                        let off = 17 + (i * p + j) * 16;
                        Complex64::new(f(off), f(off + 8))
                    })
                    .collect()
            })
            .collect();
        let params_digest = bytes[17 + body..].try_into().unwrap();
        Ok(CancelableTemplate { entries, p, t, params_digest })
    }

    /// Human-readable debug export.
    pub fn to_json(&self) -> String {
        let view = JsonView {
            version: TEMPLATE_VERSION,
            p: self.p,
            t: self.t,
            entries: self.entries.iter().map(|e| e.iter().map(|c| [c.re, c.im]).collect()).collect(),
            params_digest: hex::encode(self.params_digest),
        };
        serde_json::to_string_pretty(&view).expect("template JSON")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bytes_round_trip(
            p in 1usize..6,
            raw in proptest::collection::vec((any::<f64>(), any::<f64>()), 0..30),
            digest in any::<[u8; 32]>(),
        ) {
            let n = raw.len() / p;
            let entries: Vec<Vec<Complex64>> = raw[..n * p].chunks(p).map(|c| c.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).collect();
            let t = CancelableTemplate::new(entries, p, p + 1, digest);
            let bytes = t.to_bytes();
            let back = CancelableTemplate::from_bytes(&bytes).unwrap();
            prop_assert_eq!(back.to_bytes(), bytes);
        }
    }

    #[test]
    fn header_layout() {
        let t = CancelableTemplate::new(vec![vec![Complex64::new(1.0, -2.0)]], 1, 4, [9; 32]);
        let b = t.to_bytes();
        assert_eq!(&b[..4], b"KNNT");
        assert_eq!(b[4], 1);
        assert_eq!(&b[5..17], &[1, 0, 0, 0, 4, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(b.len(), 17 + 16 + 32);
        assert_eq!(&b[33..], &[9; 32]);
    }

    #[test]
    fn rejects_truncation_and_bad_magic() {
        let t = CancelableTemplate::new(vec![vec![Complex64::new(1.0, 0.0); 3]; 2], 3, 8, [0; 32]);
        let b = t.to_bytes();
        assert!(CancelableTemplate::from_bytes(&b[..b.len() - 1]).is_err());
        let mut bad = b.clone();
        bad[0] = b'X';
        assert!(CancelableTemplate::from_bytes(&bad).is_err());
    }

    #[test]
    fn json_export_has_entries() {
        let t = CancelableTemplate::new(vec![vec![Complex64::new(0.5, 0.25)]], 1, 2, [0xab; 32]);
        let v: serde_json::Value = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(v["entries"][0][0][1], 0.25);
        assert_eq!(v["params_digest"].as_str().unwrap().len(), 64);
    }
}
