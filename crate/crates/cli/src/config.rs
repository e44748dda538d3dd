use std::path::{Path, PathBuf};

use zkfp_core::circuit::{ThresholdCircuitSpec, DEFAULT_BIT_WIDTH};
use zkfp_core::TemplateParams;

use crate::Failure;

pub const SUPPORTED_CURVE: &str = "bn254";

/// Operator settings. Files use `key = value` lines with `#` comments;
/// command-line flags override file values.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub k: usize,
    pub cx: f64,
    pub cy: f64,
    pub d_max: f64,
    pub p: usize,
    pub bit_width: u32,
    /// Percent, `0..=100`.
    pub threshold: u64,
    pub curve: String,
    pub store: PathBuf,
    pub ledger: PathBuf,
    /// Sealed user seeds and cached circuit keys.
    pub keys: PathBuf,
    pub resize: bool,
    /// Simulated phase-1 contributors per circuit setup.
    pub contributors: usize,
}

impl Default for Config {
    fn default() -> Self {
        let t = TemplateParams::default();
        Config {
            k: t.k,
            cx: t.cx,
            cy: t.cy,
            d_max: t.d_max,
            p: t.p,
            bit_width: DEFAULT_BIT_WIDTH,
            threshold: 34,
            curve: SUPPORTED_CURVE.into(),
            store: "zkfp-data/store".into(),
            ledger: "zkfp-data/ledger.bin".into(),
            keys: "zkfp-data/keys".into(),
            resize: false,
            contributors: 2,
        }
    }
}

fn parse_bool(v: &str) -> Option<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        let mut c = Config::default();
        c.apply_text(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
        Ok(c)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected key = value", i + 1))?;
            self.set(key.trim(), value.trim()).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("invalid value {v:?} for {key}"))
        }
        match key {
            "k" => self.k = num(key, value)?,
            "cx" => self.cx = num(key, value)?,
            "cy" => self.cy = num(key, value)?,
            "d_max" => self.d_max = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "bit_width" => self.bit_width = num(key, value)?,
            "threshold" => self.threshold = num(key, value)?,
            "curve" => self.curve = value.to_string(),
            "store" => self.store = value.into(),
            "ledger" => self.ledger = value.into(),
            "keys" => self.keys = value.into(),
            "resize" => self.resize = parse_bool(value).ok_or_else(|| format!("invalid boolean {value:?}"))?,
            "contributors" => self.contributors = num(key, value)?,
            _ => return Err(format!("unknown setting {key:?}")),
        }
        Ok(())
    }

    pub fn template_params(&self) -> TemplateParams {
        TemplateParams { k: self.k, cx: self.cx, cy: self.cy, d_max: self.d_max, p: self.p }
    }

    pub fn circuit_spec(&self, rows: usize, cols: usize) -> ThresholdCircuitSpec {
        ThresholdCircuitSpec { bit_width: self.bit_width, ..ThresholdCircuitSpec::new(rows, cols) }
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.template_params().validate().map_err(|e| Failure::Parse(format!("config: {e}")))?;
        if self.threshold > 100 {
            return Err(Failure::Parse(format!("config: threshold {} exceeds 100", self.threshold)));
        }
        if self.curve != SUPPORTED_CURVE {
            return Err(Failure::Parse(format!("config: unsupported curve {:?}", self.curve)));
        }
        if !(1..=32).contains(&self.bit_width) {
            return Err(Failure::Parse(format!("config: bit_width {} outside 1..=32", self.bit_width)));
        }
        if self.contributors == 0 {
            return Err(Failure::Parse("config: contributors must be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_text() {
        let mut c = Config::default();
        c.apply_text("# settings\nk = 4\nthreshold=40 # percent\n\nstore = /tmp/s\nresize = yes\n").unwrap();
        assert_eq!(c.k, 4);
        assert_eq!(c.threshold, 40);
        assert_eq!(c.store, PathBuf::from("/tmp/s"));
        assert!(c.resize);
        assert_eq!(c.p, Config::default().p);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut c = Config::default();
        assert!(c.apply_text("k 4").unwrap_err().contains("line 1"));
        assert!(c.apply_text("\nwho = me").unwrap_err().contains("line 2"));
        assert!(c.apply_text("p = many").is_err());
        assert!(c.apply_text("resize = maybe").is_err());
    }

    #[test]
    fn validation() {
        assert!(Config::default().validate().is_ok());
        let c = Config { threshold: 101, ..Config::default() };
        assert!(c.validate().is_err());
        let c = Config { curve: "bls12-381".into(), ..Config::default() };
        assert!(c.validate().is_err());
        let c = Config { k: 0, ..Config::default() };
        assert!(c.validate().is_err());
    }
}
