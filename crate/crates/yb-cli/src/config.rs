use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

pub const DEFAULT_SEED: u64 = 1;

/// Parse `re,im` or a bare real.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "0"),
    };
    let re: f64 = re.parse().map_err(|_| format!("bad real part in '{s}'"))?;
    let im: f64 = im.parse().map_err(|_| format!("bad imaginary part in '{s}'"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("non-finite value '{s}'"));
    }
    Ok(C64::new(re, im))
}

/// Everything a suite or an emit call may read. `None` means "sample it" for
/// suites and "use the default" for emit.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub family: Option<String>,
    pub n: Option<usize>,
    pub target: Option<String>,
    pub u: Option<C64>,
    pub eta: Option<C64>,
    pub tau: Option<C64>,
    pub alpha: Option<C64>,
    pub beta: Option<C64>,
    pub s: Option<C64>,
    pub trunc_tol: Option<f64>,
    pub max_terms: Option<usize>,
    pub from_file: Option<PathBuf>,
    pub timing: bool,
}

pub const CONFIG_KEYS: [&str; 16] = [
    "seed", "tol", "samples", "family", "N", "target", "u", "eta", "tau", "alpha", "beta", "s", "trunc_tol",
    "max_terms", "from-file", "timing",
];

/// Flat `key = value` lines; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key = value", k + 1)))?;
        let key = key.trim().replace('_', "-");
        let key = match key.as_str() {
            "trunc-tol" => "trunc_tol".to_string(),
            "max-terms" => "max_terms".to_string(),
            "n" => "N".to_string(),
            _ => key,
        };
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key '{key}'", k + 1)));
        }
        out.insert(key, val.trim().to_string());
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    parse_config_text(&text)
}

fn from_map<T: FromStr>(map: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, CliError>
where
    T::Err: Display,
{
    map.get(key)
        .map(|v| v.parse::<T>().map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
        .transpose()
}

fn complex_from_map(map: &BTreeMap<String, String>, key: &str) -> Result<Option<C64>, CliError> {
    map.get(key)
        .map(|v| parse_complex(v).map_err(|e| CliError::Usage(format!("config {key}: {e}"))))
        .transpose()
}

impl RunConfig {
    /// Fill unset fields from a config map. Fields already set (flags) win.
    pub fn fill_from(&mut self, map: &BTreeMap<String, String>, seed_given: bool) -> Result<(), CliError> {
        if !seed_given {
            if let Some(s) = from_map(map, "seed")? {
                self.seed = s;
            }
        }
        macro_rules! fill {
            ($field:ident, $key:expr) => {
                if self.$field.is_none() {
                    self.$field = from_map(map, $key)?;
                }
            };
        }
        macro_rules! fill_c {
            ($field:ident, $key:expr) => {
                if self.$field.is_none() {
                    self.$field = complex_from_map(map, $key)?;
                }
            };
        }
        fill!(tol, "tol");
        fill!(samples, "samples");
        fill!(family, "family");
        fill!(n, "N");
        fill!(target, "target");
        fill!(trunc_tol, "trunc_tol");
        fill!(max_terms, "max_terms");
        fill!(from_file, "from-file");
        fill_c!(u, "u");
        fill_c!(eta, "eta");
        fill_c!(tau, "tau");
        fill_c!(alpha, "alpha");
        fill_c!(beta, "beta");
        fill_c!(s, "s");
        if !self.timing {
            self.timing = from_map::<bool>(map, "timing")?.unwrap_or(false);
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(t) = self.tol {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(CliError::Usage(format!("tolerance must be a finite value >= 0, got {t}")));
            }
        }
        if self.samples == Some(0) {
            return Err(CliError::Usage("sample count must be at least 1".into()));
        }
        if let Some(t) = self.trunc_tol {
            if !(t > 0.0) {
                return Err(CliError::Usage(format!("trunc_tol must be positive, got {t}")));
            }
        }
        if self.max_terms == Some(0) {
            return Err(CliError::Usage("max_terms must be at least 1".into()));
        }
        if let Some(tau) = self.tau {
            if !(tau.im > 0.0) {
                return Err(CliError::Usage(format!("tau must have positive imaginary part, got {tau}")));
            }
        }
        if let Some(n) = self.n {
            if !(2..=yb_sln::MAX_N).contains(&n) {
                return Err(CliError::Usage(format!("N must lie in 2..={}, got {n}", yb_sln::MAX_N)));
            }
        }
        Ok(())
    }

    pub fn samples_or(&self, default: usize) -> usize {
        self.samples.unwrap_or(default)
    }
}

/// ChaCha8 stream seeded from the run seed. Every draw consumes the same
/// number of values whether or not a parameter is fixed, so fixing one flag
/// does not shift the others.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.gen::<f64>()
    }

    pub fn complex(&mut self, re: (f64, f64), im: (f64, f64)) -> C64 {
        let a = self.uniform(re.0, re.1);
        let b = self.uniform(im.0, im.1);
        C64::new(a, b)
    }

    /// Draw, then let a fixed value override it.
    pub fn or_fixed(&mut self, fixed: Option<C64>, re: (f64, f64), im: (f64, f64)) -> C64 {
        let z = self.complex(re, im);
        fixed.unwrap_or(z)
    }
}
