use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde_json::{json, Value};
use yb_linalg::{c64_json, Matrix};
use yb_sl2::{build_r, Sl2Family, Sl2Params};
use yb_sln::{belavin_r, rat_limit_contour, trig_limit_at, DEFAULT_RAT_RADII, DEFAULT_TRIG_QS, RAT_CONTOUR_POINTS};
use yb_theta::ThetaParams;
use yb_twist::{build_q, TwistKind};

use crate::config::RunConfig;
use crate::CliError;

/// Matrices `emit` can write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFamily {
    Sl2(Sl2Family),
    Belavin,
    SlnTrig,
    SlnRat,
    Twist(TwistKind),
}

impl EmitFamily {
    pub const NAMES: [&'static str; 10] = [
        "elliptic",
        "trig_standard",
        "trig_deformed",
        "rat_standard",
        "rat_deformed",
        "belavin",
        "sln_trig",
        "sln_rat",
        "twist_trig",
        "twist_rat",
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Sl2(f) => f.name(),
            Self::Belavin => "belavin",
            Self::SlnTrig => "sln_trig",
            Self::SlnRat => "sln_rat",
            Self::Twist(TwistKind::Trig) => "twist_trig",
            Self::Twist(TwistKind::Rat) => "twist_rat",
        }
    }
}

impl FromStr for EmitFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if let Ok(f) = s.parse::<Sl2Family>() {
            return Ok(Self::Sl2(f));
        }
        match s {
            "belavin" => Ok(Self::Belavin),
            "sln_trig" => Ok(Self::SlnTrig),
            "sln_rat" => Ok(Self::SlnRat),
            "twist_trig" => Ok(Self::Twist(TwistKind::Trig)),
            "twist_rat" => Ok(Self::Twist(TwistKind::Rat)),
            _ => Err(format!("unknown family '{s}' (expected one of {})", Self::NAMES.join(", "))),
        }
    }
}

/// Parameters of one emitted matrix, with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitParams {
    pub n: usize,
    pub u: C64,
    pub eta: C64,
    pub tau: C64,
    pub alpha: C64,
    pub beta: C64,
}

impl EmitParams {
    pub fn from_config(cfg: &RunConfig) -> Self {
        Self {
            n: cfg.n.unwrap_or(3),
            u: cfg.u.unwrap_or(C64::new(0.3, 0.0)),
            eta: cfg.eta.unwrap_or(C64::new(0.2, 0.0)),
            tau: cfg.tau.unwrap_or(C64::new(0.0, 1.1)),
            alpha: cfg.alpha.unwrap_or(C64::new(1.0, 0.0)),
            beta: cfg.beta.unwrap_or(C64::new(1.0, 0.0)),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "N": self.n,
            "u": c64_json(self.u),
            "eta": c64_json(self.eta),
            "tau": c64_json(self.tau),
            "alpha": c64_json(self.alpha),
            "beta": c64_json(self.beta),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, CliError> {
        let bad = |k: &str| CliError::Usage(format!("matrix file: bad parameter '{k}'"));
        let z = |k: &str| -> Result<C64, CliError> {
            let a = v.get(k).and_then(Value::as_array).ok_or_else(|| bad(k))?;
            match a.as_slice() {
                [re, im] => Ok(C64::new(re.as_f64().ok_or_else(|| bad(k))?, im.as_f64().ok_or_else(|| bad(k))?)),
                _ => Err(bad(k)),
            }
        };
        Ok(Self {
            n: v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("N"))? as usize,
            u: z("u")?,
            eta: z("eta")?,
            tau: z("tau")?,
            alpha: z("alpha")?,
            beta: z("beta")?,
        })
    }

    pub fn sl2(&self, trunc_tol: Option<f64>, max_terms: Option<usize>) -> Sl2Params {
        let mut p = Sl2Params::new(self.u, self.eta).with_tau(self.tau).with_alpha(self.alpha).with_beta(self.beta);
        if let Some(t) = trunc_tol {
            p.trunc_tol = t;
        }
        if let Some(m) = max_terms {
            p.max_terms = m;
        }
        p
    }
}

fn lib_err(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

pub fn build_matrix(family: EmitFamily, p: &EmitParams, cfg: &RunConfig) -> Result<Matrix, CliError> {
    match family {
        EmitFamily::Sl2(f) => build_r(f, &p.sl2(cfg.trunc_tol, cfg.max_terms)).map_err(lib_err),
        EmitFamily::Belavin => {
            let theta = ThetaParams::with_truncation(
                p.tau,
                cfg.trunc_tol.unwrap_or(ThetaParams::DEFAULT_TOL),
                cfg.max_terms.unwrap_or(ThetaParams::DEFAULT_MAX_TERMS),
            )
            .map_err(lib_err)?;
            belavin_r(p.n, p.u, p.eta, &theta).map_err(lib_err)
        }
        EmitFamily::SlnTrig => {
            trig_limit_at(p.n, p.u, p.eta, *DEFAULT_TRIG_QS.last().expect("nonempty")).map_err(lib_err)
        }
        EmitFamily::SlnRat => {
            let r = *DEFAULT_RAT_RADII.last().expect("nonempty");
            rat_limit_contour(p.n, p.u, p.eta, r, RAT_CONTOUR_POINTS).map_err(lib_err)
        }
        EmitFamily::Twist(kind) => {
            let deform = match kind {
                TwistKind::Trig => p.alpha,
                TwistKind::Rat => p.beta,
            };
            Ok(build_q(kind, p.u, p.eta, deform).m)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            _ => Err(format!("unknown format '{s}' (expected json or csv)")),
        }
    }
}

fn num(x: f64) -> String {
    // serde_json prints the shortest string that parses back to the same f64.
    serde_json::to_string(&if x == 0.0 { 0.0 } else { x }).expect("finite float")
}

/// `re+imj` with shortest round-trip components.
pub fn format_cell(z: C64) -> String {
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{}-{}j", num(z.re), num(-im))
    } else {
        format!("{}+{}j", num(z.re), num(im))
    }
}

pub fn parse_cell(s: &str) -> Result<C64, String> {
    let s = s.trim();
    let body = s.strip_suffix('j').ok_or_else(|| format!("cell '{s}' lacks the trailing j"))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'))
        .ok_or_else(|| format!("cell '{s}' has no sign between parts"))?;
    let re: f64 = body[..split].parse().map_err(|_| format!("bad real part in '{s}'"))?;
    let im: f64 = body[split..].parse().map_err(|_| format!("bad imaginary part in '{s}'"))?;
    Ok(C64::new(re, im))
}

pub fn matrix_json(m: &Matrix, family: Option<EmitFamily>, p: Option<&EmitParams>) -> String {
    let mut obj = BTreeMap::new();
    obj.insert("rows", json!(m.rows()));
    obj.insert("cols", json!(m.cols()));
    obj.insert("entries", Value::Array(m.entries().iter().map(|&z| c64_json(z)).collect()));
    if let Some(f) = family {
        obj.insert("family", json!(f.name()));
    }
    if let Some(p) = p {
        obj.insert("parameters", p.to_json());
    }
    serde_json::to_string_pretty(&obj).expect("matrix serialisation") + "\n"
}

pub fn matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| format_cell(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn render(m: &Matrix, format: Format, family: EmitFamily, p: &EmitParams) -> String {
    match format {
        Format::Json => matrix_json(m, Some(family), Some(p)),
        Format::Csv => matrix_csv(m),
    }
}

/// A parsed matrix file; JSON files written by `emit` also carry their family
/// and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixFile {
    pub matrix: Matrix,
    pub family: Option<EmitFamily>,
    pub params: Option<EmitParams>,
}

pub fn parse_matrix(text: &str) -> Result<MatrixFile, CliError> {
    let bad = |msg: String| CliError::Usage(format!("matrix file: {msg}"));
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        let dim = |k: &str| v.get(k).and_then(Value::as_u64).map(|x| x as usize).ok_or_else(|| bad(format!("missing {k}")));
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("missing entries".into()))?;
        let data = entries
            .iter()
            .map(|e| match e.as_array().map(Vec::as_slice) {
                Some([re, im]) => Ok(C64::new(
                    re.as_f64().ok_or_else(|| bad("non-numeric entry".into()))?,
                    im.as_f64().ok_or_else(|| bad("non-numeric entry".into()))?,
                )),
                _ => Err(bad("entries must be [re, im] pairs".into())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let matrix = Matrix::new(rows, cols, data).map_err(|e| bad(e.to_string()))?;
        let family = v
            .get("family")
            .and_then(Value::as_str)
            .map(|s| s.parse::<EmitFamily>().map_err(bad))
            .transpose()?;
        let params = v.get("parameters").map(EmitParams::from_json).transpose()?;
        Ok(MatrixFile { matrix, family, params })
    } else {
        let rows: Vec<Vec<C64>> = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split(',').map(parse_cell).collect::<Result<Vec<_>, _>>())
            .collect::<Result<_, _>>()
            .map_err(bad)?;
        let matrix = Matrix::from_rows(&rows).map_err(|e| bad(e.to_string()))?;
        Ok(MatrixFile { matrix, family: None, params: None })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn cell_round_trip() {
        for z in [c(1.0, -2.0), c(-1e-20, 3.5e17), c(0.1, 0.0), c(-0.0, -0.0), c(std::f64::consts::PI, 1e-300)] {
            let back = parse_cell(&format_cell(z)).unwrap();
            assert_eq!(back, z, "{}", format_cell(z));
        }
        assert_eq!(format_cell(c(1.5, -0.25)), "1.5-0.25j");
        assert!(parse_cell("1.0+2.0").is_err());
    }

    #[test]
    fn json_and_csv_round_trip() {
        let m = Matrix::from_fn(3, 2, |r, k| c(r as f64 / 7.0, -(k as f64) * 1e-9));
        let p = EmitParams::from_config(&RunConfig::default());
        let f = parse_matrix(&matrix_json(&m, Some(EmitFamily::Belavin), Some(&p))).unwrap();
        assert_eq!(f.matrix, m);
        assert_eq!(f.family, Some(EmitFamily::Belavin));
        assert_eq!(f.params, Some(p));
        assert_eq!(parse_matrix(&matrix_csv(&m)).unwrap().matrix, m);
    }

    #[test]
    fn family_names_parse() {
        for n in EmitFamily::NAMES {
            assert_eq!(n.parse::<EmitFamily>().unwrap().name(), n);
        }
        assert!("sl3".parse::<EmitFamily>().is_err());
    }
}
