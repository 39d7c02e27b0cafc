use std::fmt::Display;
use std::time::Instant;

use num_complex::Complex64 as C64;
use serde_json::Value;
use yb_linalg::{c64_json, max_rel_residual, rel_diff, CheckReport, Matrix, VariantChoice};
use yb_sl2::{build_r, degeneration_residual_curve, qybe_residual_family, Sl2Family, Sl2Params};
use yb_sklyanin::{
    algebra_check, basis_change_check, build_generators, casimir_check, default_points, structure_constants,
    trig_limit_estimates, Family, JLabeling, StructureConstants,
};
use yb_sln::{
    belavin_r, degeneration_check_n, gauge_trig_n, qybe_residual_fn, TargetN, DEFAULT_RAT_RADII, DEFAULT_TRIG_QS,
};
use yb_theta::ThetaParams;
use yb_twist::{twist_point_residuals, TwistKind};

use crate::config::{RunConfig, Sampler};
use crate::emit::{build_matrix, parse_matrix, EmitFamily, EmitParams};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Qybe,
    Rll,
    Twist,
    Algebra,
    Casimir,
    #[value(name = "degenerate-sl2")]
    DegenerateSl2,
    #[value(name = "degenerate-slN")]
    DegenerateSlN,
    All,
}

impl Suite {
    pub const INDIVIDUAL: [Suite; 7] = [
        Self::Qybe,
        Self::Rll,
        Self::Twist,
        Self::Algebra,
        Self::Casimir,
        Self::DegenerateSl2,
        Self::DegenerateSlN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Qybe => "qybe",
            Self::Rll => "rll",
            Self::Twist => "twist",
            Self::Algebra => "algebra",
            Self::Casimir => "casimir",
            Self::DegenerateSl2 => "degenerate-sl2",
            Self::DegenerateSlN => "degenerate-slN",
            Self::All => "all",
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Self::Qybe => 1e-9,
            Self::Rll | Self::Algebra | Self::Casimir => 1e-8,
            Self::Twist => 1e-11,
            Self::DegenerateSl2 => 1e-4,
            Self::DegenerateSlN => 1e-5,
            Self::All => 1e-8,
        }
    }
}

type SuiteResult = Result<CheckReport, CliError>;

fn num_err(e: impl Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Run one suite. Numerical trouble inside a suite becomes a failed report;
/// only configuration problems come back as `Err`.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> SuiteResult {
    cfg.validate()?;
    let start = Instant::now();
    let result = match suite {
        Suite::Qybe => qybe(cfg),
        Suite::Rll => rll(cfg),
        Suite::Twist => twist(cfg),
        Suite::Algebra => algebra(cfg),
        Suite::Casimir => casimir(cfg),
        Suite::DegenerateSl2 => degenerate_sl2(cfg),
        Suite::DegenerateSlN => degenerate_sln(cfg),
        Suite::All => all(cfg),
    };
    let mut rep = match result {
        Ok(r) => r,
        Err(CliError::Numerical(msg)) => {
            let mut r = CheckReport::new(suite.name(), suite.default_tolerance());
            r.param("error", msg);
            r.residual("error", f64::INFINITY);
            r
        }
        Err(e) => return Err(e),
    };
    rep.param("seed", cfg.seed);
    if let Some(t) = cfg.tol {
        rep.force_tolerance(t);
    }
    rep.runtime_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
    Ok(rep)
}

/// Fold `other` into `rep` under `prefix/`, keeping the worst residual per
/// name across draws and flagging variant selections that change.
fn merge(rep: &mut CheckReport, prefix: &str, other: &CheckReport) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}/{k}") };
    for (k, &v) in &other.residuals {
        rep.residual_with_tol(key(k), v, other.tolerance_for(k));
    }
    for (k, v) in &other.diagnostics {
        rep.diagnostic(key(k), *v);
    }
    for (k, v) in &other.parameters {
        rep.param(key(k), v.clone());
    }
    for (k, v) in &other.variant_choices {
        let stable = rep.variant_choices.get(&key(k)).map_or(true, |prev| prev.selected == v.selected);
        if !rep.variant_choices.contains_key(&key(k)) {
            rep.variant(key(k), v.clone());
        }
        rep.condition(format!("{}/stable", key(k)), stable);
    }
}

fn record(rep: &mut CheckReport, name: &str, values: &[C64]) {
    rep.param(name, Value::Array(values.iter().map(|&z| c64_json(z)).collect()));
}

fn pick<T: Copy>(cfg_value: Option<&str>, all: &[T], parse: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, CliError> {
    match cfg_value {
        None => Ok(all.to_vec()),
        Some(s) => Ok(vec![parse(s).map_err(CliError::Usage)?]),
    }
}

fn sl2_guard(u: C64, v: C64, eta: C64) -> bool {
    [u, v, u - v].iter().all(|&w| Sl2Params::new(w, eta).guard_ok())
}

fn dist_to_integer(z: C64) -> f64 {
    C64::new(z.re - z.re.round(), z.im).norm()
}

fn belavin_guard(u: C64, v: C64, eta: C64) -> bool {
    [u, v, u - v].iter().all(|&w| dist_to_integer(w) > 0.05) && dist_to_integer(eta * 2.0) > 0.1
}

const MAX_ATTEMPTS: usize = 10_000;

fn guarded_draw<T>(mut draw: impl FnMut() -> (T, bool)) -> Result<T, CliError> {
    for _ in 0..MAX_ATTEMPTS {
        let (x, ok) = draw();
        if ok {
            return Ok(x);
        }
    }
    Err(CliError::Numerical("no sample passed the pole guard; check the fixed parameters".into()))
}

enum QybeTarget {
    Sl2(Sl2Family),
    Belavin(usize),
}

fn qybe(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("qybe", 1e-9);
    let mut cfg = cfg.clone();
    if let Some(path) = &cfg.from_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let file = parse_matrix(&text)?;
        let family = match (file.family, &cfg.family) {
            (Some(f), _) => f,
            (None, Some(s)) => s.parse::<EmitFamily>().map_err(CliError::Usage)?,
            (None, None) => return Err(CliError::Usage("matrix file names no family; pass --family".into())),
        };
        let params = file.params.clone().unwrap_or_else(|| EmitParams::from_config(&cfg));
        let rebuilt = build_matrix(family, &params, &cfg)?;
        rep.residual_with_tol("file/roundtrip", max_rel_residual(&file.matrix, &rebuilt).map_err(num_err)?.value, 1e-15);
        rep.param("file/family", family.name());
        rep.param("file/parameters", params.to_json());
        cfg.family = Some(family.name().to_string());
        cfg.n = Some(params.n);
        cfg.u = Some(params.u);
        cfg.eta = Some(params.eta);
        cfg.tau = Some(params.tau);
        cfg.alpha = Some(params.alpha);
        cfg.beta = Some(params.beta);
    }
    let targets: Vec<QybeTarget> = match cfg.family.as_deref() {
        None => Sl2Family::ALL.iter().map(|&f| QybeTarget::Sl2(f)).collect(),
        Some("belavin") => vec![QybeTarget::Belavin(cfg.n.unwrap_or(3))],
        Some(s) => vec![QybeTarget::Sl2(s.parse::<Sl2Family>().map_err(CliError::Usage)?)],
    };
    let mut rng = Sampler::new(cfg.seed);
    let n_draws = cfg.samples_or(20);
    let mut cols: [Vec<C64>; 6] = Default::default();
    for _ in 0..n_draws {
        let belavin = matches!(targets[0], QybeTarget::Belavin(_));
        let draw = guarded_draw(|| {
            let u = rng.or_fixed(cfg.u, (-1.0, 1.0), (-0.3, 0.3));
            let v = rng.complex((-1.0, 1.0), (-0.3, 0.3));
            let eta = rng.or_fixed(cfg.eta, (0.05, 0.45), (0.0, 0.0));
            let tau = rng.or_fixed(cfg.tau, (0.0, 0.0), (0.8, 2.0));
            let alpha = rng.or_fixed(cfg.alpha, (0.3, 2.0), (0.1, 0.1));
            let beta = rng.or_fixed(cfg.beta, (-2.0, 2.0), (0.5, 0.5));
            let ok = if belavin { belavin_guard(u, v, eta) } else { sl2_guard(u, v, eta) };
            ([u, v, eta, tau, alpha, beta], ok)
        })?;
        let [u, v, eta, tau, alpha, beta] = draw;
        for (col, z) in cols.iter_mut().zip(draw) {
            col.push(z);
        }
        for t in &targets {
            match *t {
                QybeTarget::Sl2(f) => {
                    let mut p = Sl2Params::new(u, eta).with_tau(tau).with_alpha(alpha).with_beta(beta);
                    if let Some(tt) = cfg.trunc_tol {
                        p.trunc_tol = tt;
                    }
                    if let Some(m) = cfg.max_terms {
                        p.max_terms = m;
                    }
                    let r = qybe_residual_family(f, &p, u, v).map_err(num_err)?;
                    rep.residual(format!("{}/qybe", f.name()), r.value);
                }
                QybeTarget::Belavin(n) => {
                    let theta = ThetaParams::with_truncation(
                        tau,
                        cfg.trunc_tol.unwrap_or(ThetaParams::DEFAULT_TOL),
                        cfg.max_terms.unwrap_or(ThetaParams::DEFAULT_MAX_TERMS),
                    )
                    .map_err(num_err)?;
                    let r = qybe_residual_fn(|w| belavin_r(n, w, eta, &theta), u, v).map_err(num_err)?;
                    rep.residual_with_tol(format!("belavin_N{n}/qybe"), r, 1e-8);
                }
            }
        }
    }
    for (name, col) in ["u", "v", "eta", "tau", "alpha", "beta"].iter().zip(&cols) {
        record(&mut rep, name, col);
    }
    Ok(rep)
}

fn sk_family(s: &str) -> Result<Family, String> {
    s.parse::<Family>().map_err(|e| e.to_string())
}

fn rll(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("rll", 1e-8);
    let families = pick(cfg.family.as_deref(), &Family::ALL, sk_family)?;
    let mut rng = Sampler::new(cfg.seed);
    let mut cols: [Vec<C64>; 6] = Default::default();
    for _ in 0..cfg.samples_or(3) {
        let s = rng.or_fixed(cfg.s, (0.2, 1.2), (0.0, 0.0));
        let eta = rng.or_fixed(cfg.eta, (0.12, 0.28), (0.0, 0.0));
        let tau = rng.or_fixed(cfg.tau, (0.0, 0.0), (0.9, 1.5));
        let alpha = rng.or_fixed(cfg.alpha, (0.5, 1.5), (0.0, 0.0));
        let u = rng.or_fixed(cfg.u, (0.05, 0.45), (0.03, 0.03));
        let v = rng.complex((-0.45, -0.05), (-0.02, -0.02));
        let beta = cfg.beta.unwrap_or(alpha);
        for (col, z) in cols.iter_mut().zip([s, eta, tau, alpha, u, v]) {
            col.push(z);
        }
        for &f in &families {
            let g = build_generators(f, s, eta, (f == Family::Elliptic).then_some(tau)).map_err(num_err)?;
            let ws = default_points(f, eta, g.theta.as_ref(), 5).map_err(num_err)?;
            let deform = match f {
                Family::Elliptic => C64::new(1.0, 0.0),
                Family::Trig => alpha,
                Family::Rat => beta,
            };
            let sub = yb_lax::rll_check(&g, deform, u, v, &ws).map_err(num_err)?;
            let margin = sub.variant_choices["lax"].min_rejected();
            let mut sub = sub;
            sub.parameters.clear();
            sub.condition("rejected_above_1e-3", margin > 1e-3);
            merge(&mut rep, f.name(), &sub);
        }
    }
    for (name, col) in ["s", "eta", "tau", "alpha", "u", "v"].iter().zip(&cols) {
        record(&mut rep, name, col);
    }
    Ok(rep)
}

fn twist(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("twist", 1e-11);
    let kinds = pick(cfg.family.as_deref(), &[TwistKind::Trig, TwistKind::Rat], |s| match s {
        "trig" => Ok(TwistKind::Trig),
        "rat" => Ok(TwistKind::Rat),
        _ => Err(format!("unknown twist kind '{s}' (expected trig or rat)")),
    })?;
    let mut rng = Sampler::new(cfg.seed);
    let mut cols: [Vec<C64>; 4] = Default::default();
    for _ in 0..cfg.samples_or(20) {
        let u = rng.or_fixed(cfg.u, (-1.0, 1.0), (-0.3, 0.3));
        let v = rng.complex((-1.0, 1.0), (-0.3, 0.3));
        let eta = rng.or_fixed(cfg.eta, (0.05, 0.45), (0.0, 0.0));
        let d = rng.complex((0.2, 2.0), (0.3, 0.3));
        for (col, z) in cols.iter_mut().zip([u, v, eta, d]) {
            col.push(z);
        }
        for &k in &kinds {
            let deform = match k {
                TwistKind::Trig => cfg.alpha.unwrap_or(d),
                TwistKind::Rat => cfg.beta.unwrap_or(d),
            };
            for (name, val) in twist_point_residuals(k, eta, deform, u, v).map_err(num_err)? {
                rep.residual(format!("{}/{name}", k.name()), val);
            }
        }
    }
    for (name, col) in ["u", "v", "eta", "deform"].iter().zip(&cols) {
        record(&mut rep, name, col);
    }
    Ok(rep)
}

struct SkDraw {
    s: C64,
    eta: C64,
    tau: C64,
}

fn sk_draws(cfg: &RunConfig, default: usize) -> Vec<SkDraw> {
    let mut rng = Sampler::new(cfg.seed);
    (0..cfg.samples_or(default))
        .map(|_| SkDraw {
            s: rng.or_fixed(cfg.s, (0.2, 1.2), (0.0, 0.0)),
            eta: rng.or_fixed(cfg.eta, (0.12, 0.28), (0.0, 0.0)),
            tau: rng.or_fixed(cfg.tau, (0.0, 0.0), (0.9, 1.5)),
        })
        .collect()
}

fn record_sk(rep: &mut CheckReport, draws: &[SkDraw]) {
    record(rep, "s", &draws.iter().map(|d| d.s).collect::<Vec<_>>());
    record(rep, "eta", &draws.iter().map(|d| d.eta).collect::<Vec<_>>());
    record(rep, "tau", &draws.iter().map(|d| d.tau).collect::<Vec<_>>());
}

fn sk_points(f: Family, d: &SkDraw, n: usize) -> Result<Vec<C64>, CliError> {
    let theta = (f == Family::Elliptic).then(|| ThetaParams::new(d.tau)).transpose().map_err(num_err)?;
    default_points(f, d.eta, theta.as_ref(), n).map_err(num_err)
}

/// Structure-constant limits at `q = 1e-8`, both labelings scored.
fn constants_report(eta: C64) -> Result<CheckReport, CliError> {
    let mut rep = CheckReport::new("constants", 1e-6);
    let closed = match structure_constants(Family::Trig, eta, None).map_err(num_err)? {
        StructureConstants::Trig { c, .. } => c,
        _ => unreachable!("trig family"),
    };
    let mut scored = Vec::new();
    for lab in [JLabeling::Printed, JLabeling::Swapped] {
        let est = trig_limit_estimates(eta, 1e-8, lab).map_err(num_err)?;
        let worst = est.iter().zip(&closed).map(|(a, b)| rel_diff(*a, *b)).fold(0.0, f64::max);
        if lab == JLabeling::Swapped {
            for (k, (a, b)) in est.iter().zip(&closed).enumerate() {
                rep.residual(format!("C{}", k + 1), rel_diff(*a, *b));
            }
        }
        scored.push((lab.name().to_string(), worst));
    }
    rep.variant("j_labeling", VariantChoice::select(scored));
    Ok(rep)
}

fn algebra(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("algebra", 1e-8);
    let families = pick(cfg.family.as_deref(), &Family::ALL, sk_family)?;
    let draws = sk_draws(cfg, 10);
    for d in &draws {
        for &f in &families {
            let pts = sk_points(f, d, 10)?;
            let tau = (f == Family::Elliptic).then_some(d.tau);
            let mut sub = algebra_check(f, d.s, d.eta, tau, &pts).map_err(num_err)?;
            sub.parameters.clear();
            merge(&mut rep, f.name(), &sub);
        }
        if families.contains(&Family::Trig) {
            merge(&mut rep, "constants", &constants_report(d.eta)?);
        }
    }
    if families.contains(&Family::Trig) {
        let d = &draws[0];
        let t = build_generators(Family::Trig, d.s, d.eta, None).map_err(num_err)?;
        let pts = sk_points(Family::Trig, d, 6)?;
        let bc = basis_change_check(&t, &[1e-4, 1e-6, 1e-8], C64::new(1.0, 0.0), &pts).map_err(num_err)?;
        merge(&mut rep, "trig_to_elliptic", &bc);
    }
    record_sk(&mut rep, &draws);
    Ok(rep)
}

fn casimir(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("casimir", 1e-8);
    let families = pick(cfg.family.as_deref(), &Family::ALL, sk_family)?;
    let draws = sk_draws(cfg, 10);
    for d in &draws {
        for &f in &families {
            let g = build_generators(f, d.s, d.eta, (f == Family::Elliptic).then_some(d.tau)).map_err(num_err)?;
            let pts = sk_points(f, d, 10)?;
            merge(&mut rep, f.name(), &casimir_check(&g, &pts).map_err(num_err)?);
        }
    }
    record_sk(&mut rep, &draws);
    Ok(rep)
}

fn sl2_sequence(target: Sl2Family) -> Vec<C64> {
    let vals: &[f64] = match target {
        Sl2Family::TrigDeformed => &[1e-2, 1e-4, 1e-6],
        Sl2Family::TrigStandard => &[1e-4, 1e-8, 1e-12],
        Sl2Family::RatDeformed => &[1e-1, 3e-2, 1e-2],
        _ => &[1e-1, 1e-2, 1e-3],
    };
    vals.iter().map(|&x| C64::new(x, 0.0)).collect()
}

fn degenerate_sl2(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("degenerate-sl2", 1e-4);
    let all = [Sl2Family::TrigDeformed, Sl2Family::RatDeformed, Sl2Family::TrigStandard, Sl2Family::RatStandard];
    let targets = pick(cfg.target.as_deref().or(cfg.family.as_deref()), &all, |s| {
        let f = s.parse::<Sl2Family>()?;
        if f == Sl2Family::Elliptic {
            return Err("the elliptic family is the parent, not a target".into());
        }
        Ok(f)
    })?;
    let u = cfg.u.unwrap_or(C64::new(0.37, 0.0));
    let eta = cfg.eta.unwrap_or(C64::new(0.21, 0.0));
    let alpha = cfg.alpha.unwrap_or(C64::new(1.3, 0.0));
    let beta = cfg.beta.unwrap_or(C64::new(0.8, 0.0));
    let mut p = Sl2Params::new(u, eta).with_alpha(alpha).with_beta(beta);
    if let Some(t) = cfg.trunc_tol {
        p.trunc_tol = t;
    }
    if let Some(m) = cfg.max_terms {
        p.max_terms = m;
    }
    for t in targets {
        let seq = sl2_sequence(t);
        let curve = degeneration_residual_curve(t, &p, &seq).map_err(num_err)?;
        for (k, (x, r)) in seq.iter().zip(&curve.residuals).enumerate() {
            rep.diagnostic(format!("{}/curve/{k}", t.name()), *r);
            rep.diagnostic(format!("{}/limit/{k}", t.name()), x.re);
        }
        rep.residual(format!("{}/final", t.name()), curve.last());
        rep.condition(format!("{}/decreasing", t.name()), curve.strictly_decreasing());
    }
    let pair = |a: Sl2Family, pa: &Sl2Params, b: Sl2Family| -> Result<f64, CliError> {
        let x = build_r(a, pa).map_err(num_err)?;
        let y = build_r(b, &p).map_err(num_err)?;
        Ok(max_rel_residual(&x, &y).map_err(num_err)?.value)
    };
    let zero = C64::new(0.0, 0.0);
    rep.residual_with_tol("reduction/alpha0", pair(Sl2Family::TrigDeformed, &p.with_alpha(zero), Sl2Family::TrigStandard)?, 1e-12);
    rep.residual_with_tol("reduction/beta0", pair(Sl2Family::RatDeformed, &p.with_beta(zero), Sl2Family::RatStandard)?, 1e-12);
    for (k, z) in [("u", u), ("eta", eta), ("alpha", alpha), ("beta", beta)] {
        rep.param(k, c64_json(z));
    }
    Ok(rep)
}

fn degenerate_sln(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("degenerate-slN", 1e-5);
    let n = cfg.n.unwrap_or(3);
    let targets = pick(cfg.target.as_deref(), &[TargetN::Trig, TargetN::Rat], |s| match s {
        "trig" => Ok(TargetN::Trig),
        "rat" => Ok(TargetN::Rat),
        _ => Err(format!("unknown target '{s}' (expected trig or rat)")),
    })?;
    let tau = cfg.tau.unwrap_or(C64::new(0.0, 1.1));
    let theta = ThetaParams::with_truncation(
        tau,
        cfg.trunc_tol.unwrap_or(ThetaParams::DEFAULT_TOL),
        cfg.max_terms.unwrap_or(ThetaParams::DEFAULT_MAX_TERMS),
    )
    .map_err(num_err)?;
    let g = gauge_trig_n(n, tau).map_err(num_err)?;
    rep.residual_with_tol("gauge/det", (g.m.det().map_err(num_err)? - 1.0).norm(), 1e-10);
    if n == 2 {
        let q8 = (C64::i() * 2.0 * std::f64::consts::PI * tau / 8.0).exp();
        let want = Matrix::diag(&[q8, q8.inv()]);
        rep.residual_with_tol("gauge/n2", max_rel_residual(&g.m, &want).map_err(num_err)?.value, 1e-12);
    }
    let mut rng = Sampler::new(cfg.seed);
    let mut cols: [Vec<C64>; 3] = Default::default();
    for _ in 0..cfg.samples_or(5) {
        let [u, v, eta] = guarded_draw(|| {
            let u = rng.or_fixed(cfg.u, (0.15, 0.45), (-0.08, 0.08));
            let v = rng.complex((-0.3, 0.3), (-0.1, 0.1));
            let eta = rng.or_fixed(cfg.eta, (0.07, 0.23), (0.0, 0.0));
            let ok = belavin_guard(u, v, eta) && [u, v, u - v].iter().all(|w| w.norm() > 0.1);
            ([u, v, eta], ok)
        })?;
        for (col, z) in cols.iter_mut().zip([u, v, eta]) {
            col.push(z);
        }
        let r = qybe_residual_fn(|w| belavin_r(n, w, eta, &theta), u, v).map_err(num_err)?;
        rep.residual_with_tol("belavin/qybe", r, 1e-8);
        for &t in &targets {
            let seq: &[f64] = match t {
                TargetN::Trig => &DEFAULT_TRIG_QS,
                TargetN::Rat => &DEFAULT_RAT_RADII,
            };
            let mut sub = degeneration_check_n(t, n, u, v, eta, seq).map_err(num_err)?;
            sub.parameters.clear();
            merge(&mut rep, t.name(), &sub);
        }
    }
    rep.param("N", n).param("tau", c64_json(tau));
    for (name, col) in ["u", "v", "eta"].iter().zip(&cols) {
        record(&mut rep, name, col);
    }
    Ok(rep)
}

fn all(cfg: &RunConfig) -> SuiteResult {
    let mut rep = CheckReport::new("all", 1e-8);
    let base = RunConfig {
        seed: cfg.seed,
        tol: None,
        samples: cfg.samples,
        trunc_tol: cfg.trunc_tol,
        max_terms: cfg.max_terms,
        ..Default::default()
    };
    for s in Suite::INDIVIDUAL {
        let sub = run_suite(s, &base)?;
        merge(&mut rep, s.name(), &sub);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_keeps_worst_and_flags_variant_changes() {
        let mut rep = CheckReport::new("x", 1e-8);
        let mut a = CheckReport::new("a", 1e-6);
        a.residual("r", 1e-9);
        a.variant("v", VariantChoice::select(vec![("p".into(), 1.0), ("q".into(), 0.0)]));
        merge(&mut rep, "f", &a);
        let mut b = CheckReport::new("a", 1e-6);
        b.residual("r", 1e-7);
        b.variant("v", VariantChoice::select(vec![("p".into(), 0.0), ("q".into(), 1.0)]));
        merge(&mut rep, "f", &b);
        assert_eq!(rep.residuals["f/r"], 1e-7);
        assert_eq!(rep.tolerance_for("f/r"), 1e-6);
        assert_eq!(rep.residuals["f/v/stable"], 1.0);
        assert!(!rep.passed);
    }

    #[test]
    fn guards() {
        assert!(!belavin_guard(C64::new(1.01, 0.0), C64::new(0.3, 0.0), C64::new(0.2, 0.0)));
        assert!(belavin_guard(C64::new(0.4, 0.0), C64::new(-0.2, 0.0), C64::new(0.2, 0.0)));
        assert!(!sl2_guard(C64::new(0.01, 0.0), C64::new(0.3, 0.0), C64::new(0.2, 0.0)));
    }

    #[test]
    fn unknown_family_is_usage_error() {
        let cfg = RunConfig { family: Some("nope".into()), ..Default::default() };
        assert!(matches!(run_suite(Suite::Rll, &cfg), Err(CliError::Usage(_))));
    }
}
