//! Acceptance run: one line per criterion, `PASS` or `FAIL`, then a
//! non-zero exit if any outcome differs from the expected one. Two criteria
//! are expected to fail; see README.md for why.

use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use serde_json::Value;
use yb_cli::{parse_matrix, run_suite, RunConfig, Suite};
use yb_linalg::CheckReport;

struct Outcome {
    pass: bool,
    detail: String,
}

fn cfg() -> RunConfig {
    RunConfig { seed: 1, ..Default::default() }
}

fn run(suite: Suite, cfg: &RunConfig) -> Result<CheckReport, String> {
    run_suite(suite, cfg).map_err(|e| e.to_string())
}

fn failing(rep: &CheckReport) -> Vec<String> {
    rep.failures().into_iter().map(|k| format!("{k}={:.2e}", rep.residuals[k])).collect()
}

fn worst(rep: &CheckReport, suffix: &str) -> f64 {
    rep.residuals.iter().filter(|(k, _)| k.ends_with(suffix)).map(|(_, &v)| v).fold(0.0, f64::max)
}

fn from_report(rep: &CheckReport, extra: String) -> Outcome {
    let bad = failing(rep);
    let detail = if bad.is_empty() { extra } else { format!("{extra}; failing: {}", bad.join(", ")) };
    Outcome { pass: rep.passed, detail }
}

fn a1() -> Result<Outcome, String> {
    let start = Instant::now();
    let rep = run(Suite::Qybe, &cfg())?;
    let secs = start.elapsed().as_secs_f64();
    let draws = rep.parameters["u"].as_array().map_or(0, Vec::len);
    let mut o = from_report(&rep, format!("{draws} draws, worst {:.1e}, {secs:.2} s", worst(&rep, "/qybe")));
    o.pass &= draws == 20 && secs < 5.0;
    Ok(o)
}

fn a2() -> Result<Outcome, String> {
    let rep = run(Suite::DegenerateSl2, &cfg())?;
    let extra = format!(
        "final trig {:.1e}, rat {:.1e}; reductions {:.1e}",
        rep.residuals["trig_deformed/final"],
        rep.residuals["rat_deformed/final"],
        worst(&rep, "0"),
    );
    Ok(from_report(&rep, extra))
}

fn a3() -> Result<Outcome, String> {
    let rep = run(Suite::Twist, &cfg())?;
    let draws = rep.parameters["u"].as_array().map_or(0, Vec::len);
    let mut o = from_report(&rep, format!("{draws} draws, worst {:.1e}", worst(&rep, "")));
    o.pass &= draws == 20 && rep.residuals.len() >= 8;
    Ok(o)
}

fn a4() -> Result<Outcome, String> {
    let rep = run(Suite::Algebra, &cfg())?;
    let rel = ["elliptic/", "trig/", "rat/"]
        .iter()
        .flat_map(|p| rep.residuals.iter().filter(move |(k, _)| k.starts_with(p)))
        .map(|(_, &v)| v)
        .fold(0.0, f64::max);
    let extra = format!("relations {rel:.1e}, constants {:.1e}", worst_prefix(&rep, "constants/C"));
    Ok(from_report(&rep, extra))
}

fn worst_prefix(rep: &CheckReport, prefix: &str) -> f64 {
    rep.residuals.iter().filter(|(k, _)| k.starts_with(prefix)).map(|(_, &v)| v).fold(0.0, f64::max)
}

fn a5() -> Result<Outcome, String> {
    let rep = run(Suite::Casimir, &cfg())?;
    let corrected = rep
        .diagnostics
        .iter()
        .filter(|(k, _)| k.ends_with("eigenvalue_vs_corrected"))
        .map(|(_, &v)| v)
        .fold(0.0, f64::max);
    Ok(from_report(&rep, format!("spread {:.1e}, corrected forms {corrected:.1e}", worst(&rep, "/spread"))))
}

fn a6() -> Result<Outcome, String> {
    let rep = run(Suite::Rll, &cfg())?;
    let picks: Vec<String> =
        rep.variant_choices.iter().map(|(k, v)| format!("{k}={}", v.selected)).collect();
    Ok(from_report(&rep, picks.join(" ")))
}

fn a7() -> Result<Outcome, String> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in 2..=5 {
        let start = Instant::now();
        let c = RunConfig { n: Some(n), timing: true, ..cfg() };
        let q = run(Suite::Qybe, &RunConfig { family: Some("belavin".into()), ..c.clone() })?;
        let d = run(Suite::DegenerateSlN, &c)?;
        let secs = start.elapsed().as_secs_f64();
        let ok = q.passed && d.passed && (n != 5 || secs < 60.0);
        if !ok {
            parts.extend(failing(&q).into_iter().chain(failing(&d)));
        }
        pass &= ok;
        let key = if n == 3 { "limit/reference" } else { "limit/self" };
        parts.push(format!("N={n} belavin {:.0e} limit {:.0e} {secs:.2}s", worst(&q, "/qybe"), worst(&d, key)));
    }
    Ok(Outcome { pass, detail: parts.join("; ") })
}

fn ybcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ybcheck")).args(args).output().expect("spawn ybcheck")
}

fn a8() -> Result<Outcome, String> {
    let mut problems = Vec::new();
    let names = ["qybe", "rll", "twist", "algebra", "casimir", "degenerate-sl2", "degenerate-slN", "all"];
    for s in names {
        let a = ybcheck(&["check", s, "--seed", "4"]);
        let b = ybcheck(&["check", s, "--seed", "4"]);
        if a.stdout != b.stdout || a.stdout.is_empty() {
            problems.push(format!("{s}: reports differ"));
        }
        let forced = ybcheck(&["check", s, "--seed", "4", "--tol", "0"]);
        if forced.status.code() != Some(1) {
            problems.push(format!("{s} --tol 0: exit {:?}", forced.status.code()));
        }
        let passed = serde_json::from_slice::<Value>(&a.stdout).ok().and_then(|v| v["passed"].as_bool());
        let want = if passed == Some(true) { 0 } else { 1 };
        if a.status.code() != Some(want) {
            problems.push(format!("{s}: exit {:?} with passed={passed:?}", a.status.code()));
        }
    }
    let pass_runs: [&[&str]; 7] = [
        &["check", "qybe"],
        &["check", "twist"],
        &["check", "algebra"],
        &["check", "degenerate-sl2"],
        &["check", "degenerate-slN"],
        &["check", "rll", "--family", "trig"],
        &["check", "casimir", "--family", "rat"],
    ];
    for args in pass_runs {
        if ybcheck(args).status.code() != Some(0) {
            problems.push(format!("{}: expected exit 0", args.join(" ")));
        }
    }
    if ybcheck(&["check", "bogus"]).status.code() != Some(2) {
        problems.push("unknown suite: expected exit 2".into());
    }
    let mut trips = 0;
    for fam in ["elliptic", "trig_deformed", "rat_deformed", "belavin", "sln_trig", "sln_rat", "twist_trig"] {
        for fmt in ["json", "csv"] {
            let a = ybcheck(&["emit", "--family", fam, "--u", "0.23,0.04", "--format", fmt]);
            let m = parse_matrix(&String::from_utf8_lossy(&a.stdout)).map_err(|e| format!("{fam} {fmt}: {e}"))?;
            let again = match fmt {
                "json" => yb_cli::emit::matrix_json(&m.matrix, None, None),
                _ => yb_cli::emit::matrix_csv(&m.matrix),
            };
            let m2 = parse_matrix(&again).map_err(|e| e.to_string())?;
            if m.matrix != m2.matrix {
                problems.push(format!("{fam} {fmt}: round trip changed entries"));
            }
            trips += 1;
        }
    }
    let detail = if problems.is_empty() {
        format!("{} suites deterministic and exit-coded, {trips} exact round trips", names.len())
    } else {
        problems.join("; ")
    };
    Ok(Outcome { pass: problems.is_empty(), detail })
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Result<Outcome, String>, bool);
    let criteria: [Criterion; 8] = [
        ("A1", a1, true),
        ("A2", a2, true),
        ("A3", a3, true),
        ("A4", a4, true),
        ("A5", a5, false),
        ("A6", a6, false),
        ("A7", a7, true),
        ("A8", a8, true),
    ];
    let mut surprises = 0;
    for (name, f, expected) in criteria {
        let o = f().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let note = if o.pass != expected {
            surprises += 1;
            " (UNEXPECTED)"
        } else if !expected {
            " (expected)"
        } else {
            ""
        };
        println!("{name} {} {}{note}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if surprises == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
