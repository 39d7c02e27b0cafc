use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use yb_cli::config::{load_config, DEFAULT_SEED};
use yb_cli::{build_matrix, emit, parse_complex, run_suite, CliError, EmitFamily, EmitParams, Format, RunConfig, Suite};

#[derive(Parser)]
#[command(name = "ybcheck", version, about = "Numerical checks for quantum R-matrices, Sklyanin algebras and their degenerations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a check suite and print a JSON report.
    Check {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        opts: Opts,
    },
    /// Write one matrix as JSON or CSV.
    Emit {
        #[command(flatten)]
        opts: Opts,
        #[arg(long, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Opts {
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "N")]
    n: Option<usize>,
    /// `trig` or `rat` for degenerate-slN; a target family for degenerate-sl2.
    #[arg(long)]
    target: Option<String>,
    /// Complex values are written `re,im` or `re`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    u: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    eta: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    tau: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    alpha: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    beta: Option<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    s: Option<C64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace every tolerance; 0 forces failure.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    trunc_tol: Option<f64>,
    #[arg(long)]
    max_terms: Option<usize>,
    #[arg(long)]
    from_file: Option<PathBuf>,
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record wall-clock time in `runtime_ms` (otherwise 0, for byte-identical reports).
    #[arg(long)]
    timing: bool,
}

impl Opts {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig {
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            tol: self.tol,
            samples: self.samples,
            family: self.family,
            n: self.n,
            target: self.target,
            u: self.u,
            eta: self.eta,
            tau: self.tau,
            alpha: self.alpha,
            beta: self.beta,
            s: self.s,
            trunc_tol: self.trunc_tol,
            max_terms: self.max_terms,
            from_file: self.from_file,
            timing: self.timing,
        };
        if let Some(path) = &self.config {
            cfg.fill_from(&load_config(path)?, self.seed.is_some())?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn check(suite: Suite, opts: Opts) -> Result<bool, CliError> {
    let cfg = opts.into_config()?;
    let rep = run_suite(suite, &cfg)?;
    println!("{}", rep.to_json());
    let failures = rep.failures();
    if failures.is_empty() {
        eprintln!("{}: passed ({} residuals)", rep.suite, rep.residuals.len());
    } else {
        eprintln!("{}: FAILED {} of {}: {}", rep.suite, failures.len(), rep.residuals.len(), failures.join(", "));
    }
    Ok(rep.passed)
}

fn emit_cmd(opts: Opts, format: Format, out: Option<PathBuf>) -> Result<bool, CliError> {
    let cfg = opts.into_config()?;
    let family: EmitFamily = cfg
        .family
        .as_deref()
        .ok_or_else(|| CliError::Usage("emit needs --family".into()))?
        .parse()
        .map_err(CliError::Usage)?;
    let p = EmitParams::from_config(&cfg);
    let m = build_matrix(family, &p, &cfg)?;
    let text = emit::render(&m, format, family, &p);
    match out {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Check { suite, opts } => check(suite, opts),
        Cmd::Emit { opts, format, out } => emit_cmd(opts, format, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
