//! Command-line surface: count, cross-verify, sweep, and scan point
//! interaction configurations.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 oracle
//! non-convergence, 4 method disagreement from `verify`.

use clap::{Args, Parser, Subcommand};
use kappa_core::delta_prime::count_negative_strengths;
use kappa_core::error::Error;
use kappa_core::jacobi::{build_s_finite, gerschgorin_lower_bound, sturm_negative_count};
use kappa_core::model::{parse_config, AnyConfig, InteractionKind, Method, PointConfig};
use kappa_core::oracle::ScanSettings;
use kappa_core::recurrence::{count_from_gamma, gamma_finite};
use kappa_core::report::{count_report_json, format_f64};
use kappa_core::verify::{run_all, run_method};
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;

const EPSILON_ENV: &str = "KAPPA_COUNT_EPSILON";

#[derive(Parser)]
#[command(
    name = "kappa-count",
    about = "Count negative eigenvalues of 1-D Schrödinger operators with delta / delta-prime point interactions",
    long_about = None,
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single counting method and print its report as JSON.
    Count {
        /// Configuration document (JSON).
        file: PathBuf,
        /// One of: recurrence, jacobi, phi, strengths, oracle.
        #[arg(long)]
        method: String,
    },
    /// Run every applicable method and check that the totals agree.
    /// Exits 4 on disagreement.
    Verify {
        file: PathBuf,
        /// Also run the transfer-matrix oracle.
        #[arg(long)]
        oracle: bool,
        /// Include per-method wall-clock times (makes output nondeterministic).
        #[arg(long)]
        timings: bool,
    },
    /// Sweep one strength over a range and write counts per grid point as CSV.
    Sweep(SweepArgs),
    /// Run the transfer-matrix bound-state scan and print its report.
    Oracle {
        file: PathBuf,
        /// Initial upper end of the kappa scan range (default: sized from the strengths).
        #[arg(long)]
        kappa_max: Option<f64>,
        /// Initial grid density (default 64, minimum 16).
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Args)]
struct SweepArgs {
    file: PathBuf,
    /// Swept parameter, e.g. strengths[1] (zero-based index).
    #[arg(long)]
    param: String,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    /// Number of grid points including both endpoints (>= 2).
    #[arg(long)]
    steps: usize,
    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::NonConvergence(_) => 3,
        _ => 2,
    }
}

fn load_config(path: &PathBuf) -> Result<AnyConfig, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (2, format!("cannot read {}: {e}", path.display())))?;
    let mut config = parse_config(&text).map_err(|e| (2, e.to_string()))?;
    if let Ok(raw) = std::env::var(EPSILON_ENV) {
        let eps: f64 = raw
            .parse()
            .map_err(|_| (2, format!("{EPSILON_ENV} must be a number, got `{raw}`")))?;
        if !(eps.is_finite() && eps >= 0.0) {
            return Err((2, format!("{EPSILON_ENV} must be nonnegative and finite")));
        }
        if let AnyConfig::Float { epsilon, .. } = &mut config {
            *epsilon = eps;
        }
    }
    Ok(config)
}

fn parse_method(name: &str) -> Result<Method, (u8, String)> {
    match name {
        "recurrence" => Ok(Method::Recurrence),
        "jacobi" => Ok(Method::JacobiInertia),
        "phi" => Ok(Method::PhiSignature),
        "strengths" => Ok(Method::StrengthCount),
        "oracle" => Ok(Method::Oracle),
        other => Err((
            2,
            format!("unknown method `{other}`; expected recurrence, jacobi, phi, strengths, or oracle"),
        )),
    }
}

fn cmd_count(file: &PathBuf, method: &str) -> Result<(), (u8, String)> {
    let config = load_config(file)?;
    let method = parse_method(method)?;
    let report =
        run_method(&config, method, None).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    println!("{}", count_report_json(&report));
    Ok(())
}

fn cmd_verify(file: &PathBuf, oracle: bool, timings: bool) -> Result<(), (u8, String)> {
    let config = load_config(file)?;
    let report = run_all(&config, oracle).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    println!("{}", report.to_json(timings));
    if !report.agreement {
        return Err((4, "method totals disagree".to_string()));
    }
    Ok(())
}

/// Counts reported per sweep grid point: the recurrence-style count, the
/// matrix-inertia count, and the certified lower bound. For delta-prime
/// configurations these are strength count, windowed inertia, and strength
/// count (which is already the exact answer for delta-prime).
fn sweep_counts(config: &PointConfig<f64>, epsilon: f64) -> (usize, usize, usize) {
    let tol = config.tol(epsilon);
    match config.kind() {
        InteractionKind::Delta => (
            count_from_gamma(&gamma_finite(config, &tol), &tol).total(),
            sturm_negative_count(&build_s_finite(config), &0.0, &tol),
            gerschgorin_lower_bound(config),
        ),
        InteractionKind::DeltaPrime => {
            let strengths = count_negative_strengths(config, &tol).total();
            let inertia = kappa_core::delta_prime::windowed_inertia_count(config, &tol)
                .map(|r| r.total())
                .unwrap_or(strengths);
            (strengths, inertia, strengths)
        }
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), (u8, String)> {
    let config = load_config(&args.file)?;
    if args.steps < 2 {
        return Err((2, "steps must be at least 2".to_string()));
    }
    let index = args
        .param
        .strip_prefix("strengths[")
        .and_then(|rest| rest.strip_suffix("]"))
        .and_then(|idx| idx.parse::<usize>().ok())
        .ok_or_else(|| (2, format!("bad --param `{}`; expected strengths[i]", args.param)))?;
    if index >= config.len() {
        return Err((
            2,
            format!("strength index {index} outside 0..{}", config.len()),
        ));
    }

    let base = config.to_float();
    let epsilon = match &config {
        AnyConfig::Float { epsilon, .. } => *epsilon,
        AnyConfig::Rational { .. } => kappa_core::ScalarMode::DEFAULT_EPSILON,
    };

    let values: Vec<f64> = (0..args.steps)
        .map(|i| args.from + (args.to - args.from) * i as f64 / (args.steps - 1) as f64)
        .collect();
    let rows: Vec<String> = values
        .par_iter()
        .map(|value| {
            let mut strengths = base.strengths().to_vec();
            strengths[index] = *value;
            let swept = PointConfig::new(base.kind(), base.points().to_vec(), strengths)
                .expect("sweep preserves the point set");
            let (recurrence, jacobi, lower) = sweep_counts(&swept, epsilon);
            format!("{},{recurrence},{jacobi},{lower}\n", format_f64(*value))
        })
        .collect();

    let mut csv = String::from("param_value,kappa_recurrence,kappa_jacobi,gerschgorin_lower_bound\n");
    for row in rows {
        csv.push_str(&row);
    }
    match &args.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| (2, format!("cannot write {}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_oracle(file: &PathBuf, kappa_max: Option<f64>, grid: Option<usize>) -> Result<(), (u8, String)> {
    let config = load_config(file)?;
    let float = config.to_float();
    let mut settings = ScanSettings::auto_for(&float);
    if let Some(k) = kappa_max {
        settings.kappa_max = k;
    }
    if let Some(g) = grid {
        settings.grid = g;
    }
    let report = run_method(&config, Method::Oracle, Some(settings))
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
    println!("{}", count_report_json(&report));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Count { file, method } => cmd_count(file, method),
        Command::Verify { file, oracle, timings } => cmd_verify(file, *oracle, *timings),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Oracle { file, kappa_max, grid } => cmd_oracle(file, *kappa_max, *grid),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
