//! Command-line front end for the fwm-blockade simulator.
//!
//! Three subcommands: `sweep` runs a configured or preset parameter sweep and
//! writes CSV/JSON/SVG outputs, `single` solves one parameter point and
//! prints JSON, and `verify` runs the numbered verification suite.
//!
//! Exit codes: 0 success, 1 configuration or usage error, 2 solver failure
//! on every requested point, 3 verification failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use fwm_blockade::{
    csv_string, evaluate_point, figure_preset, run_all, run_subset, run_sweep, write_outputs,
    SolverMethod, SolverOptions, SweepConfig, SweepError, SweepResult, SystemParams,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "blockade",
    version,
    about = "Steady-state photon-blockade sweeps for a three-mode four-wave-mixing cavity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep from a TOML config file or a figure preset.
    Sweep(SweepArgs),
    /// Solve a single parameter point and print observables as JSON.
    Single(Box<SingleArgs>),
    /// Run the verification suite and report each criterion.
    Verify(VerifyArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SweepSource {
    /// Path to a TOML sweep configuration.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Name of a built-in figure preset (fig3a through fig9a).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SweepSource,
    /// Output directory for preset runs (files are named <preset>_<curve>.*).
    #[arg(long, value_name = "DIR", default_value = ".")]
    out: PathBuf,
    /// Override the per-mode truncation, e.g. 5,5,5.
    #[arg(long, value_name = "A,B,C", value_parser = parse_dims)]
    dims: Option<Dims>,
    /// Override the worker-thread count.
    #[arg(long, value_name = "N")]
    workers: Option<usize>,
}

#[derive(Clone, Copy)]
struct Dims([usize; 3]);

fn parse_dims(text: &str) -> Result<Dims, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err("expected three comma-separated dimensions, e.g. 5,5,5".into());
    }
    let mut dims = [0usize; 3];
    for (slot, part) in dims.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("`{part}` is not a valid dimension"))?;
    }
    Ok(Dims(dims))
}

fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').collect();
    let parse = |s: &str| -> Result<f64, String> {
        s.trim().parse().map_err(|_| format!("`{s}` is not a number"))
    };
    match parts.as_slice() {
        [re] => Ok(Complex64::new(parse(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(parse(re)?, parse(im)?)),
        _ => Err("expected RE or RE,IM".into()),
    }
}

fn parse_method(text: &str) -> Result<SolverMethod, String> {
    match text {
        "auto" => Ok(SolverMethod::Auto),
        "direct" => Ok(SolverMethod::Direct),
        "iterative" => Ok(SolverMethod::Iterative),
        other => Err(format!("unknown method `{other}` (expected auto, direct, or iterative)")),
    }
}

/// One-point evaluation. Every model parameter is exposed under its field
/// name; unset parameters keep their defaults (all zero, unit kappas).
#[derive(Args)]
struct SingleArgs {
    #[arg(long = "delta_a", value_name = "VALUE")]
    delta_a: Option<f64>,
    #[arg(long = "delta_b", value_name = "VALUE")]
    delta_b: Option<f64>,
    #[arg(long = "delta_c", value_name = "VALUE")]
    delta_c: Option<f64>,
    /// Four-wave-mixing strength.
    #[arg(long, value_name = "VALUE")]
    g: Option<f64>,
    /// Coherent drive amplitude on mode a.
    #[arg(long = "f_a", value_name = "VALUE")]
    f_a: Option<f64>,
    /// Parametric pair-drive amplitude, RE or RE,IM.
    #[arg(long, value_name = "RE[,IM]", value_parser = parse_complex)]
    e: Option<Complex64>,
    #[arg(long = "kappa_a", value_name = "VALUE")]
    kappa_a: Option<f64>,
    #[arg(long = "kappa_b", value_name = "VALUE")]
    kappa_b: Option<f64>,
    #[arg(long = "kappa_c", value_name = "VALUE")]
    kappa_c: Option<f64>,
    #[arg(long = "n_th_a", value_name = "VALUE")]
    n_th_a: Option<f64>,
    #[arg(long = "n_th_b", value_name = "VALUE")]
    n_th_b: Option<f64>,
    #[arg(long = "n_th_c", value_name = "VALUE")]
    n_th_c: Option<f64>,
    /// Per-mode truncation.
    #[arg(long, value_name = "A,B,C", value_parser = parse_dims, default_value = "5,5,5")]
    dims: Dims,
    /// Steady-state residual tolerance.
    #[arg(long, value_name = "TOL")]
    tolerance: Option<f64>,
    /// Solver method: auto, direct, or iterative.
    #[arg(long, value_name = "METHOD", value_parser = parse_method)]
    method: Option<SolverMethod>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run; `acceptance` is the only suite.
    #[arg(long, value_name = "NAME")]
    suite: String,
    /// Comma-separated criterion numbers; defaults to the whole suite.
    #[arg(long, value_name = "N,N,...", value_delimiter = ',')]
    criteria: Option<Vec<usize>>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here and keep exit code 0; genuine
            // usage mistakes are configuration errors.
            let code = if err.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Sweep(args) => sweep_command(args),
        Command::Single(args) => single_command(*args),
        Command::Verify(args) => verify_command(args),
    }
}

fn fail_config(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_CONFIG)
}

fn apply_overrides(config: &mut SweepConfig, args: &SweepArgs) {
    if let Some(Dims(dims)) = args.dims {
        config.truncation = dims;
    }
    if let Some(workers) = args.workers {
        config.parallel_workers = workers;
    }
}

fn converged_points(result: &SweepResult) -> usize {
    result.points.iter().filter(|p| p.converged).count()
}

fn sweep_command(args: SweepArgs) -> ExitCode {
    if let Some(path) = &args.source.config {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(err) => return fail_config(format_args!("cannot read {}: {err}", path.display())),
        };
        let mut config = match SweepConfig::from_toml(&text) {
            Ok(config) => config,
            Err(err) => return fail_config(err),
        };
        apply_overrides(&mut config, &args);
        let result = match run_sweep(&config) {
            Ok(result) => result,
            Err(err) => return fail_config(err),
        };
        if let Err(err) = write_outputs(&result) {
            return fail_config(err);
        }
        if converged_points(&result) == 0 {
            eprintln!("error: no point converged");
            return ExitCode::from(EXIT_SOLVER);
        }
        // Without configured output files the CSV goes to stdout, so the
        // command is still useful in a pipe.
        let outputs = &result.config.outputs;
        if outputs.csv.is_none() && outputs.json.is_none() && outputs.svg.is_none() {
            print!("{}", csv_string(&result));
        }
        return ExitCode::SUCCESS;
    }

    let name = args.source.preset.as_deref().expect("clap enforces one source");
    let preset = match figure_preset(name) {
        Ok(preset) => preset,
        Err(err) => return fail_config(err),
    };
    if let Err(err) = fs::create_dir_all(&args.out) {
        return fail_config(format_args!("cannot create {}: {err}", args.out.display()));
    }
    let mut any_converged = false;
    for curve in &preset.curves {
        let mut config = curve.config.clone();
        apply_overrides(&mut config, &args);
        // Curve ids may contain dots (`nth_0.01`), so extensions are appended
        // textually rather than via `with_extension`.
        let stem = format!("{}_{}", preset.name, curve.id);
        let csv_path = args.out.join(format!("{stem}.csv"));
        config.outputs.csv = Some(csv_path.clone());
        config.outputs.json = Some(args.out.join(format!("{stem}.json")));
        config.outputs.svg = Some(args.out.join(format!("{stem}.svg")));
        let result = match run_sweep(&config) {
            Ok(result) => result,
            Err(err) => return fail_config(err),
        };
        if let Err(err) = write_outputs(&result) {
            return fail_config(err);
        }
        let converged = converged_points(&result);
        any_converged |= converged > 0;
        println!(
            "{}/{}: {}/{} points converged -> {}",
            preset.name,
            curve.id,
            converged,
            result.points.len(),
            csv_path.display()
        );
    }
    if any_converged {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: no point of any curve converged");
        ExitCode::from(EXIT_SOLVER)
    }
}

fn single_command(args: SingleArgs) -> ExitCode {
    let mut params = SystemParams::default();
    macro_rules! override_fields {
        ($($field:ident),+ $(,)?) => {
            $(if let Some(value) = args.$field {
                params.$field = value;
            })+
        };
    }
    override_fields!(
        delta_a, delta_b, delta_c, g, f_a, e, kappa_a, kappa_b, kappa_c, n_th_a, n_th_b, n_th_c,
    );

    let mut options = SolverOptions::default();
    if let Some(tolerance) = args.tolerance {
        options.tolerance = tolerance;
    }
    if let Some(method) = args.method {
        options.method = method;
    }

    match evaluate_point(&params, args.dims.0, &options) {
        Ok((observables, verdict)) => {
            let document = serde_json::json!({
                "params": params,
                "truncation": args.dims.0,
                "observables": observables,
                "regime": verdict.label(),
            });
            println!("{}", serde_json::to_string_pretty(&document).expect("serializable"));
            ExitCode::SUCCESS
        }
        Err(err @ (SweepError::Model(_) | SweepError::Fock(_))) => fail_config(err),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_SOLVER)
        }
    }
}

fn verify_command(args: VerifyArgs) -> ExitCode {
    if args.suite != "acceptance" {
        return fail_config(format_args!(
            "unknown suite `{}` (the only suite is `acceptance`)",
            args.suite
        ));
    }
    let reports = match &args.criteria {
        Some(numbers) => match run_subset(numbers) {
            Ok(reports) => reports,
            Err(err) => return fail_config(err),
        },
        None => run_all(),
    };
    let mut failed = 0usize;
    for report in &reports {
        println!("{report}");
        failed += usize::from(!report.pass);
    }
    println!("{} of {} criteria passed", reports.len() - failed, reports.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    }
}
