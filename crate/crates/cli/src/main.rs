//! Command-line front end for the uncertainty-relation toolkit.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quncert::infotheory::DeltaVariant;
use quncert::states::{bell_diagonal_state, StateParams};
use quncert::tomography::{
    fidelity, linear_reconstruct, mle_reconstruct, monte_carlo_errors, simulate_counts,
    standard_settings, Quantity, ReconstructionResult, SettingsMode,
};

use quncert_cli::analyze::{analysis_csv, analyze, format_analysis};
use quncert_cli::config::{parse_config_file, Pipeline, SweepConfig, SweepKind};
use quncert_cli::fuzz::{bound_fuzz, format_summary};
use quncert_cli::plot::{parse_sweep_csv, render_svg};
use quncert_cli::sweep::{run_sweep_to_file, write_atomic};
use quncert_cli::CliError;

#[derive(Parser)]
#[command(
    name = "quncert",
    about = "Entropic and coherence uncertainty relations for two-qubit states: \
             sweeps, analysis, simulated tomography, bound fuzzing, figures",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep theta or p over the Bell-like diagonal family and write a CSV
    Sweep(SweepArgs),
    /// Print the full uncertainty report for one state
    Analyze(AnalyzeArgs),
    /// Simulate a tomography run: counts, reconstruction, fidelity
    TomoSim(TomoArgs),
    /// Validate the inequalities on random states (exit 2 on violation
    /// under the consistent variant)
    Fuzz(FuzzArgs),
    /// Render a sweep CSV as an SVG figure
    Plot(PlotArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep axis: theta or p
    #[arg(long, value_parser = parse_kind)]
    kind: Option<SweepKind>,
    /// The non-swept parameter (theta sweeps: fix p to this single branch;
    /// p sweeps: theta, default 45)
    #[arg(long)]
    fixed: Option<f64>,
    /// Comma-separated grid values (defaults to the published grids)
    #[arg(long)]
    grid: Option<String>,
    /// analytic or tomographic
    #[arg(long, value_parser = parse_pipeline)]
    pipeline: Option<Pipeline>,
    /// Expected pairs per setting for the tomographic pipeline
    #[arg(long)]
    exposure: Option<f64>,
    /// Monte Carlo samples per grid point (tomographic pipeline)
    #[arg(long)]
    mc_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// consistent or as-printed
    #[arg(long, value_parser = parse_variant)]
    delta_variant: Option<DeltaVariant>,
    /// Tomography settings family: 16 or 36
    #[arg(long, value_parser = parse_settings)]
    settings: Option<SettingsMode>,
    /// Output CSV path
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat key = value config file; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    theta: f64,
    /// Optionally also write the report as a one-row CSV
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TomoArgs {
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 45.0)]
    theta: f64,
    #[arg(long, default_value_t = 1e4)]
    exposure: f64,
    #[arg(long, value_parser = parse_settings, default_value = "36")]
    settings: SettingsMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// When above 1, also run Monte Carlo error bars
    #[arg(long, default_value_t = 1)]
    mc_samples: usize,
    /// Where to write the simulated count table CSV
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to write the reconstructed density matrices CSV
    #[arg(long)]
    rho_output: Option<PathBuf>,
    #[arg(long, value_parser = parse_variant, default_value = "consistent")]
    delta_variant: DeltaVariant,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = parse_variant, default_value = "consistent")]
    delta_variant: DeltaVariant,
}

#[derive(Args)]
struct PlotArgs {
    /// Sweep CSV produced by the sweep subcommand
    #[arg(long)]
    input: PathBuf,
    /// Output SVG path
    #[arg(long)]
    output: PathBuf,
}

fn parse_kind(s: &str) -> Result<SweepKind, String> {
    s.parse()
}
fn parse_pipeline(s: &str) -> Result<Pipeline, String> {
    s.parse()
}
fn parse_variant(s: &str) -> Result<DeltaVariant, String> {
    s.parse()
}
fn parse_settings(s: &str) -> Result<SettingsMode, String> {
    s.parse()
}

fn build_sweep_config(args: &SweepArgs) -> Result<SweepConfig, CliError> {
    let file = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_config_file(&text)?
        }
        None => Default::default(),
    };
    let kind = args
        .kind
        .or(file.kind)
        .ok_or_else(|| CliError::Usage("sweep kind required (--kind theta|p)".into()))?;
    let mut config = SweepConfig::defaults(kind);
    if let Some(g) = &args.grid {
        let grid: Result<Vec<f64>, _> = g.split(',').map(|v| v.trim().parse::<f64>()).collect();
        config.grid = grid.map_err(|e| CliError::Usage(format!("bad --grid: {e}")))?;
    } else if let Some(g) = file.grid {
        config.grid = g;
    }
    config.fixed_value = args.fixed.or(file.fixed);
    if let Some(p) = args.pipeline.or(file.pipeline) {
        config.pipeline = p;
    }
    if let Some(e) = args.exposure.or(file.exposure) {
        config.exposure = e;
    }
    if let Some(m) = args.mc_samples.or(file.mc_samples) {
        config.mc_samples = m;
    }
    if let Some(s) = args.seed.or(file.seed) {
        config.seed = s;
    }
    if let Some(v) = args.delta_variant.or(file.delta_variant) {
        config.delta_variant = v;
    }
    if let Some(s) = args.settings.or(file.settings) {
        config.settings_mode = s;
    }
    if let Some(o) = args.output.clone().or(file.output) {
        config.output_path = o;
    }
    Ok(config)
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, CliError> {
    let config = build_sweep_config(args)?;
    let rows = run_sweep_to_file(&config)?;
    println!(
        "wrote {} rows to {}",
        rows.len(),
        config.output_path.display()
    );
    Ok(0)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32, CliError> {
    let analysis = analyze(args.p, args.theta)?;
    print!("{}", format_analysis(args.p, args.theta, &analysis));
    if let Some(path) = &args.output {
        write_atomic(path, &analysis_csv(args.p, args.theta, &analysis))?;
        println!("\nwrote report row to {}", path.display());
    }
    Ok(0)
}

fn cmd_tomo(args: &TomoArgs) -> Result<i32, CliError> {
    let params = StateParams::new(args.p, args.theta)
        .map_err(|e| CliError::Usage(format!("invalid parameters: {e}")))?;
    let rho = bell_diagonal_state(params)
        .map_err(|e| CliError::Usage(format!("state construction failed: {e}")))?;
    let settings = standard_settings(args.settings);
    let table = simulate_counts(&rho, &settings, args.exposure, args.seed)
        .map_err(|e| CliError::Usage(format!("count simulation failed: {e}")))?;
    println!(
        "simulated {} settings at exposure {:.3e}, seed {}",
        table.settings.len(),
        args.exposure,
        args.seed
    );
    if let Some(path) = &args.output {
        write_atomic(path, &table.to_csv())?;
        println!("wrote counts to {}", path.display());
    }

    let lin = linear_reconstruct(&table)
        .map_err(|e| CliError::Usage(format!("linear reconstruction failed: {e}")))?;
    println!(
        "linear inversion: physical = {}, max-entry error {:.3e}",
        lin.physical,
        lin.rho_hat.max_abs_diff(rho.mat())
    );
    let mle = mle_reconstruct(&table, None)
        .map_err(|e| CliError::Usage(format!("MLE reconstruction failed: {e}")))?;
    let rho_hat = mle
        .density()
        .map_err(|e| CliError::Usage(format!("MLE estimate not physical: {e}")))?;
    let f = fidelity(&rho_hat, &rho)
        .map_err(|e| CliError::Usage(format!("fidelity evaluation failed: {e}")))?;
    println!(
        "MLE: converged = {} after {} iterations, fidelity to truth {:.6}",
        mle.converged, mle.iterations, f
    );

    if let Some(path) = &args.rho_output {
        let csv = format!(
            "# schema: quncert.rho.v1\n{}\n{}\n{}\n",
            ReconstructionResult::csv_header(),
            lin.csv_row(),
            mle.csv_row()
        );
        write_atomic(path, &csv)?;
        println!("wrote reconstructions to {}", path.display());
    }

    if args.mc_samples > 1 {
        let report = monte_carlo_errors(
            &rho,
            &settings,
            args.exposure,
            args.mc_samples,
            args.seed,
            &Quantity::all(),
            args.delta_variant,
        )
        .map_err(|e| CliError::Usage(format!("Monte Carlo run failed: {e}")))?;
        println!(
            "\nMonte Carlo over {} samples ({} failed):",
            report.n_samples, report.n_failed
        );
        println!("  {:<14} {:>12} {:>12}", "quantity", "mean", "std");
        for ((name, mean), std) in report
            .quantity_names
            .iter()
            .zip(&report.means)
            .zip(&report.std_devs)
        {
            println!("  {name:<14} {mean:>12.6} {std:>12.6}");
        }
    }
    Ok(0)
}

fn cmd_fuzz(args: &FuzzArgs) -> Result<i32, CliError> {
    let summary = bound_fuzz(args.n, args.seed, args.delta_variant)?;
    print!("{}", format_summary(&summary));
    // Violations document the printed coefficient when it is selected;
    // only the consistent variant treats them as failures.
    if summary.any_violation() && args.delta_variant == DeltaVariant::Consistent {
        return Ok(2);
    }
    Ok(0)
}

fn cmd_plot(args: &PlotArgs) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let table = parse_sweep_csv(&text)?;
    let svg = render_svg(&table)?;
    write_atomic(&args.output, &svg)?;
    println!("wrote figure to {}", args.output.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not usage errors.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::TomoSim(args) => cmd_tomo(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Plot(args) => cmd_plot(args),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
