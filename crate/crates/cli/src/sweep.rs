//! Parameter sweeps over the Bell-like diagonal family, analytic or through
//! the full tomographic chain, with deterministic CSV output.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;

use quncert::infotheory::{uncertainty_report, DeltaVariant};
use quncert::sampling::derive_stream_seed;
use quncert::states::{bell_diagonal_state, mub_qubit, StateParams};
use quncert::tomography::{
    fidelity, mle_reconstruct, monte_carlo_errors, simulate_counts, standard_settings, Quantity,
};

use crate::config::{Pipeline, SweepConfig, SweepKind};
use crate::CliError;

pub const SWEEP_SCHEMA: &str = "quncert.sweep.v1";

/// One sweep grid point, carrying the quantity values in [`row_quantities`]
/// order and, when Monte Carlo sampling ran, their standard deviations.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta_deg: f64,
    pub p: f64,
    pub values: Vec<f64>,
    pub std_devs: Option<Vec<f64>>,
}

/// The quantity columns a sweep row carries for the given pipeline.
pub fn row_quantities(pipeline: Pipeline) -> Vec<Quantity> {
    let mut q = vec![
        Quantity::Elhs,
        Quantity::Erhs1,
        Quantity::Erhs2,
        Quantity::Clhs,
        Quantity::Crhs1,
        Quantity::Crhs2,
        Quantity::SAb,
        Quantity::SB,
        Quantity::SAGivenB,
        Quantity::IAb,
        Quantity::Delta,
    ];
    if pipeline == Pipeline::Tomographic {
        q.push(Quantity::Fidelity);
    }
    q
}

fn branches(config: &SweepConfig) -> Vec<f64> {
    match config.kind {
        SweepKind::Theta => match config.fixed_value {
            Some(p) => vec![p],
            None => vec![0.0, 1.0],
        },
        SweepKind::P => vec![config.fixed_value.unwrap_or(45.0)],
    }
}

fn point_params(config: &SweepConfig, branch: f64, grid_value: f64) -> (f64, f64) {
    match config.kind {
        SweepKind::Theta => (grid_value, branch),
        SweepKind::P => (branch, grid_value),
    }
}

fn compute_row(
    config: &SweepConfig,
    quantities: &[Quantity],
    theta_deg: f64,
    p: f64,
    point_seed: u64,
) -> Result<SweepRow, CliError> {
    let params = StateParams::new(p, theta_deg)
        .map_err(|e| CliError::Usage(format!("invalid state parameters: {e}")))?;
    let rho = bell_diagonal_state(params)
        .map_err(|e| CliError::Usage(format!("state construction failed: {e}")))?;
    match config.pipeline {
        Pipeline::Analytic => {
            let mubs = mub_qubit();
            let report = uncertainty_report(&rho, &mubs, config.delta_variant)
                .map_err(|e| CliError::Usage(format!("report evaluation failed: {e}")))?;
            let values = quantities.iter().map(|q| q.extract(&report, f64::NAN)).collect();
            Ok(SweepRow {
                theta_deg,
                p,
                values,
                std_devs: None,
            })
        }
        Pipeline::Tomographic => {
            let settings = standard_settings(config.settings_mode);
            if config.mc_samples > 1 {
                let report = monte_carlo_errors(
                    &rho,
                    &settings,
                    config.exposure,
                    config.mc_samples,
                    point_seed,
                    quantities,
                    config.delta_variant,
                )
                .map_err(|e| CliError::Usage(format!("Monte Carlo run failed: {e}")))?;
                Ok(SweepRow {
                    theta_deg,
                    p,
                    values: report.means,
                    std_devs: Some(report.std_devs),
                })
            } else {
                let table = simulate_counts(&rho, &settings, config.exposure, point_seed)
                    .map_err(|e| CliError::Usage(format!("count simulation failed: {e}")))?;
                let recon = mle_reconstruct(&table, None)
                    .map_err(|e| CliError::Usage(format!("reconstruction failed: {e}")))?;
                let rho_hat = recon
                    .density()
                    .map_err(|e| CliError::Usage(format!("estimate not physical: {e}")))?;
                let f = fidelity(&rho_hat, &rho)
                    .map_err(|e| CliError::Usage(format!("fidelity failed: {e}")))?;
                let mubs = mub_qubit();
                let report = uncertainty_report(&rho_hat, &mubs, config.delta_variant)
                    .map_err(|e| CliError::Usage(format!("report evaluation failed: {e}")))?;
                let values = quantities.iter().map(|q| q.extract(&report, f)).collect();
                Ok(SweepRow {
                    theta_deg,
                    p,
                    values,
                    std_devs: None,
                })
            }
        }
    }
}

/// Run the sweep and return its rows, sorted by (branch, grid value).
///
/// Grid points are dispatched to a worker pool; per-point seeds derive from
/// the configured seed and the point's position, so output is identical
/// regardless of scheduling.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    config.validate()?;
    let quantities = row_quantities(config.pipeline);
    let mut jobs = Vec::new();
    for (bi, &branch) in branches(config).iter().enumerate() {
        for (gi, &g) in config.grid.iter().enumerate() {
            let (theta_deg, p) = point_params(config, branch, g);
            let index = (bi * config.grid.len() + gi) as u64;
            jobs.push((theta_deg, p, derive_stream_seed(config.seed, index)));
        }
    }
    let rows: Result<Vec<SweepRow>, CliError> = jobs
        .par_iter()
        .map(|&(theta_deg, p, seed)| compute_row(config, &quantities, theta_deg, p, seed))
        .collect();
    let rows = rows?;

    // Row sanity under the consistent variant: the strengthened bound never
    // exceeds the measured uncertainty (exact analytically, 5 sigma under
    // shot noise).
    if config.delta_variant == DeltaVariant::Consistent {
        let idx_elhs = 0;
        let idx_erhs2 = 2;
        for row in &rows {
            let tol = match (&config.pipeline, &row.std_devs) {
                (Pipeline::Analytic, _) => 1e-9,
                (Pipeline::Tomographic, Some(stds)) => {
                    1e-9 + 5.0 * (stds[idx_elhs] + stds[idx_erhs2])
                }
                // Single shot: no variance estimate, allow generous noise.
                (Pipeline::Tomographic, None) => 0.2,
            };
            if row.values[idx_elhs] < row.values[idx_erhs2] - tol {
                return Err(CliError::Usage(format!(
                    "internal check failed at theta={} p={}: elhs {} < erhs2 {}",
                    row.theta_deg, row.p, row.values[idx_elhs], row.values[idx_erhs2]
                )));
            }
        }
    }
    Ok(rows)
}

/// Render rows as the sweep CSV (schema comment, header, full precision).
pub fn rows_to_csv(config: &SweepConfig, rows: &[SweepRow]) -> String {
    let quantities = row_quantities(config.pipeline);
    let mut out = format!("# schema: {SWEEP_SCHEMA}\n");
    out.push_str("theta_deg,p");
    for q in &quantities {
        out.push_str(&format!(",{}", q.name()));
    }
    let with_stds = rows.iter().any(|r| r.std_devs.is_some());
    if with_stds {
        for q in &quantities {
            out.push_str(&format!(",{}_std", q.name()));
        }
    }
    out.push('\n');
    for row in rows {
        out.push_str(&format!("{:.16e},{:.16e}", row.theta_deg, row.p));
        for v in &row.values {
            out.push_str(&format!(",{v:.16e}"));
        }
        if with_stds {
            let stds = row
                .std_devs
                .as_ref()
                .expect("mixed std presence in sweep rows");
            for s in stds {
                out.push_str(&format!(",{s:.16e}"));
            }
        }
        out.push('\n');
    }
    out
}

/// Write CSV text atomically: temp file in the target directory + rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let tmp = match dir {
        Some(d) => d.join(format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        )),
        None => Path::new(&format!(
            ".{}.tmp",
            path.file_name().unwrap_or_default().to_string_lossy()
        ))
        .to_path_buf(),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    {
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(contents.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
    }
    fs::rename(&tmp, path).map_err(io)?;
    Ok(())
}

/// Run the sweep and write its CSV to the configured output path.
pub fn run_sweep_to_file(config: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    let rows = run_sweep(config)?;
    let csv = rows_to_csv(config, &rows);
    write_atomic(&config.output_path, &csv)?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_theta_grid;

    #[test]
    fn analytic_theta_sweep_has_both_branches_and_endpoints() {
        let config = SweepConfig::defaults(SweepKind::Theta);
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2 * default_theta_grid().len());
        // Branch p = 0 comes first, then p = 1, each sorted by theta.
        assert_eq!(rows[0].p, 0.0);
        assert_eq!(rows[11].p, 1.0);

        // At theta = 45 both branches are pure Bell states: ELHS = 0,
        // CLHS = 3.
        for row in rows.iter().filter(|r| (r.theta_deg - 45.0).abs() < 1e-12) {
            assert!(row.values[0].abs() < 1e-9, "ELHS at 45");
            assert!((row.values[3] - 3.0).abs() < 1e-9, "CLHS at 45");
        }
    }

    #[test]
    fn p_sweep_matches_theta_sweep_at_shared_point() {
        let mut p_cfg = SweepConfig::defaults(SweepKind::P);
        p_cfg.fixed_value = Some(30.0);
        let p_rows = run_sweep(&p_cfg).unwrap();
        let p0_row = p_rows.iter().find(|r| r.p == 0.0).unwrap();

        let theta_cfg = SweepConfig::defaults(SweepKind::Theta);
        let t_rows = run_sweep(&theta_cfg).unwrap();
        let t_row = t_rows
            .iter()
            .find(|r| r.p == 0.0 && (r.theta_deg - 30.0).abs() < 1e-12)
            .unwrap();
        for (a, b) in p0_row.values.iter().zip(&t_row.values) {
            assert_eq!(a, b, "shared grid point disagrees between sweeps");
        }
    }

    #[test]
    fn fixed_value_narrows_theta_sweep_to_one_branch() {
        let mut config = SweepConfig::defaults(SweepKind::Theta);
        config.fixed_value = Some(0.5);
        config.grid = vec![0.0, 45.0, 90.0];
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.p == 0.5));
    }

    #[test]
    fn csv_shape_and_schema() {
        let mut config = SweepConfig::defaults(SweepKind::Theta);
        config.grid = vec![0.0, 45.0];
        let rows = run_sweep(&config).unwrap();
        let csv = rows_to_csv(&config, &rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# schema: quncert.sweep.v1");
        assert_eq!(
            lines[1],
            "theta_deg,p,elhs,erhs1,erhs2,clhs,crhs1,crhs2,s_ab,s_b,s_a_given_b,i_ab,delta"
        );
        assert_eq!(lines.len(), 2 + 4);
    }

    #[test]
    fn tomographic_rows_carry_stds_and_fidelity() {
        let mut config = SweepConfig::defaults(SweepKind::P);
        config.pipeline = Pipeline::Tomographic;
        config.grid = vec![0.0, 1.0];
        config.exposure = 500.0;
        config.mc_samples = 4;
        config.seed = 5;
        let rows = run_sweep(&config).unwrap();
        assert_eq!(rows.len(), 2);
        for row in &rows {
            assert_eq!(row.values.len(), 12);
            assert!(row.std_devs.as_ref().unwrap().len() == 12);
            let f = row.values[11];
            assert!(f > 0.8 && f <= 1.0, "fidelity {f}");
        }
        let csv = rows_to_csv(&config, &rows);
        assert!(csv.lines().nth(1).unwrap().contains("fidelity_std"));
    }
}
