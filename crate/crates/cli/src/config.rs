//! Sweep configuration: defaults matching the published parameter grids,
//! flat key = value config files, and flag merging (flags win).

use std::path::PathBuf;

use quncert::infotheory::DeltaVariant;
use quncert::tomography::SettingsMode;

use crate::CliError;

/// Which state parameter the sweep walks over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Theta,
    P,
}

impl std::str::FromStr for SweepKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theta" => Ok(SweepKind::Theta),
            "p" => Ok(SweepKind::P),
            other => Err(format!("unknown sweep kind `{other}` (use theta or p)")),
        }
    }
}

/// How sweep rows are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pipeline {
    /// Exact evaluation of the bounds.
    Analytic,
    /// Full count simulation -> MLE -> report chain with error bars.
    Tomographic,
}

impl std::str::FromStr for Pipeline {
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "analytic" => Ok(Pipeline::Analytic),
            "tomographic" => Ok(Pipeline::Tomographic),
            other => Err(format!(
                "unknown pipeline `{other}` (use analytic or tomographic)"
            )),
        }
    }
    type Err = String;
}

/// The published grids: eleven angles and eleven mixing weights.
pub fn default_theta_grid() -> Vec<f64> {
    vec![0.0, 10.0, 20.0, 30.0, 40.0, 45.0, 50.0, 60.0, 70.0, 80.0, 90.0]
}

pub fn default_p_grid() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub kind: SweepKind,
    /// The non-swept parameter. For theta sweeps `None` means both p = 0
    /// and p = 1 branches; for p sweeps `None` means theta = 45 degrees.
    pub fixed_value: Option<f64>,
    pub grid: Vec<f64>,
    pub pipeline: Pipeline,
    pub exposure: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub delta_variant: DeltaVariant,
    pub settings_mode: SettingsMode,
    pub output_path: PathBuf,
}

impl SweepConfig {
    pub fn defaults(kind: SweepKind) -> Self {
        Self {
            kind,
            fixed_value: None,
            grid: match kind {
                SweepKind::Theta => default_theta_grid(),
                SweepKind::P => default_p_grid(),
            },
            pipeline: Pipeline::Analytic,
            exposure: 1e4,
            mc_samples: 100,
            seed: 0,
            delta_variant: DeltaVariant::Consistent,
            settings_mode: SettingsMode::ThirtySix,
            output_path: PathBuf::from("sweep.csv"),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.grid.is_empty() {
            return Err(CliError::Usage("sweep grid is empty".into()));
        }
        for w in self.grid.windows(2) {
            if w[1] <= w[0] {
                return Err(CliError::Usage(format!(
                    "grid must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        let (lo, hi, name) = match self.kind {
            SweepKind::Theta => (0.0, 90.0, "theta"),
            SweepKind::P => (0.0, 1.0, "p"),
        };
        for &g in &self.grid {
            if !(lo..=hi).contains(&g) {
                return Err(CliError::Usage(format!(
                    "{name} grid value {g} outside [{lo}, {hi}]"
                )));
            }
        }
        if let Some(f) = self.fixed_value {
            let (lo, hi, name) = match self.kind {
                SweepKind::Theta => (0.0, 1.0, "fixed p"),
                SweepKind::P => (0.0, 90.0, "fixed theta"),
            };
            if !(lo..=hi).contains(&f) {
                return Err(CliError::Usage(format!(
                    "{name} value {f} outside [{lo}, {hi}]"
                )));
            }
        }
        if !(self.exposure > 0.0) || !self.exposure.is_finite() {
            return Err(CliError::Usage(format!(
                "exposure must be positive, got {}",
                self.exposure
            )));
        }
        if self.mc_samples == 0 {
            return Err(CliError::Usage("mc_samples must be at least 1".into()));
        }
        Ok(())
    }
}

/// Parsed contents of a flat `key = value` config file. Every field is
/// optional; flags supplied on the command line take precedence.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub kind: Option<SweepKind>,
    pub fixed: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub pipeline: Option<Pipeline>,
    pub exposure: Option<f64>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
    pub delta_variant: Option<DeltaVariant>,
    pub settings: Option<SettingsMode>,
    pub output: Option<PathBuf>,
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile, CliError> {
    let mut cfg = ConfigFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| {
            CliError::Usage(format!(
                "config line {}: bad {what} value `{value}`",
                lineno + 1
            ))
        };
        match key {
            "kind" => cfg.kind = Some(value.parse().map_err(|_| bad("kind"))?),
            "fixed" => cfg.fixed = Some(value.parse().map_err(|_| bad("fixed"))?),
            "grid" => {
                let grid: Result<Vec<f64>, _> =
                    value.split(',').map(|v| v.trim().parse::<f64>()).collect();
                cfg.grid = Some(grid.map_err(|_| bad("grid"))?);
            }
            "pipeline" => cfg.pipeline = Some(value.parse().map_err(|_| bad("pipeline"))?),
            "exposure" => cfg.exposure = Some(value.parse().map_err(|_| bad("exposure"))?),
            "mc_samples" => cfg.mc_samples = Some(value.parse().map_err(|_| bad("mc_samples"))?),
            "seed" => cfg.seed = Some(value.parse().map_err(|_| bad("seed"))?),
            "delta_variant" => {
                cfg.delta_variant = Some(value.parse().map_err(|_| bad("delta_variant"))?)
            }
            "settings" => cfg.settings = Some(value.parse().map_err(|_| bad("settings"))?),
            "output" => cfg.output = Some(PathBuf::from(value)),
            other => {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}
