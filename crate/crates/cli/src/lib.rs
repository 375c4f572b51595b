//! Sweep driver behind the `casimir` binary: config parsing, figure presets,
//! grid evaluation and CSV output.

pub mod config;
pub mod output;
pub mod sweep;

use std::path::{Path, PathBuf};

use thiserror::Error;

use config::{log_grid, ConfigError, ModelKind, Quantity, SweepSpec};

pub const WORKERS_ENV: &str = "CASIMIR_WORKERS";

/// Radii shared by the figure presets, in µm.
pub const FIGURE_RADII: [f64; 5] = [0.1, 0.2, 0.5, 1.0, 2.0];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Sweep,
    Fig1,
    Fig2,
    Fig3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Sweep => "sweep",
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
        }
    }

    /// Starting spec before the config file and flags are applied.
    pub fn spec(self) -> SweepSpec {
        let base = SweepSpec::default();
        if self == Preset::Sweep {
            return base;
        }
        let figure = SweepSpec {
            radii: FIGURE_RADII.to_vec(),
            separations: log_grid(0.1, 20.0, 40).expect("static grid"),
            temperatures: vec![300.0],
            out: PathBuf::from(format!("{}.csv", self.name())),
            note: Some("representative radii 0.1, 0.2, 0.5, 1, 2 um".into()),
            ..base
        };
        match self {
            Preset::Fig1 => SweepSpec {
                models: vec![ModelKind::Perfect],
                quantities: vec![Quantity::Theta, Quantity::ThetaPfa],
                ..figure
            },
            Preset::Fig2 => SweepSpec {
                models: vec![ModelKind::Drude],
                quantities: vec![Quantity::Theta, Quantity::ThetaPfa],
                ..figure
            },
            _ => SweepSpec {
                models: vec![ModelKind::Drude],
                quantities: vec![Quantity::Ratio],
                ..figure
            },
        }
    }
}

/// Flag values; `Some` overrides the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub l_max: Option<usize>,
}

/// Preset, then config file, then flags.
pub fn resolve_spec(preset: Preset, overrides: &Overrides) -> Result<SweepSpec, CliError> {
    let mut spec = preset.spec();
    if let Some(path) = &overrides.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        spec.apply_config(&text)?;
    }
    if let Some(out) = &overrides.out {
        spec.out = out.clone();
    }
    if let Some(tol) = overrides.tol {
        spec.tol = tol;
    }
    if let Some(l) = overrides.l_max {
        spec.l_max = Some(l);
    }
    spec.validate()?;
    Ok(spec)
}

/// Pool with `workers` threads, or the available parallelism when `None`.
pub fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n.max(1));
    }
    Ok(builder.build()?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub points: usize,
    pub failed: usize,
    pub path: PathBuf,
    pub config_hash: String,
}

/// Evaluate the grid and write the CSV atomically to `spec.out`.
pub fn run_sweep(
    spec: &SweepSpec,
    command: &str,
    pool: &rayon::ThreadPool,
) -> Result<SweepOutcome, CliError> {
    let rows = pool.install(|| sweep::run(spec));
    let bytes = output::render(spec, command, &rows).map_err(|source| CliError::Io {
        path: spec.out.clone(),
        source,
    })?;
    write_csv(&spec.out, &bytes)?;
    Ok(SweepOutcome {
        points: rows.len(),
        failed: rows.iter().filter(|(_, r)| !r.ok()).count(),
        path: spec.out.clone(),
        config_hash: spec.config_hash(),
    })
}

fn write_csv(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    output::write_atomic(path, bytes).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
