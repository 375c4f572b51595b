//! Sweep description and its `key = value` config format.
//!
//! ```text
//! # lengths take um/µm/nm/m suffixes, bare numbers are µm
//! models = perfect, drude
//! radii = 0.5um, 1um
//! separations = 100nm:20um:40     # 40 log-spaced points, or a comma list
//! temperatures = 300K
//! quantities = force, theta, theta_pfa
//! plasma_wavelength = 136nm
//! relaxation_ratio = 250
//! tol = 1e-6
//! lmax = 20
//! ```

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use casimir_core::MaterialModel;
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(message.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Perfect,
    Plasma,
    Drude,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Perfect => "perfect",
            ModelKind::Plasma => "plasma",
            ModelKind::Drude => "drude",
        }
    }
}

impl FromStr for ModelKind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "perfect" => Ok(ModelKind::Perfect),
            "plasma" => Ok(ModelKind::Plasma),
            "drude" => Ok(ModelKind::Drude),
            _ => Err(invalid(format!(
                "unknown model '{s}' (perfect, plasma, drude)"
            ))),
        }
    }
}

/// Columns that can be requested per grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    FreeEnergy,
    Force,
    Entropy,
    Theta,
    ThetaPfa,
    /// `F_plasma/F_Drude` at the sweep's material parameters, independent of the row model.
    Ratio,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::FreeEnergy => "free_energy",
            Quantity::Force => "force",
            Quantity::Entropy => "entropy",
            Quantity::Theta => "theta",
            Quantity::ThetaPfa => "theta_pfa",
            Quantity::Ratio => "ratio",
        }
    }
}

impl FromStr for Quantity {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Ok(match s {
            "free_energy" => Quantity::FreeEnergy,
            "force" => Quantity::Force,
            "entropy" => Quantity::Entropy,
            "theta" => Quantity::Theta,
            "theta_pfa" => Quantity::ThetaPfa,
            "ratio" => Quantity::Ratio,
            _ => {
                return Err(invalid(format!(
                    "unknown quantity '{s}' (free_energy, force, entropy, theta, theta_pfa, ratio)"
                )))
            }
        })
    }
}

/// Length in µm from `"0.5"`, `"0.5um"`, `"500nm"`, `"5e-7m"`.
pub fn parse_length(text: &str) -> Result<f64, ConfigError> {
    let s = text.trim();
    let (number, scale) = if let Some(v) = s.strip_suffix("nm") {
        (v, 1e-3)
    } else if let Some(v) = s.strip_suffix("um").or_else(|| s.strip_suffix("µm")) {
        (v, 1.0)
    } else if let Some(v) = s.strip_suffix('m') {
        (v, 1e6)
    } else {
        (s, 1.0)
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| invalid(format!("bad length '{text}'")))?;
    Ok(value * scale)
}

/// Temperature in K from `"300"` or `"300K"`.
pub fn parse_temperature(text: &str) -> Result<f64, ConfigError> {
    let s = text.trim();
    let number = s.strip_suffix('K').unwrap_or(s).trim();
    number
        .parse()
        .map_err(|_| invalid(format!("bad temperature '{text}'")))
}

fn parse_list<T>(
    value: &str,
    item: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<Vec<T>, ConfigError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(item)
        .collect()
}

/// `min:max:n` log-spaced (both ends included) or a comma list of lengths.
pub fn parse_separations(value: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = value.split(':').collect();
    match parts.as_slice() {
        [lo, hi, n] => {
            let lo = parse_length(lo)?;
            let hi = parse_length(hi)?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| invalid(format!("bad point count '{n}'")))?;
            log_grid(lo, hi, n)
        }
        [_] => parse_list(value, parse_length),
        _ => Err(invalid(format!("bad separation grid '{value}'"))),
    }
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, ConfigError> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(invalid(format!(
            "log grid needs 0 < min < max and n >= 2, got {lo}:{hi}:{n}"
        )));
    }
    let step = (hi / lo).ln() / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n).map(|i| lo * (step * i as f64).exp()).collect();
    grid[n - 1] = hi;
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub models: Vec<ModelKind>,
    /// Sphere radii in µm.
    pub radii: Vec<f64>,
    /// Surface separations in µm.
    pub separations: Vec<f64>,
    /// Temperatures in K.
    pub temperatures: Vec<f64>,
    pub quantities: Vec<Quantity>,
    /// λ_P in µm.
    pub plasma_wavelength: f64,
    /// λ_γ/λ_P.
    pub relaxation_ratio: f64,
    pub tol: f64,
    pub l_max: Option<usize>,
    pub out: PathBuf,
    /// Free text copied into the CSV metadata.
    pub note: Option<String>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            models: vec![ModelKind::Perfect],
            radii: vec![1.0],
            separations: vec![0.5, 1.0, 2.0, 5.0],
            temperatures: vec![300.0],
            quantities: vec![Quantity::FreeEnergy, Quantity::Force],
            plasma_wavelength: 0.136,
            relaxation_ratio: 250.0,
            tol: 1e-6,
            l_max: None,
            out: PathBuf::from("sweep.csv"),
            note: None,
        }
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<(), ConfigError> {
    if grid.is_empty() {
        return Err(invalid(format!("{name} must not be empty")));
    }
    if grid.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(invalid(format!("{name} must be positive and finite")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("{name} must be strictly ascending")));
    }
    Ok(())
}

impl SweepSpec {
    /// Overlay `key = value` lines on `self`. Unknown or repeated keys are errors.
    pub fn apply_config(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut seen = HashSet::new();
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let at = |e: ConfigError| match e {
                ConfigError::Invalid(message) => ConfigError::Line { line, message },
                other => other,
            };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ConfigError::Line {
                line,
                message: format!("expected key = value, got '{content}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if !seen.insert(key.to_string()) {
                return Err(ConfigError::Line {
                    line,
                    message: format!("duplicate key '{key}'"),
                });
            }
            self.set(key, value).map_err(at)?;
        }
        Ok(())
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "models" => self.models = parse_list(value, str::parse)?,
            "radii" => self.radii = parse_list(value, parse_length)?,
            "separations" => self.separations = parse_separations(value)?,
            "temperatures" => self.temperatures = parse_list(value, parse_temperature)?,
            "quantities" => self.quantities = parse_list(value, str::parse)?,
            "plasma_wavelength" => self.plasma_wavelength = parse_length(value)?,
            "relaxation_ratio" => {
                self.relaxation_ratio = value
                    .parse()
                    .map_err(|_| invalid(format!("bad ratio '{value}'")))?
            }
            "tol" => {
                self.tol = value
                    .parse()
                    .map_err(|_| invalid(format!("bad tolerance '{value}'")))?
            }
            "lmax" => {
                self.l_max = Some(
                    value
                        .parse()
                        .map_err(|_| invalid(format!("bad lmax '{value}'")))?,
                )
            }
            "out" => self.out = PathBuf::from(value),
            "note" => self.note = Some(value.to_string()),
            _ => return Err(invalid(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.models.is_empty() {
            return Err(invalid("models must not be empty"));
        }
        if self.quantities.is_empty() {
            return Err(invalid("quantities must not be empty"));
        }
        check_grid("radii", &self.radii)?;
        check_grid("separations", &self.separations)?;
        if self.temperatures.is_empty() {
            return Err(invalid("temperatures must not be empty"));
        }
        if self
            .temperatures
            .iter()
            .any(|t| !(t.is_finite() && *t >= 0.0))
        {
            return Err(invalid("temperatures must be >= 0 and finite"));
        }
        if self.temperatures.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("temperatures must be strictly ascending"));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(invalid(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.l_max == Some(0) {
            return Err(invalid("lmax must be >= 1"));
        }
        if self
            .note
            .as_deref()
            .is_some_and(|n| n.contains(['\n', '#']))
        {
            return Err(invalid("note must be a single line without '#'"));
        }
        self.material(ModelKind::Drude)
            .map_err(|e| invalid(format!("material parameters: {e}")))?;
        Ok(())
    }

    pub fn material(&self, kind: ModelKind) -> casimir_core::Result<MaterialModel> {
        match kind {
            ModelKind::Perfect => Ok(MaterialModel::PerfectReflector),
            ModelKind::Plasma => MaterialModel::plasma(self.plasma_wavelength),
            ModelKind::Drude => MaterialModel::drude(
                self.plasma_wavelength,
                self.relaxation_ratio * self.plasma_wavelength,
            ),
        }
    }

    /// Canonical config text; parsing it back gives the same spec.
    pub fn to_config_string(&self) -> String {
        let join = |items: Vec<String>| items.join(", ");
        let mut s = String::new();
        let mut line = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        line(
            "models",
            join(self.models.iter().map(|m| m.name().into()).collect()),
        );
        line(
            "radii",
            join(self.radii.iter().map(|r| format!("{r}um")).collect()),
        );
        line(
            "separations",
            join(self.separations.iter().map(|l| format!("{l}um")).collect()),
        );
        line(
            "temperatures",
            join(self.temperatures.iter().map(|t| format!("{t}K")).collect()),
        );
        line(
            "quantities",
            join(self.quantities.iter().map(|q| q.name().into()).collect()),
        );
        line("plasma_wavelength", format!("{}um", self.plasma_wavelength));
        line("relaxation_ratio", format!("{}", self.relaxation_ratio));
        line("tol", format!("{:e}", self.tol));
        if let Some(l) = self.l_max {
            line("lmax", l.to_string());
        }
        line("out", self.out.display().to_string());
        if let Some(note) = &self.note {
            line("note", note.clone());
        }
        s
    }

    /// SHA-256 of the canonical config without the output path.
    pub fn config_hash(&self) -> String {
        let text: String = self
            .to_config_string()
            .lines()
            .filter(|l| !l.starts_with("out ="))
            .map(|l| format!("{l}\n"))
            .collect();
        Sha256::digest(text.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn points(&self) -> usize {
        self.models.len() * self.temperatures.len() * self.radii.len() * self.separations.len()
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_config_string())
    }
}
