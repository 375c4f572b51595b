//! CSV writer: `#` metadata block, one header line, one row per grid point.

use std::io::{self, Write};
use std::path::Path;

use casimir_core::units::{thermal_wavelength, BOLTZMANN, HBAR, HBAR_C_OVER_KB, SPEED_OF_LIGHT};

use crate::config::SweepSpec;
use crate::sweep::{GridPoint, Row};

pub const SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 16] = [
    "model",
    "radius_um",
    "separation_um",
    "temperature_K",
    "free_energy_hbarc_per_um",
    "force_hbarc_per_um2",
    "entropy_kB",
    "theta",
    "theta_pfa",
    "force_ratio_plasma_drude",
    "l_max",
    "m_max",
    "n_max",
    "quadrature_order",
    "error_estimate",
    "status",
];

fn metadata(spec: &SweepSpec, command: &str) -> Vec<String> {
    let mut lines = vec![
        format!("schema_version = {SCHEMA_VERSION}"),
        format!("command = {command}"),
        format!("config_hash = {}", spec.config_hash()),
        "units = lengths um, temperature K, energy hbar*c/um, force hbar*c/um^2 (attraction positive), entropy k_B".into(),
        format!("constant hbar = {HBAR:e} J s"),
        format!("constant c = {SPEED_OF_LIGHT} m/s"),
        format!("constant k_B = {BOLTZMANN:e} J/K"),
        format!("constant hbar*c/k_B = {HBAR_C_OVER_KB} um K"),
        format!("thermal_wavelength(300 K) = {:.4} um", thermal_wavelength(300.0)),
    ];
    if let Some(note) = &spec.note {
        lines.push(format!("note = {note}"));
    }
    lines.extend(
        spec.to_config_string()
            .lines()
            .map(|l| format!("config {l}")),
    );
    lines
}

fn cell(value: Option<f64>) -> String {
    value.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn render(spec: &SweepSpec, command: &str, rows: &[(GridPoint, Row)]) -> io::Result<Vec<u8>> {
    let mut buffer = Vec::new();
    for line in metadata(spec, command) {
        writeln!(buffer, "# {line}")?;
    }
    let mut writer = csv::Writer::from_writer(buffer);
    writer.write_record(COLUMNS)?;
    for (p, row) in rows {
        let r = &row.report;
        let status = match &row.failure {
            None => "ok".to_string(),
            Some(message) => format!("failed: {message}"),
        };
        writer.write_record([
            p.model.name().to_string(),
            format!("{}", p.radius),
            format!("{}", p.separation),
            format!("{}", p.temperature),
            cell(row.free_energy),
            cell(row.force),
            cell(row.entropy),
            cell(row.theta),
            cell(row.theta_pfa),
            cell(row.ratio),
            r.l_max.to_string(),
            r.m_max.to_string(),
            r.n_max.to_string(),
            r.quadrature_order.to_string(),
            format!("{:e}", r.error_estimate),
            status,
        ])?;
    }
    writer.into_inner().map_err(|e| e.into_error())
}

/// Write to a temporary file next to `path`, then rename over it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
