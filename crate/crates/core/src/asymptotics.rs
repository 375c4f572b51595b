//! Closed-form large-distance results for a small sphere (`L ≫ R`).
//!
//! With `ν = 2πL/λ_T` the perfect-reflector free energy is
//! `𝓕 = −(3ħcR³/(4λ_T L³)) φ(ν)` with
//! `φ(ν) = (ν sinh ν + cosh ν (ν² + sinh² ν)) / (2 sinh³ ν)`.
//! At high temperature the plasma and Drude models give
//! `−(3ħcR³/(8λ_T L³))(1 + 1/α² − coth α/α)` with `α = 2πR/λ_P` and
//! `−ħcR³/(4λ_T L³)`. Results are in the crate's reduced units.

use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::units::thermal_wavelength;

/// Below this `ν` the series branches are used.
pub const SERIES_BELOW: f64 = 1e-2;

/// `φ(ν)` for `ν > 0`.
pub fn phi(nu: f64) -> f64 {
    if nu < SERIES_BELOW {
        phi_series(nu)
    } else {
        phi_closed(nu)
    }
}

fn phi_series(nu: f64) -> f64 {
    let v2 = nu * nu;
    let v3 = v2 * nu;
    1.5 / nu + v3 * (-1.0 / 90.0 + v2 * (2.0 / 315.0 + v2 * (-1.0 / 630.0 + v2 * 4.0 / 13365.0)))
}

fn phi_closed(nu: f64) -> f64 {
    let (csch2, coth) = csch2_coth(nu);
    0.5 * nu * csch2 + 0.5 * coth * (nu * nu * csch2 + 1.0)
}

/// `φ′(ν) = −ν² csch²ν (csch²ν/2 + coth²ν)`.
pub fn phi_prime(nu: f64) -> f64 {
    if nu < SERIES_BELOW {
        phi_prime_series(nu)
    } else {
        phi_prime_closed(nu)
    }
}

fn phi_prime_series(nu: f64) -> f64 {
    let v2 = nu * nu;
    -1.5 / v2 + v2 * (-1.0 / 30.0 + v2 * (2.0 / 63.0 + v2 * (-1.0 / 90.0 + v2 * 4.0 / 1485.0)))
}

fn phi_prime_closed(nu: f64) -> f64 {
    let (csch2, coth) = csch2_coth(nu);
    -nu * nu * csch2 * (0.5 * csch2 + coth * coth)
}

/// `φ + νφ′`, the entropy shape function; series below `ν = 0.1` where the two
/// `3/(2ν)` terms cancel.
pub fn entropy_shape(nu: f64) -> f64 {
    if nu < 0.1 {
        entropy_shape_series(nu)
    } else {
        phi(nu) + nu * phi_prime(nu)
    }
}

fn entropy_shape_series(nu: f64) -> f64 {
    {
        let v2 = nu * nu;
        let c = [
            -2.0 / 45.0,
            4.0 / 105.0,
            -4.0 / 315.0,
            8.0 / 2673.0,
            -2764.0 / 4729725.0,
            8.0 / 78975.0,
            -28936.0 / 1789239375.0,
        ];
        nu * v2 * c.iter().rev().fold(0.0, |acc, ck| acc * v2 + ck)
    }
}

/// `(csch² ν, coth ν)` without overflow at large `ν`.
fn csch2_coth(nu: f64) -> (f64, f64) {
    let e = (-2.0 * nu).exp();
    let d = -(-2.0 * nu).exp_m1(); // 1 − e^{−2ν}
    (4.0 * e / (d * d), (1.0 + e) / d)
}

/// `(2ν/3) φ(ν)`: the low-temperature correction factor relative to `T = 0`.
pub fn low_temperature_factor(nu: f64) -> f64 {
    if nu == 0.0 {
        1.0
    } else {
        2.0 * nu / 3.0 * phi(nu)
    }
}

/// Truncated low-temperature expansion `1 − ν⁴/135 + 4ν⁶/945`.
pub fn low_temperature_series(nu: f64) -> f64 {
    let v4 = nu.powi(4);
    1.0 - v4 / 135.0 + 4.0 * v4 * nu * nu / 945.0
}

fn check_lengths(separation: f64, radius: f64, temperature: f64) -> Result<()> {
    ensure(separation > 0.0 && radius > 0.0, || {
        format!("need L > 0 and R > 0, got L = {separation}, R = {radius}")
    })?;
    ensure(temperature >= 0.0, || {
        format!("temperature must be >= 0, got {temperature}")
    })
}

/// `ν = 2πL/λ_T`.
pub fn nu(separation: f64, temperature: f64) -> f64 {
    2.0 * PI * separation / thermal_wavelength(temperature)
}

/// `α = 2πR/λ_P`.
pub fn alpha(radius: f64, plasma_wavelength: f64) -> f64 {
    2.0 * PI * radius / plasma_wavelength
}

/// Perfect-reflector dipole free energy (ħc/µm); `T = 0` gives `−9R³/(16πL⁴)`.
pub fn free_energy_perfect_dipole(separation: f64, radius: f64, temperature: f64) -> Result<f64> {
    check_lengths(separation, radius, temperature)?;
    let r3 = radius.powi(3);
    let l3 = separation.powi(3);
    if temperature == 0.0 {
        return Ok(-9.0 * r3 / (16.0 * PI * l3 * separation));
    }
    let lambda = thermal_wavelength(temperature);
    Ok(-3.0 * r3 / (4.0 * lambda * l3) * phi(nu(separation, temperature)))
}

/// Perfect-reflector dipole force `∂𝓕/∂L` (ħc/µm², attraction positive).
pub fn force_perfect_dipole(separation: f64, radius: f64, temperature: f64) -> Result<f64> {
    check_lengths(separation, radius, temperature)?;
    let r3 = radius.powi(3);
    let l4 = separation.powi(4);
    if temperature == 0.0 {
        return Ok(9.0 * r3 / (4.0 * PI * l4 * separation));
    }
    let lambda = thermal_wavelength(temperature);
    let v = nu(separation, temperature);
    Ok(3.0 * r3 / (4.0 * lambda * l4) * (3.0 * phi(v) - v * phi_prime(v)))
}

/// Perfect-reflector dipole entropy in units of `k_B`: `(3R³/(4L³))(φ + νφ′)`.
pub fn entropy_perfect_dipole(separation: f64, radius: f64, temperature: f64) -> Result<f64> {
    check_lengths(separation, radius, temperature)?;
    ensure(temperature > 0.0, || "entropy needs T > 0".into())?;
    let v = nu(separation, temperature);
    Ok(3.0 * radius.powi(3) / (4.0 * separation.powi(3)) * entropy_shape(v))
}

/// `1/3 + 1/α² − coth α/α`, the low-frequency magnetic coefficient of a plasma
/// sphere; series below `α = 0.5`.
pub fn plasma_magnetic_bracket(alpha: f64) -> f64 {
    if alpha < 0.5 {
        magnetic_bracket_series(alpha)
    } else {
        let coth = 1.0 / alpha.tanh();
        1.0 / 3.0 + 1.0 / (alpha * alpha) - coth / alpha
    }
}

fn magnetic_bracket_series(alpha: f64) -> f64 {
    {
        let a2 = alpha * alpha;
        let c = [
            1.0 / 45.0,
            -2.0 / 945.0,
            1.0 / 4725.0,
            -2.0 / 93555.0,
            1382.0 / 638512875.0,
            -4.0 / 18243225.0,
            3617.0 * 65536.0 / 510.0 / 20922789888000.0,
        ];
        a2 * c.iter().rev().fold(0.0, |acc, ck| acc * a2 + ck)
    }
}

/// `1 + 1/α² − coth α/α = 2/3 + (1/3 + 1/α² − coth α/α)`.
pub fn plasma_free_energy_bracket(alpha: f64) -> f64 {
    2.0 / 3.0 + plasma_magnetic_bracket(alpha)
}

/// High-temperature plasma free energy (ħc/µm), valid for `L ≫ λ_T, R`.
pub fn free_energy_plasma_dipole(
    separation: f64,
    radius: f64,
    temperature: f64,
    plasma_wavelength: f64,
) -> Result<f64> {
    check_lengths(separation, radius, temperature)?;
    ensure(temperature > 0.0 && plasma_wavelength > 0.0, || {
        "need T > 0 and λ_P > 0".into()
    })?;
    let lambda = thermal_wavelength(temperature);
    Ok(-3.0 * radius.powi(3) / (8.0 * lambda * separation.powi(3))
        * plasma_free_energy_bracket(alpha(radius, plasma_wavelength)))
}

/// High-temperature Drude free energy (ħc/µm), independent of `λ_P` and `λ_γ`.
pub fn free_energy_drude_dipole(separation: f64, radius: f64, temperature: f64) -> Result<f64> {
    check_lengths(separation, radius, temperature)?;
    ensure(temperature > 0.0, || "need T > 0".into())?;
    let lambda = thermal_wavelength(temperature);
    Ok(-radius.powi(3) / (4.0 * lambda * separation.powi(3)))
}
