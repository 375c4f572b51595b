//! Physical constants and the reduced unit system.
//!
//! Internally every length is in micrometres, every frequency is carried as
//! the wavenumber `ξ/c` in rad/µm, energies are in units of `ħc/µm` and
//! entropies in units of `k_B`. Conversion to SI happens only at the edges.

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K (exact).
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Metres per micrometre.
pub const MICROMETRE: f64 = 1e-6;

/// `ħc/k_B` expressed in µm·K; `λ_T = HBAR_C_OVER_KB / T`.
pub const HBAR_C_OVER_KB: f64 = HBAR * SPEED_OF_LIGHT / BOLTZMANN / MICROMETRE;

/// The energy unit `ħc/µm` in joules.
pub const ENERGY_UNIT: f64 = HBAR * SPEED_OF_LIGHT / MICROMETRE;

/// The force unit `ħc/µm²` in newtons.
pub const FORCE_UNIT: f64 = HBAR * SPEED_OF_LIGHT / (MICROMETRE * MICROMETRE);

/// Thermal wavelength `ħc/(k_B T)` in µm. Infinite at `T = 0`.
pub fn thermal_wavelength(temperature: f64) -> f64 {
    if temperature <= 0.0 {
        f64::INFINITY
    } else {
        HBAR_C_OVER_KB / temperature
    }
}

/// Matsubara wavenumber `ξ_n/c = 2πn/λ_T` in rad/µm.
pub fn matsubara_wavenumber(n: usize, temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * n as f64 / thermal_wavelength(temperature)
}

pub fn energy_to_joule(e: f64) -> f64 {
    e * ENERGY_UNIT
}

pub fn force_to_newton(f: f64) -> f64 {
    f * FORCE_UNIT
}

/// Entropy in units of `k_B` to J/K.
pub fn entropy_to_joule_per_kelvin(s: f64) -> f64 {
    s * BOLTZMANN
}

/// Plasma or relaxation wavelength (µm) to the matching wavenumber `ω/c` in rad/µm.
pub fn wavelength_to_wavenumber(lambda: f64) -> f64 {
    2.0 * std::f64::consts::PI / lambda
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thermal_wavelength_at_room_temperature() {
        let lt = thermal_wavelength(300.0);
        assert!((lt - 7.63).abs() < 0.01, "λ_T(300 K) = {lt}");
        assert!((lt - 7.6).abs() / 7.6 < 0.01);
    }

    #[test]
    fn zero_temperature_has_infinite_wavelength() {
        assert!(thermal_wavelength(0.0).is_infinite());
        assert_eq!(matsubara_wavenumber(3, 0.0), 0.0);
    }

    #[test]
    fn unit_conversions() {
        assert!((energy_to_joule(1.0) - 3.1615e-20).abs() / 3.1615e-20 < 1e-4);
        assert!((force_to_newton(1.0) - 3.1615e-14).abs() / 3.1615e-14 < 1e-4);
    }
}
