//! Dielectric response at imaginary frequency and planar Fresnel amplitudes.
//!
//! All wavenumbers are in rad/µm (`ξ/c`), lengths in µm. The zero-frequency
//! limit has its own entry points and is never reached by evaluating `ε(i·0)`.

use crate::error::{ensure, CasimirError, Result};
use crate::units::wavelength_to_wavenumber;

/// Optical description of the metallic surfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialModel {
    PerfectReflector,
    /// Lossless plasma model with plasma wavelength `λ_P` (µm).
    Plasma {
        plasma_wavelength: f64,
    },
    /// Drude model with plasma wavelength `λ_P` and relaxation wavelength `λ_γ` (µm).
    Drude {
        plasma_wavelength: f64,
        relaxation_wavelength: f64,
    },
}

/// Result of a permittivity query that may hit the zero-frequency pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Permittivity {
    Finite(f64),
    Divergent,
}

impl MaterialModel {
    pub fn plasma(plasma_wavelength: f64) -> Result<Self> {
        ensure(
            plasma_wavelength > 0.0 && plasma_wavelength.is_finite(),
            || format!("plasma wavelength must be positive, got {plasma_wavelength}"),
        )?;
        Ok(MaterialModel::Plasma { plasma_wavelength })
    }

    pub fn drude(plasma_wavelength: f64, relaxation_wavelength: f64) -> Result<Self> {
        ensure(
            plasma_wavelength > 0.0 && plasma_wavelength.is_finite(),
            || format!("plasma wavelength must be positive, got {plasma_wavelength}"),
        )?;
        ensure(
            relaxation_wavelength > 0.0 && relaxation_wavelength.is_finite(),
            || format!("relaxation wavelength must be positive, got {relaxation_wavelength}"),
        )?;
        Ok(MaterialModel::Drude {
            plasma_wavelength,
            relaxation_wavelength,
        })
    }

    /// Short lowercase label used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            MaterialModel::PerfectReflector => "perfect",
            MaterialModel::Plasma { .. } => "plasma",
            MaterialModel::Drude { .. } => "drude",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            MaterialModel::PerfectReflector => Ok(()),
            MaterialModel::Plasma { plasma_wavelength } => {
                Self::plasma(plasma_wavelength).map(|_| ())
            }
            MaterialModel::Drude {
                plasma_wavelength,
                relaxation_wavelength,
            } => Self::drude(plasma_wavelength, relaxation_wavelength).map(|_| ()),
        }
    }

    /// `ω_P/c` in rad/µm, if the model has a plasma frequency.
    pub fn plasma_wavenumber(&self) -> Option<f64> {
        match *self {
            MaterialModel::PerfectReflector => None,
            MaterialModel::Plasma { plasma_wavelength }
            | MaterialModel::Drude {
                plasma_wavelength, ..
            } => Some(wavelength_to_wavenumber(plasma_wavelength)),
        }
    }

    /// `γ/c` in rad/µm (Drude only).
    pub fn relaxation_wavenumber(&self) -> Option<f64> {
        match *self {
            MaterialModel::Drude {
                relaxation_wavelength,
                ..
            } => Some(wavelength_to_wavenumber(relaxation_wavelength)),
            _ => None,
        }
    }

    /// Reduced dc conductivity `σ₀/c = ω_P²/(γc)` in rad/µm (Drude only).
    pub fn conductivity_wavenumber(&self) -> Option<f64> {
        let kp = self.plasma_wavenumber()?;
        let g = self.relaxation_wavenumber()?;
        Some(kp * kp / g)
    }

    /// `(ε(iξ) − 1)·(ξ/c)²` in µm⁻². Finite as `ξ → 0` for plasma (→ `ω_P²/c²`)
    /// and vanishing for Drude.
    pub(crate) fn susceptibility_q2(&self, q: f64) -> f64 {
        match *self {
            MaterialModel::PerfectReflector => f64::INFINITY,
            MaterialModel::Plasma { .. } => {
                let kp = self.plasma_wavenumber().unwrap();
                kp * kp
            }
            MaterialModel::Drude { .. } => {
                let kp = self.plasma_wavenumber().unwrap();
                let g = self.relaxation_wavenumber().unwrap();
                kp * kp * q / (q + g)
            }
        }
    }
}

/// `ε(iξ)` with the pole at `ξ = 0` reported as [`Permittivity::Divergent`].
pub fn permittivity_marker(model: &MaterialModel, q: f64) -> Result<Permittivity> {
    ensure(q >= 0.0 && q.is_finite(), || {
        format!("frequency must be non-negative, got {q}")
    })?;
    match model {
        MaterialModel::PerfectReflector => Ok(Permittivity::Divergent),
        _ if q == 0.0 => Ok(Permittivity::Divergent),
        _ => Ok(Permittivity::Finite(
            1.0 + model.susceptibility_q2(q) / (q * q),
        )),
    }
}

/// `ε(iξ)` at reduced frequency `q = ξ/c` (rad/µm), `q > 0`.
pub fn permittivity(model: &MaterialModel, q: f64) -> Result<f64> {
    if matches!(model, MaterialModel::PerfectReflector) {
        return Err(CasimirError::PerfectReflectorPermittivity);
    }
    match permittivity_marker(model, q)? {
        Permittivity::Finite(eps) => Ok(eps),
        Permittivity::Divergent => Err(CasimirError::ZeroFrequency),
    }
}

/// Fresnel amplitudes `(r_TE, r_TM)` at imaginary frequency `q = ξ/c` and
/// transverse wavenumber `k` (both rad/µm). `q = 0` is routed to
/// [`fresnel_zero_frequency`].
pub fn fresnel(model: &MaterialModel, q: f64, k: f64) -> Result<(f64, f64)> {
    ensure(
        q >= 0.0 && k >= 0.0 && q.is_finite() && k.is_finite(),
        || format!("fresnel needs q >= 0, k >= 0 (got q = {q}, k = {k})"),
    )?;
    ensure(q > 0.0 || k > 0.0, || {
        "fresnel needs q and k not both zero".into()
    })?;
    if q == 0.0 {
        return fresnel_zero_frequency(model, k);
    }
    let kappa = (k * k + q * q).sqrt();
    Ok(fresnel_kappa(model, q, kappa))
}

/// Fresnel amplitudes parametrised by the vacuum decay constant `κ = √(k² + q²)`, `q > 0`.
pub(crate) fn fresnel_kappa(model: &MaterialModel, q: f64, kappa: f64) -> (f64, f64) {
    match model {
        MaterialModel::PerfectReflector => (-1.0, 1.0),
        _ => {
            let chi = model.susceptibility_q2(q);
            let eps_m1 = chi / (q * q);
            let eps = 1.0 + eps_m1;
            let kappa_t = (kappa * kappa + chi).sqrt();
            let sum_te = kappa + kappa_t;
            let r_te = -chi / (sum_te * sum_te);
            // (εκ)² − κ_t² = (ε − 1)[(ε + 1)κ² − q²]
            // scaled by 1/ε² so that ε → ∞ (Drude at small q) stays finite
            let inv = 1.0 / eps;
            let sum_tm = kappa + kappa_t * inv;
            let r_tm =
                (eps_m1 * inv * (1.0 + inv) * kappa * kappa - chi * inv * inv) / (sum_tm * sum_tm);
            (r_te, r_tm)
        }
    }
}

/// Exact `ξ → 0⁺` limits of the Fresnel amplitudes at transverse wavenumber `k > 0`.
pub fn fresnel_zero_frequency(model: &MaterialModel, k: f64) -> Result<(f64, f64)> {
    ensure(k > 0.0 && k.is_finite(), || {
        format!("zero-frequency fresnel needs k > 0, got {k}")
    })?;
    Ok(fresnel_static(model, k))
}

pub(crate) fn fresnel_static(model: &MaterialModel, k: f64) -> (f64, f64) {
    match model {
        MaterialModel::PerfectReflector => (-1.0, 1.0),
        MaterialModel::Drude { .. } => (0.0, 1.0),
        MaterialModel::Plasma { .. } => {
            let kp = model.plasma_wavenumber().unwrap();
            let s = k + (k * k + kp * kp).sqrt();
            (-kp * kp / (s * s), 1.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LP: f64 = 0.136;

    fn drude() -> MaterialModel {
        MaterialModel::drude(LP, 250.0 * LP).unwrap()
    }

    fn plasma() -> MaterialModel {
        MaterialModel::plasma(LP).unwrap()
    }

    #[test]
    fn drude_permittivity_at_relaxation_frequency() {
        let g = drude().relaxation_wavenumber().unwrap();
        let eps = permittivity(&drude(), g).unwrap();
        assert!((eps - 31251.0).abs() / 31251.0 < 1e-12, "{eps}");
    }

    #[test]
    fn plasma_permittivity_at_plasma_frequency() {
        let kp = plasma().plasma_wavenumber().unwrap();
        assert!((permittivity(&plasma(), kp).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_frequency_transparency() {
        let eps = permittivity(&drude(), 1e9).unwrap();
        assert!((eps - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_frequency_is_rejected_on_numeric_path() {
        assert_eq!(
            permittivity(&drude(), 0.0),
            Err(CasimirError::ZeroFrequency)
        );
        assert_eq!(
            permittivity_marker(&plasma(), 0.0).unwrap(),
            Permittivity::Divergent
        );
        assert!(permittivity(&MaterialModel::PerfectReflector, 1.0).is_err());
        assert!(permittivity(&drude(), -1.0).is_err());
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert!(MaterialModel::plasma(0.0).is_err());
        assert!(MaterialModel::drude(0.1, -1.0).is_err());
        assert!(MaterialModel::Plasma {
            plasma_wavelength: -2.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn perfect_reflector_amplitudes() {
        for &(q, k) in &[(1.0, 0.0), (0.0, 2.0), (3.0, 4.0)] {
            assert_eq!(
                fresnel(&MaterialModel::PerfectReflector, q, k).unwrap(),
                (-1.0, 1.0)
            );
        }
        assert!(fresnel(&MaterialModel::PerfectReflector, 0.0, 0.0).is_err());
    }

    #[test]
    fn drude_zero_frequency_limit() {
        assert_eq!(fresnel_zero_frequency(&drude(), 1.0).unwrap(), (0.0, 1.0));
        let (te, tm) = fresnel(&drude(), 1e-12, 1.0).unwrap();
        assert!(te.abs() < 1e-6 && (tm - 1.0).abs() < 1e-6, "{te} {tm}");
    }

    #[test]
    fn plasma_zero_frequency_matches_extrapolation() {
        let kp = plasma().plasma_wavenumber().unwrap();
        let k = 3.0;
        let s = (k * k + kp * kp).sqrt();
        let expected = (k - s) / (k + s);
        let (te0, tm0) = fresnel_zero_frequency(&plasma(), k).unwrap();
        assert!((te0 - expected).abs() < 1e-14);
        assert_eq!(tm0, 1.0);
        // ξ = 10⁻⁶·c/λ_P and half of it; linear extrapolation to zero
        let q1 = 1e-6 / LP;
        let (a, _) = fresnel(&plasma(), q1, k).unwrap();
        let (b, _) = fresnel(&plasma(), 0.5 * q1, k).unwrap();
        let extrap = 2.0 * b - a;
        assert!((extrap - te0).abs() / te0.abs() < 1e-6);
    }

    #[test]
    fn plasma_static_te_for_large_k() {
        let kp = plasma().plasma_wavenumber().unwrap();
        let k = 1e3 * kp;
        let (te, _) = fresnel_zero_frequency(&plasma(), k).unwrap();
        let lead = -kp * kp / (4.0 * k * k);
        assert!(te < 0.0);
        assert!((te - lead).abs() / lead.abs() < 2e-6);
    }

    #[test]
    fn drude_approaches_plasma_at_finite_frequency() {
        let slow = MaterialModel::drude(LP, 1e6 * LP).unwrap();
        for &q in &[0.5, 5.0, 50.0] {
            for &k in &[0.0, 1.0, 30.0] {
                let (a, b) = fresnel(&slow, q, k).unwrap();
                let (c, d) = fresnel(&plasma(), q, k).unwrap();
                assert!((a - c).abs() / c.abs() < 1e-4, "q={q} k={k}");
                assert!((b - d).abs() / d.abs() < 1e-4);
            }
        }
        let (slow_te, _) = fresnel_zero_frequency(&slow, 1.0).unwrap();
        let (plas_te, _) = fresnel_zero_frequency(&plasma(), 1.0).unwrap();
        assert_eq!(slow_te, 0.0);
        assert!(plas_te < -0.9);
    }

    proptest::proptest! {
        #[test]
        fn amplitudes_are_bounded(q in 1e-6f64..1e3, k in 0.0f64..1e3, which in 0usize..3) {
            let model = [MaterialModel::PerfectReflector, plasma(), drude()][which];
            let (te, tm) = fresnel(&model, q, k).unwrap();
            proptest::prop_assert!((0.0..=1.0).contains(&tm));
            proptest::prop_assert!((0.0..=1.0).contains(&-te));
        }

        #[test]
        fn permittivity_decreases(q1 in 1e-4f64..1e3, f in 1.0001f64..100.0, drude_model: bool) {
            let model = if drude_model { drude() } else { plasma() };
            let e1 = permittivity(&model, q1).unwrap();
            let e2 = permittivity(&model, q1 * f).unwrap();
            proptest::prop_assert!(e1 > e2 && e2 >= 1.0);
        }
    }
}
