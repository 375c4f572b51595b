//! Plane-plane Lifshitz free energy and the proximity-force approximation.
//!
//! `𝓔_pp(L, T) = k_BT Σ'_n ∫ k dk/(2π) Σ_p ln(1 − r_p² e^{−2κL})`, and the PFA
//! force on a sphere is `F_PFA = 2πR |𝓔_pp(L, T)|` (attraction positive).

use rayon::prelude::*;

use crate::error::{ensure, CasimirError, Result};
use crate::geometry::Geometry;
use crate::materials::{fresnel_kappa, fresnel_static, MaterialModel};
use crate::math::{gauss_legendre_unit, pairwise_sum};
use crate::thermodynamics::ThermalState;

/// Window in `s = 2(κ − q)L` beyond which `e^{−s}` is negligible.
const WINDOW: f64 = 60.0;
const MAX_ORDER: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanePlaneInput {
    /// Gap `L` in µm.
    pub separation: f64,
    pub temperature: f64,
    pub model: MaterialModel,
}

impl PlanePlaneInput {
    pub fn new(separation: f64, temperature: f64, model: MaterialModel) -> Result<Self> {
        ensure(separation > 0.0 && separation.is_finite(), || {
            format!("separation must be positive, got {separation}")
        })?;
        ensure(temperature >= 0.0 && temperature.is_finite(), || {
            format!("temperature must be >= 0, got {temperature}")
        })?;
        model.validate()?;
        Ok(PlanePlaneInput {
            separation,
            temperature,
            model,
        })
    }
}

/// `ln(1 − r² e^{−t})`, kept finite when `|r|` rounds to 1 at tiny `t`.
fn log_one_minus(r: f64, t: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let exponent = (2.0 * r.abs().ln()).min(0.0) - t;
    if exponent < -1.0 {
        (-exponent.exp()).ln_1p()
    } else {
        (-exponent.exp_m1()).ln()
    }
}

/// `(1/2π) ∫_q^∞ κ dκ Σ_p ln(1 − r_p² e^{−2κL})` by Gauss–Legendre in
/// `s = W x³`, which tames the logarithmic endpoint at `q = 0`.
fn transverse_integral(model: &MaterialModel, q: f64, separation: f64, order: usize) -> f64 {
    let t0 = 2.0 * q * separation;
    if t0 > 600.0 {
        // below e^{−600} of any contributing term
        return 0.0;
    }
    let rule = gauss_legendre_unit(order);
    let values: Vec<f64> = rule
        .iter()
        .map(|&(x, w)| {
            let s = WINDOW * x * x * x;
            let ds = 3.0 * WINDOW * x * x * w;
            let t = t0 + s;
            let kappa = t / (2.0 * separation);
            let (te, tm) = if q > 0.0 {
                fresnel_kappa(model, q, kappa)
            } else {
                fresnel_static(model, kappa)
            };
            let sum = log_one_minus(te, t) + log_one_minus(tm, t);
            ds * t * sum
        })
        .collect();
    // κ dκ = t dt / (4L²)
    pairwise_sum(&values) / (8.0 * std::f64::consts::PI * separation * separation)
}

fn transverse_converged(model: &MaterialModel, q: f64, separation: f64, tol: f64) -> Result<f64> {
    let mut order = 64;
    let mut prev = transverse_integral(model, q, separation, order);
    loop {
        order *= 2;
        let next = transverse_integral(model, q, separation, order);
        let err = (next - prev).abs();
        if err <= tol * next.abs() || next == 0.0 {
            return Ok(next);
        }
        if order >= MAX_ORDER {
            return Err(CasimirError::NonConvergence {
                what: format!("plane-plane k integral at q = {q}"),
                error: err / next.abs(),
            });
        }
        prev = next;
    }
}

/// `T = 0` energy per area. With `q = κc` the frequency and transverse integrals
/// become `(1/4π²) ∫ κ² dκ ∫₀¹ dc Σ_p ln(1 − r_p² e^{−2κL})`, done as a tensor
/// Gauss–Legendre rule (`t = 2κL = W x⁴`) doubled until self-consistent.
fn zero_temperature_energy_per_area(model: &MaterialModel, l: f64, tol: f64) -> Result<(f64, f64)> {
    let integrate = |order: usize| -> f64 {
        let rule = gauss_legendre_unit(order);
        let rows: Vec<f64> = rule
            .par_iter()
            .map(|&(x, w)| {
                // x⁴ keeps the √κ behaviour of lossy media at κ → 0 analytic in x
                let t = WINDOW * x.powi(4);
                let dt = 4.0 * WINDOW * x.powi(3) * w;
                let kappa = t / (2.0 * l);
                // c = δ(B^u − 1) pushes the Drude pole at q = −γ away from [0, 1]
                let delta = model.relaxation_wavenumber().map_or(1.0, |g| g / kappa);
                let log_b = (1.0 / delta).ln_1p();
                let inner: Vec<f64> = rule
                    .iter()
                    .map(|&(u, wu)| {
                        let grow = (u * log_b).exp_m1();
                        let c = delta * grow;
                        let wc = wu * (delta * log_b) * (1.0 + grow);
                        let (te, tm) = fresnel_kappa(model, kappa * c, kappa);
                        wc * (log_one_minus(te, t) + log_one_minus(tm, t))
                    })
                    .collect();
                dt * t * t * pairwise_sum(&inner)
            })
            .collect();
        pairwise_sum(&rows) / (32.0 * std::f64::consts::PI.powi(2) * l.powi(3))
    };
    let mut order = 32;
    let mut prev = integrate(order);
    loop {
        order *= 2;
        let next = integrate(order);
        let err = (next - prev).abs() / next.abs();
        if err < tol {
            return Ok((next, err));
        }
        if order >= 4096 {
            return Err(CasimirError::NonConvergence {
                what: "zero-temperature plane-plane integral".into(),
                error: err,
            });
        }
        prev = next;
    }
}

/// Plane-plane free energy per unit area in ħc/µm³ (negative) and its
/// estimated relative error.
pub fn lifshitz_energy_per_area(input: &PlanePlaneInput, tol: f64) -> Result<(f64, f64)> {
    ensure(tol > 0.0 && tol < 1.0, || {
        format!("tolerance must lie in (0, 1), got {tol}")
    })?;
    let PlanePlaneInput {
        separation: l,
        temperature,
        model,
    } = *input;
    let inner_tol = 1e-2 * tol;
    if temperature == 0.0 {
        return zero_temperature_energy_per_area(&model, l, tol);
    }

    let thermal = ThermalState::new(temperature)?;
    let lambda = thermal.thermal_wavelength();
    let decay = (-4.0 * std::f64::consts::PI * l / lambda).exp();
    let n_init = ((5.0 * lambda / (4.0 * std::f64::consts::PI * l)).ceil() as usize).max(4);
    let batch = n_init.clamp(4, 256);
    let compute = |range: std::ops::Range<usize>| -> Result<Vec<f64>> {
        range
            .into_par_iter()
            .map(|n| transverse_converged(&model, thermal.matsubara_wavenumber(n), l, inner_tol))
            .collect()
    };
    let mut terms = compute(0..n_init + 1)?;
    let mut end = n_init + 1;
    loop {
        let mut weighted = terms.clone();
        weighted[0] *= 0.5;
        let sum = pairwise_sum(&weighted);
        let last = *terms.last().unwrap();
        let err = last.abs() * decay / (1.0 - decay) / sum.abs();
        if err < tol || last == 0.0 {
            return Ok((sum / lambda, err));
        }
        if end > 2_000_000 {
            return Err(CasimirError::NonConvergence {
                what: "plane-plane Matsubara sum".into(),
                error: err,
            });
        }
        terms.extend(compute(end..end + batch)?);
        end += batch;
    }
}

/// PFA force `2πR |𝓔_pp(L, T)|` in ħc/µm² (attraction positive).
pub fn pfa_force(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    tol: f64,
) -> Result<f64> {
    geometry.validate()?;
    let input = PlanePlaneInput::new(geometry.separation, thermal.temperature, *model)?;
    let (e, _) = lifshitz_energy_per_area(&input, tol)?;
    Ok(-2.0 * std::f64::consts::PI * geometry.radius * e)
}

/// `θ_PFA = F_PFA(L, T)/F_PFA(L, 0)`.
pub fn pfa_theta(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    tol: f64,
) -> Result<f64> {
    let zero = ThermalState::new(0.0)?;
    Ok(pfa_force(geometry, model, thermal, tol)? / pfa_force(geometry, model, &zero, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const ZETA3: f64 = 1.202_056_903_159_594_3;
    const LP: f64 = 0.136;

    #[test]
    fn ideal_zero_temperature_energy() {
        let l = 0.7;
        let input = PlanePlaneInput::new(l, 0.0, MaterialModel::PerfectReflector).unwrap();
        let (e, _) = lifshitz_energy_per_area(&input, 1e-10).unwrap();
        let expected = -PI * PI / (720.0 * l * l * l);
        assert!((e / expected - 1.0).abs() < 1e-8, "{e} vs {expected}");
        let g = Geometry::new(2.0, l).unwrap();
        let f = pfa_force(
            &g,
            &MaterialModel::PerfectReflector,
            &ThermalState::new(0.0).unwrap(),
            1e-10,
        )
        .unwrap();
        assert!((f / (PI.powi(3) * 2.0 / (360.0 * l * l * l)) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn high_temperature_zero_frequency_term() {
        // only n = 0 survives at L = 50 µm, T = 300 K
        let l = 50.0;
        let t = 300.0;
        let lambda = crate::units::thermal_wavelength(t);
        let expected = -ZETA3 / (8.0 * PI * lambda * l * l);
        let perfect = PlanePlaneInput::new(l, t, MaterialModel::PerfectReflector).unwrap();
        let (e, _) = lifshitz_energy_per_area(&perfect, 1e-9).unwrap();
        assert!((e / expected - 1.0).abs() < 1e-8, "{e} vs {expected}");
        let drude =
            PlanePlaneInput::new(l, t, MaterialModel::drude(LP, 250.0 * LP).unwrap()).unwrap();
        let (d, _) = lifshitz_energy_per_area(&drude, 1e-9).unwrap();
        assert!((d / e - 0.5).abs() < 1e-4);
    }

    #[test]
    fn plasma_to_drude_ratio_approaches_two() {
        let g = Geometry::new(1.0, 50.0).unwrap();
        let thermal = ThermalState::new(300.0).unwrap();
        let p = pfa_force(&g, &MaterialModel::plasma(LP).unwrap(), &thermal, 1e-8).unwrap();
        let d = pfa_force(
            &g,
            &MaterialModel::drude(LP, 250.0 * LP).unwrap(),
            &thermal,
            1e-8,
        )
        .unwrap();
        assert!((p / d - 2.0).abs() < 0.02, "{}", p / d);
    }

    #[test]
    fn energy_increases_with_distance() {
        let model = MaterialModel::drude(LP, 250.0 * LP).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for l in [0.2, 0.5, 1.0, 3.0, 10.0] {
            let (e, _) =
                lifshitz_energy_per_area(&PlanePlaneInput::new(l, 300.0, model).unwrap(), 1e-8)
                    .unwrap();
            assert!(e < 0.0 && e > prev);
            prev = e;
        }
    }

    #[test]
    fn drude_pfa_theta_below_one_at_short_distance() {
        let model = MaterialModel::drude(LP, 250.0 * LP).unwrap();
        let thermal = ThermalState::new(300.0).unwrap();
        for l in [0.5, 1.0, 3.0] {
            let theta = pfa_theta(&Geometry::new(1.0, l).unwrap(), &model, &thermal, 1e-8).unwrap();
            assert!(theta < 1.0, "L = {l}: {theta}");
        }
    }
}
