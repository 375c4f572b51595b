//! Matsubara summation, the zero-temperature frequency integral and the derived
//! observables: free energy `𝓕`, force `F`, the thermal ratio `θ` and entropy `S`.
//!
//! Sign conventions: `𝓕 < 0` for attraction, and forces are reported as
//! `F = ∂𝓕/∂L > 0` for attraction (the magnitude of `−∂𝓕/∂L`).

use rayon::prelude::*;

use crate::error::{ensure, CasimirError, Result};
use crate::geometry::Geometry;
use crate::materials::MaterialModel;
use crate::math::{gauss_legendre_unit, pairwise_sum};
use crate::roundtrip::{log_det_and_trace, log_det_one_minus, FrequencyKernel, QuadratureSpec};
use crate::units::{thermal_wavelength, HBAR_C_OVER_KB};

/// Temperature in kelvin together with its derived length scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    pub temperature: f64,
}

impl ThermalState {
    pub fn new(temperature: f64) -> Result<Self> {
        ensure(temperature >= 0.0 && temperature.is_finite(), || {
            format!("temperature must be >= 0 K, got {temperature}")
        })?;
        Ok(ThermalState { temperature })
    }

    /// `λ_T = ħc/(k_B T)` in µm; infinite at `T = 0`.
    pub fn thermal_wavelength(&self) -> f64 {
        thermal_wavelength(self.temperature)
    }

    /// `ξ_n/c = 2πn/λ_T` in rad/µm.
    pub fn matsubara_wavenumber(&self, n: usize) -> f64 {
        2.0 * std::f64::consts::PI * n as f64 / self.thermal_wavelength()
    }
}

/// Numerical knobs shared by all observables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Target relative accuracy of sums and integrals.
    pub tol: f64,
    /// Multipole cutoff; `None` picks [`default_l_max`].
    pub l_max: Option<usize>,
    pub quadrature: QuadratureSpec,
    /// Hard cap on the Matsubara index.
    pub max_matsubara: usize,
    /// Hard cap on the Gauss–Legendre order of the `T = 0` frequency integral.
    pub max_frequency_order: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            tol: 1e-6,
            l_max: None,
            quadrature: QuadratureSpec::default(),
            max_matsubara: 200_000,
            max_frequency_order: 1280,
        }
    }
}

impl SolverSettings {
    pub fn with_tol(self, tol: f64) -> Self {
        SolverSettings { tol, ..self }
    }

    pub fn with_l_max(self, l_max: usize) -> Self {
        SolverSettings {
            l_max: Some(l_max),
            ..self
        }
    }

    pub fn l_max_for(&self, geometry: &Geometry) -> usize {
        self.l_max.unwrap_or_else(|| default_l_max(geometry))
    }

    /// An `m` block is dropped once it contributes less than this fraction of the total.
    fn m_tol(&self) -> f64 {
        1e-2 * self.tol
    }

    fn validate(&self) -> Result<()> {
        ensure(self.tol > 0.0 && self.tol < 1.0, || {
            format!("tolerance must lie in (0, 1), got {}", self.tol)
        })?;
        ensure(self.l_max.is_none_or(|l| l >= 1), || {
            "l_max must be at least 1".into()
        })
    }
}

/// `ℓ_max = ⌈5R/L⌉ + 6`.
pub fn default_l_max(geometry: &Geometry) -> usize {
    (5.0 * geometry.aspect_ratio()).ceil() as usize + 6
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConvergenceReport {
    pub l_max: usize,
    /// Largest azimuthal number included at any frequency.
    pub m_max: usize,
    /// Last Matsubara index, or the number of frequency nodes at `T = 0`.
    pub n_max: usize,
    pub quadrature_order: usize,
    /// Estimated relative error of the reported value.
    pub error_estimate: f64,
}

/// Free energy (ħc/µm) with the force (ħc/µm², attraction positive) when requested.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub free_energy: f64,
    pub force: Option<f64>,
    pub report: ConvergenceReport,
}

/// Truncation pinned in advance so that neighbouring evaluations are smooth in
/// their parameters (used for finite differences).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FixedTruncation {
    pub n_max: Option<usize>,
    pub m_max: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default)]
struct FrequencyTerm {
    log_det: f64,
    trace: f64,
    m_max: usize,
}

fn frequency_term(
    model: &MaterialModel,
    geometry: &Geometry,
    q: f64,
    l_max: usize,
    settings: &SolverSettings,
    with_force: bool,
    fixed_m: Option<usize>,
) -> Result<FrequencyTerm> {
    let order = settings.quadrature.effective_order(l_max);
    let kernel = FrequencyKernel::new(model, geometry, q, l_max, order, settings.quadrature.tail)?;
    let m_tol = settings.m_tol();
    let m_last = fixed_m.map_or(l_max, |m| m.min(l_max));
    let mut log_dets = Vec::with_capacity(m_last + 1);
    let mut traces = Vec::with_capacity(m_last + 1);
    let mut used = 0;
    for m in 0..=m_last {
        let block = kernel.block(m, with_force)?;
        let w = if m == 0 { 1.0 } else { 2.0 };
        let (ld, tr) = if with_force {
            log_det_and_trace(&block)?
        } else {
            (log_det_one_minus(&block)?, 0.0)
        };
        log_dets.push(w * ld);
        traces.push(w * tr);
        used = m;
        if fixed_m.is_none() && m > 0 {
            let ld_sum = pairwise_sum(&log_dets).abs();
            let tr_sum = pairwise_sum(&traces).abs();
            if (w * ld).abs() <= m_tol * ld_sum && (w * tr).abs() <= m_tol * tr_sum {
                break;
            }
        }
    }
    Ok(FrequencyTerm {
        log_det: pairwise_sum(&log_dets),
        trace: pairwise_sum(&traces),
        m_max: used,
    })
}

/// Free energy and optionally force at temperature `T ≥ 0`.
///
/// At `T > 0` this is `𝓕 = k_BT Σ'_n Σ_m ln det(1 − M_m(ξ_n))` with the `n = 0`
/// term weighted by one half; at `T = 0` it defers to [`zero_temperature`].
pub fn evaluate(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
    with_force: bool,
) -> Result<Evaluation> {
    evaluate_with_truncation(
        geometry,
        model,
        thermal,
        settings,
        with_force,
        FixedTruncation::default(),
    )
}

/// [`evaluate`] with optionally pinned Matsubara and azimuthal cutoffs.
pub fn evaluate_with_truncation(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
    with_force: bool,
    fixed: FixedTruncation,
) -> Result<Evaluation> {
    geometry.validate()?;
    model.validate()?;
    settings.validate()?;
    if thermal.temperature == 0.0 {
        return zero_temperature(geometry, model, settings, with_force);
    }
    let l_max = settings.l_max_for(geometry);
    let lambda = thermal.thermal_wavelength();
    let decay = (-4.0 * std::f64::consts::PI * geometry.separation / lambda).exp();
    let n_init = ((5.0 * lambda / (4.0 * std::f64::consts::PI * geometry.separation)).ceil()
        as usize)
        .max(4);
    let batch = n_init.clamp(4, 64);

    let compute = |range: std::ops::Range<usize>| -> Result<Vec<FrequencyTerm>> {
        range
            .into_par_iter()
            .map(|n| {
                let q = thermal.matsubara_wavenumber(n);
                frequency_term(model, geometry, q, l_max, settings, with_force, fixed.m_max)
            })
            .collect()
    };

    let mut terms: Vec<FrequencyTerm> = Vec::new();
    let mut error = 0.0;
    match fixed.n_max {
        Some(n_max) => terms = compute(0..n_max + 1)?,
        None => {
            let mut end = n_init + 1;
            terms.extend(compute(0..end)?);
            loop {
                let (ld, tr) = weighted_sums(&terms);
                let last = terms.last().unwrap();
                let tail = decay / (1.0 - decay);
                let err_ld = (last.log_det.abs() * tail) / ld.abs();
                let err_tr = if with_force {
                    (last.trace.abs() * tail) / tr.abs()
                } else {
                    0.0
                };
                error = err_ld.max(err_tr);
                let vanished = last.log_det == 0.0 && (!with_force || last.trace == 0.0);
                if vanished || error < settings.tol {
                    if vanished {
                        error = 0.0;
                    }
                    break;
                }
                if end > settings.max_matsubara {
                    return Err(CasimirError::NonConvergence {
                        what: format!("Matsubara sum after {end} terms"),
                        error,
                    });
                }
                terms.extend(compute(end..end + batch)?);
                end += batch;
            }
        }
    }
    let (ld, tr) = weighted_sums(&terms);
    let report = ConvergenceReport {
        l_max,
        m_max: terms.iter().map(|t| t.m_max).max().unwrap_or(0),
        n_max: terms.len() - 1,
        quadrature_order: settings.quadrature.effective_order(l_max),
        error_estimate: error.max(settings.m_tol()),
    };
    Ok(Evaluation {
        free_energy: ld / lambda,
        force: with_force.then_some(tr / lambda),
        report,
    })
}

fn weighted_sums(terms: &[FrequencyTerm]) -> (f64, f64) {
    let mut ld: Vec<f64> = terms.iter().map(|t| t.log_det).collect();
    let mut tr: Vec<f64> = terms.iter().map(|t| t.trace).collect();
    ld[0] *= 0.5;
    tr[0] *= 0.5;
    (pairwise_sum(&ld), pairwise_sum(&tr))
}

/// `E = (1/2π) ∫₀^∞ dq Σ_m ln det(1 − M_m(q))`, with `q = tan(πs/2)/(2L)` and
/// Gauss–Legendre in `s` doubled until self-consistent to the tolerance.
pub fn zero_temperature(
    geometry: &Geometry,
    model: &MaterialModel,
    settings: &SolverSettings,
    with_force: bool,
) -> Result<Evaluation> {
    geometry.validate()?;
    model.validate()?;
    settings.validate()?;
    let l_max = settings.l_max_for(geometry);
    let scale = 1.0 / (2.0 * geometry.separation);
    let integrate = |order: usize| -> Result<(f64, f64, usize)> {
        let rule = gauss_legendre_unit(order);
        let half_pi = std::f64::consts::FRAC_PI_2;
        let parts: Vec<(f64, f64, usize)> = rule
            .par_iter()
            .map(|&(s, w)| {
                let (sin, cos) = (half_pi * s).sin_cos();
                let q = scale * sin / cos;
                let jac = scale * half_pi / (cos * cos);
                let t = frequency_term(model, geometry, q, l_max, settings, with_force, None)?;
                Ok((w * jac * t.log_det, w * jac * t.trace, t.m_max))
            })
            .collect::<Result<_>>()?;
        let ld: Vec<f64> = parts.iter().map(|p| p.0).collect();
        let tr: Vec<f64> = parts.iter().map(|p| p.1).collect();
        let m_max = parts.iter().map(|p| p.2).max().unwrap_or(0);
        let inv = 1.0 / (2.0 * std::f64::consts::PI);
        Ok((inv * pairwise_sum(&ld), inv * pairwise_sum(&tr), m_max))
    };

    let mut order = 40;
    let mut prev = integrate(order)?;
    loop {
        let next_order = 2 * order;
        let next = integrate(next_order)?;
        let err_e = (next.0 - prev.0).abs() / next.0.abs();
        let err_f = if with_force {
            (next.1 - prev.1).abs() / next.1.abs()
        } else {
            0.0
        };
        let error = err_e.max(err_f);
        if error < settings.tol || !error.is_finite() && next.0 == 0.0 {
            return Ok(Evaluation {
                free_energy: next.0,
                force: with_force.then_some(next.1),
                report: ConvergenceReport {
                    l_max,
                    m_max: prev.2.max(next.2),
                    n_max: next_order,
                    quadrature_order: settings.quadrature.effective_order(l_max),
                    error_estimate: error.max(settings.m_tol()),
                },
            });
        }
        if next_order >= settings.max_frequency_order {
            return Err(CasimirError::NonConvergence {
                what: format!("zero-temperature frequency integral at order {next_order}"),
                error,
            });
        }
        prev = next;
        order = next_order;
    }
}

/// Free energy in ħc/µm.
pub fn free_energy(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
) -> Result<(f64, ConvergenceReport)> {
    let e = evaluate(geometry, model, thermal, settings, false)?;
    Ok((e.free_energy, e.report))
}

/// Zero-temperature interaction energy in ħc/µm.
pub fn zero_temperature_energy(
    geometry: &Geometry,
    model: &MaterialModel,
    settings: &SolverSettings,
) -> Result<(f64, ConvergenceReport)> {
    let e = zero_temperature(geometry, model, settings, false)?;
    Ok((e.free_energy, e.report))
}

/// Force `∂𝓕/∂L` in ħc/µm² (positive for attraction), from the analytic
/// derivative of the translation factors.
pub fn force(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
) -> Result<(f64, ConvergenceReport)> {
    let e = evaluate(geometry, model, thermal, settings, true)?;
    Ok((e.force.unwrap(), e.report))
}

/// `θ = F(L, T)/F(L, 0)` with both forces at the same `ℓ_max` and quadrature.
pub fn theta_ratio(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
) -> Result<(f64, ConvergenceReport)> {
    ensure(thermal.temperature > 0.0, || "θ needs T > 0".into())?;
    let settings = settings.with_l_max(settings.l_max_for(geometry));
    let (f_t, report) = force(geometry, model, thermal, &settings)?;
    let (f_0, report0) = force(
        geometry,
        model,
        &ThermalState { temperature: 0.0 },
        &settings,
    )?;
    let report = ConvergenceReport {
        error_estimate: report.error_estimate + report0.error_estimate,
        m_max: report.m_max.max(report0.m_max),
        ..report
    };
    Ok((f_t / f_0, report))
}

/// Entropy in units of `k_B` with an error estimate (also in `k_B`).
///
/// Symmetric differences in `T` with step `10⁻³·T` and its half, combined by
/// Richardson extrapolation. Truncation is pinned from a converged evaluation at
/// `T` so that all four points lie on one smooth function.
pub fn entropy(
    geometry: &Geometry,
    model: &MaterialModel,
    thermal: &ThermalState,
    settings: &SolverSettings,
) -> Result<(f64, f64, ConvergenceReport)> {
    ensure(thermal.temperature > 0.0, || "entropy needs T > 0".into())?;
    let settings = settings.with_l_max(settings.l_max_for(geometry));
    let centre = evaluate(geometry, model, thermal, &settings, false)?;
    let fixed = FixedTruncation {
        n_max: Some(centre.report.n_max + centre.report.n_max / 4 + 2),
        m_max: Some(centre.report.m_max),
    };
    let t = thermal.temperature;
    let at = |temperature: f64| -> Result<f64> {
        let state = ThermalState { temperature };
        Ok(evaluate_with_truncation(geometry, model, &state, &settings, false, fixed)?.free_energy)
    };
    let h = 1e-3 * t;
    let d_full = (at(t + h)? - at(t - h)?) / (2.0 * h);
    let d_half = (at(t + 0.5 * h)? - at(t - 0.5 * h)?) / h;
    let derivative = (4.0 * d_half - d_full) / 3.0;
    let err = (d_half - d_full).abs() / 3.0;
    Ok((
        -HBAR_C_OVER_KB * derivative,
        HBAR_C_OVER_KB * err,
        centre.report,
    ))
}

#[cfg(test)]
mod tests;
