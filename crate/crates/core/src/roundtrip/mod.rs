//! Round-trip operator `M = R_sphere · T · R_plate · T` in the multipole basis.
//!
//! At fixed azimuthal number `m` and imaginary frequency `ξ = cq` the operator is
//! a real matrix indexed by `(ℓ, P)` with `P ∈ {E, M}`, `ℓ = max(1, m)..=ℓ_max`.
//! A diagonal similarity (which leaves `det(1 − M)` untouched) brings it to
//!
//! ```text
//! M_{ℓ₁P₁,ℓ₂P₂} = s(ℓ₁P₁) √|T₁T₂| K₁K₂ ∫_q^∞ dκ/q e^{−2κ𝓛} [r_TE·X·Y + r_TM·X'·Y']
//! ```
//!
//! where `T` are the Mie coefficients, `K_ℓ = √((2ℓ+1)/(ℓ(ℓ+1)))` and the bracket
//! pairs the angular functions `m·π̂`, `τ̂` according to the polarization blocks.
//! The κ integral is done by Gauss–Legendre in `s = 2(κ − q)𝓛` on a window that
//! covers the peak of `u^{2ℓ_max} e^{−s}`.
//!
//! The `ξ = 0` block uses the leading low-frequency Mie coefficients; the factors
//! of `q` cancel analytically and the integral runs over `t = 2κ𝓛 ∈ [0, W]`.

pub mod angular;

use nalgebra::DMatrix;

use crate::error::{ensure, CasimirError, Result};
use crate::geometry::Geometry;
use crate::materials::{fresnel_kappa, fresnel_static, MaterialModel};
use crate::math::gauss_legendre_unit;
use crate::mie::{ln_leading_legendre, mie_log_coefficients, static_log_coefficients};
use angular::fill_angular;

/// Gauss–Legendre settings for the κ integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Number of nodes; raised automatically to at least `ℓ_max + 40`.
    pub order: usize,
    /// Decades (in `e`-folds) of the integrand kept beyond its peak.
    pub tail: f64,
    /// Relative entry change accepted between `order` and `2·order`.
    pub rel_tol: f64,
    /// Ceiling for the doubling loop.
    pub max_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            order: 200,
            tail: 40.0,
            rel_tol: 1e-10,
            max_order: 3200,
        }
    }
}

impl QuadratureSpec {
    pub fn effective_order(&self, l_max: usize) -> usize {
        self.order.max(l_max + 40)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    Electric,
    Magnetic,
}

/// One azimuthal block of the round-trip operator.
#[derive(Debug, Clone)]
pub struct RoundTripBlock {
    pub m: usize,
    /// `q = ξ/c` in rad/µm; zero for the static block.
    pub q: f64,
    pub l_min: usize,
    pub l_max: usize,
    pub matrix: DMatrix<f64>,
    /// `−∂M/∂𝓛`, present when requested.
    pub derivative: Option<DMatrix<f64>>,
    pub quadrature_order: usize,
}

impl RoundTripBlock {
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    /// Row/column of `(ℓ, P)`: ℓ runs fastest, electric block first.
    pub fn index(&self, l: usize, polarization: Polarization) -> usize {
        let n = self.l_max + 1 - self.l_min;
        let offset = match polarization {
            Polarization::Electric => 0,
            Polarization::Magnetic => n,
        };
        offset + l - self.l_min
    }
}

/// End of the `s` window: `N ln(1 + s/t₀) − s` has fallen `tail` below its peak.
/// Solved by bisection so that the nodes move continuously with `t₀`.
fn integration_window(power: f64, t0: f64, tail: f64) -> f64 {
    let f = |s: f64| {
        if t0 > 0.0 {
            power * (s / t0).ln_1p() - s
        } else {
            power * s.ln() - s
        }
    };
    let peak_at = (power - t0).max(0.0);
    let peak = if peak_at > 0.0 { f(peak_at) } else { 0.0 };
    let drop = |s: f64| peak - f(s) - tail;
    let mut lo = peak_at;
    let mut hi = peak_at + tail;
    while drop(hi) < 0.0 {
        lo = hi;
        hi += tail;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if drop(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Per-frequency data shared by all `m` blocks.
pub(crate) struct FrequencyKernel {
    q: f64,
    l_max: usize,
    order: usize,
    // per node
    ln_measure: Vec<f64>,
    two_kappa: Vec<f64>,
    u: Vec<f64>,
    u2m1: Vec<f64>,
    ln_t: Vec<f64>,
    r_te: Vec<f64>,
    r_tm: Vec<f64>,
    // per ℓ (index ℓ)
    ln_half_a: Vec<f64>,
    sign_a: Vec<f64>,
    ln_half_b: Vec<f64>,
    sign_b: Vec<f64>,
    ln_prefactor: Vec<f64>,
}

impl FrequencyKernel {
    /// `q > 0` builds a dynamic kernel, `q = 0` the static one.
    pub(crate) fn new(
        model: &MaterialModel,
        geometry: &Geometry,
        q: f64,
        l_max: usize,
        order: usize,
        tail: f64,
    ) -> Result<Self> {
        geometry.validate()?;
        ensure(l_max >= 1, || "l_max must be at least 1".into())?;
        ensure(q >= 0.0 && q.is_finite(), || {
            format!("frequency must be >= 0, got {q}")
        })?;
        ensure(order >= 2, || "quadrature order must be at least 2".into())?;
        let big_l = geometry.center_distance();
        let radius = geometry.radius;
        let t0 = 2.0 * q * big_l;
        let window = integration_window(2.0 * l_max as f64, t0, tail);
        let rule = gauss_legendre_unit(order);

        let n = rule.len();
        let mut k = FrequencyKernel {
            q,
            l_max,
            order,
            ln_measure: Vec::with_capacity(n),
            two_kappa: Vec::with_capacity(n),
            u: Vec::with_capacity(n),
            u2m1: Vec::with_capacity(n),
            ln_t: Vec::with_capacity(n),
            r_te: Vec::with_capacity(n),
            r_tm: Vec::with_capacity(n),
            ln_half_a: vec![f64::NEG_INFINITY; l_max + 1],
            sign_a: vec![0.0; l_max + 1],
            ln_half_b: vec![f64::NEG_INFINITY; l_max + 1],
            sign_b: vec![0.0; l_max + 1],
            ln_prefactor: vec![0.0; l_max + 1],
        };
        for &(x, w) in rule.iter() {
            let s = window * x;
            let ws = window * w;
            let t = t0 + s;
            let kappa = t / (2.0 * big_l);
            k.two_kappa.push(2.0 * kappa);
            k.ln_t.push(t.ln());
            if q > 0.0 {
                let v = s / t0;
                k.u.push(1.0 + v);
                k.u2m1.push(v * (2.0 + v));
                // dκ/q · e^{−2κ𝓛} split symmetrically between the two factors
                k.ln_measure.push(0.5 * (ws / t0).ln() - 0.5 * t);
                let (te, tm) = fresnel_kappa(model, q, kappa);
                k.r_te.push(te);
                k.r_tm.push(tm);
            } else {
                k.u.push(f64::INFINITY);
                k.u2m1.push(f64::INFINITY);
                k.ln_measure.push(0.5 * ws.ln() - 0.5 * t);
                let (te, tm) = fresnel_static(model, kappa);
                k.r_te.push(te);
                k.r_tm.push(tm);
            }
        }

        let coeffs = if q > 0.0 {
            mie_log_coefficients(model, q, radius, l_max)?
        } else {
            static_log_coefficients(model, radius, l_max)?
        };
        let ln_ratio = (radius / (2.0 * big_l)).ln();
        for l in 1..=l_max {
            let lf = l as f64;
            k.ln_half_a[l] = 0.5 * coeffs.ln_abs_a[l];
            k.sign_a[l] = coeffs.sign_a[l];
            k.ln_half_b[l] = 0.5 * coeffs.ln_abs_b[l];
            k.sign_b[l] = coeffs.sign_b[l];
            let ln_norm = 0.5 * ((2.0 * lf + 1.0) / (lf * (lf + 1.0))).ln();
            k.ln_prefactor[l] = if q > 0.0 {
                ln_norm
            } else {
                ln_norm + (lf + 0.5) * ln_ratio + lf.ln()
            };
        }
        if k.ln_half_a.iter().chain(&k.ln_half_b).any(|v| v.is_nan()) {
            return Err(CasimirError::Overflow(format!(
                "Mie coefficients at q = {q}"
            )));
        }
        Ok(k)
    }

    pub(crate) fn is_static(&self) -> bool {
        self.q == 0.0
    }

    /// Block `m`; `with_derivative` also fills `−∂M/∂𝓛`.
    pub(crate) fn block(&self, m: usize, with_derivative: bool) -> Result<RoundTripBlock> {
        ensure(m <= self.l_max, || {
            format!("m = {m} exceeds l_max = {}", self.l_max)
        })?;
        let l_min = m.max(1);
        let nl = self.l_max + 1 - l_min;
        let dim = 2 * nl;
        let nodes = self.ln_measure.len();
        let mut x_te = DMatrix::<f64>::zeros(nodes, dim);
        let mut y_te = DMatrix::<f64>::zeros(nodes, dim);
        let mut x_tm = DMatrix::<f64>::zeros(nodes, dim);
        let mut y_tm = DMatrix::<f64>::zeros(nodes, dim);
        let mut ln_pi = vec![0.0; nl];
        let mut ln_tau = vec![0.0; nl];
        let ln_m = (m as f64).ln();
        let ln_leading: Vec<f64> = if self.is_static() {
            (l_min..=self.l_max)
                .map(|l| ln_leading_legendre(l, m))
                .collect()
        } else {
            Vec::new()
        };

        for j in 0..nodes {
            if !self.is_static() {
                fill_angular(
                    self.l_max,
                    m,
                    self.u[j],
                    self.u2m1[j],
                    &mut ln_pi,
                    &mut ln_tau,
                );
            }
            for (i, l) in (l_min..=self.l_max).enumerate() {
                let base = self.ln_measure[j] + self.ln_prefactor[l];
                let (ln_a, ln_b) = if self.is_static() {
                    (f64::NEG_INFINITY, ln_leading[i] + l as f64 * self.ln_t[j])
                } else {
                    (ln_m + ln_pi[i], ln_tau[i])
                };
                let a_e = (base + self.ln_half_a[l] + ln_a).exp();
                let b_e = (base + self.ln_half_a[l] + ln_b).exp();
                let a_m = (base + self.ln_half_b[l] + ln_a).exp();
                let b_m = (base + self.ln_half_b[l] + ln_b).exp();
                let (e, mg) = (i, nl + i);
                x_te[(j, e)] = a_e;
                x_te[(j, mg)] = b_m;
                y_te[(j, e)] = a_e;
                y_te[(j, mg)] = -b_m;
                x_tm[(j, e)] = b_e;
                x_tm[(j, mg)] = a_m;
                y_tm[(j, e)] = -b_e;
                y_tm[(j, mg)] = a_m;
            }
        }
        if x_te.iter().chain(x_tm.iter()).any(|v| !v.is_finite()) {
            return Err(CasimirError::Overflow(format!(
                "round-trip amplitudes at q = {}, m = {m}",
                self.q
            )));
        }

        let weighted = |y: &DMatrix<f64>, r: &[f64], extra: Option<&[f64]>| {
            let mut out = y.clone();
            for (j, mut row) in out.row_iter_mut().enumerate() {
                let w = r[j] * extra.map_or(1.0, |d| d[j]);
                row *= w;
            }
            out
        };
        let signs: Vec<f64> = (l_min..=self.l_max)
            .map(|l| self.sign_a[l])
            .chain((l_min..=self.l_max).map(|l| self.sign_b[l]))
            .collect();
        let finish = |mut mat: DMatrix<f64>| {
            for (i, s) in signs.iter().enumerate() {
                let mut row = mat.row_mut(i);
                row *= *s;
            }
            mat
        };

        let matrix = finish(
            x_te.tr_mul(&weighted(&y_te, &self.r_te, None))
                + x_tm.tr_mul(&weighted(&y_tm, &self.r_tm, None)),
        );
        let derivative = with_derivative.then(|| {
            finish(
                x_te.tr_mul(&weighted(&y_te, &self.r_te, Some(&self.two_kappa)))
                    + x_tm.tr_mul(&weighted(&y_tm, &self.r_tm, Some(&self.two_kappa))),
            )
        });
        Ok(RoundTripBlock {
            m,
            q: self.q,
            l_min,
            l_max: self.l_max,
            matrix,
            derivative,
            quadrature_order: self.order,
        })
    }
}

/// Round-trip block `m` at `q = ξ/c ≥ 0`, with the quadrature order doubled until
/// entries change by less than `quad.rel_tol` relative to the largest entry.
pub fn assemble_block(
    model: &MaterialModel,
    geometry: &Geometry,
    q: f64,
    m: usize,
    l_max: usize,
    with_derivative: bool,
    quad: &QuadratureSpec,
) -> Result<RoundTripBlock> {
    let mut order = quad.effective_order(l_max);
    let mut prev = FrequencyKernel::new(model, geometry, q, l_max, order, quad.tail)?
        .block(m, with_derivative)?;
    loop {
        let next_order = 2 * order;
        if next_order > quad.max_order.max(2 * quad.effective_order(l_max)) {
            let err = block_difference(&prev, &prev);
            return Err(CasimirError::NonConvergence {
                what: format!("κ quadrature at q = {q}, m = {m}"),
                error: err,
            });
        }
        let next = FrequencyKernel::new(model, geometry, q, l_max, next_order, quad.tail)?
            .block(m, with_derivative)?;
        let diff = block_difference(&prev, &next);
        if diff < quad.rel_tol {
            return Ok(next);
        }
        prev = next;
        order = next_order;
    }
}

/// Largest entry change relative to the largest entry.
pub fn block_difference(a: &RoundTripBlock, b: &RoundTripBlock) -> f64 {
    let scale = b.matrix.amax().max(f64::MIN_POSITIVE);
    (&a.matrix - &b.matrix).amax() / scale
}

/// `ln det(1 − M)` for a block; errors unless `det(1 − M) > 0`.
pub fn log_det_one_minus(block: &RoundTripBlock) -> Result<f64> {
    Ok(lu_one_minus(&block.matrix, None, block.m)?.0)
}

/// `ln det(1 − M)` and `tr[(1 − M)⁻¹ N]` with `N = −∂M/∂𝓛` from one factorization.
pub fn log_det_and_trace(block: &RoundTripBlock) -> Result<(f64, f64)> {
    let n = block.derivative.as_ref().ok_or_else(|| {
        CasimirError::InvalidParameter("block was assembled without its derivative".into())
    })?;
    let (ld, tr) = lu_one_minus(&block.matrix, Some(n), block.m)?;
    Ok((ld, tr.unwrap_or(0.0)))
}

/// `ln det(1 − A)` for an arbitrary square matrix.
pub fn log_det_one_minus_matrix(matrix: &DMatrix<f64>) -> Result<f64> {
    Ok(lu_one_minus(matrix, None, 0)?.0)
}

fn lu_one_minus(
    matrix: &DMatrix<f64>,
    rhs: Option<&DMatrix<f64>>,
    m: usize,
) -> Result<(f64, Option<f64>)> {
    let n = matrix.nrows();
    ensure(matrix.is_square(), || {
        "round-trip matrix must be square".into()
    })?;
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(CasimirError::NonFinite { m });
    }
    let a = DMatrix::<f64>::identity(n, n) - matrix;
    let lu = a.lu();
    let mut sign = lu.p().determinant::<f64>();
    let mut ln_det = 0.0;
    let u = lu.u();
    for i in 0..n {
        let d = u[(i, i)];
        if d == 0.0 {
            return Err(CasimirError::NotPassive { m, det: 0.0 });
        }
        sign *= d.signum();
        ln_det += d.abs().ln();
    }
    if sign <= 0.0 {
        return Err(CasimirError::NotPassive {
            m,
            det: -ln_det.exp(),
        });
    }
    let trace = match rhs {
        Some(b) => {
            let x = lu
                .solve(b)
                .ok_or(CasimirError::NotPassive { m, det: 0.0 })?;
            Some(x.trace())
        }
        None => None,
    };
    Ok((ln_det, trace))
}

#[cfg(test)]
mod tests;
