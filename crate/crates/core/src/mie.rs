//! Modified Riccati–Bessel functions and Mie coefficients at imaginary frequency.
//!
//! With `y = ξR/c` the two real solutions used throughout are
//!
//! * `s_ℓ(y) = y·i_ℓ(y)`, growing (`s_1(y) = cosh y − sinh y / y`),
//! * `e_ℓ(y) = (2/π)·y·k_ℓ(y)`, decaying (`e_0(y) = e^{−y}`),
//!
//! normalised so that the Wronskian is `s_ℓ e_ℓ' − s_ℓ' e_ℓ = −1`. Everything is
//! carried as logarithms and logarithmic derivatives so that orders up to a few
//! hundred and arguments from `10⁻⁸` to a few thousand stay finite.
//!
//! The returned coefficients follow the sign convention in which, for a perfect
//! reflector, `a_1 → −2y³/3` and `b_1 → y³/3` as `y → 0`. In terms of the
//! sphere T-matrix `T_ℓ` they are `(−1)^ℓ T_ℓ`.

use crate::error::{ensure, CasimirError, Result};
use crate::materials::MaterialModel;
use crate::math::{ln_double_factorial_odd, ln_factorial};

/// Scaled modified Riccati–Bessel data for `ℓ = 0..=l_max` at argument `x`.
#[derive(Debug, Clone)]
pub struct RiccatiPair {
    pub x: f64,
    /// `ln s_ℓ(x)`.
    pub ln_s: Vec<f64>,
    /// `ln e_ℓ(x)`.
    pub ln_e: Vec<f64>,
    /// `s_ℓ'(x)/s_ℓ(x)`.
    pub dlog_s: Vec<f64>,
    /// `e_ℓ'(x)/e_ℓ(x)` (negative).
    pub dlog_e: Vec<f64>,
    /// `s_{ℓ+1}(x)/s_ℓ(x)` for `ℓ = 0..=l_max`.
    pub ratio_next: Vec<f64>,
}

/// Ratios `s_ℓ/s_{ℓ−1}` for `ℓ = 1..=top` (index 0 unused), by continued fraction
/// at the top order and downward recurrence below it.
fn growing_ratios(top: usize, x: f64) -> Result<Vec<f64>> {
    const TINY: f64 = 1e-300;
    let b = |k: usize| (2 * k + 1) as f64 / x;
    // modified Lentz for b_N + 1/(b_{N+1} + 1/(b_{N+2} + ...))
    let mut f = b(top).max(TINY);
    let mut c = f;
    let mut d = 0.0;
    let max_iter = 100_000 + (20.0 * x) as usize;
    let mut converged = false;
    for k in top + 1..top + max_iter {
        d += b(k);
        if d == 0.0 {
            d = TINY;
        }
        c = b(k) + 1.0 / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(CasimirError::NonConvergence {
            what: format!("Bessel continued fraction at x = {x}"),
            error: f64::NAN,
        });
    }
    let mut rho = vec![0.0; top + 1];
    rho[top] = 1.0 / f;
    for l in (1..top).rev() {
        rho[l] = 1.0 / (b(l) + rho[l + 1]);
    }
    Ok(rho)
}

/// `ln sinh x` without overflow or cancellation.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1() / 2.0).ln()
}

/// Both modified Riccati–Bessel solutions for `ℓ = 0..=l_max` at `x > 0`.
pub fn riccati_pair(l_max: usize, x: f64) -> Result<RiccatiPair> {
    ensure(x > 0.0 && x.is_finite(), || {
        format!("Riccati argument must be positive, got {x}")
    })?;
    let rho = growing_ratios(l_max + 1, x)?;
    let mut ln_s = Vec::with_capacity(l_max + 1);
    let mut ln_e = Vec::with_capacity(l_max + 1);
    let mut dlog_s = Vec::with_capacity(l_max + 1);
    let mut dlog_e = Vec::with_capacity(l_max + 1);
    let mut ratio_next = Vec::with_capacity(l_max + 1);

    ln_s.push(ln_sinh(x));
    ln_e.push(-x);
    dlog_s.push(1.0 / x + rho[1]);
    dlog_e.push(-1.0);
    ratio_next.push(rho[1]);

    // e_ℓ/e_{ℓ−1}, upward recurrence (stable for the decaying solution)
    let mut sigma = 1.0 + 1.0 / x;
    for l in 1..=l_max {
        if l > 1 {
            sigma = (2 * l - 1) as f64 / x + 1.0 / sigma;
        }
        let lf = l as f64;
        ln_s.push(ln_s[l - 1] + rho[l].ln());
        ln_e.push(ln_e[l - 1] + sigma.ln());
        dlog_s.push((lf + 1.0) / x + rho[l + 1]);
        dlog_e.push(-(1.0 / sigma + lf / x));
        ratio_next.push(rho[l + 1]);
    }
    if ln_s.iter().chain(&ln_e).any(|v| !v.is_finite()) {
        return Err(CasimirError::Overflow(format!(
            "Riccati functions at x = {x}, l_max = {l_max}"
        )));
    }
    Ok(RiccatiPair {
        x,
        ln_s,
        ln_e,
        dlog_s,
        dlog_e,
        ratio_next,
    })
}

/// Mie coefficients for `ℓ = 1..=l_max` stored as `ln|·|` and sign (index 0 unused).
#[derive(Debug, Clone)]
pub struct MieLogCoefficients {
    pub ln_abs_a: Vec<f64>,
    pub sign_a: Vec<f64>,
    pub ln_abs_b: Vec<f64>,
    pub sign_b: Vec<f64>,
}

impl MieLogCoefficients {
    fn with_capacity(l_max: usize) -> Self {
        MieLogCoefficients {
            ln_abs_a: vec![f64::NEG_INFINITY; l_max + 1],
            sign_a: vec![0.0; l_max + 1],
            ln_abs_b: vec![f64::NEG_INFINITY; l_max + 1],
            sign_b: vec![0.0; l_max + 1],
        }
    }

    fn set(&mut self, l: usize, ln_prefactor: f64, a_factor: f64, b_factor: f64) {
        self.ln_abs_a[l] = ln_prefactor + a_factor.abs().ln();
        self.sign_a[l] = a_factor.signum();
        if b_factor == 0.0 {
            self.ln_abs_b[l] = f64::NEG_INFINITY;
            self.sign_b[l] = 0.0;
        } else {
            self.ln_abs_b[l] = ln_prefactor + b_factor.abs().ln();
            self.sign_b[l] = b_factor.signum();
        }
    }

    pub fn a(&self, l: usize) -> f64 {
        self.sign_a[l] * self.ln_abs_a[l].exp()
    }

    pub fn b(&self, l: usize) -> f64 {
        self.sign_b[l] * self.ln_abs_b[l].exp()
    }
}

/// Mie coefficients `a_ℓ, b_ℓ` for `ℓ = 1..=l_max` at `q = ξ/c > 0` for a sphere of radius `radius` (µm).
pub fn mie_log_coefficients(
    model: &MaterialModel,
    q: f64,
    radius: f64,
    l_max: usize,
) -> Result<MieLogCoefficients> {
    ensure(q > 0.0 && q.is_finite(), || {
        format!("Mie coefficients need ξ > 0, got {q}")
    })?;
    ensure(radius > 0.0, || {
        format!("sphere radius must be positive, got {radius}")
    })?;
    ensure(l_max >= 1, || "l_max must be at least 1".into())?;
    let y = q * radius;
    let outer = riccati_pair(l_max, y)?;
    let mut out = MieLogCoefficients::with_capacity(l_max);
    match model {
        MaterialModel::PerfectReflector => {
            for l in 1..=l_max {
                let ln_ratio = outer.ln_s[l] - outer.ln_e[l];
                out.set(l, ln_ratio, outer.dlog_s[l] / outer.dlog_e[l], 1.0);
            }
        }
        _ => {
            let chi = model.susceptibility_q2(q);
            let eps_m1 = chi / (q * q);
            let n = (1.0 + eps_m1).sqrt();
            let ny = radius * (q * q + chi).sqrt();
            let inner = growing_ratios(l_max + 2, ny)?;
            for l in 1..=l_max {
                let lf = l as f64;
                let rho_y = outer.ratio_next[l];
                let rho_ny = inner[l + 1];
                let ds_ny = (lf + 1.0) / ny + rho_ny;
                let de_y = outer.dlog_e[l];
                let num_e = (lf + 1.0) * eps_m1 / ny + n * rho_y - rho_ny;
                let den_e = n * de_y - ds_ny;
                let num_m = rho_y - n * rho_ny;
                let den_m = de_y - n * ds_ny;
                let ln_ratio = outer.ln_s[l] - outer.ln_e[l];
                out.set(l, ln_ratio, num_e / den_e, num_m / den_m);
            }
        }
    }
    if out.ln_abs_a.iter().skip(1).any(|v| v.is_nan()) {
        return Err(CasimirError::Overflow(format!(
            "Mie coefficients at y = {y}"
        )));
    }
    Ok(out)
}

/// `(a_ℓ, b_ℓ)` at `q = ξ/c > 0` for sphere radius `radius` (µm).
pub fn mie_ab(model: &MaterialModel, l: usize, q: f64, radius: f64) -> Result<(f64, f64)> {
    ensure(l >= 1, || "multipole order starts at 1".into())?;
    let c = mie_log_coefficients(model, q, radius, l)?;
    Ok((c.a(l), c.b(l)))
}

/// Leading low-frequency coefficients in log form: `a_ℓ ≈ ā_ℓ y^{2ℓ+1}`, `b_ℓ ≈ b̄_ℓ y^{2ℓ+1}`.
pub(crate) fn static_log_coefficients(
    model: &MaterialModel,
    radius: f64,
    l_max: usize,
) -> Result<MieLogCoefficients> {
    ensure(radius > 0.0, || {
        format!("sphere radius must be positive, got {radius}")
    })?;
    let mut out = MieLogCoefficients::with_capacity(l_max);
    let plasma_ratios = match model {
        MaterialModel::Plasma { .. } => {
            let alpha = model.plasma_wavenumber().unwrap() * radius;
            Some((alpha, growing_ratios(l_max + 2, alpha)?))
        }
        _ => None,
    };
    for l in 1..=l_max {
        let lf = l as f64;
        // (2ℓ+1)!!·(2ℓ−1)!!
        let ln_dd = ln_double_factorial_odd(l) + ln_double_factorial_odd(l) - (2.0 * lf + 1.0).ln();
        let a_factor = -(lf + 1.0) / lf;
        let b_factor = match (model, &plasma_ratios) {
            (MaterialModel::PerfectReflector, _) => 1.0,
            (MaterialModel::Drude { .. }, _) => 0.0,
            (MaterialModel::Plasma { .. }, Some((alpha, rho))) => {
                let t = alpha * rho[l + 1];
                t / (2.0 * lf + 1.0 + t)
            }
            _ => unreachable!(),
        };
        out.set(l, -ln_dd, a_factor, b_factor);
    }
    Ok(out)
}

/// Leading coefficients `(ā_ℓ, b̄_ℓ)` of `ξ̃^{2ℓ+1}` in the low-frequency expansion.
pub fn mie_ab_zero_frequency(model: &MaterialModel, l: usize, radius: f64) -> Result<(f64, f64)> {
    ensure(l >= 1, || "multipole order starts at 1".into())?;
    let c = static_log_coefficients(model, radius, l)?;
    Ok((c.a(l), c.b(l)))
}

/// `ln` of the leading coefficient of `P_ℓ^{(m)}(u)` times `√((ℓ−m)!/(ℓ+m)!)`.
pub(crate) fn ln_leading_legendre(l: usize, m: usize) -> f64 {
    0.5 * (ln_factorial(l - m) - ln_factorial(l + m)) + ln_factorial(2 * l)
        - l as f64 * std::f64::consts::LN_2
        - ln_factorial(l)
        - ln_factorial(l - m)
}
