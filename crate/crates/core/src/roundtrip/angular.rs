//! Mie angular functions `π_ℓ^m`, `τ_ℓ^m` at the hyperbolic argument `u = κ/q ≥ 1`.
//!
//! For evanescent plane waves at imaginary frequency the polar angle satisfies
//! `cos θ = u ≥ 1`. We work with the magnitudes
//!
//! ```text
//! π̂_ℓ^m(u) = N_ℓm (u² − 1)^{(m−1)/2} P_ℓ^{(m)}(u)
//! τ̂_ℓ^m(u) = N_ℓm (u² − 1)^{(m−1)/2} [m u P_ℓ^{(m)}(u) + (u² − 1) P_ℓ^{(m)}'(u)]
//! ```
//!
//! with `P_ℓ^{(m)}` the `m`-th derivative of the Legendre polynomial and
//! `N_ℓm = √((ℓ−m)!/(ℓ+m)!)`. Both are non-negative for `u ≥ 1`. Values grow like
//! `u^ℓ`, so the recurrence is run on a rescaled mantissa and reported as logs.

use crate::error::{ensure, CasimirError, Result};
use crate::math::ln_factorial;

const RESCALE_ABOVE: f64 = 1e200;
const LN_RESCALE: f64 = 460.517_018_598_809_1; // ln(1e200)

/// `ln π̂_ℓ^m(u)` and `ln τ̂_ℓ^m(u)` for `ℓ = max(1, m)..=l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularFunctions {
    pub m: usize,
    pub l_min: usize,
    pub ln_pi: Vec<f64>,
    pub ln_tau: Vec<f64>,
}

impl AngularFunctions {
    pub fn pi(&self, l: usize) -> f64 {
        self.ln_pi[l - self.l_min].exp()
    }

    pub fn tau(&self, l: usize) -> f64 {
        self.ln_tau[l - self.l_min].exp()
    }
}

/// Angular functions at `u ≥ 1`, for `0 ≤ m ≤ l_max`.
pub fn angular_functions(l_max: usize, m: usize, u: f64) -> Result<AngularFunctions> {
    ensure(u >= 1.0 && u.is_finite(), || {
        format!("angular functions need u >= 1, got {u}")
    })?;
    ensure(m <= l_max && l_max >= 1, || {
        format!("need 0 <= m <= l_max, got m = {m}, l_max = {l_max}")
    })?;
    let l_min = m.max(1);
    let n = l_max + 1 - l_min;
    let mut ln_pi = vec![0.0; n];
    let mut ln_tau = vec![0.0; n];
    let u2m1 = (u - 1.0) * (u + 1.0);
    if m == 0 && u2m1 == 0.0 {
        // τ̂ vanishes at u = 1; π̂ diverges but only ever enters multiplied by m
        ln_pi.fill(f64::INFINITY);
        ln_tau.fill(f64::NEG_INFINITY);
    } else {
        fill_angular(l_max, m, u, u2m1, &mut ln_pi, &mut ln_tau);
    }
    if ln_pi.iter().chain(&ln_tau).any(|v| v.is_nan()) {
        return Err(CasimirError::Overflow(format!(
            "angular functions at u = {u}"
        )));
    }
    Ok(AngularFunctions {
        m,
        l_min,
        ln_pi,
        ln_tau,
    })
}

/// Core recurrence; `u2m1 = u² − 1` is passed separately so callers can supply it
/// without cancellation. Outputs are indexed from `ℓ = max(1, m)`.
pub(crate) fn fill_angular(
    l_max: usize,
    m: usize,
    u: f64,
    u2m1: f64,
    ln_pi: &mut [f64],
    ln_tau: &mut [f64],
) {
    let l_min = m.max(1);
    let mf = m as f64;
    // N_mm P_m^{(m)} = (2m−1)!!/√((2m)!) = √((2m)!)/(2^m m!)
    let ln_start = 0.5 * ln_factorial(2 * m) - mf * std::f64::consts::LN_2 - ln_factorial(m);
    let ln_weight = 0.5 * (mf - 1.0) * u2m1.ln();

    let mut offset = ln_start;
    let mut prev = 0.0; // N P_{l−1}
    let mut cur = 1.0; // N P_l, scaled by e^{offset}
    for l in m..=l_max {
        if l >= l_min {
            let lf = l as f64;
            let tau = lf * u * cur - ((lf + mf) * (lf - mf)).sqrt() * prev;
            let idx = l - l_min;
            ln_pi[idx] = offset + cur.ln() + ln_weight;
            ln_tau[idx] = offset + tau.ln() + ln_weight;
        }
        if l == l_max {
            break;
        }
        let lf = l as f64;
        let next = ((2.0 * lf + 1.0) * u * cur - ((lf + mf) * (lf - mf)).sqrt() * prev)
            / ((lf + 1.0 + mf) * (lf + 1.0 - mf)).sqrt();
        prev = cur;
        cur = next;
        if cur > RESCALE_ABOVE {
            cur /= RESCALE_ABOVE;
            prev /= RESCALE_ABOVE;
            offset += LN_RESCALE;
        }
    }
}
