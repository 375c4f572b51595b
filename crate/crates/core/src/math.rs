//! Small numerical helpers shared across modules.

use std::collections::HashMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex, OnceLock};

use gauss_quad::GaussLegendre;

const FACTORIAL_TABLE: usize = 2048;

/// `ln(n!)`, tabulated up to 2047.
pub fn ln_factorial(n: usize) -> f64 {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(FACTORIAL_TABLE);
        let mut acc = 0.0;
        t.push(0.0);
        for k in 1..FACTORIAL_TABLE {
            acc += (k as f64).ln();
            t.push(acc);
        }
        t
    });
    if n < FACTORIAL_TABLE {
        table[n]
    } else {
        table[FACTORIAL_TABLE - 1] + (FACTORIAL_TABLE..=n).map(|k| (k as f64).ln()).sum::<f64>()
    }
}

/// `ln((2l+1)!!)`.
pub fn ln_double_factorial_odd(l: usize) -> f64 {
    ln_factorial(2 * l + 1) - l as f64 * std::f64::consts::LN_2 - ln_factorial(l)
}

/// Pairwise (cascade) summation in index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

type Rule = Arc<[(f64, f64)]>;

/// Gauss–Legendre nodes and weights on `[0, 1]`, cached per order.
pub fn gauss_legendre_unit(order: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&order) {
        return rule.clone();
    }
    let n = NonZeroUsize::new(order).expect("quadrature order must be positive");
    let rule: Arc<[(f64, f64)]> = GaussLegendre::new(n)
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
        .collect();
    cache.lock().unwrap().insert(order, rule.clone());
    rule
}
