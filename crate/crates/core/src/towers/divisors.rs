//! The divisor function and its averages.

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `d(n)` by trial division.
pub fn divisor_count(n: i64) -> Result<u64> {
    if n <= 0 {
        return Err(Error::NonPositive {
            what: "n",
            value: n,
        });
    }
    let mut n = n as u64;
    let mut d = 1u64;
    let mut q = 2u64;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        d *= e + 1;
        q += 1;
    }
    if n > 1 {
        d *= 2;
    }
    Ok(d)
}

/// `d(0..=n)` by sieving; index 0 holds 0.
pub fn divisor_counts_up_to(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    for k in 1..=n {
        for m in (k..=n).step_by(k) {
            d[m] += 1;
        }
    }
    d
}

/// `sum_{n <= x} d(n)`, via `sum_k floor(x / k)` over the hyperbola.
pub fn divisor_sum(x: u64) -> u128 {
    let r = crate::arith::prime::isqrt(x);
    let s: u128 = (1..=r).map(|k| u128::from(x / k)).sum();
    2 * s - u128::from(r) * u128::from(r)
}

/// `sum_{n <= x} d(n) / (x ln x)`.
pub fn divisor_sum_ratio(x: u64) -> Result<f64> {
    if x < 2 {
        return Err(Error::InvalidConfig(format!(
            "divisor_sum_ratio needs x >= 2 (got {x})"
        )));
    }
    let xf = x as f64;
    Ok(divisor_sum(x) as f64 / (xf * xf.ln()))
}

/// `(ln x + 2 gamma - 1) / ln x`, the ratio predicted by Dirichlet's
/// asymptotic.
pub fn dirichlet_prediction(x: u64) -> f64 {
    let l = (x as f64).ln();
    (l + 2.0 * EULER_GAMMA - 1.0) / l
}

/// `ln d(n) ln ln n / ln n`, the least `kappa` with `d(n) <= n^{kappa / ln ln n}`.
pub fn kappa(n: u64, d: u64) -> Option<f64> {
    if n < 3 {
        return None;
    }
    let l = (n as f64).ln();
    Some((d as f64).ln() * l.ln() / l)
}

/// First `n` in `[3, n_max]` with `d(n) > n^{c / ln ln n}`, if any.
pub fn divisor_envelope_violation(n_max: usize, c: f64) -> Option<u64> {
    let d = divisor_counts_up_to(n_max);
    (3..=n_max).find_map(|n| {
        let l = (n as f64).ln();
        (f64::from(d[n]).ln() > c * l / l.ln()).then_some(n as u64)
    })
}
