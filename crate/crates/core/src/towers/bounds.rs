//! Rank bounds along towers of unramified abelian covers.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::divisors::{divisor_counts_up_to, kappa};
use crate::conductor::pullback_conductor;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CoverKind {
    /// `[n] : C -> C` on an elliptic base.
    #[serde(rename = "a")]
    MultiplicationOnEllipticBase,
    /// Pullback of `[n]` on the Jacobian of the base.
    #[serde(rename = "b")]
    JacobianPullback,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSpec {
    pub kind: CoverKind,
    pub n: u64,
    pub base_genus: u64,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub group_order: BigInt,
    pub galois_index: u64,
}

impl CoverSpec {
    pub fn new(kind: CoverKind, n: u64, base_genus: u64, galois_index: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::NonPositive {
                what: "n",
                value: 0,
            });
        }
        if galois_index == 0 {
            return Err(Error::NonPositive {
                what: "Galois index",
                value: 0,
            });
        }
        match kind {
            CoverKind::MultiplicationOnEllipticBase if base_genus != 1 => {
                return Err(Error::InvalidConfig(format!(
                    "multiplication covers need an elliptic base (g_C = 1, got {base_genus})"
                )))
            }
            CoverKind::JacobianPullback if base_genus == 0 => {
                return Err(Error::InvalidConfig(
                    "the projective line has no unramified covers".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            kind,
            n,
            base_genus,
            group_order: BigInt::from(n).pow(2 * base_genus as u32),
            galois_index,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainBound {
    /// `(orbits / |A|) (2 g_X (2 g_C' - 2) + f')`
    #[serde(serialize_with = "crate::serial::rational")]
    pub bound: BigRational,
    /// `(orbits / |A|) (4 g_C' - 4 + f')` when `g_X = 1`.
    #[serde(serialize_with = "crate::serial::option_rational")]
    pub elliptic: Option<BigRational>,
}

pub fn main_bound(
    orbits: &BigInt,
    group_order: &BigInt,
    g_x: u64,
    g_c_prime: &BigInt,
    f_prime: &BigInt,
) -> Result<MainBound> {
    if group_order <= &BigInt::zero() {
        return Err(Error::InvalidConfig("group order must be positive".into()));
    }
    if orbits > group_order {
        return Err(Error::InvalidConfig(format!(
            "orbit count {orbits} exceeds group order {group_order}"
        )));
    }
    if orbits < &BigInt::zero() || f_prime < &BigInt::zero() || g_c_prime < &BigInt::zero() {
        return Err(Error::InvalidConfig("inputs must be non-negative".into()));
    }
    let scale = BigRational::new(orbits.clone(), group_order.clone());
    let two = BigInt::from(2);
    let geometric = BigInt::from(2 * g_x) * (&two * g_c_prime - &two) + f_prime;
    let elliptic = (g_x == 1).then(|| {
        let v = BigInt::from(4) * g_c_prime - BigInt::from(4) + f_prime;
        &scale * BigRational::from_integer(v)
    });
    Ok(MainBound {
        bound: &scale * BigRational::from_integer(geometric),
        elliptic,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TowerRow {
    pub n: u64,
    pub d_n: u64,
    #[serde(serialize_with = "crate::serial::bigint")]
    pub f_n: BigInt,
    #[serde(serialize_with = "crate::serial::rational")]
    pub bound: BigRational,
    /// `None` when `f_n = 1`.
    pub bound_over_logf: Option<f64>,
    /// `(1/n) sum_{k <= n} bound_k / ln f_k`, terms with `f_k = 1` counted as 0.
    pub running_avg: f64,
    pub kappa_n: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerConfig {
    pub kind: CoverKind,
    pub f_base: u64,
    pub g_base: u64,
    pub g_fiber: u64,
    pub index: u64,
    pub n_max: u64,
}

/// One row per `n` in `1..=n_max`.
pub fn tower_bounds(cfg: &TowerConfig) -> Result<Vec<TowerRow>> {
    if cfg.n_max < 1 {
        return Err(Error::NonPositive {
            what: "n_max",
            value: 0,
        });
    }
    if cfg.f_base < 1 {
        return Err(Error::NonPositive {
            what: "f_base",
            value: 0,
        });
    }
    if cfg.g_fiber < 1 {
        return Err(Error::NonPositive {
            what: "g_X",
            value: 0,
        });
    }
    CoverSpec::new(cfg.kind, 1, cfg.g_base, cfg.index)?;
    let d = divisor_counts_up_to(cfg.n_max as usize);
    let base = pullback_conductor(cfg.f_base, cfg.g_base, 1)?;
    debug_assert!(base.holds());
    let mut rows = Vec::with_capacity(cfg.n_max as usize);
    let mut sum = 0.0f64;
    for n in 1..=cfg.n_max {
        let cover = CoverSpec::new(cfg.kind, n, cfg.g_base, cfg.index)?;
        let order = &cover.group_order;
        let f_n = order * BigInt::from(cfg.f_base);
        // 2 g_n - 2 = |A| (2 g_C - 2)
        let g_n =
            (order * BigInt::from(2 * cfg.g_base as i64 - 2) + BigInt::from(2)) / BigInt::from(2);
        let d_n = u64::from(d[n as usize]);
        let orbits = (BigInt::from(cfg.index) * BigInt::from(d_n)).min(order.clone());
        let bound = main_bound(&orbits, order, cfg.g_fiber, &g_n, &f_n)?.bound;
        let log_f = (cfg.f_base as f64).ln() + 2.0 * cfg.g_base as f64 * (n as f64).ln();
        let bound_over_logf = (log_f > 0.0).then(|| bound.to_f64().unwrap_or(f64::NAN) / log_f);
        sum += bound_over_logf.unwrap_or(0.0);
        rows.push(TowerRow {
            n,
            d_n,
            f_n,
            bound,
            bound_over_logf,
            running_avg: sum / n as f64,
            kappa_n: kappa(n, d_n),
        });
    }
    Ok(rows)
}

fn fmt_float(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.12}")).unwrap_or_default()
}

/// CSV with columns `n, d_n, f_n, bound, bound_over_logf, running_avg, kappa_n`.
pub fn write_tower_csv<W: Write>(rows: &[TowerRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "d_n",
        "f_n",
        "bound",
        "bound_over_logf",
        "running_avg",
        "kappa_n",
    ])?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.d_n.to_string(),
            r.f_n.to_string(),
            crate::serial::rational_string(&r.bound),
            fmt_float(r.bound_over_logf),
            fmt_float(Some(r.running_avg)),
            fmt_float(r.kappa_n),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn main_bound_cases() {
        // orbits = |A| recovers the geometric bound with dim B = 0
        let b = main_bound(&big(16), &big(16), 1, &big(1), &big(64)).unwrap();
        assert_eq!(b.bound, BigRational::from_integer(big(64)));
        // n = 4 on an elliptic base with f = 5: (3/16) 16 f = 3 f
        let p = pullback_conductor(5, 1, 16).unwrap();
        let b = main_bound(
            &big(3),
            &big(16),
            1,
            &big(p.g_c_prime as i64),
            &big(p.f_prime as i64),
        )
        .unwrap();
        assert_eq!(b.bound, BigRational::from_integer(big(15)));
        assert_eq!(b.elliptic, Some(BigRational::from_integer(big(15))));
        assert!(main_bound(&big(17), &big(16), 1, &big(1), &big(0)).is_err());
        let g2 = main_bound(&big(1), &big(4), 2, &big(3), &big(8)).unwrap();
        // (4 (6 - 2) + 8) / 4
        assert_eq!(g2.bound, BigRational::from_integer(big(6)));
        assert_eq!(g2.elliptic, None);
    }

    #[test]
    fn kind_a_rows() {
        let cfg = TowerConfig {
            kind: CoverKind::MultiplicationOnEllipticBase,
            f_base: 4,
            g_base: 1,
            g_fiber: 1,
            index: 1,
            n_max: 200,
        };
        let rows = tower_bounds(&cfg).unwrap();
        for r in &rows {
            assert_eq!(r.bound, BigRational::from_integer(big(4 * r.d_n as i64)));
            assert_eq!(r.f_n, big(4 * (r.n * r.n) as i64));
        }
        assert_eq!(rows[0].bound, BigRational::from_integer(big(4)));
        assert!(rows[0].kappa_n.is_none());
    }

    #[test]
    fn kind_b_rows() {
        let cfg = TowerConfig {
            kind: CoverKind::JacobianPullback,
            f_base: 3,
            g_base: 2,
            g_fiber: 2,
            index: 2,
            n_max: 12,
        };
        let rows = tower_bounds(&cfg).unwrap();
        // (2 g_X (2 g_C - 2) + f) I d(n) = (8 + 3) 2 d(n), once I d(n) <= n^4
        for r in rows.iter().skip(1) {
            assert_eq!(r.bound, BigRational::from_integer(big(22 * r.d_n as i64)));
        }
        // n = 1: orbit count capped at |A| = 1
        assert_eq!(rows[0].bound, BigRational::from_integer(big(11)));
        assert!(CoverSpec::new(CoverKind::MultiplicationOnEllipticBase, 2, 2, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = TowerConfig {
            kind: CoverKind::MultiplicationOnEllipticBase,
            f_base: 1,
            g_base: 1,
            g_fiber: 1,
            index: 1,
            n_max: 3,
        };
        let mut buf = Vec::new();
        write_tower_csv(&tower_bounds(&cfg).unwrap(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "n,d_n,f_n,bound,bound_over_logf,running_avg,kappa_n"
        );
        assert!(lines[1].starts_with("1,1,1,1,,0.000000000000,"));
        assert_eq!(lines.len(), 4);
    }
}
