//! Rank estimates from the residue at `s = 1` of `sum -A*_p log p / p^s`.
//!
//! Two discretizations are computed side by side:
//!
//! * Dirichlet: `r(x) = (sum_{p <= x} -A*_p ln p / p) / ln x`, evaluated at
//!   checkpoints spaced by `sqrt 2` and extrapolated to `x = infinity` by a
//!   least-squares fit `r(x) = a + b / ln x` over the last `window`
//!   checkpoints. The headline value is `a`.
//! * Cesaro: `S(x) = (1/x) sum_{p <= x} -A*_p ln p`, reported at `p_max`.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fibration::TraceSample;

pub const MIN_SAMPLES: usize = 10;
pub const DEFAULT_WINDOW: usize = 8;
/// Estimates above `bound + BOUND_SLACK` are flagged.
pub const BOUND_SLACK: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    DirichletPartialSum,
    CesaroNagao,
}

impl std::str::FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dirichlet" | "dirichlet-partial-sum" => Ok(Estimator::DirichletPartialSum),
            "cesaro" | "cesaro-nagao" => Ok(Estimator::CesaroNagao),
            _ => Err(Error::InvalidConfig(format!(
                "unknown estimator `{s}` (dirichlet | cesaro)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub p_min: u64,
    pub p_max: u64,
    pub estimator: Estimator,
    pub window: usize,
}

impl EstimatorConfig {
    pub fn new(p_min: u64, p_max: u64, estimator: Estimator, window: usize) -> Result<Self> {
        if p_min < 5 || p_min >= p_max {
            return Err(Error::InvalidConfig(format!(
                "need 5 <= p_min < p_max (got p_min = {p_min}, p_max = {p_max})"
            )));
        }
        if window < 2 {
            return Err(Error::InvalidConfig(format!(
                "window must be at least 2 (got {window})"
            )));
        }
        Ok(Self {
            p_min,
            p_max,
            estimator,
            window,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub x: u64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankEstimate {
    pub estimator: Estimator,
    pub raw: f64,
    pub rounded: i64,
    /// `|raw - rounded|`
    pub gap: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// Least checkpoint beyond which `|value|` never increases.
    pub monotone_from: Option<u64>,
    pub n_samples: usize,
    pub target: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NagaoReport {
    #[serde(flatten)]
    pub headline: RankEstimate,
    pub alternative: RankEstimate,
}

/// Checkpoints `floor(p_max / 2^{j/2})` down to `2 p_min`, ascending.
pub fn checkpoints(p_min: u64, p_max: u64) -> Vec<u64> {
    let mut xs = Vec::new();
    let mut x = p_max as f64;
    while x >= (2 * p_min) as f64 {
        xs.push(x.floor() as u64);
        x /= std::f64::consts::SQRT_2;
    }
    xs.reverse();
    xs.dedup();
    xs
}

/// Intercept of the least-squares line through `(u_i, v_i)`.
fn intercept(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mu = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mv = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mu).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mu) * (p.1 - mv)).sum();
    if sxx == 0.0 {
        return mv;
    }
    mv - (sxy / sxx) * mu
}

fn monotone_from(cps: &[Checkpoint]) -> Option<u64> {
    let mut start = cps.len().checked_sub(1)?;
    while start > 0 && cps[start - 1].value.abs() >= cps[start].value.abs() {
        start -= 1;
    }
    Some(cps[start].x)
}

/// Estimate from `(p, A*_p)` pairs, ascending in `p`.
pub fn estimate_series(series: &[(u64, f64)], cfg: &EstimatorConfig) -> Result<RankEstimate> {
    let used: Vec<(u64, f64)> = series
        .iter()
        .copied()
        .filter(|&(p, _)| p >= cfg.p_min && p <= cfg.p_max)
        .collect();
    if used.len() < MIN_SAMPLES {
        return Err(Error::InsufficientSamples {
            got: used.len(),
            need: MIN_SAMPLES,
        });
    }
    let xs = checkpoints(cfg.p_min, cfg.p_max);
    let mut cps = Vec::with_capacity(xs.len());
    let (mut dirichlet, mut cesaro) = (0.0f64, 0.0f64);
    let mut i = 0;
    for &x in &xs {
        while i < used.len() && used[i].0 <= x {
            let (p, a) = used[i];
            let lp = (p as f64).ln();
            dirichlet -= a * lp / p as f64;
            cesaro -= a * lp;
            i += 1;
        }
        let xf = x as f64;
        let value = match cfg.estimator {
            Estimator::DirichletPartialSum => dirichlet / xf.ln(),
            Estimator::CesaroNagao => cesaro / xf,
        };
        cps.push(Checkpoint { x, value });
    }
    let raw = match cfg.estimator {
        Estimator::DirichletPartialSum => {
            let tail = &cps[cps.len().saturating_sub(cfg.window)..];
            let pts: Vec<(f64, f64)> = tail
                .iter()
                .map(|c| (1.0 / (c.x as f64).ln(), c.value))
                .collect();
            intercept(&pts)
        }
        Estimator::CesaroNagao => cps.last().map(|c| c.value).unwrap_or(0.0),
    };
    let rounded = raw.round() as i64;
    Ok(RankEstimate {
        estimator: cfg.estimator,
        raw,
        rounded,
        gap: (raw - rounded as f64).abs(),
        monotone_from: monotone_from(&cps),
        checkpoints: cps,
        n_samples: used.len(),
        target: "rank of J_X(K) / tau B(k)",
    })
}

fn series_of(samples: &[TraceSample]) -> Vec<(u64, f64)> {
    let mut v: Vec<(u64, f64)> = samples
        .iter()
        .map(|s| (s.p, s.reduced.to_f64().unwrap_or(f64::NAN)))
        .collect();
    v.sort_by_key(|&(p, _)| p);
    v
}

pub fn residue_estimate(samples: &[TraceSample], cfg: &EstimatorConfig) -> Result<RankEstimate> {
    estimate_series(&series_of(samples), cfg)
}

/// The configured estimator as headline, the other one alongside.
pub fn nagao_report(samples: &[TraceSample], cfg: &EstimatorConfig) -> Result<NagaoReport> {
    let series = series_of(samples);
    let other = EstimatorConfig {
        estimator: match cfg.estimator {
            Estimator::DirichletPartialSum => Estimator::CesaroNagao,
            Estimator::CesaroNagao => Estimator::DirichletPartialSum,
        },
        ..*cfg
    };
    Ok(NagaoReport {
        headline: estimate_series(&series, cfg)?,
        alternative: estimate_series(&series, &other)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConsistency {
    pub estimate: f64,
    #[serde(serialize_with = "crate::serial::rational")]
    pub bound: BigRational,
    pub flagged: bool,
}

pub fn bound_consistency(estimate: f64, bound: &BigRational) -> BoundConsistency {
    let b = bound.to_f64().unwrap_or(f64::INFINITY);
    BoundConsistency {
        estimate,
        bound: bound.clone(),
        flagged: estimate > b + BOUND_SLACK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in_range;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn cfg(est: Estimator) -> EstimatorConfig {
        EstimatorConfig::new(5, 5000, est, DEFAULT_WINDOW).unwrap()
    }

    fn constant(c: f64) -> Vec<(u64, f64)> {
        primes_in_range(5, 5000)
            .unwrap()
            .into_iter()
            .map(|p| (p, c))
            .collect()
    }

    #[test]
    fn config_validation() {
        assert!(EstimatorConfig::new(3, 100, Estimator::CesaroNagao, 4).is_err());
        assert!(EstimatorConfig::new(50, 50, Estimator::CesaroNagao, 4).is_err());
        assert!(EstimatorConfig::new(5, 100, Estimator::CesaroNagao, 1).is_err());
        assert_eq!(
            "cesaro".parse::<Estimator>().unwrap(),
            Estimator::CesaroNagao
        );
        assert!("x".parse::<Estimator>().is_err());
    }

    #[test]
    fn refuses_short_series() {
        let s: Vec<(u64, f64)> = primes_in_range(5, 30)
            .unwrap()
            .into_iter()
            .map(|p| (p, 0.0))
            .collect();
        assert!(matches!(
            estimate_series(&s, &cfg(Estimator::DirichletPartialSum)),
            Err(Error::InsufficientSamples { got: 8, need: 10 })
        ));
    }

    #[test]
    fn zero_series_gives_zero() {
        for est in [Estimator::DirichletPartialSum, Estimator::CesaroNagao] {
            let r = estimate_series(&constant(0.0), &cfg(est)).unwrap();
            assert_eq!(r.raw, 0.0);
            assert_eq!(r.rounded, 0);
        }
    }

    #[test]
    fn constant_minus_one_recovers_rank_one() {
        // -A*_p = 1: Mertens gives sum ln p / p = ln x + O(1), Chebyshev
        // gives sum ln p = x (1 + o(1))
        let d = estimate_series(&constant(-1.0), &cfg(Estimator::DirichletPartialSum)).unwrap();
        assert_eq!(d.rounded, 1);
        assert!(d.gap < 0.15, "{}", d.raw);
        let c = estimate_series(&constant(-1.0), &cfg(Estimator::CesaroNagao)).unwrap();
        assert_eq!(c.rounded, 1);
    }

    #[test]
    fn checkpoint_spacing() {
        let xs = checkpoints(5, 10_000);
        assert_eq!(*xs.last().unwrap(), 10_000);
        assert!(xs[0] >= 10);
        for w in xs.windows(2) {
            let r = w[1] as f64 / w[0] as f64;
            assert!((r - std::f64::consts::SQRT_2).abs() < 0.1);
        }
    }

    #[test]
    fn consistency_flags() {
        let q = |n: i64| BigRational::from_integer(BigInt::from(n));
        assert!(!bound_consistency(0.1, &q(0)).flagged);
        assert!(!bound_consistency(1.02, &q(12)).flagged);
        assert!(bound_consistency(2.7, &q(0)).flagged);
    }

    proptest! {
        #[test]
        fn estimators_are_linear(a in proptest::collection::vec(-3.0f64..3.0, 100), b in proptest::collection::vec(-3.0f64..3.0, 100)) {
            let primes = primes_in_range(5, 600).unwrap();
            let n = primes.len().min(100);
            let sa: Vec<(u64, f64)> = primes[..n].iter().zip(&a).map(|(&p, &x)| (p, x)).collect();
            let sb: Vec<(u64, f64)> = primes[..n].iter().zip(&b).map(|(&p, &x)| (p, x)).collect();
            let sum: Vec<(u64, f64)> = sa.iter().zip(&sb).map(|(x, y)| (x.0, x.1 + y.1)).collect();
            let c = EstimatorConfig::new(5, primes[n - 1], Estimator::DirichletPartialSum, 4).unwrap();
            for est in [Estimator::DirichletPartialSum, Estimator::CesaroNagao] {
                let c = EstimatorConfig { estimator: est, ..c };
                let (ra, rb, rs) = (
                    estimate_series(&sa, &c).unwrap(),
                    estimate_series(&sb, &c).unwrap(),
                    estimate_series(&sum, &c).unwrap(),
                );
                for ((x, y), z) in ra.checkpoints.iter().zip(&rb.checkpoints).zip(&rs.checkpoints) {
                    prop_assert!((x.value + y.value - z.value).abs() < 1e-9);
                }
                prop_assert!((ra.raw + rb.raw - rs.raw).abs() < 1e-9);
            }
        }
    }
}
