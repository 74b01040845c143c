//! Average Frobenius traces over the fibers of a reduced surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::badprimes::BadPrimeCriteria;
use super::reduce::ReducedSurface;
use super::spec::{FiberModel, SurfaceSpec};
use crate::arith::linalg;
use crate::arith::modp::reduce_poly;
use crate::arith::{CharacterTable, PrimeField, RationalFunction, RationalPolynomial};
use crate::curves::{enumerate_base_points, fiber_trace_with, BasePointModP};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSample {
    pub p: u64,
    /// `(1/p) sum_z a_z`
    pub avg_trace: BigRational,
    /// mean of `a_z` over smooth fibers (zero when there are none)
    pub avg_trace_good: BigRational,
    /// `avg_trace - a_p(B)`
    pub reduced: BigRational,
    pub n_base_points: u64,
    pub n_bad_fibers: u64,
    /// `sum_z a_z` over all fibers
    pub trace_sum: i64,
    /// `sum_z a_z` over singular fibers
    pub bad_trace_sum: i64,
    /// `a_p` of the constant part (0 when absent)
    pub trace_constant_part: i64,
}

/// Per-fiber data at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberTrace {
    pub point: BasePointModP,
    pub trace: i64,
    pub singular: bool,
}

/// Precomputed per-surface state shared across primes.
#[derive(Clone, Debug)]
pub struct TraceEngine<'a> {
    spec: &'a SurfaceSpec,
    criteria: BadPrimeCriteria,
    constant: bool,
    /// `b2, b4, b6` when they are polynomials of degree at most 2 in `t`.
    quadratic_in_t: Option<[RationalPolynomial; 3]>,
}

fn quadratic_b_invariants(spec: &SurfaceSpec) -> Option<[RationalPolynomial; 3]> {
    if !matches!(spec.base, crate::curves::BaseCurve::ProjectiveLine) {
        return None;
    }
    let FiberModel::Weierstrass(a) = &spec.fiber_model else {
        return None;
    };
    if !a.iter().all(|c| c.a.is_polynomial()) {
        return None;
    }
    let [a1, a2, a3, a4, a6] = a.clone().map(|c| c.a);
    let k = |n: i64| RationalFunction::constant(BigRational::from_integer(BigInt::from(n)));
    let b2 = linalg::Field::add(
        &linalg::Field::mul(&a1, &a1),
        &linalg::Field::mul(&k(4), &a2),
    );
    let b4 = linalg::Field::add(
        &linalg::Field::mul(&k(2), &a4),
        &linalg::Field::mul(&a1, &a3),
    );
    let b6 = linalg::Field::add(
        &linalg::Field::mul(&a3, &a3),
        &linalg::Field::mul(&k(4), &a6),
    );
    let bs = [b2, b4, b6];
    if bs
        .iter()
        .all(|b| b.is_polynomial() && b.numer().degree().unwrap_or(0) <= 2)
    {
        Some(bs.map(|b| b.numer().clone()))
    } else {
        None
    }
}

/// `sum_{t in F_p} chi(c2 t^2 + c1 t + c0)`.
fn quadratic_character_sum(c2: u64, c1: u64, c0: u64, f: &PrimeField) -> i64 {
    let p = f.modulus() as i64;
    if c2 != 0 {
        let disc = f.sub(f.mul(c1, c1), f.mul(4, f.mul(c2, c0)));
        let chi = i64::from(f.chi(c2));
        if disc == 0 {
            (p - 1) * chi
        } else {
            -chi
        }
    } else if c1 != 0 {
        0
    } else {
        p * i64::from(f.chi(c0))
    }
}

/// `sum_{t in F_p} a_t` over the finite chart, swapping the sums over `x`
/// and `t`.
fn finite_chart_trace_sum(bs: &[RationalPolynomial; 3], f: &PrimeField) -> Option<i64> {
    let red: Vec<Vec<u64>> = bs
        .iter()
        .map(|b| reduce_poly(b, f))
        .collect::<Option<_>>()?;
    let coeff = |v: &Vec<u64>, k: usize| v.get(k).copied().unwrap_or(0);
    let mut total = 0i64;
    for x in 0..f.modulus() {
        let x2 = f.mul(x, x);
        let c: Vec<u64> = (0..3)
            .map(|k| {
                let mut v = f.add(
                    f.mul(coeff(&red[0], k), x2),
                    f.mul(f.mul(2, coeff(&red[1], k)), x),
                );
                v = f.add(v, coeff(&red[2], k));
                if k == 0 {
                    v = f.add(v, f.mul(4, f.mul(x2, x)));
                }
                v
            })
            .collect();
        total += quadratic_character_sum(c[2], c[1], c[0], f);
    }
    Some(-total)
}

fn ratio(num: i64, den: u64) -> BigRational {
    if den == 0 {
        return BigRational::zero();
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl<'a> TraceEngine<'a> {
    pub fn new(spec: &'a SurfaceSpec) -> Self {
        Self {
            spec,
            criteria: BadPrimeCriteria::new(spec),
            constant: spec.is_constant_family(),
            quadratic_in_t: quadratic_b_invariants(spec),
        }
    }

    pub fn spec(&self) -> &SurfaceSpec {
        self.spec
    }

    pub fn check_prime(&self, p: u64) -> Result<()> {
        if p < 5 {
            return Err(Error::PrimeTooSmall { p, min: 5 });
        }
        if let Some(r) = self.criteria.reason(p) {
            return Err(Error::BadPrime {
                p,
                reason: r.to_string(),
            });
        }
        Ok(())
    }

    pub fn is_good(&self, p: u64) -> bool {
        self.check_prime(p).is_ok()
    }

    /// Trace and smoothness of every fiber over `C(F_p)`, in base-point order.
    pub fn fiber_traces(&self, p: u64) -> Result<Vec<FiberTrace>> {
        self.check_prime(p)?;
        let red = ReducedSurface::new(self.spec, p)?;
        let table = CharacterTable::new(p)?;
        let points = enumerate_base_points(&self.spec.base, p)?;
        if self.constant {
            let f = red.fiber_at(points[0]);
            let (trace, singular) = (fiber_trace_with(&f, &table), f.is_singular());
            return Ok(points
                .into_iter()
                .map(|point| FiberTrace {
                    point,
                    trace,
                    singular,
                })
                .collect());
        }
        Ok(points
            .into_iter()
            .map(|point| {
                let f = red.fiber_at(point);
                FiberTrace {
                    point,
                    trace: fiber_trace_with(&f, &table),
                    singular: f.is_singular(),
                }
            })
            .collect())
    }

    /// `(n_base_points, trace_sum, singular fiber traces)`.
    fn trace_totals(&self, p: u64) -> Result<(u64, i64, Vec<i64>)> {
        if !self.constant {
            if let Some(bs) = &self.quadratic_in_t {
                self.check_prime(p)?;
                let red = ReducedSurface::new(self.spec, p)?;
                if let Some(finite) = finite_chart_trace_sum(bs, red.field()) {
                    let table = CharacterTable::new(p)?;
                    let inf = red.fiber_at(BasePointModP::Infinity);
                    let inf_trace = fiber_trace_with(&inf, &table);
                    let mut bad = Vec::new();
                    for t in 0..p {
                        let fib = red.fiber_at(BasePointModP::Line(t));
                        if fib.is_singular() {
                            bad.push(fiber_trace_with(&fib, &table));
                        }
                    }
                    if inf.is_singular() {
                        bad.push(inf_trace);
                    }
                    return Ok((p + 1, finite + inf_trace, bad));
                }
            }
        }
        let fibers = self.fiber_traces(p)?;
        let total = fibers.iter().map(|f| f.trace).sum();
        let bad = fibers
            .iter()
            .filter(|f| f.singular)
            .map(|f| f.trace)
            .collect();
        Ok((fibers.len() as u64, total, bad))
    }

    pub fn sample(&self, p: u64) -> Result<TraceSample> {
        let (n_base_points, trace_sum, bad) = self.trace_totals(p)?;
        let bad_trace_sum: i64 = bad.iter().sum();
        let n_bad = bad.len() as u64;
        let trace_constant_part = match &self.spec.constant_part {
            Some(c) => c.trace(p)?,
            None => 0,
        };
        let avg_trace = ratio(trace_sum, p);
        let reduced = &avg_trace - BigRational::from_integer(BigInt::from(trace_constant_part));
        Ok(TraceSample {
            p,
            avg_trace,
            avg_trace_good: ratio(trace_sum - bad_trace_sum, n_base_points - n_bad),
            reduced,
            n_base_points,
            n_bad_fibers: n_bad,
            trace_sum,
            bad_trace_sum,
            trace_constant_part,
        })
    }

    /// Samples for every good prime in `primes`, in input order. Runs on the
    /// current rayon pool.
    pub fn samples(&self, primes: &[u64]) -> Result<Vec<TraceSample>> {
        primes
            .par_iter()
            .filter(|&&p| self.is_good(p))
            .map(|&p| self.sample(p))
            .collect()
    }
}

/// One-shot form of [`TraceEngine::sample`].
pub fn average_trace(spec: &SurfaceSpec, p: u64) -> Result<TraceSample> {
    TraceEngine::new(spec).sample(p)
}

/// CSV with columns `p, A_p_num, A_p_den, Ap_good_num, Ap_good_den,
/// Astar_num, Astar_den, n_base, n_bad`.
pub fn write_trace_csv<W: std::io::Write>(samples: &[TraceSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "p",
        "A_p_num",
        "A_p_den",
        "Ap_good_num",
        "Ap_good_den",
        "Astar_num",
        "Astar_den",
        "n_base",
        "n_bad",
    ])?;
    for s in samples {
        w.write_record([
            s.p.to_string(),
            s.avg_trace.numer().to_string(),
            s.avg_trace.denom().to_string(),
            s.avg_trace_good.numer().to_string(),
            s.avg_trace_good.denom().to_string(),
            s.reduced.numer().to_string(),
            s.reduced.denom().to_string(),
            s.n_base_points.to_string(),
            s.n_bad_fibers.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ExcessRow {
    pub p: u64,
    pub excess: f64,
    pub running_max: f64,
}

/// `sqrt(p) * max(0, |A_p| - G)` per prime.
#[derive(Clone, Debug, Serialize)]
pub struct TraceBoundReport {
    pub bound: i64,
    pub rows: Vec<ExcessRow>,
    pub max_excess: f64,
    /// Running maximum at the last prime not above `p_max / 10`.
    pub max_before_top_decade: f64,
    /// No new maximum among primes above `p_max / 10`.
    pub stable_over_top_decade: bool,
}

/// Compare `|A_p|` with `G = 2 g_X (2 g_C - 2) + f`.
pub fn trace_bound_check(spec: &SurfaceSpec, f: u64, samples: &[TraceSample]) -> TraceBoundReport {
    let g = 2 * spec.genus_fiber as i64 * (2 * spec.genus_base() as i64 - 2) + f as i64;
    let gq = BigRational::from_integer(BigInt::from(g));
    let mut rows = Vec::with_capacity(samples.len());
    let mut running = 0.0f64;
    for s in samples {
        let over = s.avg_trace.abs() - &gq;
        let excess = if over.is_positive() {
            (s.p as f64).sqrt() * over.to_f64().unwrap_or(f64::INFINITY)
        } else {
            0.0
        };
        running = running.max(excess);
        rows.push(ExcessRow {
            p: s.p,
            excess,
            running_max: running,
        });
    }
    let p_max = samples.last().map(|s| s.p).unwrap_or(0);
    let max_before_top_decade = rows
        .iter()
        .filter(|r| r.p <= p_max / 10)
        .map(|r| r.running_max)
        .next_back()
        .unwrap_or(0.0);
    TraceBoundReport {
        bound: g,
        max_excess: running,
        max_before_top_decade,
        stable_over_top_decade: running <= max_before_top_decade,
        rows,
    }
}
