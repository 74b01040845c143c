//! The finite set of primes excluded from trace sums.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::discriminant::fiber_discriminant;
use super::spec::SurfaceSpec;
use crate::arith::field::is_zero_mod;
use crate::arith::prime::prime_factors_big;
use crate::arith::{primes_in_range, RationalFunction, RationalPolynomial};
use crate::curves::{BaseCurve, EllipticCurveQ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadReason {
    BelowMinimum,
    BaseBadReduction,
    DenominatorVanishing,
    DiscriminantDegeneration,
}

impl fmt::Display for BadReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BadReason::BelowMinimum => "below-minimum",
            BadReason::BaseBadReduction => "base-bad-reduction",
            BadReason::DenominatorVanishing => "denominator-vanishing",
            BadReason::DiscriminantDegeneration => "discriminant-degeneration",
        })
    }
}

/// Integers whose prime divisors are bad, grouped by reason. Membership of a
/// prime is decided by divisibility, so no factorization is needed for it.
#[derive(Clone, Debug)]
pub struct BadPrimeCriteria {
    groups: Vec<(BadReason, Vec<BigInt>)>,
}

fn push_rational(out: &mut Vec<BigInt>, c: &BigRational) {
    if !c.numer().is_zero() {
        out.push(c.numer().clone());
    }
    out.push(c.denom().clone());
}

fn curve_integers(e: &EllipticCurveQ, out: &mut Vec<BigInt>) {
    for c in e.coefficients() {
        out.push(c.denom().clone());
    }
    out.push(e.discriminant().numer().clone());
}

fn denominators_of(r: &RationalFunction, out: &mut Vec<BigInt>) {
    for poly in [r.numer(), r.denom()] {
        for c in poly.coeffs() {
            out.push(c.denom().clone());
        }
    }
}

/// Integers controlling whether `c * N / D` keeps its degree, its constant
/// and its distinct zeros/poles under reduction.
fn degeneration_integers(r: &RationalFunction, out: &mut Vec<BigInt>) {
    let (cn, n) = r.numer().primitive_part();
    let (cd, d) = r.denom().primitive_part();
    push_rational(out, &(cn / cd));
    out.push(n.last().cloned().unwrap_or_else(BigInt::one));
    out.push(d.last().cloned().unwrap_or_else(BigInt::one));
    let nd = &RationalPolynomial::from_integers(&n) * &RationalPolynomial::from_integers(&d);
    if !nd.is_constant() {
        let (_, sf) = nd.squarefree_part().primitive_part();
        let disc = RationalPolynomial::from_integers(&sf).discriminant();
        push_rational(out, &disc);
    }
}

impl BadPrimeCriteria {
    pub fn new(spec: &SurfaceSpec) -> Self {
        let mut base = Vec::new();
        if let BaseCurve::Elliptic(e) = &spec.base {
            curve_integers(e, &mut base);
        }
        let mut dens = Vec::new();
        for c in spec.fiber_model.coefficients() {
            denominators_of(&c.a, &mut dens);
            denominators_of(&c.b, &mut dens);
        }
        if let Some((_, chart)) = spec.infinity_chart() {
            for r in chart {
                denominators_of(r, &mut dens);
            }
        }
        let mut degen = Vec::new();
        let kf = spec.function_field();
        degeneration_integers(&kf.norm(&fiber_discriminant(spec)), &mut degen);
        if let Some(c) = &spec.constant_part {
            curve_integers(c, &mut degen);
        }
        let clean = |v: Vec<BigInt>| {
            let mut v: Vec<BigInt> = v
                .into_iter()
                .map(|x| if x < BigInt::zero() { -x } else { x })
                .filter(|x| !x.is_one() && !x.is_zero())
                .collect();
            v.sort();
            v.dedup();
            v
        };
        Self {
            groups: vec![
                (BadReason::BaseBadReduction, clean(base)),
                (BadReason::DenominatorVanishing, clean(dens)),
                (BadReason::DiscriminantDegeneration, clean(degen)),
            ],
        }
    }

    /// First applicable reason, or `None` for a good prime (`p_min` is
    /// applied by the caller).
    pub fn reason(&self, p: u64) -> Option<BadReason> {
        self.groups
            .iter()
            .find(|(_, ints)| ints.iter().any(|n| is_zero_mod(n, p)))
            .map(|(r, _)| *r)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BadPrimeSet {
    pub p_min: u64,
    pub primes: BTreeMap<u64, BadReason>,
    /// Cofactors above `u64` that could not be split; any prime dividing one
    /// of them is bad for the recorded reason.
    pub unfactored: Vec<(String, BadReason)>,
    #[serde(skip)]
    criteria: Option<BadPrimeCriteria>,
}

impl BadPrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        self.reason(p).is_some()
    }

    pub fn reason(&self, p: u64) -> Option<BadReason> {
        if p < self.p_min {
            return Some(BadReason::BelowMinimum);
        }
        if let Some(r) = self.primes.get(&p) {
            return Some(*r);
        }
        self.criteria.as_ref().and_then(|c| c.reason(p))
    }

    pub fn primes(&self) -> Vec<u64> {
        self.primes.keys().copied().collect()
    }
}

pub fn compute_bad_primes(spec: &SurfaceSpec, p_min: u64) -> BadPrimeSet {
    let criteria = BadPrimeCriteria::new(spec);
    let mut primes = BTreeMap::new();
    if p_min > 2 {
        for p in primes_in_range(2, p_min - 1).expect("valid range") {
            primes.insert(p, BadReason::BelowMinimum);
        }
    }
    let mut unfactored = Vec::new();
    for (reason, ints) in &criteria.groups {
        for n in ints {
            let (ps, rest) = prime_factors_big(n);
            for p in ps {
                primes.entry(p).or_insert(*reason);
            }
            if let Some(r) = rest {
                unfactored.push((r.to_string(), *reason));
            }
        }
    }
    BadPrimeSet {
        p_min,
        primes,
        unfactored,
        criteria: Some(criteria),
    }
}
