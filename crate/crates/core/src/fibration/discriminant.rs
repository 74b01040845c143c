//! The discriminant of the generic fiber and its zero/pole locus.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::function::{BaseFunction, FunctionField};
use super::spec::{FiberModel, SurfaceSpec};
use crate::arith::factor::{places_of, Factor};
use crate::arith::linalg::{determinant, sylvester, Field};
use crate::arith::RationalFunction;
use crate::curves::BaseCurve;
use crate::error::{Error, Result};

fn k(n: i64) -> BaseFunction {
    BaseFunction::constant(BigRational::from_integer(BigInt::from(n)))
}

/// `c4, c6, Delta` of a Weierstrass model over the base function field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassInvariants {
    pub c4: BaseFunction,
    pub c6: BaseFunction,
    pub delta: BaseFunction,
}

pub fn weierstrass_invariants(kf: &FunctionField, a: &[BaseFunction; 5]) -> WeierstrassInvariants {
    let [a1, a2, a3, a4, a6] = a;
    let m = |x: &BaseFunction, y: &BaseFunction| kf.mul(x, y);
    let s = |x: &BaseFunction, y: &BaseFunction| kf.add(x, y);
    let b2 = s(&m(a1, a1), &m(&k(4), a2));
    let b4 = s(&m(&k(2), a4), &m(a1, a3));
    let b6 = s(&m(a3, a3), &m(&k(4), a6));
    let b8 = [
        m(&m(a1, a1), a6),
        m(&k(4), &m(a2, a6)),
        kf.neg(&m(&m(a1, a3), a4)),
        m(a2, &m(a3, a3)),
        kf.neg(&m(a4, a4)),
    ]
    .iter()
    .fold(k(0), |acc, t| s(&acc, t));
    let c4 = kf.sub(&m(&b2, &b2), &m(&k(24), &b4));
    let c6 = [
        kf.neg(&m(&b2, &m(&b2, &b2))),
        m(&k(36), &m(&b2, &b4)),
        kf.neg(&m(&k(216), &b6)),
    ]
    .iter()
    .fold(k(0), |acc, t| s(&acc, t));
    let delta = [
        kf.neg(&m(&m(&b2, &b2), &b8)),
        kf.neg(&m(&k(8), &m(&b4, &m(&b4, &b4)))),
        kf.neg(&m(&k(27), &m(&b6, &b6))),
        m(&k(9), &m(&b2, &m(&b4, &b6))),
    ]
    .iter()
    .fold(k(0), |acc, t| s(&acc, t));
    WeierstrassInvariants { c4, c6, delta }
}

/// Discriminant of `y^2 = f(x)` with `f` read as a binary form of degree
/// `2g + 2`, over `Q(t)`.
pub fn hyperelliptic_discriminant(f: &[RationalFunction], genus: u32) -> RationalFunction {
    let form_deg = 2 * genus as usize + 2;
    let mut coeffs: Vec<RationalFunction> = f.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let n = coeffs.len().saturating_sub(1);
    if n + 1 < form_deg {
        // a double root at infinity
        return RationalFunction::zero();
    }
    let deriv: Vec<RationalFunction> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| {
            Field::mul(
                c,
                &RationalFunction::constant(BigRational::from_integer(i.into())),
            )
        })
        .collect();
    let desc = |v: &[RationalFunction]| v.iter().rev().cloned().collect::<Vec<_>>();
    let res = determinant(sylvester(&desc(&coeffs), &desc(&deriv)));
    let lc = coeffs[n].clone();
    let sign = if (n * (n - 1) / 2).is_multiple_of(2) {
        1
    } else {
        -1
    };
    let mut disc = Field::div(&res, &lc);
    if sign < 0 {
        disc = Field::neg(&disc);
    }
    if n + 1 == form_deg {
        disc = Field::mul(&disc, &Field::mul(&lc, &lc));
    }
    disc
}

/// The discriminant of the generic fiber as a function on the base.
pub fn fiber_discriminant(spec: &SurfaceSpec) -> BaseFunction {
    let kf = spec.function_field();
    match &spec.fiber_model {
        FiberModel::Weierstrass(a) => weierstrass_invariants(&kf, a).delta,
        FiberModel::Hyperelliptic { f, genus } => {
            let rf: Vec<RationalFunction> = f.iter().map(|c| c.a.clone()).collect();
            BaseFunction::from_rational(hyperelliptic_discriminant(&rf, *genus))
        }
    }
}

/// The discriminant together with the places where fibers degenerate.
#[derive(Clone, Debug)]
pub struct DiscriminantLocus {
    pub delta: BaseFunction,
    /// `Q(t)` for the projective line; the norm to `Q(x)` over an elliptic base.
    pub delta_on_line: RationalFunction,
    /// Irreducible factors of the numerator and denominator of
    /// `delta_on_line` (places of `Q(t)`, or their images on the `x`-line).
    pub finite_places: Vec<Factor>,
    /// Whether the fiber over infinity (or the origin) is singular.
    pub at_infinity: bool,
}

pub fn discriminant_locus(spec: &SurfaceSpec) -> Result<DiscriminantLocus> {
    let kf = spec.function_field();
    let delta = fiber_discriminant(spec);
    if delta.is_zero() {
        return Err(Error::InvalidSpec(
            "fiber discriminant vanishes identically".into(),
        ));
    }
    let delta_on_line = kf.norm(&delta);
    let finite_places = places_of(&[delta_on_line.numer().clone(), delta_on_line.denom().clone()]);
    let at_infinity = match &spec.base {
        BaseCurve::ProjectiveLine => {
            let (n, _) = spec.infinity_chart().expect("projective base");
            let weight = match &spec.fiber_model {
                FiberModel::Weierstrass(_) => 12 * n,
                FiberModel::Hyperelliptic { genus, .. } => {
                    // y -> y s^{-N} scales f by s^{2N}; the discriminant of a
                    // degree-D form has degree 2D - 2 in the coefficients.
                    2 * n * (2 * (2 * *genus as i64 + 2) - 2)
                }
            };
            delta
                .a
                .infinity_chart(weight)
                .valuation_at(&crate::arith::RationalPolynomial::x())
                != Some(0)
        }
        BaseCurve::Elliptic(_) => FunctionField::pole_order_at_origin(&delta) != Some(0),
    };
    Ok(DiscriminantLocus {
        delta,
        delta_on_line,
        finite_places,
        at_infinity,
    })
}
