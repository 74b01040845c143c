//! Base curves over `Q` and their points over `F_p`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::group::{all_points, Point};
use super::weierstrass::EllipticFiberModP;
use crate::arith::field::is_zero_mod;
use crate::arith::PrimeField;
use crate::error::{Error, Result};

/// An elliptic curve over `Q` in long Weierstrass form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurveQ {
    pub a1: BigRational,
    pub a2: BigRational,
    pub a3: BigRational,
    pub a4: BigRational,
    pub a6: BigRational,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl EllipticCurveQ {
    /// Rejects singular models.
    pub fn new(a: [BigRational; 5]) -> Result<Self> {
        let [a1, a2, a3, a4, a6] = a;
        let e = Self { a1, a2, a3, a4, a6 };
        if e.discriminant().is_zero() {
            return Err(Error::InvalidSpec(
                "elliptic curve has zero discriminant".into(),
            ));
        }
        Ok(e)
    }

    pub fn from_i64(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(q))
    }

    pub fn coefficients(&self) -> [&BigRational; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    pub fn b_invariants(&self) -> [BigRational; 4] {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let b2 = a1 * a1 + q(4) * a2;
        let b4 = q(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + q(4) * a6;
        let b8 = a1 * a1 * a6 + q(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigRational {
        let [b2, b4, b6, b8] = self.b_invariants();
        -(&b2 * &b2 * &b8) - q(8) * &b4 * &b4 * &b4 - q(27) * &b6 * &b6 + q(9) * &b2 * &b4 * &b6
    }

    /// `None` when the model does not reduce to a smooth curve mod `p`.
    pub fn reduce(&self, p: u64) -> Option<EllipticFiberModP> {
        let field = PrimeField::new(p).ok()?;
        let mut a = [0u64; 5];
        for (slot, c) in a.iter_mut().zip(self.coefficients()) {
            *slot = field.from_rational(c)?;
        }
        let e = EllipticFiberModP::new(field, a);
        (!e.is_singular()).then_some(e)
    }

    pub fn has_good_reduction(&self, p: u64) -> bool {
        self.reduce(p).is_some()
    }

    /// `a_p = p + 1 - #E(F_p)`; `p` must be a prime of good reduction.
    pub fn trace(&self, p: u64) -> Result<i64> {
        let e = self.reduce(p).ok_or_else(|| Error::BadPrime {
            p,
            reason: "curve has bad reduction".into(),
        })?;
        Ok(super::weierstrass::elliptic_trace(&e))
    }

    /// Primes where the model is not integral or the discriminant vanishes:
    /// divisors of the coefficient denominators and of the discriminant
    /// numerator, among the given candidates.
    pub fn is_bad_prime(&self, p: u64) -> bool {
        self.coefficients()
            .iter()
            .any(|c| is_zero_mod(c.denom(), p))
            || is_zero_mod(self.discriminant().numer(), p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseCurve {
    ProjectiveLine,
    Elliptic(EllipticCurveQ),
}

impl BaseCurve {
    pub fn genus(&self) -> u32 {
        match self {
            BaseCurve::ProjectiveLine => 0,
            BaseCurve::Elliptic(_) => 1,
        }
    }
}

/// An `F_p`-point of a reduced base curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePointModP {
    /// `t = c` on the projective line.
    Line(u64),
    /// An affine point `(x, y)` of an elliptic base.
    Affine(u64, u64),
    /// `t = infinity`, or the origin of an elliptic base.
    Infinity,
}

impl From<Point> for BasePointModP {
    fn from(p: Point) -> Self {
        match p {
            Point::Affine(x, y) => BasePointModP::Affine(x, y),
            Point::Infinity => BasePointModP::Infinity,
        }
    }
}

/// Every `F_p`-point of the reduced base, infinity last.
pub fn enumerate_base_points(base: &BaseCurve, p: u64) -> Result<Vec<BasePointModP>> {
    if p < 5 {
        return Err(Error::PrimeTooSmall { p, min: 5 });
    }
    PrimeField::new(p)?;
    match base {
        BaseCurve::ProjectiveLine => {
            let mut v: Vec<_> = (0..p).map(BasePointModP::Line).collect();
            v.push(BasePointModP::Infinity);
            Ok(v)
        }
        BaseCurve::Elliptic(e) => {
            if e.is_bad_prime(p) {
                return Err(Error::BadPrime {
                    p,
                    reason: "base curve has bad reduction".into(),
                });
            }
            let red = e.reduce(p).expect("good reduction checked");
            Ok(all_points(&red).into_iter().map(Into::into).collect())
        }
    }
}

impl Default for EllipticCurveQ {
    /// `y^2 = x^3 - x`
    fn default() -> Self {
        Self {
            a1: BigRational::zero(),
            a2: BigRational::zero(),
            a3: BigRational::zero(),
            a4: -BigRational::one(),
            a6: BigRational::zero(),
        }
    }
}
