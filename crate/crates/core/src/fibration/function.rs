//! Elements of the function field of the base curve.
//!
//! Over the projective line these are rational functions in `t`. Over an
//! elliptic base `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` every element
//! is written uniquely as `A(x) + B(x) y` with `A, B` in `Q(x)`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::expr::{self, Algebra};
use crate::arith::linalg::Field;
use crate::arith::{RationalFunction, RationalPolynomial};
use crate::curves::EllipticCurveQ;
use crate::error::{Error, Result};

/// `a + b y`; `b` is always zero over the projective line.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BaseFunction {
    pub a: RationalFunction,
    pub b: RationalFunction,
}

impl BaseFunction {
    pub fn from_rational(a: RationalFunction) -> Self {
        Self {
            a,
            b: RationalFunction::zero(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_rational(RationalFunction::constant(c))
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.b.is_zero() && self.a.is_constant()
    }
}

/// The function field `Q(C)` of a base curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionField {
    Rational,
    Elliptic(EllipticCurveQ),
}

impl FunctionField {
    pub fn variable_names(&self) -> &'static [&'static str] {
        match self {
            FunctionField::Rational => &["t"],
            FunctionField::Elliptic(_) => &["x", "y"],
        }
    }

    /// `a1 x + a3` and `x^3 + a2 x^2 + a4 x + a6`, so that `y^2 = F - L y`.
    fn l_and_f(e: &EllipticCurveQ) -> (RationalFunction, RationalFunction) {
        let l = RationalPolynomial::new(vec![e.a3.clone(), e.a1.clone()]);
        let f = RationalPolynomial::new(vec![
            e.a6.clone(),
            e.a4.clone(),
            e.a2.clone(),
            BigRational::from_integer(1.into()),
        ]);
        (
            RationalFunction::from_poly(l),
            RationalFunction::from_poly(f),
        )
    }

    pub fn x(&self) -> BaseFunction {
        BaseFunction::from_rational(RationalFunction::var())
    }

    pub fn y(&self) -> Result<BaseFunction> {
        match self {
            FunctionField::Rational => Err(Error::InvalidSpec(
                "variable y is only available over an elliptic base".into(),
            )),
            FunctionField::Elliptic(_) => Ok(BaseFunction {
                a: RationalFunction::zero(),
                b: RationalFunction::one(),
            }),
        }
    }

    pub fn add(&self, u: &BaseFunction, v: &BaseFunction) -> BaseFunction {
        BaseFunction {
            a: Field::add(&u.a, &v.a),
            b: Field::add(&u.b, &v.b),
        }
    }

    pub fn neg(&self, u: &BaseFunction) -> BaseFunction {
        BaseFunction {
            a: Field::neg(&u.a),
            b: Field::neg(&u.b),
        }
    }

    pub fn sub(&self, u: &BaseFunction, v: &BaseFunction) -> BaseFunction {
        self.add(u, &self.neg(v))
    }

    pub fn mul(&self, u: &BaseFunction, v: &BaseFunction) -> BaseFunction {
        match self {
            FunctionField::Rational => BaseFunction::from_rational(Field::mul(&u.a, &v.a)),
            FunctionField::Elliptic(e) => {
                let (l, f) = Self::l_and_f(e);
                let bd = Field::mul(&u.b, &v.b);
                let a = Field::add(&Field::mul(&u.a, &v.a), &Field::mul(&bd, &f));
                let b = Field::sub(
                    &Field::add(&Field::mul(&u.a, &v.b), &Field::mul(&u.b, &v.a)),
                    &Field::mul(&bd, &l),
                );
                BaseFunction { a, b }
            }
        }
    }

    /// `A - B L - B y`, so that `u * conj(u) = norm(u)` lies in `Q(x)`.
    pub fn conjugate(&self, u: &BaseFunction) -> BaseFunction {
        match self {
            FunctionField::Rational => u.clone(),
            FunctionField::Elliptic(e) => {
                let (l, _) = Self::l_and_f(e);
                BaseFunction {
                    a: Field::sub(&u.a, &Field::mul(&u.b, &l)),
                    b: Field::neg(&u.b),
                }
            }
        }
    }

    /// Norm down to `Q(x)` (identity over the projective line).
    pub fn norm(&self, u: &BaseFunction) -> RationalFunction {
        match self {
            FunctionField::Rational => u.a.clone(),
            FunctionField::Elliptic(_) => self.mul(u, &self.conjugate(u)).a,
        }
    }

    pub fn div(&self, u: &BaseFunction, v: &BaseFunction) -> Result<BaseFunction> {
        let n = self.norm(v);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = match self {
            FunctionField::Rational => u.clone(),
            FunctionField::Elliptic(_) => self.mul(u, &self.conjugate(v)),
        };
        Ok(BaseFunction {
            a: Field::div(&num.a, &n),
            b: Field::div(&num.b, &n),
        })
    }

    pub fn pow(&self, u: &BaseFunction, e: u32) -> BaseFunction {
        let mut acc = BaseFunction::constant(BigRational::from_integer(1.into()));
        for _ in 0..e {
            acc = self.mul(&acc, u);
        }
        acc
    }

    pub fn parse(&self, s: &str) -> Result<BaseFunction> {
        expr::parse(s)?.eval(self)
    }

    /// Order of pole at the origin of an elliptic base (negative for a
    /// zero), computed from `x` having a double and `y` a triple pole.
    /// `None` for the zero function.
    pub fn pole_order_at_origin(u: &BaseFunction) -> Option<i64> {
        let pa = u.a.degree_difference().map(|d| 2 * d);
        let pb = u.b.degree_difference().map(|d| 2 * d + 3);
        match (pa, pb) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            // even and odd orders never cancel
            (Some(a), Some(b)) => Some(a.max(b)),
        }
    }

    /// Value at the origin of an elliptic base; requires regularity there.
    pub fn value_at_origin(u: &BaseFunction) -> BigRational {
        match u.a.degree_difference() {
            Some(0) => u.a.numer().leading_coeff(),
            _ => <BigRational as num_traits::Zero>::zero(),
        }
    }
}

impl Algebra for FunctionField {
    type Elem = BaseFunction;

    fn from_int(&self, n: &BigInt) -> BaseFunction {
        BaseFunction::constant(BigRational::from_integer(n.clone()))
    }

    fn var(&self, name: &str) -> Result<BaseFunction> {
        match (self, name) {
            (FunctionField::Rational, "t") => Ok(self.x()),
            (FunctionField::Elliptic(_), "x") => Ok(self.x()),
            (FunctionField::Elliptic(_), "y") => self.y(),
            _ => Err(Error::Parse {
                input: name.to_string(),
                message: format!(
                    "unknown variable; expected one of {:?}",
                    self.variable_names()
                ),
            }),
        }
    }

    fn add(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        FunctionField::add(self, a, b)
    }

    fn sub(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        FunctionField::sub(self, a, b)
    }

    fn mul(&self, a: &BaseFunction, b: &BaseFunction) -> BaseFunction {
        FunctionField::mul(self, a, b)
    }

    fn div(&self, a: &BaseFunction, b: &BaseFunction) -> Result<BaseFunction> {
        FunctionField::div(self, a, b)
    }

    fn neg(&self, a: &BaseFunction) -> BaseFunction {
        FunctionField::neg(self, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ell() -> FunctionField {
        FunctionField::Elliptic(EllipticCurveQ::from_i64([1, 0, 1, -3, 2]).unwrap())
    }

    #[test]
    fn y_squared_reduces_to_curve_equation() {
        let k = ell();
        let y2 = k.parse("y^2").unwrap();
        let rhs = k.parse("x^3 - 3x + 2 - (x + 1) y").unwrap();
        assert_eq!(y2, rhs);
    }

    #[test]
    fn division_inverts_multiplication() {
        let k = ell();
        let u = k.parse("(x^2 + y)/(x^2 + 3)").unwrap();
        let v = k.parse("2 + x y - x^3").unwrap();
        let w = k.mul(&u, &v);
        assert_eq!(k.div(&w, &v).unwrap(), u);
        let one = k.div(&v, &v).unwrap();
        assert_eq!(one, k.parse("1").unwrap());
    }

    #[test]
    fn rational_division() {
        let k = FunctionField::Rational;
        let u = k.parse("1/t^4").unwrap();
        assert_eq!(
            u.a.valuation_at(&crate::arith::RationalPolynomial::x()),
            Some(-4)
        );
        let v = k.parse("(t+1)/(t-2)").unwrap();
        assert_eq!(k.mul(&k.div(&v, &u).unwrap(), &u), v);
    }

    #[test]
    fn pole_orders_at_origin() {
        let k = ell();
        assert_eq!(
            FunctionField::pole_order_at_origin(&k.parse("x").unwrap()),
            Some(2)
        );
        assert_eq!(
            FunctionField::pole_order_at_origin(&k.parse("y").unwrap()),
            Some(3)
        );
        let u = k.parse("(x^2 + y)/(x^2 + 3)").unwrap();
        assert_eq!(FunctionField::pole_order_at_origin(&u), Some(0));
        assert_eq!(
            FunctionField::value_at_origin(&u),
            BigRational::from_integer(1.into())
        );
        assert!(FunctionField::Rational.parse("y").is_err());
        assert!(FunctionField::Rational.parse("s").is_err());
    }
}
