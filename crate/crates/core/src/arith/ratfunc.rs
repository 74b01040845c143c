//! Rational functions in one variable over `Q`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::linalg;
use super::poly::RationalPolynomial;
use crate::error::{Error, Result};

/// `num / den` in lowest terms with `den` monic. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: RationalPolynomial,
    den: RationalPolynomial,
}

impl RationalFunction {
    pub fn new(num: RationalPolynomial, den: RationalPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: RationalPolynomial, den: RationalPolynomial) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides"),
                den.exact_div(&g).expect("gcd divides"),
            )
        };
        let lc = d.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        Self { num: n, den: d }
    }

    /// Re-run normalization; a no-op on values built through this API.
    pub fn normalize(&self) -> Self {
        Self::normalized(self.num.clone(), self.den.clone())
    }

    pub fn from_poly(p: RationalPolynomial) -> Self {
        Self {
            num: p,
            den: RationalPolynomial::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_poly(RationalPolynomial::constant(c))
    }

    pub fn var() -> Self {
        Self::from_poly(RationalPolynomial::x())
    }

    pub fn numer(&self) -> &RationalPolynomial {
        &self.num
    }

    pub fn denom(&self) -> &RationalPolynomial {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// `deg num - deg den`; the pole order at infinity. `None` for zero.
    pub fn degree_difference(&self) -> Option<i64> {
        let n = self.num.degree()? as i64;
        Some(n - self.den.degree().unwrap_or(0) as i64)
    }

    /// Valuation at the finite place given by a monic irreducible (or at
    /// least squarefree, with all roots sharing the multiplicity) polynomial.
    pub fn valuation_at(&self, place: &RationalPolynomial) -> Option<i64> {
        if self.num.is_zero() {
            return None;
        }
        Some(self.num.multiplicity(place) as i64 - self.den.multiplicity(place) as i64)
    }

    /// Valuation at infinity: `deg den - deg num`.
    pub fn valuation_at_infinity(&self) -> Option<i64> {
        self.degree_difference().map(|d| -d)
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// `s^k * f(1/s)` as a rational function of `s`.
    pub fn infinity_chart(&self, k: i64) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        // f(1/s) = s^{dd - dn} * rev(num) / rev(den)
        let shift = k + dd - dn;
        let mut num = self.num.reversed();
        let mut den = self.den.reversed();
        if shift >= 0 {
            num = &num * &RationalPolynomial::monomial(BigRational::one(), shift as usize);
        } else {
            den = &den * &RationalPolynomial::monomial(BigRational::one(), (-shift) as usize);
        }
        Self::normalized(num, den)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = <Self as linalg::Field>::one();
        for _ in 0..e {
            acc = linalg::Field::mul(&acc, self);
        }
        acc
    }

    pub fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_constant() {
            self.num.fmt_var(var)
        } else {
            format!("({}) / ({})", self.num.fmt_var(var), self.den.fmt_var(var))
        }
    }
}

impl linalg::Field for RationalFunction {
    fn zero() -> Self {
        Self {
            num: RationalPolynomial::zero(),
            den: RationalPolynomial::one(),
        }
    }
    fn one() -> Self {
        Self::from_poly(RationalPolynomial::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::normalized(&self.num + &o.num, self.den.clone());
        }
        Self::normalized(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }
    fn sub(&self, o: &Self) -> Self {
        linalg::Field::add(self, &linalg::Field::neg(o))
    }
    fn mul(&self, o: &Self) -> Self {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }
    fn div(&self, o: &Self) -> Self {
        Self::normalized(&self.num * &o.den, &self.den * &o.num)
    }
    fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl RationalFunction {
    pub fn zero() -> Self {
        <Self as linalg::Field>::zero()
    }
    pub fn one() -> Self {
        <Self as linalg::Field>::one()
    }
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::poly::rat;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> RationalPolynomial {
        RationalPolynomial::from_i64s(c)
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (t^2 - 1) / (2t - 2) = (t + 1) / 2 -> den monic: (t/2 + 1/2) / 1
        let r = RationalFunction::new(p(&[-1, 0, 1]), p(&[-2, 2])).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.numer().coeff(0), BigRational::new(1.into(), 2.into()));
        assert!(RationalFunction::new(p(&[1]), RationalPolynomial::zero()).is_err());
    }

    #[test]
    fn valuations() {
        let r =
            RationalFunction::new(&p(&[0, 1]).pow(3) * &p(&[1, 1]), p(&[-1, 1]).pow(2)).unwrap();
        assert_eq!(r.valuation_at(&p(&[0, 1])), Some(3));
        assert_eq!(r.valuation_at(&p(&[-1, 1])), Some(-2));
        assert_eq!(r.valuation_at(&p(&[2, 1])), Some(0));
        assert_eq!(r.valuation_at_infinity(), Some(-2));
    }

    #[test]
    fn infinity_chart_of_polynomial() {
        // t + 1 with weight 2 -> s^2 (1/s + 1) = s + s^2
        let r = RationalFunction::from_poly(p(&[1, 1]));
        assert_eq!(
            r.infinity_chart(2),
            RationalFunction::from_poly(p(&[0, 1, 1]))
        );
        // 1/t with weight 0 -> s
        let inv = RationalFunction::var().inv().unwrap();
        assert_eq!(inv.infinity_chart(0), RationalFunction::var());
        assert_eq!(
            RationalFunction::from_poly(p(&[0, 0, 3])).eval(&rat(2)),
            Some(rat(12))
        );
    }

    proptest! {
        #[test]
        fn normalization_is_idempotent(
            n in proptest::collection::vec(-6i64..6, 0..5),
            d in proptest::collection::vec(-6i64..6, 1..5),
        ) {
            let den = p(&d);
            prop_assume!(!den.is_zero());
            let r = RationalFunction::new(p(&n), den).unwrap();
            prop_assert_eq!(r.normalize(), r.clone());
            prop_assert_eq!(r.normalize().normalize(), r.normalize());
        }
    }
}
