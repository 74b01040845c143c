//! Polynomials and truncated power series over a prime field.

use super::field::PrimeField;
use super::poly::RationalPolynomial;
use super::ratfunc::RationalFunction;

/// Reduce the coefficients of `f` modulo `p` (ascending order, untrimmed).
/// `None` when `p` divides a coefficient denominator.
pub fn reduce_poly(f: &RationalPolynomial, field: &PrimeField) -> Option<Vec<u64>> {
    f.coeffs().iter().map(|c| field.from_rational(c)).collect()
}

#[inline]
pub fn eval_mod(c: &[u64], x: u64, field: &PrimeField) -> u64 {
    c.iter()
        .rev()
        .fold(0, |acc, &a| field.add(field.mul(acc, x), a))
}

/// A rational function reduced mod p: numerator and denominator residues.
#[derive(Clone, Debug)]
pub struct RatFnModP {
    pub num: Vec<u64>,
    pub den: Vec<u64>,
}

impl RatFnModP {
    /// `None` when `p` divides a coefficient denominator or kills the
    /// leading coefficient of the denominator.
    pub fn reduce(r: &RationalFunction, field: &PrimeField) -> Option<Self> {
        let num = reduce_poly(r.numer(), field)?;
        let den = reduce_poly(r.denom(), field)?;
        if den.last().copied().unwrap_or(0) == 0 {
            return None;
        }
        Some(Self { num, den })
    }

    /// Value at `x`, or `None` at a pole (denominator vanishing mod p).
    #[inline]
    pub fn eval(&self, x: u64, field: &PrimeField) -> Option<u64> {
        let d = eval_mod(&self.den, x, field);
        if d == 0 {
            return None;
        }
        field.div(eval_mod(&self.num, x, field), d)
    }
}

/// A truncated power series `sum c_i u^i` with `prec` known terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub c: Vec<u64>,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Self { c: vec![0; prec] }
    }

    pub fn constant(a: u64, prec: usize) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.c[0] = a;
        }
        s
    }

    /// `a + b u`
    pub fn linear(a: u64, b: u64, prec: usize) -> Self {
        let mut s = Self::constant(a, prec);
        if prec > 1 {
            s.c[1] = b;
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    /// Index of the first nonzero coefficient; `None` if zero to precision.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|&a| a != 0)
    }

    pub fn add(&self, o: &Self, f: &PrimeField) -> Self {
        Self {
            c: self
                .c
                .iter()
                .zip(&o.c)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, o: &Self, f: &PrimeField) -> Self {
        let n = self.prec().min(o.prec());
        let mut c = vec![0u64; n];
        for (i, &a) in self.c.iter().enumerate().take(n) {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate().take(n - i) {
                c[i + j] = f.add(c[i + j], f.mul(a, b));
            }
        }
        Self { c }
    }

    pub fn scale(&self, k: u64, f: &PrimeField) -> Self {
        Self {
            c: self.c.iter().map(|&a| f.mul(a, k)).collect(),
        }
    }

    /// Inverse of a unit series.
    pub fn inv(&self, f: &PrimeField) -> Option<Self> {
        let a0inv = f.inv(*self.c.first()?)?;
        let n = self.prec();
        let mut r = vec![0u64; n];
        r[0] = a0inv;
        for k in 1..n {
            let mut s = 0;
            for i in 1..=k {
                s = f.add(s, f.mul(self.c[i], r[k - i]));
            }
            r[k] = f.neg(f.mul(s, a0inv));
        }
        Some(Self { c: r })
    }

    /// Horner evaluation of a polynomial at this series.
    pub fn compose(poly: &[u64], s: &Self, f: &PrimeField) -> Self {
        let n = s.prec();
        poly.iter().rev().fold(Self::zero(n), |acc, &a| {
            acc.mul(s, f).add(&Self::constant(a, n), f)
        })
    }
}

/// A Laurent series `u^val * unit-or-zero series`, used for valuations of
/// rational functions at a point.
#[derive(Clone, Debug)]
pub struct Laurent {
    pub val: i64,
    pub series: Series,
}

impl Laurent {
    /// `num(s) / den(s)`, where `s` is the local expansion of the base
    /// coordinate. Returns `None` when the denominator is zero to precision.
    pub fn quotient(num: &Series, den: &Series, f: &PrimeField) -> Option<Self> {
        let vd = den.valuation()?;
        let prec = num.prec();
        let Some(vn) = num.valuation() else {
            return Some(Self {
                val: i64::MAX / 4,
                series: Series::zero(prec),
            });
        };
        let shift = |s: &Series, v: usize| Series {
            c: s.c[v..]
                .iter()
                .copied()
                .chain(std::iter::repeat_n(0, v))
                .collect(),
        };
        let nu = shift(num, vn);
        let du = shift(den, vd).inv(f)?;
        // Only `prec - max(vn, vd)` terms of the result are meaningful.
        let keep = prec.saturating_sub(vn.max(vd));
        let mut q = nu.mul(&du, f);
        q.c.truncate(keep.max(1));
        Some(Self {
            val: vn as i64 - vd as i64,
            series: q,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.series.valuation().is_none()
    }

    /// Coefficient of `u^k` in `u^shift * self`.
    pub fn coeff_after_shift(&self, shift: i64, k: i64) -> u64 {
        let idx = k - shift - self.val;
        if idx < 0 {
            return 0;
        }
        self.series.c.get(idx as usize).copied().unwrap_or(0)
    }
}
