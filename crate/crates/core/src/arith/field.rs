//! Prime fields and the quadratic character.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::prime::{is_prime, mul_mod, pow_mod};
use crate::error::{Error, Result};

/// The field of integers modulo a prime `p`. Elements are plain `u64`
/// representatives in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.p)
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(s0.rem_euclid(self.p as i128) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn from_i64(&self, a: i64) -> u64 {
        (a as i128).rem_euclid(self.p as i128) as u64
    }

    pub fn from_bigint(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        a.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    /// Reduction of a rational number; `None` when `p` divides the denominator.
    pub fn from_rational(&self, a: &BigRational) -> Option<u64> {
        let den = self.from_bigint(a.denom());
        let num = self.from_bigint(a.numer());
        self.div(num, den)
    }

    /// Quadratic character of `a` (Euler's criterion). Requires `p` odd.
    pub fn chi(&self, a: u64) -> i8 {
        let a = a % self.p;
        if a == 0 {
            return 0;
        }
        if self.pow(a, (self.p - 1) / 2) == 1 {
            1
        } else {
            -1
        }
    }
}

/// Legendre symbol `(a/p)` for an odd prime `p`.
pub fn legendre_symbol(a: &BigInt, p: u64) -> Result<i8> {
    if p.is_multiple_of(2) || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let field = PrimeField { p };
    let r = if a.is_negative() {
        field.from_bigint(a)
    } else {
        (a % BigInt::from(p)).to_u64().unwrap_or(0)
    };
    Ok(field.chi(r))
}

/// Dense lookup table of the quadratic character, built once per prime and
/// reused across all fibers.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    p: u64,
    chi: Vec<i8>,
}

impl CharacterTable {
    pub fn new(p: u64) -> Result<Self> {
        if p.is_multiple_of(2) || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for y in 1..=(p / 2) {
            chi[mul_mod(y, y, p) as usize] = 1;
        }
        Ok(Self { p, chi })
    }

    #[inline]
    pub fn get(&self, a: u64) -> i8 {
        self.chi[a as usize]
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.chi
    }
}

/// Square roots mod p by table: `roots[a]` is some `y` with `y^2 = a`, when one exists.
pub fn sqrt_table(p: u64) -> Vec<Option<u64>> {
    let mut roots = vec![None; p as usize];
    for y in 0..p {
        let s = mul_mod(y, y, p) as usize;
        if roots[s].is_none() {
            roots[s] = Some(y);
        }
    }
    roots
}

pub(crate) fn is_zero_mod(a: &BigInt, p: u64) -> bool {
    (a % BigInt::from(p)).is_zero()
}
