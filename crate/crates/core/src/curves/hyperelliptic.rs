//! Hyperelliptic curves `y^2 = f(x)` over prime fields.

use crate::arith::modp::eval_mod;
use crate::arith::{CharacterTable, PrimeField};
use crate::error::{Error, Result};

/// `y^2 = f(x)` with `f` given by ascending coefficients, viewed in weighted
/// projective space so that the points at infinity number `1 + chi(c_{2g+2})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperellipticFiberModP {
    pub field: PrimeField,
    pub f: Vec<u64>,
    pub genus: usize,
}

impl HyperellipticFiberModP {
    pub fn new(field: PrimeField, f: Vec<u64>, genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidSpec(format!(
                "hyperelliptic genus must be at least 2 (got {genus})"
            )));
        }
        if f.len() > 2 * genus + 3 {
            return Err(Error::InvalidSpec(format!(
                "degree of f exceeds 2g + 2 = {}",
                2 * genus + 2
            )));
        }
        let p = field.modulus();
        Ok(Self {
            field,
            f: f.into_iter().map(|c| c % p).collect(),
            genus,
        })
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    fn top(&self) -> u64 {
        self.f.get(2 * self.genus + 2).copied().unwrap_or(0)
    }

    /// Smooth iff `f` is squarefree of degree `2g+1` or `2g+2`.
    pub fn is_singular(&self) -> bool {
        let f = trim(self.f.clone());
        let d = f.len().saturating_sub(1);
        if f.is_empty() || d < 2 * self.genus + 1 {
            return true;
        }
        let df = derivative(&f, &self.field);
        gcd_mod(f, df, &self.field).len() > 1
    }

    pub fn count_points_with(&self, table: &CharacterTable) -> u64 {
        let p = self.p();
        let mut n: i64 = 0;
        for x in 0..p {
            n += 1 + table.get(eval_mod(&self.f, x, &self.field)) as i64;
        }
        n += 1 + table.get(self.top()) as i64;
        n as u64
    }

    pub fn count_points(&self) -> Result<u64> {
        Ok(self.count_points_with(&CharacterTable::new(self.p())?))
    }

    pub fn trace_with(&self, table: &CharacterTable) -> i64 {
        self.p() as i64 + 1 - self.count_points_with(table) as i64
    }
}

fn trim(mut f: Vec<u64>) -> Vec<u64> {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn derivative(f: &[u64], field: &PrimeField) -> Vec<u64> {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| field.mul(c, i as u64 % field.modulus()))
            .collect(),
    )
}

fn rem_mod(mut a: Vec<u64>, b: &[u64], field: &PrimeField) -> Vec<u64> {
    let lb_inv = field
        .inv(*b.last().expect("nonzero divisor"))
        .expect("unit");
    while a.len() >= b.len() {
        let c = field.mul(*a.last().expect("nonempty"), lb_inv);
        let shift = a.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            a[shift + i] = field.sub(a[shift + i], field.mul(c, bi));
        }
        a = trim(a);
    }
    a
}

/// Gcd of two polynomials mod p (not normalized).
pub(crate) fn gcd_mod(a: Vec<u64>, b: Vec<u64>, field: &PrimeField) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = rem_mod(a, &b, field);
        a = b;
        b = r;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(h: &HyperellipticFiberModP) -> u64 {
        let p = h.p();
        let mut n = 0;
        for x in 0..p {
            let v = eval_mod(&h.f, x, &h.field);
            n += (0..p).filter(|&y| h.field.mul(y, y) == v).count() as u64;
        }
        let top = h.top();
        n + if top == 0 {
            1
        } else if (0..p).any(|y| h.field.mul(y, y) == top) {
            2
        } else {
            0
        }
    }

    #[test]
    fn genus_two_counts_and_weil_bound() {
        for p in [5u64, 7, 11, 13, 101] {
            let field = PrimeField::new(p).unwrap();
            for seed in 0..20u64 {
                let f: Vec<u64> = (0..6).map(|i| (seed * 31 + i * i * 7 + 1) % p).collect();
                let h = HyperellipticFiberModP::new(field, f, 2).unwrap();
                let n = h.count_points().unwrap();
                assert_eq!(n, naive(&h));
                if !h.is_singular() {
                    let a = p as i64 + 1 - n as i64;
                    assert!((a * a) as u64 <= 16 * p, "p={p} a={a}");
                }
            }
        }
    }

    #[test]
    fn detects_repeated_roots() {
        let field = PrimeField::new(7).unwrap();
        // x^2 (x^3 + 1)
        let h = HyperellipticFiberModP::new(field, vec![0, 0, 1, 0, 0, 1], 2).unwrap();
        assert!(h.is_singular());
        // x^5 - x is squarefree mod 7
        let h = HyperellipticFiberModP::new(field, vec![0, 6, 0, 0, 0, 1], 2).unwrap();
        assert!(!h.is_singular());
        assert!(HyperellipticFiberModP::new(field, vec![1, 1], 1).is_err());
    }
}
