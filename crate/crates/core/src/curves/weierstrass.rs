//! Plane Weierstrass cubics over prime fields: point counts and traces.

use crate::arith::{CharacterTable, PrimeField};
use crate::error::{Error, Result};

/// `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` over `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EllipticFiberModP {
    pub field: PrimeField,
    pub a1: u64,
    pub a2: u64,
    pub a3: u64,
    pub a4: u64,
    pub a6: u64,
}

/// `b2, b4, b6, b8` of a Weierstrass model.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BInvariants {
    pub b2: u64,
    pub b4: u64,
    pub b6: u64,
    pub b8: u64,
}

impl EllipticFiberModP {
    /// Coefficients are reduced into `[0, p)`.
    pub fn new(field: PrimeField, a: [u64; 5]) -> Self {
        let p = field.modulus();
        Self {
            field,
            a1: a[0] % p,
            a2: a[1] % p,
            a3: a[2] % p,
            a4: a[3] % p,
            a6: a[4] % p,
        }
    }

    pub fn from_i64(field: PrimeField, a: [i64; 5]) -> Self {
        Self::new(field, a.map(|c| field.from_i64(c)))
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn b_invariants(&self) -> BInvariants {
        let f = &self.field;
        let b2 = f.add(f.mul(self.a1, self.a1), f.mul(4, self.a2));
        let b4 = f.add(f.mul(2, self.a4), f.mul(self.a1, self.a3));
        let b6 = f.add(f.mul(self.a3, self.a3), f.mul(4, self.a6));
        // b8 = a1^2 a6 + 4 a2 a6 - a1 a3 a4 + a2 a3^2 - a4^2
        let b8 = [
            f.mul(f.mul(self.a1, self.a1), self.a6),
            f.mul(4, f.mul(self.a2, self.a6)),
            f.neg(f.mul(f.mul(self.a1, self.a3), self.a4)),
            f.mul(self.a2, f.mul(self.a3, self.a3)),
            f.neg(f.mul(self.a4, self.a4)),
        ]
        .into_iter()
        .fold(0, |acc, t| f.add(acc, t));
        BInvariants { b2, b4, b6, b8 }
    }

    /// `-b2^2 b8 - 8 b4^3 - 27 b6^2 + 9 b2 b4 b6`
    pub fn discriminant(&self) -> u64 {
        let f = &self.field;
        let BInvariants { b2, b4, b6, b8 } = self.b_invariants();
        let t1 = f.neg(f.mul(f.mul(b2, b2), b8));
        let t2 = f.neg(f.mul(8, f.mul(b4, f.mul(b4, b4))));
        let t3 = f.neg(f.mul(27, f.mul(b6, b6)));
        let t4 = f.mul(9, f.mul(b2, f.mul(b4, b6)));
        f.add(f.add(t1, t2), f.add(t3, t4))
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant() == 0
    }

    /// Whether `(x, y)` satisfies the affine equation.
    pub fn contains(&self, x: u64, y: u64) -> bool {
        let f = &self.field;
        let lhs = f.add(f.mul(y, y), f.mul(y, f.add(f.mul(self.a1, x), self.a3)));
        let rhs = f.add(
            f.mul(f.add(f.mul(f.add(x, self.a2), x), self.a4), x),
            self.a6,
        );
        lhs == rhs
    }

    /// `a = p + 1 - #E` through the character sum over the completed square,
    /// reusing a prebuilt table. Requires odd `p` matching the table.
    pub fn trace_with(&self, table: &CharacterTable) -> i64 {
        debug_assert_eq!(table.modulus(), self.p());
        let BInvariants { b2, b4, b6, .. } = self.b_invariants();
        -cubic_character_sum(self.p(), b2, b4, b6, table.as_slice())
    }
}

const LANES: usize = 4;

/// `sum_x chi(4x^3 + b2 x^2 + 2 b4 x + b6)` by third-order finite
/// differences; one table lookup and three modular additions per `x`. The
/// range is split into independent lanes so the dependency chains overlap.
pub fn cubic_character_sum(p: u64, b2: u64, b4: u64, b6: u64, chi: &[i8]) -> i64 {
    let p32 = p as u32;
    let (b2, b4, b6) = (b2 % p, b4 % p, b6 % p);
    let g = |x: u64| {
        let x = x % p;
        (((4 * x % p + b2) % p * x % p + 2 * b4) % p * x % p + b6) % p
    };
    // branchless: the comparison is unpredictable
    let add = |a: u32, b: u32| {
        let t = (a + b).wrapping_sub(p32);
        t.wrapping_add(p32 & ((t as i32) >> 31) as u32)
    };
    let seg = p / LANES as u64;
    let mut v = [0u32; LANES];
    let mut d1 = [0u32; LANES];
    let mut d2 = [0u32; LANES];
    for k in 0..LANES {
        let x0 = k as u64 * seg;
        let (g0, g1, g2) = (g(x0), g(x0 + 1), g(x0 + 2));
        v[k] = g0 as u32;
        d1[k] = ((g1 + p - g0) % p) as u32;
        d2[k] = ((g2 + 2 * p - 2 * g1 + g0) % p) as u32;
    }
    let d3 = (24 % p) as u32;
    let mut acc: i64 = 0;
    let mut block = [0i32; LANES];
    for i in 0..seg {
        for k in 0..LANES {
            block[k] += i32::from(chi[v[k] as usize]);
            v[k] = add(v[k], d1[k]);
            d1[k] = add(d1[k], d2[k]);
            d2[k] = add(d2[k], d3);
        }
        if i & 0xFFFF == 0xFFFF {
            acc += block.iter().map(|&b| i64::from(b)).sum::<i64>();
            block = [0; LANES];
        }
    }
    acc += block.iter().map(|&b| i64::from(b)).sum::<i64>();
    // the last lane runs on through the remainder
    let k = LANES - 1;
    for _ in 0..(p - LANES as u64 * seg) {
        acc += i64::from(chi[v[k] as usize]);
        v[k] = add(v[k], d1[k]);
        d1[k] = add(d1[k], d2[k]);
        d2[k] = add(d2[k], d3);
    }
    acc
}

/// Exhaustive count of projective points, for any prime `p`.
pub fn count_points_naive(e: &EllipticFiberModP) -> u64 {
    let p = e.p();
    let mut n = 1;
    for x in 0..p {
        for y in 0..p {
            if e.contains(x, y) {
                n += 1;
            }
        }
    }
    n
}

/// Number of projective points including the point at infinity. `O(p)` via
/// the quadratic character; `p >= 5`.
pub fn count_points_elliptic(e: &EllipticFiberModP) -> Result<u64> {
    let p = e.p();
    if p < 5 {
        return Err(Error::PrimeTooSmall { p, min: 5 });
    }
    let table = CharacterTable::new(p)?;
    Ok((p as i64 + 1 - e.trace_with(&table)) as u64)
}

/// `p + 1 - #E` on the given model; the naive count serves `p < 5`.
pub fn elliptic_trace(e: &EllipticFiberModP) -> i64 {
    let p = e.p();
    let n = if p < 5 {
        count_points_naive(e)
    } else {
        count_points_elliptic(e).expect("p >= 5")
    };
    p as i64 + 1 - n as i64
}
