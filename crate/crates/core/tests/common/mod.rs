//! Slow, independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use jrl::fibration::SurfaceSpec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn surface_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("surfaces")
        .join(format!("{name}.toml"))
}

pub fn surface(name: &str) -> SurfaceSpec {
    SurfaceSpec::from_path(&surface_path(name)).unwrap()
}

/// `p + 1 - #E(F_p)` by enumerating every `(x, y)`.
pub fn brute_force_trace(a: [i64; 5], p: u64) -> i64 {
    let p = p as i64;
    let r = |v: i64| v.rem_euclid(p);
    let [a1, a2, a3, a4, a6] = a.map(r);
    let mut count = 1i64;
    for x in 0..p {
        let rhs = r(r(r(r(x * x) * x) + r(a2 * r(x * x))) + r(a4 * x) + a6);
        for y in 0..p {
            if r(r(y * y) + r(a1 * r(x * y)) + r(a3 * y)) == rhs {
                count += 1;
            }
        }
    }
    p + 1 - count
}

const PREC: usize = 48;

/// Truncated Laurent series `u^val (c_0 + c_1 u + ...)` with `c_0 != 0`, or zero.
#[derive(Clone, Debug)]
pub struct Series {
    val: i64,
    c: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Series {
    fn normalized(mut val: i64, mut c: Vec<BigRational>) -> Self {
        let lead = c.iter().position(|x| !x.is_zero());
        match lead {
            None => Series {
                val: 0,
                c: Vec::new(),
            },
            Some(k) => {
                c.drain(..k);
                c.truncate(PREC);
                val += k as i64;
                Series { val, c }
            }
        }
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.c.is_empty()).then_some(self.val)
    }

    /// Expansion of `sum coeffs[k] t^k` at `t = c + u`.
    pub fn at_finite(coeffs: &[i64], c: i64) -> Self {
        let mut out = vec![BigRational::zero(); coeffs.len().max(1)];
        // (c + u)^k expanded by the binomial theorem
        for (k, &a) in coeffs.iter().enumerate() {
            let mut binom = BigInt::one();
            for j in 0..=k {
                let term = BigInt::from(a) * &binom * BigInt::from(c).pow((k - j) as u32);
                out[j] += BigRational::from_integer(term);
                binom = binom * BigInt::from((k - j) as i64) / BigInt::from(j as i64 + 1);
            }
        }
        Self::normalized(0, out)
    }

    /// Expansion of `sum coeffs[k] t^k` at `t = 1/u`.
    pub fn at_infinity(coeffs: &[i64]) -> Self {
        let deg = coeffs.len() as i64 - 1;
        let c = coeffs.iter().rev().map(|&a| q(a)).collect();
        Self::normalized(-deg, c)
    }

    fn add(&self, o: &Series) -> Series {
        if self.c.is_empty() {
            return o.clone();
        }
        if o.c.is_empty() {
            return self.clone();
        }
        let val = self.val.min(o.val);
        let mut c = vec![BigRational::zero(); PREC];
        for (s, shift) in [(self, self.val - val), (o, o.val - val)] {
            for (i, x) in s.c.iter().enumerate() {
                if let Some(slot) = c.get_mut(i + shift as usize) {
                    *slot += x;
                }
            }
        }
        Self::normalized(val, c)
    }

    fn scale(&self, k: i64) -> Series {
        Self::normalized(self.val, self.c.iter().map(|x| x * q(k)).collect())
    }

    fn mul(&self, o: &Series) -> Series {
        if self.c.is_empty() || o.c.is_empty() {
            return Series {
                val: 0,
                c: Vec::new(),
            };
        }
        let mut c = vec![BigRational::zero(); PREC];
        for (i, x) in self.c.iter().enumerate() {
            for (j, y) in o.c.iter().enumerate().take(PREC - i) {
                c[i + j] += x * y;
            }
        }
        Self::normalized(self.val + o.val, c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleFiber {
    pub kodaira: String,
    pub epsilon: u32,
    pub v_delta: i64,
}

/// Minimal model by exhaustive search over `a_i -> u^{i k} a_i`, then the
/// Kodaira type read off `v(j)` and `v(Delta)`.
pub fn oracle_fiber(a: &[Series; 5]) -> OracleFiber {
    let [a1, a2, a3, a4, a6] = a;
    let b2 = a1.mul(a1).add(&a2.scale(4));
    let b4 = a1.mul(a3).add(&a4.scale(2));
    let b6 = a3.mul(a3).add(&a6.scale(4));
    let b8 = a1
        .mul(a1)
        .mul(a6)
        .add(&a2.mul(a6).scale(4))
        .add(&a1.mul(a3).mul(a4).scale(-1))
        .add(&a2.mul(a3).mul(a3))
        .add(&a4.mul(a4).scale(-1));
    let c4 = b2.mul(&b2).add(&b4.scale(-24));
    let c6 = b2
        .mul(&b2)
        .mul(&b2)
        .scale(-1)
        .add(&b2.mul(&b4).scale(36))
        .add(&b6.scale(-216));
    let delta = b2
        .mul(&b2)
        .mul(&b8)
        .scale(-1)
        .add(&b4.mul(&b4).mul(&b4).scale(-8))
        .add(&b6.mul(&b6).scale(-27))
        .add(&b2.mul(&b4).mul(&b6).scale(9));
    let vd = delta.valuation().expect("singular generic fiber");
    let weights = [1, 2, 3, 4, 6];
    let k = (-40i64..=40)
        .find(|&k| {
            a.iter()
                .zip(weights)
                .all(|(s, w)| s.valuation().is_none_or(|v| v + w * k >= 0))
        })
        .expect("no integral rescaling");
    let v_delta = vd + 12 * k;
    let v4 = c4.valuation().map(|v| v + 4 * k);
    let v6 = c6.valuation().map(|v| v + 6 * k);
    assert!(
        v_delta < 12 || v4.is_some_and(|v| v < 4) || v6.is_some_and(|v| v < 6),
        "rescaled model is not minimal"
    );
    // v(j) = 3 v(c4) - v(Delta), +infinity when c4 = 0
    let vj = v4.map(|v| 3 * v - v_delta);
    let (kodaira, epsilon) = match vj {
        _ if v_delta == 0 => ("I0".to_string(), 0),
        Some(vj) if vj < 0 => {
            let m = -vj;
            if v_delta == m {
                (format!("I{m}"), 1)
            } else if v_delta == m + 6 {
                (format!("I{m}*"), 2)
            } else {
                panic!("potentially multiplicative fiber with v(Delta) = {v_delta}, v(j) = {vj}")
            }
        }
        _ => {
            let name = match v_delta {
                2 => "II",
                3 => "III",
                4 => "IV",
                6 => "I0*",
                8 => "IV*",
                9 => "III*",
                10 => "II*",
                v => panic!("potentially good fiber with v(Delta) = {v}"),
            };
            (name.to_string(), 2)
        }
    };
    OracleFiber {
        kodaira,
        epsilon,
        v_delta,
    }
}

/// Oracle fiber at `t = c` (or infinity when `c` is `None`) for
/// polynomial a-invariants given as ascending coefficient lists.
pub fn oracle_at(a: &[Vec<i64>; 5], c: Option<i64>) -> OracleFiber {
    let series = a.clone().map(|coeffs| match c {
        Some(c) => Series::at_finite(&coeffs, c),
        None => Series::at_infinity(&coeffs),
    });
    oracle_fiber(&series)
}

/// `|a| <= 2 sqrt(p) + slack`, decided in integers.
pub fn within_weil(a: i64, p: u64, slack: i64) -> bool {
    let excess = a.abs() - slack;
    excess <= 0 || (excess as u128).pow(2) <= 4 * u128::from(p)
}
