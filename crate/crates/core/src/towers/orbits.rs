//! Orbits of linear groups mod `n` acting on `(Z/nZ)^m`.

use std::collections::HashSet;

use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use super::divisors::divisor_count;
use crate::error::{Error, Result};

/// Default cap on the number of candidate matrices for full enumeration.
pub const DEFAULT_BUDGET: u128 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitMethod {
    FullEnumeration,
    ContentCanonicalForm,
    BurnsideFixedPoints,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitResult {
    pub n: u64,
    pub rank: usize,
    pub count: u64,
    pub method: OrbitMethod,
}

/// An `m x m` matrix over `Z/nZ`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatMod {
    n: u32,
    m: usize,
    e: Vec<u32>,
}

impl MatMod {
    pub fn new(n: u32, m: usize, entries: Vec<u32>) -> Self {
        assert_eq!(entries.len(), m * m);
        Self {
            n,
            m,
            e: entries.into_iter().map(|x| x % n).collect(),
        }
    }

    pub fn identity(n: u32, m: usize) -> Self {
        let mut e = vec![0; m * m];
        for i in 0..m {
            e[i * m + i] = 1 % n;
        }
        Self { n, m, e }
    }

    pub fn entries(&self) -> &[u32] {
        &self.e
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (n, m) = (u64::from(self.n), self.m);
        let mut e = vec![0u32; m * m];
        for i in 0..m {
            for j in 0..m {
                let s: u64 = (0..m)
                    .map(|k| u64::from(self.e[i * m + k]) * u64::from(other.e[k * m + j]))
                    .sum();
                e[i * m + j] = (s % n) as u32;
            }
        }
        Self { n: self.n, m, e }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let (n, m) = (u64::from(self.n), self.m);
        (0..m)
            .map(|i| {
                let s: u64 = (0..m)
                    .map(|k| u64::from(self.e[i * m + k]) * u64::from(v[k]))
                    .sum();
                (s % n) as u32
            })
            .collect()
    }

    /// Determinant reduced mod `n`, by fraction-free elimination over `Z`.
    pub fn det(&self) -> u32 {
        let m = self.m;
        let mut a: Vec<i128> = self.e.iter().map(|&x| i128::from(x)).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..m {
            if a[k * m + k] == 0 {
                let Some(r) = (k + 1..m).find(|&r| a[r * m + k] != 0) else {
                    return 0;
                };
                for c in 0..m {
                    a.swap(k * m + c, r * m + c);
                }
                sign = -sign;
            }
            for i in k + 1..m {
                for j in k + 1..m {
                    a[i * m + j] =
                        (a[i * m + j] * a[k * m + k] - a[i * m + k] * a[k * m + j]) / prev;
                }
            }
            prev = a[k * m + k];
        }
        let d = sign * a[m * m - 1];
        d.rem_euclid(i128::from(self.n)) as u32
    }

    pub fn is_invertible(&self) -> bool {
        u64::from(self.det()).gcd(&u64::from(self.n)) == 1
    }

    pub fn random_invertible<R: Rng>(n: u32, m: usize, rng: &mut R) -> Self {
        loop {
            let g = Self::new(n, m, (0..m * m).map(|_| rng.gen_range(0..n)).collect());
            if g.is_invertible() {
                return g;
            }
        }
    }
}

fn encode(v: &[u32], n: u32) -> usize {
    v.iter()
        .rev()
        .fold(0usize, |acc, &x| acc * n as usize + x as usize)
}

fn decode(mut idx: usize, n: u32, m: usize) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let x = (idx % n as usize) as u32;
            idx /= n as usize;
            x
        })
        .collect()
}

fn vector_count(n: u32, m: usize) -> Result<usize> {
    (n as usize)
        .checked_pow(m as u32)
        .filter(|&c| c <= 1 << 26)
        .ok_or_else(|| Error::BudgetExceeded {
            needed: u128::from(n).pow(m as u32),
            budget: 1 << 26,
        })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Number of orbits of the group generated by `elements` on `(Z/nZ)^m`.
pub fn orbit_count_of(n: u32, m: usize, elements: &[MatMod]) -> Result<u64> {
    let total = vector_count(n, m)?;
    let mut uf = UnionFind((0..total).collect());
    for g in elements {
        for idx in 0..total {
            let w = g.apply(&decode(idx, n, m));
            uf.union(idx, encode(&w, n));
        }
    }
    Ok((0..total).filter(|&i| uf.find(i) == i).count() as u64)
}

/// Every invertible `m x m` matrix mod `n`, in lexicographic order.
pub fn full_group(n: u32, m: usize, budget: u128) -> Result<Vec<MatMod>> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig("n and m must be positive".into()));
    }
    let needed = u128::from(n)
        .checked_pow((m * m) as u32)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok((0..needed as usize)
        .map(|idx| MatMod::new(n, m, decode(idx, n, m * m).into_iter().rev().collect()))
        .filter(MatMod::is_invertible)
        .collect())
}

/// Orbit count of the full linear group by enumerating it.
pub fn orbit_count_full(n: u32, m: usize, budget: u128) -> Result<OrbitResult> {
    let g = full_group(n, m, budget)?;
    Ok(OrbitResult {
        n: u64::from(n),
        rank: m,
        count: orbit_count_of(n, m, &g)?,
        method: OrbitMethod::FullEnumeration,
    })
}

/// `gcd(v_1, ..., v_m, n)`.
pub fn content(v: &[u32], n: u32) -> u32 {
    v.iter().fold(n, |g, &x| g.gcd(&x))
}

/// Reduce `v` to `(content, 0, ..., 0)` with invertible column operations.
/// Returns the canonical form together with an invertible matrix `g` such
/// that `g v` equals it.
pub fn canonical_form(v: &[u32], n: u32) -> (Vec<u32>, MatMod) {
    let m = v.len();
    let mut w = v.to_vec();
    let mut g = MatMod::identity(n, m);
    // row operation helpers acting on both w and g
    let add = |w: &mut Vec<u32>, g: &mut MatMod, dst: usize, src: usize, c: u32| {
        let c = u64::from(c);
        w[dst] = ((u64::from(w[dst]) + c * u64::from(w[src])) % u64::from(n)) as u32;
        for j in 0..m {
            let s = u64::from(g.e[dst * m + j]) + c * u64::from(g.e[src * m + j]);
            g.e[dst * m + j] = (s % u64::from(n)) as u32;
        }
    };
    let swap = |w: &mut Vec<u32>, g: &mut MatMod, a: usize, b: usize| {
        w.swap(a, b);
        for j in 0..m {
            g.e.swap(a * m + j, b * m + j);
        }
    };
    // Euclid on integer representatives until only w[0] is nonzero
    loop {
        let Some(i) = (1..m).find(|&i| w[i] != 0) else {
            break;
        };
        if w[0] == 0 || w[i] < w[0] {
            swap(&mut w, &mut g, 0, i);
            continue;
        }
        let q = w[i] / w[0];
        add(&mut w, &mut g, i, 0, n - (q % n));
    }
    let c = content(&w, n);
    if w[0] != c % n {
        // w[0] = c * u' with u' invertible mod n / c; lift to a unit mod n
        let u = (1..n.max(2))
            .find(|&u| {
                u64::from(u).gcd(&u64::from(n)) == 1
                    && (u64::from(u) * u64::from(w[0])) % u64::from(n) == u64::from(c % n)
            })
            .expect("a unit carrying w[0] to its content exists");
        w[0] = c % n;
        for j in 0..m {
            g.e[j] = ((u64::from(g.e[j]) * u64::from(u)) % u64::from(n)) as u32;
        }
    }
    (w, g)
}

/// Orbit count via the content invariant: one orbit per divisor of `n`.
pub fn orbit_count_content(n: u32, m: usize) -> Result<OrbitResult> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidConfig("n and m must be positive".into()));
    }
    let contents: HashSet<u32> = match vector_count(n, m) {
        Ok(total) if total <= 1 << 20 => (0..total).map(|i| content(&decode(i, n, m), n)).collect(),
        _ => (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .map(|d| {
                let mut v = vec![0; m];
                v[0] = d % n;
                content(&v, n)
            })
            .collect(),
    };
    Ok(OrbitResult {
        n: u64::from(n),
        rank: m,
        count: contents.len() as u64,
        method: OrbitMethod::ContentCanonicalForm,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ContentValidation {
    pub samples: usize,
    /// Samples whose canonical-form reduction failed.
    pub canonical_failures: usize,
    /// Samples where a random group element changed the content.
    pub invariance_failures: usize,
}

impl ContentValidation {
    pub fn passed(&self) -> bool {
        self.canonical_failures == 0 && self.invariance_failures == 0
    }
}

/// Check on random vectors that content is a complete invariant: every
/// vector reduces to `(content, 0, ..., 0)` and random invertible matrices
/// preserve content.
pub fn validate_content<R: Rng>(
    n: u32,
    m: usize,
    samples: usize,
    rng: &mut R,
) -> ContentValidation {
    let mut canonical_failures = 0;
    let mut invariance_failures = 0;
    for _ in 0..samples {
        let v: Vec<u32> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let c = content(&v, n);
        let (w, g) = canonical_form(&v, n);
        let mut expect = vec![0; m];
        expect[0] = c % n;
        if w != expect || !g.is_invertible() || g.apply(&v) != w {
            canonical_failures += 1;
        }
        let h = MatMod::random_invertible(n, m, rng);
        if content(&h.apply(&v), n) != c {
            invariance_failures += 1;
        }
    }
    ContentValidation {
        samples,
        canonical_failures,
        invariance_failures,
    }
}

/// `(1/|G|) sum_sigma #Fix(sigma)`. Closure is checked on a deterministic
/// sample of products.
pub fn burnside_count(n: u32, m: usize, elements: &[MatMod]) -> Result<u64> {
    if elements.is_empty() {
        return Err(Error::NotAGroup("empty set".into()));
    }
    let set: HashSet<&MatMod> = elements.iter().collect();
    if set.len() != elements.len() {
        return Err(Error::NotAGroup("repeated elements".into()));
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..elements.len().min(2000) {
        let a = &elements[rng.gen_range(0..elements.len())];
        let b = &elements[rng.gen_range(0..elements.len())];
        if !set.contains(&a.mul(b)) {
            return Err(Error::NotAGroup("not closed under multiplication".into()));
        }
    }
    let total = vector_count(n, m)?;
    let fixed: u64 = elements
        .iter()
        .map(|g| {
            (0..total)
                .filter(|&i| {
                    let v = decode(i, n, m);
                    g.apply(&v) == v
                })
                .count() as u64
        })
        .sum();
    let order = elements.len() as u64;
    if !fixed.is_multiple_of(order) {
        return Err(Error::NotAGroup(format!(
            "fixed-point average {fixed}/{order} is not an integer"
        )));
    }
    Ok(fixed / order)
}

/// The subgroup generated by `gens`.
pub fn generated_subgroup(n: u32, m: usize, gens: &[MatMod]) -> Vec<MatMod> {
    let id = MatMod::identity(n, m);
    let mut seen: HashSet<MatMod> = HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let h = out[i].mul(g);
            if seen.insert(h.clone()) {
                out.push(h);
            }
        }
        i += 1;
    }
    out
}

/// Orbit count expected of the full group.
pub fn expected_full_orbits(n: u32) -> u64 {
    divisor_count(i64::from(n)).expect("n positive")
}
