//! Splitting polynomials over `Q` into places.
//!
//! A coprime basis is computed by gcd refinement; each basis element is then
//! split by Kronecker's method, searching for factors of degree at most
//! [`MAX_FACTOR_DEGREE`]. A factor of degree at most `2 * MAX_FACTOR_DEGREE + 1`
//! that survives the search is certified irreducible; anything larger is
//! returned uncertified.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::RationalPolynomial;

pub const MAX_FACTOR_DEGREE: usize = 3;
const COMBINATION_CAP: u64 = 2_000_000;
const DIVISOR_VALUE_CAP: u64 = 1_000_000_000_000;

/// A monic factor together with whether irreducibility was proven.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub poly: RationalPolynomial,
    pub certified: bool,
}

/// Monic, squarefree, pairwise coprime polynomials such that every input
/// is, up to a constant, a product of powers of them. Sorted by degree then
/// coefficients for determinism.
pub fn coprime_basis(polys: &[RationalPolynomial]) -> Vec<RationalPolynomial> {
    let mut basis: Vec<RationalPolynomial> = polys
        .iter()
        .filter(|p| !p.is_constant())
        .map(|p| p.squarefree_part())
        .collect();
    'outer: loop {
        for i in 0..basis.len() {
            for j in (i + 1)..basis.len() {
                let g = basis[i].gcd(&basis[j]);
                if g.is_constant() {
                    continue;
                }
                let a = basis[i].exact_div(&g).expect("gcd divides");
                let b = basis[j].exact_div(&g).expect("gcd divides");
                basis.swap_remove(j);
                basis.swap_remove(i);
                for p in [g, a, b] {
                    if !p.is_constant() {
                        basis.push(p.monic());
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
    sort_polys(&mut basis);
    basis.dedup();
    basis
}

/// Irreducible factors of a squarefree polynomial (monic).
pub fn factor_squarefree(f: &RationalPolynomial) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut stack = vec![f.monic()];
    while let Some(g) = stack.pop() {
        let n = g.degree().unwrap_or(0);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(Factor {
                poly: g,
                certified: true,
            });
            continue;
        }
        match split_once(&g) {
            Split::Found(h) => {
                let q = g.exact_div(&h).expect("factor divides");
                stack.push(h.monic());
                stack.push(q.monic());
            }
            Split::Irreducible => out.push(Factor {
                poly: g,
                certified: true,
            }),
            Split::Unknown => out.push(Factor {
                poly: g,
                certified: false,
            }),
        }
    }
    out.sort_by(|a, b| poly_order(&a.poly, &b.poly));
    out
}

/// The irreducible factors of all inputs, via [`coprime_basis`].
pub fn places_of(polys: &[RationalPolynomial]) -> Vec<Factor> {
    let mut out: Vec<Factor> = coprime_basis(polys)
        .iter()
        .flat_map(factor_squarefree)
        .collect();
    out.sort_by(|a, b| poly_order(&a.poly, &b.poly));
    out.dedup_by(|a, b| a.poly == b.poly);
    out
}

fn sort_polys(v: &mut [RationalPolynomial]) {
    v.sort_by(poly_order);
}

fn poly_order(a: &RationalPolynomial, b: &RationalPolynomial) -> std::cmp::Ordering {
    a.degree()
        .cmp(&b.degree())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

enum Split {
    Found(RationalPolynomial),
    Irreducible,
    Unknown,
}

fn split_once(f: &RationalPolynomial) -> Split {
    let n = f.degree().unwrap_or(0);
    let (_, prim) = f.primitive_part();
    let fz = RationalPolynomial::from_integers(&prim);
    let max_d = (n / 2).min(MAX_FACTOR_DEGREE);
    for d in 1..=max_d {
        match kronecker_search(&fz, &prim, d) {
            Some(Some(h)) => return Split::Found(h),
            Some(None) => {}
            None => return Split::Unknown,
        }
    }
    if n / 2 <= MAX_FACTOR_DEGREE {
        Split::Irreducible
    } else {
        Split::Unknown
    }
}

fn eval_int(c: &[BigInt], x: i64) -> BigInt {
    let x = BigInt::from(x);
    c.iter().rev().fold(BigInt::zero(), |acc, a| acc * &x + a)
}

fn positive_divisors(v: &BigInt) -> Option<Vec<BigInt>> {
    let m = v.abs().to_u64().filter(|&m| m <= DIVISOR_VALUE_CAP)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(BigInt::from(d));
            if d * d != m {
                large.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Search for an integer factor of degree exactly `d`. `None` when the
/// search space exceeds the caps; `Some(None)` when there is no such factor.
fn kronecker_search(
    fz: &RationalPolynomial,
    prim: &[BigInt],
    d: usize,
) -> Option<Option<RationalPolynomial>> {
    // Evaluation points ordered by |f(x)| so divisor sets stay small.
    let mut pts: Vec<(i64, BigInt)> = (-12i64..=12).map(|x| (x, eval_int(prim, x))).collect();
    if let Some((x, _)) = pts.iter().find(|(_, v)| v.is_zero()) {
        if d == 1 {
            return Some(Some(RationalPolynomial::from_i64s(&[-*x, 1])));
        }
        // A rational root would have been found at d = 1 if integral;
        // rational non-integral roots are caught by the divisor search.
    }
    pts.retain(|(_, v)| !v.is_zero());
    pts.sort_by(|a, b| a.1.abs().cmp(&b.1.abs()).then(a.0.cmp(&b.0)));
    pts.truncate(d + 1);
    if pts.len() < d + 1 {
        return None;
    }
    let mut divs = Vec::with_capacity(d + 1);
    let mut combos: u64 = 1;
    for (i, (_, v)) in pts.iter().enumerate() {
        let ds = positive_divisors(v)?;
        let signed: Vec<BigInt> = if i == 0 {
            ds
        } else {
            ds.iter().flat_map(|x| [x.clone(), -x]).collect()
        };
        combos = combos.saturating_mul(signed.len() as u64);
        divs.push(signed);
    }
    if combos > COMBINATION_CAP {
        return None;
    }
    let xs: Vec<BigRational> = pts
        .iter()
        .map(|(x, _)| BigRational::from_integer(BigInt::from(*x)))
        .collect();
    let basis = lagrange_basis(&xs);
    let mut idx = vec![0usize; d + 1];
    loop {
        let mut cand = RationalPolynomial::zero();
        for (k, b) in basis.iter().enumerate() {
            let v = BigRational::from_integer(divs[k][idx[k]].clone());
            cand = &cand + &b.scale(&v);
        }
        if cand.degree() == Some(d)
            && cand.coeffs().iter().all(|c| c.is_integer())
            && cand.divides(fz)
        {
            return Some(Some(cand.monic()));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Some(None);
            }
            idx[k] += 1;
            if idx[k] < divs[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn lagrange_basis(xs: &[BigRational]) -> Vec<RationalPolynomial> {
    xs.iter()
        .enumerate()
        .map(|(i, xi)| {
            let mut num = RationalPolynomial::one();
            let mut den = BigRational::one();
            for (j, xj) in xs.iter().enumerate() {
                if i != j {
                    num = &num * &RationalPolynomial::new(vec![-xj.clone(), BigRational::one()]);
                    den *= xi - xj;
                }
            }
            num.scale(&den.recip())
        })
        .collect()
}
