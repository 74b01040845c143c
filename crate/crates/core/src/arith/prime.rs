//! Primality and prime generation.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

// Deterministic for every n < 3.3 * 10^24, which covers all of u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n == w {
            return true;
        }
        if n.is_multiple_of(w) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[lo, hi]`, ascending. Segmented sieve over the interval using
/// base primes up to `sqrt(hi)`.
pub fn primes_in_range(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if lo > hi {
        return Err(Error::InvalidRange { lo, hi });
    }
    if lo < 2 {
        return Err(Error::RangeStart(lo));
    }
    let root = isqrt(hi);
    let base = simple_sieve(root as usize);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &q in &base {
        let q = q as u64;
        let mut start = q * q;
        if start < lo {
            start = lo.div_ceil(q) * q;
        }
        let mut m = start;
        while m <= hi {
            composite[(m - lo) as usize] = true;
            m += q;
        }
    }
    Ok(composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| lo + i as u64)
        .collect())
}

fn simple_sieve(n: usize) -> Vec<usize> {
    if n < 2 {
        return Vec::new();
    }
    let mut is = vec![true; n + 1];
    is[0] = false;
    is[1] = false;
    let mut i = 2;
    while i * i <= n {
        if is[i] {
            let mut j = i * i;
            while j <= n {
                is[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| is[k]).collect()
}

pub(crate) fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Distinct prime factors of `n >= 1`, ascending (Pollard rho with Brent's
/// cycle detection above a small trial-division range).
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for q in 2..1000u64 {
        if q * q > n {
            break;
        }
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = pollard_brent(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A nontrivial factor of a composite `n`.
fn pollard_brent(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut r, mut q) = (2u64, 2u64, 1u64, 1u64, 1u64);
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(128.min(r - k)) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Distinct prime factors of `|n|` that could be found, plus any cofactor
/// too large to split (it exceeds `u64`). Trial division removes primes
/// below 10^6 first.
pub fn prime_factors_big(n: &BigInt) -> (Vec<u64>, Option<BigInt>) {
    let mut m = n.abs();
    let mut out = Vec::new();
    if m.is_zero() {
        return (out, None);
    }
    let mut q = 2u64;
    while q < 1_000_000 {
        if let Some(small) = m.to_u64() {
            out.extend(prime_factors(small));
            out.sort_unstable();
            out.dedup();
            return (out, None);
        }
        let bq = BigInt::from(q);
        if (&m % &bq).is_zero() {
            out.push(q);
            while (&m % &bq).is_zero() {
                m /= &bq;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    match m.to_u64() {
        Some(small) => out.extend(prime_factors(small)),
        None => {
            out.sort_unstable();
            return (out, Some(m));
        }
    }
    out.sort_unstable();
    out.dedup();
    (out, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2
            && (2..)
                .take_while(|d| d * d <= n)
                .all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_ranges() {
        assert_eq!(primes_in_range(2, 11).unwrap(), vec![2, 3, 5, 7, 11]);
        assert!(primes_in_range(14, 16).unwrap().is_empty());
        assert!(trial_division(9973));
        assert_eq!(primes_in_range(9973, 9973).unwrap(), vec![9973]);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(matches!(
            primes_in_range(10, 5),
            Err(Error::InvalidRange { .. })
        ));
        assert!(primes_in_range(1, 5).is_err());
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
        // strong pseudoprimes to several small bases
        for n in [
            3_215_031_751u64,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
        ] {
            assert!(!is_prime(n));
        }
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn sieve_matches_primality() {
        let ps = primes_in_range(1000, 5000).unwrap();
        let expect: Vec<u64> = (1000..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, expect);
    }

    #[test]
    fn factorizations() {
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        // product of two primes near 2^31
        let (a, b) = (2_147_483_647u64, 2_147_483_629u64);
        assert_eq!(prime_factors(a * b), vec![b, a]);
        let big = BigInt::from(a) * BigInt::from(b) * BigInt::from(48u32);
        assert_eq!(prime_factors_big(&big), (vec![2, 3, b, a], None));
        let huge = BigInt::from(a) * BigInt::from(b) * BigInt::from(2_147_483_587u64);
        let (small, rest) = prime_factors_big(&(huge.clone() * 10));
        assert_eq!(small, vec![2, 5]);
        assert_eq!(rest, Some(huge));
    }
}
