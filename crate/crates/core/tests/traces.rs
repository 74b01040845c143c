mod common;

use common::{brute_force_trace, surface, within_weil};
use jrl::curves::BasePointModP;
use jrl::fibration::{SurfaceSpec, TraceEngine};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn finite_traces(spec: &SurfaceSpec, p: u64) -> Vec<(u64, i64)> {
    TraceEngine::new(spec)
        .fiber_traces(p)
        .unwrap()
        .into_iter()
        .filter_map(|f| match f.point {
            BasePointModP::Line(t) => Some((t, f.trace)),
            _ => None,
        })
        .collect()
}

#[test]
fn legendre_fibers_at_five() {
    let spec = surface("legendre");
    let traces: Vec<i64> = finite_traces(&spec, 5)
        .into_iter()
        .map(|(_, a)| a)
        .collect();
    assert_eq!(traces, [1, 1, -2, 2, -2]);
    let inf = TraceEngine::new(&spec)
        .fiber_traces(5)
        .unwrap()
        .into_iter()
        .find(|f| f.point == BasePointModP::Infinity)
        .unwrap();
    assert_eq!(inf.trace, 0);
    let s = TraceEngine::new(&spec).sample(5).unwrap();
    assert_eq!(s.avg_trace, BigRational::from_integer(BigInt::from(0)));
}

/// Fiber-by-fiber brute force on the finite chart.
fn check_against_brute_force(name: &str, a: impl Fn(i64) -> [i64; 5], primes: &[u64]) {
    let spec = surface(name);
    for &p in primes {
        for (t, trace) in finite_traces(&spec, p) {
            assert_eq!(
                trace,
                brute_force_trace(a(t as i64), p),
                "{name} at p = {p}, t = {t}"
            );
        }
    }
}

#[test]
fn catalogue_fibers_match_brute_force() {
    let primes = [5, 7, 11, 13, 29, 31];
    check_against_brute_force("legendre", |t| [0, -(t + 1), 0, t, 0], &primes);
    check_against_brute_force("cubic-twist", |t| [0, 0, 0, 0, t], &primes);
    check_against_brute_force(
        "forced-section",
        |t| [0, 0, 0, -1, t * t - t * t * t + t],
        &[5, 7, 11, 29, 31],
    );
    check_against_brute_force("constant-split", |_| [0, 0, 0, 0, 1], &primes);
}

#[test]
fn constant_family_reduced_average() {
    // A*_p = a_p(B) / p with a_p(B) the trace of y^2 = x^3 + 1
    let spec = surface("constant-split");
    let engine = TraceEngine::new(&spec);
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let s = engine.sample(p).unwrap();
        let ap = brute_force_trace([0, 0, 0, 0, 1], p);
        assert_eq!(
            s.reduced,
            BigRational::new(BigInt::from(ap), BigInt::from(p))
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn weil_bound_on_random_families(
        a4 in -3i64..=3,
        b4 in -2i64..=2,
        a6 in -3i64..=3,
        b6 in -2i64..=2,
        c6 in -1i64..=1,
        p in prop::sample::select(vec![5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37]),
    ) {
        let toml = format!(
            "[surface]\nname='w'\n[base]\nkind='p1'\n[fiber]\na4='{a4} + ({b4})*t'\na6='{a6} + ({b6})*t + ({c6})*t^2'\n"
        );
        let spec = SurfaceSpec::from_toml_str(&toml);
        prop_assume!(spec.is_ok());
        let spec = spec.unwrap();
        let engine = TraceEngine::new(&spec);
        prop_assume!(engine.is_good(p));
        for f in engine.fiber_traces(p).unwrap() {
            let slack = if f.singular { 3 } else { 0 };
            prop_assert!(within_weil(f.trace, p, slack), "{:?} at p = {}", f, p);
        }
        // bookkeeping: p A_p = sum over fibers
        let s = engine.sample(p).unwrap();
        let total: i64 = engine.fiber_traces(p).unwrap().iter().map(|f| f.trace).sum();
        prop_assert_eq!(s.avg_trace * BigRational::from_integer(BigInt::from(p)), BigRational::from_integer(BigInt::from(total)));
    }
}
