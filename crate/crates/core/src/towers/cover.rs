//! Point-counting identities for the self-cover `[n] : C -> C` of an
//! elliptic base, checked by enumeration over `F_p`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::curves::group::{all_points, multiply_by_n, Point};
use crate::curves::{BaseCurve, BasePointModP};
use crate::error::{Error, Result};
use crate::fibration::{SurfaceSpec, TraceEngine};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub p: u64,
    pub n: u64,
    /// `#C(F_p)`
    pub n_points: u64,
    /// `#C[n](F_p)`
    pub kernel: u64,
    /// `#[n]C(F_p)`
    pub image: u64,
    pub kernel_image_ok: bool,
    /// Every image point has exactly `kernel` preimages.
    pub preimages_ok: bool,
    /// `sum_{z'} a([n] z')`
    pub pullback_trace_sum: i64,
    /// `sum_{z in [n]C(F_p)} a(z)`
    pub image_trace_sum: i64,
    pub trace_identity_ok: bool,
    /// `kernel * image_trace_sum / p`, the average trace of the pulled-back family.
    #[serde(serialize_with = "crate::serial::rational")]
    pub pullback_average: BigRational,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.kernel_image_ok && self.preimages_ok && self.trace_identity_ok
    }
}

pub fn verify_cover_identities(spec: &SurfaceSpec, n: u64, p: u64) -> Result<CoverReport> {
    let BaseCurve::Elliptic(base) = &spec.base else {
        return Err(Error::Unsupported(
            "cover identities need an elliptic base".into(),
        ));
    };
    if n == 0 {
        return Err(Error::NonPositive {
            what: "n",
            value: 0,
        });
    }
    if n.gcd(&p) != 1 {
        return Err(Error::NotCoprime { n, p });
    }
    let engine = TraceEngine::new(spec);
    let traces: BTreeMap<BasePointModP, i64> = engine
        .fiber_traces(p)?
        .into_iter()
        .map(|f| (f.point, f.trace))
        .collect();
    let curve = base.reduce(p).ok_or_else(|| Error::BadPrime {
        p,
        reason: "base-bad-reduction".into(),
    })?;
    let points = all_points(&curve);
    let mut preimages: BTreeMap<Point, u64> = BTreeMap::new();
    let mut pullback_trace_sum = 0i64;
    for z in &points {
        let w = multiply_by_n(&curve, z, n as i64)?;
        *preimages.entry(w).or_default() += 1;
        pullback_trace_sum += traces[&BasePointModP::from(w)];
    }
    let kernel = points
        .iter()
        .filter(|z| {
            multiply_by_n(&curve, z, n as i64)
                .map(|w| w == Point::Infinity)
                .unwrap_or(false)
        })
        .count() as u64;
    let image = preimages.len() as u64;
    let image_trace_sum: i64 = preimages
        .keys()
        .map(|w| traces[&BasePointModP::from(*w)])
        .sum();
    let preimages_ok = preimages.values().all(|&c| c == kernel)
        && points
            .iter()
            .all(|z| preimages.get(z).is_none_or(|&c| c == kernel));
    Ok(CoverReport {
        p,
        n,
        n_points: points.len() as u64,
        kernel,
        image,
        kernel_image_ok: kernel * image == points.len() as u64,
        preimages_ok,
        pullback_trace_sum,
        image_trace_sum,
        trace_identity_ok: pullback_trace_sum == kernel as i64 * image_trace_sum,
        pullback_average: BigRational::new(
            BigInt::from(kernel as i64 * image_trace_sum),
            BigInt::from(p),
        ),
    })
}
