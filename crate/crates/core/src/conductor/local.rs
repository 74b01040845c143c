//! Local conductor data and the conductor degree over the projective line.

use std::fmt;

use serde::{Serialize, Serializer};

use super::bounds::geometric_bound;
use super::kodaira::{classify, KodairaType, Valuations};
use crate::arith::factor::{factor_squarefree, places_of};
use crate::arith::{RationalFunction, RationalPolynomial};
use crate::curves::BaseCurve;
use crate::error::{Error, Result};
use crate::fibration::discriminant::{weierstrass_invariants, WeierstrassInvariants};
use crate::fibration::{FiberModel, FunctionField, SurfaceSpec};

/// A place of `Q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// Monic irreducible polynomial. `certified` is false when irreducibility
    /// was assumed rather than proven.
    Finite {
        poly: RationalPolynomial,
        certified: bool,
    },
    Infinity,
}

impl Place {
    pub fn finite(poly: RationalPolynomial) -> Self {
        Place::Finite {
            poly: poly.monic(),
            certified: true,
        }
    }

    pub fn degree(&self) -> u32 {
        match self {
            Place::Finite { poly, .. } => poly.degree().unwrap_or(0) as u32,
            Place::Infinity => 1,
        }
    }

    pub fn is_certified(&self) -> bool {
        match self {
            Place::Finite { certified, .. } => *certified,
            Place::Infinity => true,
        }
    }

    /// Valuation of `r` at this place, `None` when `r = 0`.
    pub fn valuation(&self, r: &RationalFunction) -> Option<i64> {
        match self {
            Place::Finite { poly, .. } => r.valuation_at(poly),
            Place::Infinity => r.valuation_at_infinity(),
        }
    }

    /// Parse `"inf"` or a polynomial in `t`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "inf" | "infinity" | "oo") {
            return Ok(Place::Infinity);
        }
        let f = FunctionField::Rational.parse(s)?;
        if !f.a.is_polynomial() || f.a.is_constant() {
            return Err(Error::Parse {
                input: s.into(),
                message: "a place must be a nonconstant polynomial in t or `inf`".into(),
            });
        }
        let factors = factor_squarefree(f.a.numer());
        if factors.len() != 1 || f.a.numer().multiplicity(&factors[0].poly) != 1 {
            return Err(Error::Parse {
                input: s.into(),
                message: "place polynomial is reducible".into(),
            });
        }
        Ok(Place::Finite {
            poly: factors[0].poly.clone(),
            certified: factors[0].certified,
        })
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite { poly, .. } => f.write_str(&poly.fmt_var("t")),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalConductorDatum {
    pub place: Place,
    pub degree: u32,
    /// `None` for supplied data on higher-genus fibers.
    pub kodaira: Option<KodairaType>,
    pub v_delta: Option<i64>,
    pub epsilon: u32,
    pub delta: u32,
    pub toric_rank: Option<u32>,
    pub unipotent_rank: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConductorReport {
    pub data: Vec<LocalConductorDatum>,
    /// `sum (epsilon + delta) deg v`
    pub f: u64,
    /// Number of places with positive exponent.
    pub s: u64,
    /// `sum v(Delta_min) deg v`, elliptic fibers only.
    pub total_v_delta: Option<i64>,
    pub geometric_bound: i64,
    /// Some place rests on an unproven irreducibility.
    pub uncertified: bool,
}

fn p1_weierstrass(spec: &SurfaceSpec) -> Result<WeierstrassInvariants> {
    if !matches!(spec.base, BaseCurve::ProjectiveLine) {
        return Err(Error::Unsupported(
            "conductor computation is available over the projective line only".into(),
        ));
    }
    match &spec.fiber_model {
        FiberModel::Weierstrass(a) => Ok(weierstrass_invariants(&FunctionField::Rational, a)),
        FiberModel::Hyperelliptic { .. } => Err(Error::Unsupported(
            "Kodaira classification needs an elliptic fiber; supply [[conductor.local]] data"
                .into(),
        )),
    }
}

fn classify_with(inv: &WeierstrassInvariants, place: &Place) -> Result<LocalConductorDatum> {
    let delta = place
        .valuation(&inv.delta.a)
        .ok_or_else(|| Error::Classification {
            place: place.to_string(),
            message: "discriminant vanishes identically".into(),
        })?;
    let v = Valuations {
        c4: place.valuation(&inv.c4.a),
        c6: place.valuation(&inv.c6.a),
        delta,
    }
    .minimal();
    let kodaira = classify(&v).ok_or_else(|| Error::Classification {
        place: place.to_string(),
        message: format!(
            "no Kodaira type for (v(c4), v(c6), v(Delta)) = ({:?}, {:?}, {})",
            v.c4, v.c6, v.delta
        ),
    })?;
    let (toric, unipotent) = kodaira.ranks();
    Ok(LocalConductorDatum {
        degree: place.degree(),
        place: place.clone(),
        kodaira: Some(kodaira),
        v_delta: Some(v.delta),
        epsilon: kodaira.epsilon(),
        delta: 0,
        toric_rank: Some(toric),
        unipotent_rank: Some(unipotent),
    })
}

/// Kodaira type and conductor exponents of an elliptic fibration over the
/// projective line at `place`.
pub fn kodaira_classify(spec: &SurfaceSpec, place: &Place) -> Result<LocalConductorDatum> {
    classify_with(&p1_weierstrass(spec)?, place)
}

/// Finite places where the Weierstrass model may have bad reduction:
/// zeros and poles of `Delta` and poles of `c4`, `c6`.
pub fn candidate_places(inv: &WeierstrassInvariants) -> Vec<Place> {
    let mut polys = vec![inv.delta.a.numer().clone(), inv.delta.a.denom().clone()];
    polys.push(inv.c4.a.denom().clone());
    polys.push(inv.c6.a.denom().clone());
    places_of(&polys)
        .into_iter()
        .map(|f| Place::Finite {
            poly: f.poly,
            certified: f.certified,
        })
        .collect()
}

fn supplied_report(spec: &SurfaceSpec) -> Result<Vec<LocalConductorDatum>> {
    spec.supplied_local
        .iter()
        .map(|d| {
            let place = Place::parse(&d.place)?;
            if let (Some(u), Some(r)) = (d.unipotent_rank, d.toric_rank) {
                if r + 2 * u != d.epsilon {
                    return Err(Error::InvalidSpec(format!(
                        "at {place}: toric rank {r} + 2 * unipotent rank {u} != epsilon {}",
                        d.epsilon
                    )));
                }
            }
            Ok(LocalConductorDatum {
                degree: place.degree(),
                place,
                kodaira: None,
                v_delta: None,
                epsilon: d.epsilon,
                delta: 0,
                toric_rank: d.toric_rank,
                unipotent_rank: d.unipotent_rank,
            })
        })
        .collect()
}

/// Local data at every bad place and the conductor degree.
pub fn conductor_degree(spec: &SurfaceSpec) -> Result<ConductorReport> {
    let (data, total_v_delta) = match &spec.fiber_model {
        FiberModel::Hyperelliptic { .. } => {
            if !matches!(spec.base, BaseCurve::ProjectiveLine) {
                return Err(Error::Unsupported(
                    "conductor computation is available over the projective line only".into(),
                ));
            }
            (supplied_report(spec)?, None)
        }
        FiberModel::Weierstrass(_) => {
            let inv = p1_weierstrass(spec)?;
            let mut places = candidate_places(&inv);
            places.push(Place::Infinity);
            let all = places
                .iter()
                .map(|pl| classify_with(&inv, pl))
                .collect::<Result<Vec<_>>>()?;
            let total: i64 = all
                .iter()
                .map(|d| d.v_delta.unwrap_or(0) * d.degree as i64)
                .sum();
            (
                all.into_iter()
                    .filter(|d| d.kodaira != Some(KodairaType::I0))
                    .collect(),
                Some(total),
            )
        }
    };
    let f: u64 = data
        .iter()
        .map(|d| u64::from(d.epsilon + d.delta) * u64::from(d.degree))
        .sum();
    let s = data.iter().filter(|d| d.epsilon + d.delta > 0).count() as u64;
    let uncertified = data.iter().any(|d| !d.place.is_certified());
    let geometric_bound = geometric_bound(
        i64::from(spec.genus_fiber),
        i64::from(spec.genus_base()),
        f as i64,
        i64::from(spec.dim_trace),
    )?;
    Ok(ConductorReport {
        data,
        f,
        s,
        total_v_delta,
        geometric_bound,
        uncertified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(toml: &str) -> SurfaceSpec {
        SurfaceSpec::from_toml_str(toml).unwrap()
    }

    fn summary(r: &ConductorReport) -> Vec<(String, String, u32)> {
        r.data
            .iter()
            .map(|d| {
                (
                    d.place.to_string(),
                    d.kodaira.unwrap().to_string(),
                    d.epsilon,
                )
            })
            .collect()
    }

    #[test]
    fn legendre_conductor() {
        let s = spec("[surface]\nname='l'\n[base]\nkind='p1'\n[fiber]\na2='-(t+1)'\na4='t'\n");
        let r = conductor_degree(&s).unwrap();
        let mut got = summary(&r);
        got.sort();
        let want = vec![
            ("inf".to_string(), "I2*".to_string(), 2),
            ("t".to_string(), "I2".to_string(), 1),
            ("t - 1".to_string(), "I2".to_string(), 1),
        ];
        assert_eq!(got, want);
        assert_eq!(r.f, 4);
        assert_eq!(r.s, 3);
        assert_eq!(r.total_v_delta, Some(12));
        assert_eq!(r.geometric_bound, 0);
    }

    #[test]
    fn cubic_twist_conductor() {
        let s = spec("[surface]\nname='c'\n[base]\nkind='p1'\n[fiber]\na6='t'\n");
        let r = conductor_degree(&s).unwrap();
        let mut got = summary(&r);
        got.sort();
        assert_eq!(
            got,
            vec![
                ("inf".into(), "II*".into(), 2),
                ("t".into(), "II".into(), 2)
            ]
        );
        assert_eq!(r.f, 4);
    }

    #[test]
    fn constant_family_is_unramified() {
        let s = spec("[surface]\nname='k'\n[base]\nkind='p1'\n[fiber]\na6='1'\n[trace.constant_part]\na6='1'\n");
        let r = conductor_degree(&s).unwrap();
        assert!(r.data.is_empty());
        assert_eq!(r.f, 0);
        assert_eq!(r.total_v_delta, Some(0));
        // 2 (0 - 2) + 0 + 4 * 1
        assert_eq!(r.geometric_bound, 0);
    }

    #[test]
    fn poles_of_c4_count_as_places() {
        // a4 = 1/t: Delta = -64/t^3 has a pole, and the model is not minimal
        let s = spec("[surface]\nname='p'\n[base]\nkind='p1'\n[fiber]\na4='1/t'\n");
        let d = kodaira_classify(&s, &Place::finite(RationalPolynomial::x())).unwrap();
        // k = -1: v(c4) = -1 + 4 = 3, v(Delta) = -3 + 12 = 9
        assert_eq!(d.kodaira, Some(KodairaType::IIIStar));
        let r = conductor_degree(&s).unwrap();
        assert_eq!(r.total_v_delta.unwrap() % 12, 0);
    }

    #[test]
    fn supplied_data_for_genus_two() {
        let s = spec(
            "[surface]\nname='h'\n[base]\nkind='p1'\n[fiber]\nf=['t','0','0','0','0','1']\n\
             [[conductor.local]]\nplace='t'\nepsilon=4\n[[conductor.local]]\nplace='inf'\nepsilon=4\n",
        );
        let r = conductor_degree(&s).unwrap();
        assert_eq!(r.f, 8);
        assert_eq!(r.total_v_delta, None);
        assert!(kodaira_classify(&s, &Place::Infinity).is_err());
    }

    #[test]
    fn places_parse() {
        assert_eq!(Place::parse("inf").unwrap(), Place::Infinity);
        assert_eq!(Place::parse("t^2 + 1").unwrap().degree(), 2);
        assert!(Place::parse("t^2 - 1").is_err());
        assert!(Place::parse("3").is_err());
    }
}
