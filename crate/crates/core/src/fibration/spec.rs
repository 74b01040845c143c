//! Surface definitions and their TOML form.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;

use super::function::{BaseFunction, FunctionField};
use crate::arith::RationalFunction;
use crate::curves::{BaseCurve, EllipticCurveQ};
use crate::error::{Error, Result};

/// Weights of `a1, a2, a3, a4, a6` under `(x, y) -> (u^2 x, u^3 y)`.
pub const WEIERSTRASS_WEIGHTS: [i64; 5] = [1, 2, 3, 4, 6];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberModel {
    /// `a1, a2, a3, a4, a6`
    Weierstrass([BaseFunction; 5]),
    /// `y^2 = sum f_j x^j`, coefficients ascending.
    Hyperelliptic { f: Vec<BaseFunction>, genus: u32 },
}

impl FiberModel {
    pub fn coefficients(&self) -> &[BaseFunction] {
        match self {
            FiberModel::Weierstrass(a) => a,
            FiberModel::Hyperelliptic { f, .. } => f,
        }
    }

    /// Rescaling weight of each coefficient. Hyperelliptic models rescale
    /// through `y -> y / u^k`, which multiplies every coefficient by `u^{2k}`.
    pub fn weights(&self) -> Vec<i64> {
        match self {
            FiberModel::Weierstrass(_) => WEIERSTRASS_WEIGHTS.to_vec(),
            FiberModel::Hyperelliptic { f, .. } => vec![2; f.len()],
        }
    }
}

/// Local data supplied by the caller for fibers whose conductor cannot be
/// computed (genus at least 2).
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
pub struct SuppliedLocalDatum {
    /// `"inf"` or a polynomial in `t`.
    pub place: String,
    pub epsilon: u32,
    #[serde(default)]
    pub unipotent_rank: Option<u32>,
    #[serde(default)]
    pub toric_rank: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub name: String,
    pub base: BaseCurve,
    pub fiber_model: FiberModel,
    pub genus_fiber: u32,
    pub dim_trace: u32,
    pub constant_part: Option<EllipticCurveQ>,
    pub supplied_local: Vec<SuppliedLocalDatum>,
    /// Over the projective line: the model in the chart `s = 1/t`, scaled
    /// by the least weight making every coefficient regular at `s = 0`.
    infinity_chart: Option<(i64, Vec<RationalFunction>)>,
}

impl SurfaceSpec {
    pub fn new(
        name: impl Into<String>,
        base: BaseCurve,
        fiber_model: FiberModel,
        constant_part: Option<EllipticCurveQ>,
        supplied_local: Vec<SuppliedLocalDatum>,
    ) -> Result<Self> {
        let genus_fiber = match &fiber_model {
            FiberModel::Weierstrass(_) => 1,
            FiberModel::Hyperelliptic { f, genus } => {
                if *genus < 2 {
                    return Err(Error::InvalidSpec(format!(
                        "hyperelliptic fibers need genus >= 2 (got {genus})"
                    )));
                }
                let deg = f.len().saturating_sub(1) as u32;
                if deg != 2 * genus + 1 && deg != 2 * genus + 2 {
                    return Err(Error::InvalidSpec(format!(
                        "genus {genus} needs deg f in {{{}, {}}} (got {deg})",
                        2 * genus + 1,
                        2 * genus + 2
                    )));
                }
                if matches!(base, BaseCurve::Elliptic(_)) {
                    return Err(Error::Unsupported(
                        "hyperelliptic fibers are supported over the projective line only".into(),
                    ));
                }
                *genus
            }
        };
        let dim_trace = u32::from(constant_part.is_some());
        let mut spec = Self {
            name: name.into(),
            base,
            fiber_model,
            genus_fiber,
            dim_trace,
            constant_part,
            supplied_local,
            infinity_chart: None,
        };
        spec.validate()?;
        if matches!(spec.base, BaseCurve::ProjectiveLine) {
            spec.infinity_chart = Some(spec.compute_infinity_chart());
        }
        Ok(spec)
    }

    pub fn function_field(&self) -> FunctionField {
        match &self.base {
            BaseCurve::ProjectiveLine => FunctionField::Rational,
            BaseCurve::Elliptic(e) => FunctionField::Elliptic(e.clone()),
        }
    }

    pub fn genus_base(&self) -> u32 {
        self.base.genus()
    }

    /// Whether no fiber coefficient depends on the base point.
    pub fn is_constant_family(&self) -> bool {
        self.fiber_model
            .coefficients()
            .iter()
            .all(|c| c.is_constant())
    }

    /// `(N, chart coefficients)` for the fiber at `t = infinity`.
    pub fn infinity_chart(&self) -> Option<&(i64, Vec<RationalFunction>)> {
        self.infinity_chart.as_ref()
    }

    fn compute_infinity_chart(&self) -> (i64, Vec<RationalFunction>) {
        let coeffs = self.fiber_model.coefficients();
        let weights = self.fiber_model.weights();
        let n = coeffs
            .iter()
            .zip(&weights)
            .filter_map(|(c, &w)| {
                c.a.degree_difference()
                    .map(|d| d.div_euclid(w) + i64::from(d.rem_euclid(w) != 0))
            })
            .max()
            .unwrap_or(0);
        let chart = coeffs
            .iter()
            .zip(&weights)
            .map(|(c, &w)| c.a.infinity_chart(w * n))
            .collect();
        (n, chart)
    }

    fn validate(&self) -> Result<()> {
        if let Some(c) = &self.constant_part {
            if c.discriminant().is_zero() {
                return Err(Error::InvalidSpec("constant part is singular".into()));
            }
        }
        if super::discriminant::fiber_discriminant(self).is_zero() {
            return Err(Error::InvalidSpec(
                "fiber discriminant vanishes identically".into(),
            ));
        }
        if let BaseCurve::Elliptic(_) = &self.base {
            for (i, c) in self.fiber_model.coefficients().iter().enumerate() {
                if FunctionField::pole_order_at_origin(c).is_some_and(|o| o > 0) {
                    return Err(Error::InvalidSpec(format!(
                        "fiber coefficient #{} has a pole at the origin of the base",
                        i + 1
                    )));
                }
            }
        }
        for d in &self.supplied_local {
            if d.epsilon > 2 * self.genus_fiber {
                return Err(Error::InvalidSpec(format!(
                    "epsilon {} at {} exceeds 2 g_X = {}",
                    d.epsilon,
                    d.place,
                    2 * self.genus_fiber
                )));
            }
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let raw: RawSpec = toml::from_str(s)?;
        raw.into_spec()
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    surface: RawSurface,
    base: RawBase,
    fiber: RawFiber,
    #[serde(default)]
    trace: RawTrace,
    #[serde(default)]
    conductor: RawConductor,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSurface {
    name: String,
}

#[derive(Debug, Deserialize)]
struct RawBase {
    kind: String,
    #[serde(flatten)]
    coeffs: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFiber {
    a1: Option<String>,
    a2: Option<String>,
    a3: Option<String>,
    a4: Option<String>,
    a6: Option<String>,
    f: Option<Vec<String>>,
    genus: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrace {
    dim_b: Option<u32>,
    constant_part: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConductor {
    #[serde(default)]
    local: Vec<SuppliedLocalDatum>,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let f = FunctionField::Rational.parse(s)?;
    if !f.is_constant() {
        return Err(Error::Parse {
            input: s.into(),
            message: "expected a rational constant".into(),
        });
    }
    Ok(f.a.constant_value().unwrap_or_else(BigRational::zero))
}

fn curve_from_map(m: &BTreeMap<String, String>, what: &str) -> Result<EllipticCurveQ> {
    const KEYS: [&str; 5] = ["a1", "a2", "a3", "a4", "a6"];
    if let Some(k) = m.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::InvalidSpec(format!("unknown key `{k}` in {what}")));
    }
    let mut a: [BigRational; 5] = Default::default();
    for (slot, key) in a.iter_mut().zip(KEYS) {
        *slot = match m.get(key) {
            Some(s) => parse_rational(s)?,
            None => BigRational::from_integer(BigInt::zero()),
        };
    }
    EllipticCurveQ::new(a)
}

impl RawSpec {
    fn into_spec(self) -> Result<SurfaceSpec> {
        let base = match self.base.kind.as_str() {
            "p1" => {
                if !self.base.coeffs.is_empty() {
                    return Err(Error::InvalidSpec(
                        "a projective-line base takes no coefficients".into(),
                    ));
                }
                BaseCurve::ProjectiveLine
            }
            "elliptic" => BaseCurve::Elliptic(curve_from_map(&self.base.coeffs, "[base]")?),
            other => {
                return Err(Error::InvalidSpec(format!(
                    "base kind must be \"p1\" or \"elliptic\" (got \"{other}\")"
                )))
            }
        };
        let field = match &base {
            BaseCurve::ProjectiveLine => FunctionField::Rational,
            BaseCurve::Elliptic(e) => FunctionField::Elliptic(e.clone()),
        };
        let fb = self.fiber;
        let has_a = [&fb.a1, &fb.a2, &fb.a3, &fb.a4, &fb.a6]
            .iter()
            .any(|a| a.is_some());
        let fiber_model = match (fb.f, has_a) {
            (Some(_), true) => {
                return Err(Error::InvalidSpec(
                    "give either a1..a6 or f, not both".into(),
                ))
            }
            (Some(f), false) => {
                let coeffs = f
                    .iter()
                    .map(|s| field.parse(s))
                    .collect::<Result<Vec<_>>>()?;
                let deg = coeffs.len().saturating_sub(1) as u32;
                let genus = fb.genus.unwrap_or(deg.saturating_sub(1) / 2);
                FiberModel::Hyperelliptic { f: coeffs, genus }
            }
            (None, _) => {
                if fb.genus.is_some_and(|g| g != 1) {
                    return Err(Error::InvalidSpec("Weierstrass fibers have genus 1".into()));
                }
                let get = |a: &Option<String>| -> Result<BaseFunction> {
                    match a {
                        Some(s) => field.parse(s),
                        None => Ok(BaseFunction::constant(BigRational::zero())),
                    }
                };
                FiberModel::Weierstrass([
                    get(&fb.a1)?,
                    get(&fb.a2)?,
                    get(&fb.a3)?,
                    get(&fb.a4)?,
                    get(&fb.a6)?,
                ])
            }
        };
        let constant_part = self
            .trace
            .constant_part
            .as_ref()
            .map(|m| curve_from_map(m, "[trace.constant_part]"))
            .transpose()?;
        let expected_dim = u32::from(constant_part.is_some());
        if let Some(d) = self.trace.dim_b {
            if d != expected_dim {
                return Err(Error::InvalidSpec(format!(
                    "dim_b = {d} but the constant part is {}",
                    if constant_part.is_some() {
                        "present"
                    } else {
                        "absent"
                    }
                )));
            }
        }
        SurfaceSpec::new(
            self.surface.name,
            base,
            fiber_model,
            constant_part,
            self.conductor.local,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEGENDRE: &str = r#"
[surface]
name = "legendre"
[base]
kind = "p1"
[fiber]
a2 = "-(t + 1)"
a4 = "t"
"#;

    #[test]
    fn parses_legendre_and_builds_infinity_chart() {
        let s = SurfaceSpec::from_toml_str(LEGENDRE).unwrap();
        assert_eq!(s.genus_fiber, 1);
        assert_eq!(s.dim_trace, 0);
        let (n, chart) = s.infinity_chart().unwrap();
        assert_eq!(*n, 1);
        // a2' = -s^2 - s, a4' = s^3
        assert_eq!(
            chart[1],
            FunctionField::Rational.parse("-t^2 - t").unwrap().a
        );
        assert_eq!(chart[3], FunctionField::Rational.parse("t^3").unwrap().a);
    }

    #[test]
    fn rejects_inconsistent_specs() {
        let bad_dim = format!("{LEGENDRE}\n[trace]\ndim_b = 1\n");
        assert!(SurfaceSpec::from_toml_str(&bad_dim).is_err());
        let zero = "[surface]\nname='z'\n[base]\nkind='p1'\n[fiber]\na4='0'\n";
        assert!(SurfaceSpec::from_toml_str(zero).is_err());
        let pole = "[surface]\nname='z'\n[base]\nkind='elliptic'\na4='-1'\n[fiber]\na6='x'\n";
        assert!(SurfaceSpec::from_toml_str(pole).is_err());
        let kind = "[surface]\nname='z'\n[base]\nkind='plane'\n[fiber]\na6='1'\n";
        assert!(SurfaceSpec::from_toml_str(kind).is_err());
        let extra = format!("{LEGENDRE}\n[extra]\n");
        assert!(SurfaceSpec::from_toml_str(&extra).is_err());
    }

    #[test]
    fn hyperelliptic_genus_from_degree() {
        let s = "[surface]\nname='h'\n[base]\nkind='p1'\n[fiber]\nf=['t','1','0','0','0','1']\n";
        let spec = SurfaceSpec::from_toml_str(s).unwrap();
        assert_eq!(spec.genus_fiber, 2);
        let bad = "[surface]\nname='h'\n[base]\nkind='p1'\n[fiber]\nf=['t','1','0','1']\n";
        assert!(SurfaceSpec::from_toml_str(bad).is_err());
    }
}
