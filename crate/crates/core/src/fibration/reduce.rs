//! Reduction of a surface modulo a prime and the fiber model at each
//! `F_p`-point of the base.
//!
//! At a point where every coefficient is regular the given model is used.
//! Where some coefficient has a pole, the coefficients are expanded in a
//! local parameter `u` and rescaled by the least `u^{w k}` making them all
//! regular. Over the projective line the point at infinity is read in the
//! chart `s = 1/t` computed at load.

use super::function::BaseFunction;
use super::spec::{FiberModel, SurfaceSpec};
use crate::arith::modp::{Laurent, RatFnModP, Series};
use crate::arith::{PrimeField, RationalFunction};
use crate::curves::{
    BaseCurve, BasePointModP, EllipticFiberModP, FiberModP, HyperellipticFiberModP,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct CoeffModP {
    a: RatFnModP,
    b: Option<RatFnModP>,
}

/// A surface reduced modulo `p`, ready to produce fibers.
#[derive(Clone, Debug)]
pub struct ReducedSurface {
    field: PrimeField,
    coeffs: Vec<CoeffModP>,
    chart: Option<Vec<RatFnModP>>,
    base: Option<EllipticFiberModP>,
    origin: Option<Vec<u64>>,
    weights: Vec<i64>,
    genus: Option<usize>,
    precision: usize,
}

fn denominator_vanishing(p: u64) -> Error {
    Error::BadPrime {
        p,
        reason: "denominator-vanishing".into(),
    }
}

fn reduce_fn(r: &RationalFunction, field: &PrimeField) -> Result<RatFnModP> {
    RatFnModP::reduce(r, field).ok_or_else(|| denominator_vanishing(field.modulus()))
}

fn max_degree(fs: &[BaseFunction]) -> usize {
    fs.iter()
        .flat_map(|f| [&f.a, &f.b])
        .flat_map(|r| [r.numer().degree(), r.denom().degree()])
        .flatten()
        .max()
        .unwrap_or(0)
}

impl ReducedSurface {
    pub fn new(spec: &SurfaceSpec, p: u64) -> Result<Self> {
        if p < 5 {
            return Err(Error::PrimeTooSmall { p, min: 5 });
        }
        let field = PrimeField::new(p)?;
        let coeffs_q = spec.fiber_model.coefficients();
        let coeffs = coeffs_q
            .iter()
            .map(|c| {
                Ok(CoeffModP {
                    a: reduce_fn(&c.a, &field)?,
                    b: if c.b.is_zero() {
                        None
                    } else {
                        Some(reduce_fn(&c.b, &field)?)
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let chart = spec
            .infinity_chart()
            .map(|(_, ch)| {
                ch.iter()
                    .map(|r| reduce_fn(r, &field))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let (base, origin) = match &spec.base {
            BaseCurve::ProjectiveLine => (None, None),
            BaseCurve::Elliptic(e) => {
                if e.is_bad_prime(p) {
                    return Err(Error::BadPrime {
                        p,
                        reason: "base-bad-reduction".into(),
                    });
                }
                let red = e.reduce(p).expect("good reduction");
                let origin = coeffs_q
                    .iter()
                    .map(|c| {
                        field
                            .from_rational(&super::function::FunctionField::value_at_origin(c))
                            .ok_or_else(|| denominator_vanishing(p))
                    })
                    .collect::<Result<Vec<_>>>()?;
                (Some(red), Some(origin))
            }
        };
        let chart_deg = spec
            .infinity_chart()
            .map(|(_, ch)| {
                ch.iter()
                    .flat_map(|r| [r.numer().degree(), r.denom().degree()])
                    .flatten()
                    .max()
                    .unwrap_or(0)
            })
            .unwrap_or(0);
        let precision = 4 * (max_degree(coeffs_q).max(chart_deg) + 2);
        let genus = match &spec.fiber_model {
            FiberModel::Weierstrass(_) => None,
            FiberModel::Hyperelliptic { genus, .. } => Some(*genus as usize),
        };
        Ok(Self {
            field,
            coeffs,
            chart,
            base,
            origin,
            weights: spec.fiber_model.weights(),
            genus,
            precision,
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    /// Coefficient values of the fiber model at `z`.
    pub fn coefficients_at(&self, z: BasePointModP) -> Vec<u64> {
        let f = &self.field;
        match z {
            BasePointModP::Line(t0) => {
                let direct: Option<Vec<u64>> =
                    self.coeffs.iter().map(|c| c.a.eval(t0, f)).collect();
                direct.unwrap_or_else(|| {
                    let x = Series::linear(t0, 1, self.precision);
                    let fns: Vec<_> = self.coeffs.iter().map(|c| (&c.a, None)).collect();
                    self.local_values(&fns, &x, None)
                })
            }
            BasePointModP::Infinity => match (&self.chart, &self.origin) {
                (Some(chart), _) => {
                    let direct: Option<Vec<u64>> = chart.iter().map(|c| c.eval(0, f)).collect();
                    direct.unwrap_or_else(|| {
                        let s = Series::linear(0, 1, self.precision);
                        let fns: Vec<_> = chart.iter().map(|c| (c, None)).collect();
                        self.local_values(&fns, &s, None)
                    })
                }
                (None, Some(origin)) => origin.clone(),
                (None, None) => unreachable!("every base has a point at infinity"),
            },
            BasePointModP::Affine(x0, y0) => {
                let direct: Option<Vec<u64>> = self
                    .coeffs
                    .iter()
                    .map(|c| {
                        let va = c.a.eval(x0, f)?;
                        match &c.b {
                            None => Some(va),
                            Some(b) => Some(f.add(va, f.mul(b.eval(x0, f)?, y0))),
                        }
                    })
                    .collect();
                direct.unwrap_or_else(|| {
                    let base = self.base.as_ref().expect("elliptic base");
                    let (xs, ys) = local_expansion(base, x0, y0, self.precision);
                    let fns: Vec<_> = self.coeffs.iter().map(|c| (&c.a, c.b.as_ref())).collect();
                    self.local_values(&fns, &xs, Some(&ys))
                })
            }
        }
    }

    /// Coefficients `a + b y` expanded along `x = xs(u)`, `y = ys(u)`, then
    /// rescaled to the least regular model.
    fn local_values(
        &self,
        fns: &[(&RatFnModP, Option<&RatFnModP>)],
        xs: &Series,
        ys: Option<&Series>,
    ) -> Vec<u64> {
        let f = &self.field;
        let laurents: Vec<Laurent> = fns
            .iter()
            .map(|(a, b)| {
                let na = Series::compose(&a.num, xs, f);
                let da = Series::compose(&a.den, xs, f);
                let (num, den) = match (b, ys) {
                    (Some(b), Some(ys)) => {
                        let nb = Series::compose(&b.num, xs, f);
                        let db = Series::compose(&b.den, xs, f);
                        (
                            na.mul(&db, f).add(&nb.mul(&da, f).mul(ys, f), f),
                            da.mul(&db, f),
                        )
                    }
                    _ => (na, da),
                };
                Laurent::quotient(&num, &den, f).expect("denominator is a nonzero polynomial")
            })
            .collect();
        let k = laurents
            .iter()
            .zip(&self.weights)
            .filter(|(l, _)| !l.is_zero())
            .map(|(l, &w)| (-l.val).div_euclid(w) + i64::from((-l.val).rem_euclid(w) != 0))
            .max()
            .unwrap_or(0)
            .max(0);
        laurents
            .iter()
            .zip(&self.weights)
            .map(|(l, &w)| {
                if l.is_zero() {
                    0
                } else {
                    l.coeff_after_shift(w * k, 0)
                }
            })
            .collect()
    }

    pub fn fiber_at(&self, z: BasePointModP) -> FiberModP {
        let c = self.coefficients_at(z);
        match self.genus {
            None => FiberModP::Elliptic(EllipticFiberModP::new(
                self.field,
                [c[0], c[1], c[2], c[3], c[4]],
            )),
            Some(g) => FiberModP::Hyperelliptic(
                HyperellipticFiberModP::new(self.field, c, g).expect("validated at load"),
            ),
        }
    }
}

/// Expansions of `(x, y)` at a smooth point of `E` in a local parameter.
fn local_expansion(e: &EllipticFiberModP, x0: u64, y0: u64, prec: usize) -> (Series, Series) {
    let f = &e.field;
    let neg1 = f.neg(1);
    // G = y^2 + a1 xy + a3 y - x^3 - a2 x^2 - a4 x - a6
    let g = |x: &Series, y: &Series| -> Series {
        let lhs = y
            .mul(y, f)
            .add(&x.scale(e.a1, f).mul(y, f), f)
            .add(&y.scale(e.a3, f), f);
        let cubic = Series::compose(&[e.a6, e.a4, e.a2, 1], x, f);
        lhs.add(&cubic.scale(neg1, f), f)
    };
    let gy0 = f.add(f.add(f.mul(2, y0), f.mul(e.a1, x0)), e.a3);
    let iterations = usize::BITS as usize - prec.leading_zeros() as usize + 2;
    if gy0 != 0 {
        let xs = Series::linear(x0, 1, prec);
        let mut ys = Series::constant(y0, prec);
        for _ in 0..iterations {
            let gy = ys
                .scale(2, f)
                .add(&xs.scale(e.a1, f), f)
                .add(&Series::constant(e.a3, prec), f);
            let step = g(&xs, &ys).mul(&gy.inv(f).expect("unit"), f);
            ys = ys.add(&step.scale(neg1, f), f);
        }
        (xs, ys)
    } else {
        let ys = Series::linear(y0, 1, prec);
        let mut xs = Series::constant(x0, prec);
        for _ in 0..iterations {
            // Gx = a1 y - 3x^2 - 2 a2 x - a4
            let gx = ys.scale(e.a1, f).add(
                &Series::compose(&[e.a4, f.mul(2, e.a2), 3], &xs, f).scale(neg1, f),
                f,
            );
            let step = g(&xs, &ys).mul(&gx.inv(f).expect("smooth point"), f);
            xs = xs.add(&step.scale(neg1, f), f);
        }
        (xs, ys)
    }
}
