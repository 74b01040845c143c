//! The chord-tangent group law on a Weierstrass curve over `F_p`.

use super::weierstrass::EllipticFiberModP;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Affine(u64, u64),
    Infinity,
}

pub fn on_curve(e: &EllipticFiberModP, pt: &Point) -> bool {
    match *pt {
        Point::Infinity => true,
        Point::Affine(x, y) => x < e.p() && y < e.p() && e.contains(x, y),
    }
}

pub fn negate(e: &EllipticFiberModP, pt: &Point) -> Point {
    let f = &e.field;
    match *pt {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(x, f.sub(f.neg(y), f.add(f.mul(e.a1, x), e.a3))),
    }
}

fn add_unchecked(e: &EllipticFiberModP, p: &Point, q: &Point) -> Point {
    let f = &e.field;
    let (x1, y1, x2, y2) = match (*p, *q) {
        (Point::Infinity, _) => return *q,
        (_, Point::Infinity) => return *p,
        (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let lambda = if x1 != x2 {
        f.div(f.sub(y2, y1), f.sub(x2, x1)).expect("x1 != x2")
    } else {
        let denom = f.add(f.add(y1, y2), f.add(f.mul(e.a1, x2), e.a3));
        if denom == 0 {
            return Point::Infinity;
        }
        // tangent slope (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
        let num = f.sub(
            f.add(
                f.add(f.mul(3, f.mul(x1, x1)), f.mul(2, f.mul(e.a2, x1))),
                e.a4,
            ),
            f.mul(e.a1, y1),
        );
        f.div(num, denom).expect("nonzero denominator")
    };
    let x3 = f.sub(
        f.sub(f.add(f.mul(lambda, lambda), f.mul(e.a1, lambda)), e.a2),
        f.add(x1, x2),
    );
    let y3 = f.sub(
        f.neg(f.add(y1, f.mul(lambda, f.sub(x3, x1)))),
        f.add(f.mul(e.a1, x3), e.a3),
    );
    Point::Affine(x3, y3)
}

/// `P + Q`, with the point at infinity as identity.
pub fn elliptic_add(e: &EllipticFiberModP, p: &Point, q: &Point) -> Result<Point> {
    if !on_curve(e, p) || !on_curve(e, q) {
        return Err(Error::NotOnCurve);
    }
    Ok(add_unchecked(e, p, q))
}

/// `[n] P` by double-and-add.
pub fn multiply_by_n(e: &EllipticFiberModP, p: &Point, n: i64) -> Result<Point> {
    if n <= 0 {
        return Err(Error::NonPositive {
            what: "n",
            value: n,
        });
    }
    if !on_curve(e, p) {
        return Err(Error::NotOnCurve);
    }
    let mut acc = Point::Infinity;
    let mut base = *p;
    let mut k = n as u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = add_unchecked(e, &acc, &base);
        }
        base = add_unchecked(e, &base, &base);
        k >>= 1;
    }
    Ok(acc)
}

/// All points of a smooth Weierstrass curve, affine points in lexicographic
/// order followed by infinity.
pub fn all_points(e: &EllipticFiberModP) -> Vec<Point> {
    let p = e.p();
    let f = &e.field;
    let mut pts = Vec::new();
    if p < 5 {
        for x in 0..p {
            for y in 0..p {
                if e.contains(x, y) {
                    pts.push(Point::Affine(x, y));
                }
            }
        }
    } else {
        let roots = crate::arith::field::sqrt_table(p);
        let b = e.b_invariants();
        let half = f.inv(2).expect("p odd");
        for x in 0..p {
            // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
            let g = f.add(
                f.mul(f.add(f.mul(f.add(f.mul(4, x), b.b2), x), f.mul(2, b.b4)), x),
                b.b6,
            );
            if let Some(s) = roots[g as usize] {
                let shift = f.add(f.mul(e.a1, x), e.a3);
                let mut ys = vec![f.mul(f.sub(s, shift), half)];
                if s != 0 {
                    ys.push(f.mul(f.sub(f.neg(s), shift), half));
                }
                ys.sort_unstable();
                pts.extend(ys.into_iter().map(|y| Point::Affine(x, y)));
            }
        }
    }
    pts.push(Point::Infinity);
    pts
}
