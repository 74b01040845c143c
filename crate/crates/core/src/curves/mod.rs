//! Curves over prime fields and over `Q`: point counts, Frobenius traces,
//! the elliptic group law and base-curve reductions.

pub mod base;
pub mod group;
pub mod hyperelliptic;
pub mod weierstrass;

pub use base::{enumerate_base_points, BaseCurve, BasePointModP, EllipticCurveQ};
pub use group::{elliptic_add, multiply_by_n, Point};
pub use hyperelliptic::HyperellipticFiberModP;
pub use weierstrass::{
    count_points_elliptic, count_points_naive, elliptic_trace, EllipticFiberModP,
};

use crate::arith::CharacterTable;

/// A fiber over an `F_p`-point of the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberModP {
    Elliptic(EllipticFiberModP),
    Hyperelliptic(HyperellipticFiberModP),
}

impl FiberModP {
    pub fn genus(&self) -> usize {
        match self {
            FiberModP::Elliptic(_) => 1,
            FiberModP::Hyperelliptic(h) => h.genus,
        }
    }

    pub fn is_singular(&self) -> bool {
        match self {
            FiberModP::Elliptic(e) => e.is_singular(),
            FiberModP::Hyperelliptic(h) => h.is_singular(),
        }
    }
}

/// `p + 1 - #(given projective model)`; for singular fibers this is the
/// compact-support surrogate of the trace.
pub fn fiber_trace(fiber: &FiberModP) -> i64 {
    match fiber {
        FiberModP::Elliptic(e) => elliptic_trace(e),
        FiberModP::Hyperelliptic(h) => {
            let t = CharacterTable::new(h.p()).expect("odd prime");
            h.trace_with(&t)
        }
    }
}

/// [`fiber_trace`] with a shared character table for `p`.
pub fn fiber_trace_with(fiber: &FiberModP, table: &CharacterTable) -> i64 {
    match fiber {
        FiberModP::Elliptic(e) => e.trace_with(table),
        FiberModP::Hyperelliptic(h) => h.trace_with(table),
    }
}
