//! Geometric rank bounds and conductor pullback along unramified covers.

use serde::Serialize;

use crate::error::{Error, Result};

fn non_negative(what: &'static str, value: i64) -> Result<()> {
    if value < 0 {
        return Err(Error::Negative { what, value });
    }
    Ok(())
}

/// `2 g_X (2 g_C - 2) + f + 4 dim B`. May be negative, in which case the
/// rank is forced to vanish.
pub fn geometric_bound(g_x: i64, g_c: i64, f: i64, dim_b: i64) -> Result<i64> {
    if g_x < 1 {
        return Err(Error::NonPositive {
            what: "g_X",
            value: g_x,
        });
    }
    non_negative("g_C", g_c)?;
    non_negative("f", f)?;
    non_negative("dim B", dim_b)?;
    Ok(2 * g_x * (2 * g_c - 2) + f + 4 * dim_b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pullback {
    pub f_prime: u64,
    pub g_c_prime: u64,
    /// `2 g_C' - 2 + f'`
    pub lhs: i64,
    /// `|A| (2 g_C - 2 + f)`
    pub rhs: i64,
}

impl Pullback {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Conductor degree and genus of the pulled-back family along an unramified
/// cover of degree `group_order`.
pub fn pullback_conductor(f: u64, g_c: u64, group_order: u64) -> Result<Pullback> {
    if group_order == 0 {
        return Err(Error::NonPositive {
            what: "group order",
            value: 0,
        });
    }
    if g_c == 0 && group_order > 1 {
        return Err(Error::InvalidConfig(
            "the projective line has no nontrivial unramified covers".into(),
        ));
    }
    let f_prime = group_order * f;
    let two_g_minus_two = group_order as i64 * (2 * g_c as i64 - 2);
    let g_c_prime = ((two_g_minus_two + 2) / 2) as u64;
    Ok(Pullback {
        f_prime,
        g_c_prime,
        lhs: 2 * g_c_prime as i64 - 2 + f_prime as i64,
        rhs: group_order as i64 * (2 * g_c as i64 - 2 + f as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bound_values() {
        assert_eq!(geometric_bound(1, 0, 4, 0).unwrap(), 0);
        assert_eq!(geometric_bound(2, 1, 5, 1).unwrap(), 9);
        assert!(geometric_bound(0, 1, 1, 0).is_err());
        assert!(geometric_bound(1, 1, -1, 0).is_err());
    }

    #[test]
    fn pullback_examples() {
        let p = pullback_conductor(6, 1, 4).unwrap();
        assert_eq!((p.f_prime, p.g_c_prime, p.lhs, p.rhs), (24, 1, 24, 24));
        let p = pullback_conductor(4, 2, 9).unwrap();
        assert_eq!((p.f_prime, p.g_c_prime, p.lhs), (36, 10, 54));
        assert!(p.holds());
        let id = pullback_conductor(7, 0, 1).unwrap();
        assert_eq!((id.f_prime, id.g_c_prime), (7, 0));
        assert!(pullback_conductor(1, 1, 0).is_err());
        assert!(pullback_conductor(1, 0, 2).is_err());
    }

    proptest! {
        #[test]
        fn elliptic_specialization(g_c in 0i64..20, f in 0i64..500) {
            prop_assert_eq!(geometric_bound(1, g_c, f, 0).unwrap(), 4 * g_c - 4 + f);
        }

        #[test]
        fn pullback_always_balances(g_c in 1u64..50, f in 0u64..1000, n in 1u64..100_000) {
            prop_assert!(pullback_conductor(f, g_c, n).unwrap().holds());
        }
    }
}
