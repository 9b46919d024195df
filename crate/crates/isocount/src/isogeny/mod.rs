//! Detection of rational cyclic N-isogenies.
//!
//! The main test looks for a rational point on the fibre of the j-map of
//! X₀(N) above `j(E)`. Kernel-polynomial constructions (`velu`) give an
//! independent answer for small N and are used to check it.

pub mod jmaps;
pub mod poly;
pub mod prefilter;
pub mod velu;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::curves::{is_rational_square, Curve};
use crate::error::{Error, Result};
use crate::families;
use crate::numtheory::{rational_root_exact, rint, Rational};

pub use jmaps::{jmap_for, JMap, SUPPORTED_LEVELS};
pub use poly::{integer_roots, rational_roots, IntPolynomial};
pub use prefilter::IsogenyFilter;
pub use velu::{
    has_cyclic_isogeny_by_walk, has_isogeny_route_b, three_isogenous_curves, two_isogenous_curves,
};

/// Whether `N` has a registered j-map.
pub fn is_supported_level(n: u32) -> bool {
    SUPPORTED_LEVELS.contains(&n)
}

/// Whether `num_N(t) − j·den_N(t)` has a rational root that is not a cusp.
///
/// This is the j-only criterion; it is exact away from `j ∈ {0, 1728}`.
pub fn has_isogeny_route_a(c: &Curve, n: u32) -> Result<bool> {
    let jm = jmap_for(n)?;
    fibre_has_point(jm, &c.j_invariant())
}

fn fibre_has_point(jm: &JMap, j: &Rational) -> Result<bool> {
    let fibre = &jm.num.scale(j.denom()) - &jm.den.scale(j.numer());
    Ok(rational_roots(&fibre)?.iter().any(|t| !jm.is_cusp(t)))
}

/// Whether the minimal curve `c` has a rational cyclic `N`-isogeny.
///
/// For `j ≠ 0, 1728` the j-map fibre decides. At `j = 0` and `j = 1728` the
/// extra automorphisms mean only some twists carry the isogeny: for
/// `N ≤ 4` the kernel-polynomial test decides, and for larger N the curve
/// must be a quadratic twist of the family fibre at one of the finitely
/// many rational points above `j`.
pub fn has_isogeny(c: &Curve, n: u32) -> Result<bool> {
    let jm = jmap_for(n)?;
    let j = c.j_invariant();
    let special = j.is_zero() || j == rint(1728);
    if !special {
        return fibre_has_point(jm, &j);
    }
    if n <= 4 {
        return has_isogeny_route_b(c, n);
    }
    let points = if j.is_zero() { &jm.t_j0 } else { &jm.t_j1728 };
    if points.is_empty() {
        return Ok(false);
    }
    let fam = families::family(n)?;
    for t in points {
        let (f0, g0) = fam.eval_fg(t);
        let matches = if j.is_zero() {
            // y² = x³ + B is a quadratic twist of y² = x³ + g0 iff B/g0 is a cube
            rational_root_exact(&(Rational::from_integer(BigInt::from(c.b())) / g0), 3).is_some()
        } else {
            // y² = x³ + Ax is a quadratic twist of y² = x³ + f0 x iff A/f0 is a square
            is_rational_square(&(Rational::from_integer(BigInt::from(c.a())) / f0))
        };
        if matches {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Reject levels outside the registry with the dedicated error.
pub fn check_level(n: u32) -> Result<()> {
    if is_supported_level(n) {
        Ok(())
    } else {
        Err(Error::UnsupportedLevel(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: i64, b: i64) -> Curve {
        Curve::new(a, b).unwrap()
    }

    #[test]
    fn small_examples() {
        assert!(has_isogeny(&curve(0, 16), 3).unwrap());
        assert!(has_isogeny(&curve(0, 1), 2).unwrap());
        assert!(!has_isogeny(&curve(1, 1), 2).unwrap());
        assert!(!has_isogeny(&curve(-1, 0), 4).unwrap());
        assert!(has_isogeny(&curve(4, 0), 4).unwrap());
        assert!(has_isogeny(&curve(1, 1), 7).is_err());
    }

    #[test]
    fn route_a_matches_walk_on_a_box() {
        for a in -25..=25 {
            for b in -40..=40 {
                let Ok(c) = Curve::new(a, b) else { continue };
                if !c.is_minimal() {
                    continue;
                }
                for n in [2, 3, 4, 6, 8, 9, 12, 16, 18] {
                    assert_eq!(
                        has_isogeny(&c, n).unwrap(),
                        has_cyclic_isogeny_by_walk(&c, n).unwrap(),
                        "{c}, N={n}"
                    );
                }
            }
        }
    }
}
