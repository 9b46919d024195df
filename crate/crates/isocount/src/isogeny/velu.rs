//! Kernel-polynomial constructions: rational 2- and 3-isogenies by Vélu's
//! formulas, and cyclic isogenies of degree `2^a 3^b` as non-backtracking
//! walks in the rational isogeny graph.

use crate::curves::{minimize_i128, Curve};
use crate::error::{Error, Result};

use super::poly::integer_roots;

/// Integer roots of `x³ + Ax + B`; since the cubic is monic these are all
/// of its rational roots, i.e. the x-coordinates of rational 2-torsion.
pub fn two_torsion_xs(c: &Curve) -> Vec<i128> {
    cubic_roots(c.a() as i128, c.b() as i128)
}

fn cubic_roots(a: i128, b: i128) -> Vec<i128> {
    integer_roots(&[b, a, 0, 1]).expect("cubic with 64-bit coefficients")
}

/// Rational roots of the 3-division polynomial `3x⁴ + 6Ax² + 12Bx − A²`,
/// returned as `y = 3x`. Substituting `x = y/3` and scaling by 27 gives the
/// monic `y⁴ + 18Ay² + 108By − 27A²`, whose rational roots are integers.
pub fn three_kernel_ys(c: &Curve) -> Vec<i128> {
    let (a, b) = (c.a() as i128, c.b() as i128);
    integer_roots(&[-27 * a * a, 108 * b, 18 * a, 0, 1]).expect("quartic with 64-bit coefficients")
}

/// Codomain of the 2-isogeny with kernel `{O, (x0, 0)}`, before reduction.
fn two_isogeny_image(a: i128, b: i128, x0: i128) -> (i128, i128) {
    // v = 3x0² + A, w = x0·v; image is (A − 5v, B − 7w)
    (-4 * a - 15 * x0 * x0, b - 21 * x0 * x0 * x0 - 7 * a * x0)
}

/// Codomain of the 3-isogeny whose kernel has x-coordinate `y/3`, scaled by
/// `u = 3` so the coefficients stay integral.
fn three_isogeny_image(a: i128, b: i128, y: i128) -> (i128, i128) {
    // with x0 = y/3: v = 6x0² + 2A, w = 10x0³ + 6Ax0 + 4B
    (-729 * a - 270 * y * y, -19683 * b - 1890 * y * y * y - 10206 * a * y)
}

/// One minimal image curve per rational 2-torsion point.
pub fn two_isogenous_curves(c: &Curve) -> Result<Vec<Curve>> {
    let (a, b) = (c.a() as i128, c.b() as i128);
    two_torsion_xs(c)
        .into_iter()
        .map(|x0| {
            let (a2, b2) = two_isogeny_image(a, b, x0);
            minimize_i128(a2, b2)
        })
        .collect()
}

/// One minimal image curve per rational 3-isogeny kernel.
pub fn three_isogenous_curves(c: &Curve) -> Result<Vec<Curve>> {
    let (a, b) = (c.a() as i128, c.b() as i128);
    three_kernel_ys(c)
        .into_iter()
        .map(|y| {
            let (a3, b3) = three_isogeny_image(a, b, y);
            minimize_i128(a3, b3)
        })
        .collect()
}

/// Kernel-polynomial test for `N ∈ {2, 3, 4}`.
///
/// For `N = 4` the chain `E → E' → E''` of 2-isogenies must not turn back:
/// the dual of the step with kernel `(x0, 0)` has kernel `(−2x0, 0)` on the
/// unreduced model of `E'`, so any other 2-torsion point of `E'` works.
pub fn has_isogeny_route_b(c: &Curve, n: u32) -> Result<bool> {
    match n {
        2 => Ok(!two_torsion_xs(c).is_empty()),
        3 => Ok(!three_kernel_ys(c).is_empty()),
        4 => {
            let (a, b) = (c.a() as i128, c.b() as i128);
            for x0 in two_torsion_xs(c) {
                let (a2, b2) = two_isogeny_image(a, b, x0);
                if cubic_roots(a2, b2).into_iter().any(|x1| x1 != -2 * x0) {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        _ => Err(Error::UnsupportedLevel(n)),
    }
}

fn ell_neighbours(c: &Curve, ell: u32) -> Result<Vec<Curve>> {
    match ell {
        2 => two_isogenous_curves(c),
        3 => three_isogenous_curves(c),
        _ => Err(Error::UnsupportedLevel(ell)),
    }
}

// A path of `steps` ell-isogenies from `cur` that never returns to the curve
// it just left. Two minimal models are isomorphic over Q only if equal, and
// a step back to an isomorphic curve composes to [±ell].
fn walk(cur: &Curve, prev: Option<&Curve>, ell: u32, steps: u32) -> Result<bool> {
    if steps == 0 {
        return Ok(true);
    }
    for next in ell_neighbours(cur, ell)? {
        if Some(&next) == prev {
            continue;
        }
        if walk(&next, Some(cur), ell, steps - 1)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether `c` has a rational cyclic `N`-isogeny for `N = 2^a 3^b`, decided
/// by walking the 2- and 3-isogeny graphs. Independent of any modular curve
/// equations, so it serves as a reference for the j-map test.
pub fn has_cyclic_isogeny_by_walk(c: &Curve, n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::UnsupportedLevel(n));
    }
    let (mut m, mut a, mut b) = (n, 0, 0);
    while m % 2 == 0 {
        m /= 2;
        a += 1;
    }
    while m % 3 == 0 {
        m /= 3;
        b += 1;
    }
    if m != 1 {
        return Err(Error::UnsupportedLevel(n));
    }
    Ok(walk(c, None, 2, a)? && walk(c, None, 3, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(a: i64, b: i64) -> Curve {
        Curve::new(a, b).unwrap()
    }

    #[test]
    fn two_isogenies_of_congruent_number_curve() {
        let images = two_isogenous_curves(&curve(-1, 0)).unwrap();
        assert_eq!(images.len(), 3);
        assert!(two_isogenous_curves(&curve(1, 1)).unwrap().is_empty());
        let image = two_isogenous_curves(&curve(4, 0)).unwrap();
        assert_eq!(image, vec![curve(-1, 0)]);
    }

    #[test]
    fn route_b_examples() {
        assert!(has_isogeny_route_b(&curve(0, 16), 3).unwrap());
        assert!(!has_isogeny_route_b(&curve(1, 1), 2).unwrap());
        assert!(has_isogeny_route_b(&curve(0, 1), 2).unwrap());
        // y² = x³ − x sits in the middle of its 2-isogeny star: every path of
        // length two from it turns back, while y² = x³ + 4x is a leaf
        assert!(!has_isogeny_route_b(&curve(-1, 0), 4).unwrap());
        assert!(has_isogeny_route_b(&curve(4, 0), 4).unwrap());
        assert!(has_isogeny_route_b(&curve(-1, 0), 5).is_err());
    }

    #[test]
    fn every_step_has_a_way_back() {
        for a in -30..=30 {
            for b in -30..=30 {
                let Ok(c) = Curve::new(a, b) else { continue };
                if !c.is_minimal() {
                    continue;
                }
                for e in two_isogenous_curves(&c).unwrap() {
                    assert!(two_isogenous_curves(&e).unwrap().contains(&c), "{c} -> {e}");
                }
                for e in three_isogenous_curves(&c).unwrap() {
                    assert!(three_isogenous_curves(&e).unwrap().contains(&c), "{c} -> {e}");
                }
            }
        }
    }

    #[test]
    fn three_isogeny_of_x3_plus_16() {
        let images = three_isogenous_curves(&curve(0, 16)).unwrap();
        assert_eq!(images.len(), 2);
        assert!(images.contains(&curve(0, -432)));
    }

    #[test]
    fn walk_agrees_with_route_b() {
        for a in -40..=40 {
            for b in -60..=60 {
                let Ok(c) = Curve::new(a, b) else { continue };
                if !c.is_minimal() {
                    continue;
                }
                for n in [2, 3, 4] {
                    assert_eq!(
                        has_cyclic_isogeny_by_walk(&c, n).unwrap(),
                        has_isogeny_route_b(&c, n).unwrap(),
                        "{c}, N={n}"
                    );
                }
            }
        }
    }
}
