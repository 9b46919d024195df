//! Randomized invariants of curves and the isogeny test.

use isocount::counting::split_range;
use isocount::curves::{minimize, naive_height};
use isocount::isogeny::{has_cyclic_isogeny_by_walk, has_isogeny, has_isogeny_route_b};
use isocount::Curve;
use proptest::prelude::*;

const WALK_LEVELS: [u32; 9] = [2, 3, 4, 6, 8, 9, 12, 16, 18];

fn nonsingular(a: i64, b: i64) -> bool {
    4 * (a as i128).pow(3) + 27 * (b as i128).pow(2) != 0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn j_line_test_agrees_with_graph_walk(a in -300i64..300, b in -3000i64..3000) {
        prop_assume!(nonsingular(a, b));
        let c = Curve::new(a, b).unwrap();
        for n in WALK_LEVELS {
            prop_assert_eq!(has_isogeny(&c, n).unwrap(), has_cyclic_isogeny_by_walk(&c, n).unwrap(), "N={}", n);
        }
    }

    #[test]
    fn j_line_test_agrees_with_kernel_test(a in -2000i64..2000, b in -50_000i64..50_000) {
        prop_assume!(nonsingular(a, b));
        let c = Curve::new(a, b).unwrap();
        for n in [2, 3, 4] {
            prop_assert_eq!(has_isogeny(&c, n).unwrap(), has_isogeny_route_b(&c, n).unwrap(), "N={}", n);
        }
    }

    #[test]
    fn isogenies_survive_quadratic_twists(a in -200i64..200, b in -2000i64..2000, d in prop::sample::select(vec![-7i64, -3, -2, -1, 2, 3, 5, 6, 10])) {
        prop_assume!(nonsingular(a, b));
        let c = Curve::new(a, b).unwrap();
        let t = c.twist(d).unwrap();
        for n in [2, 3, 4, 5, 6, 8, 9] {
            prop_assert_eq!(has_isogeny(&c, n).unwrap(), has_isogeny(&t, n).unwrap(), "N={} d={}", n, d);
        }
    }

    #[test]
    fn minimal_model_ignores_scaling(a in -500i64..500, b in -5000i64..5000, u in 1i64..6) {
        prop_assume!(nonsingular(a, b));
        let m = minimize(a, b).unwrap();
        prop_assert_eq!(minimize(a * u.pow(4), b * u.pow(6)).unwrap(), m);
        prop_assert!(m.is_minimal());
        prop_assert!(m.naive_height() <= naive_height(a, b));
        prop_assert_eq!(m.j_invariant(), Curve::new(a, b).unwrap().j_invariant());
    }

    #[test]
    fn partitions_tile_the_range(lo in -10_000i64..10_000, len in 0i64..5_000, parts in 1usize..200) {
        let hi = lo + len - 1;
        let pieces = split_range(Some((lo, hi)), parts);
        prop_assert_eq!(pieces.len(), parts);
        let mut next = lo;
        for (a, b) in pieces {
            prop_assert_eq!(a, next);
            prop_assert!(b >= a - 1);
            next = b + 1;
        }
        prop_assert_eq!(next, hi + 1);
    }
}
