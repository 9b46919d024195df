//! Lattice counts, the two-squares identities, the summatory function and
//! growth fits, each against a direct computation.

use std::f64::consts::PI;

use isocount::analytic::{
    davenport_count, fit_growth, fit_with_beta, summatory_b4, BoxRegion, Ellipsoid, Region,
};
use isocount::numtheory::{b_four, r2, rat, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_f64(q: &Rational) -> f64 {
    q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
}

/// Elementary symmetric sums `e_0..e_n`.
fn elementary(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![1.0];
    for &x in xs {
        let mut next = vec![0.0; e.len() + 1];
        for (k, &v) in e.iter().enumerate() {
            next[k] += v;
            next[k + 1] += v * x;
        }
        e = next;
    }
    e
}

fn unit_ball(m: usize) -> f64 {
    [1.0, 2.0, PI, 4.0 * PI / 3.0][m]
}

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=7);
    rat(rng.gen_range(lo * d..=hi * d), d)
}

/// Integer points of an axis-parallel ellipsoid, with the quadratic form
/// cleared of denominators.
fn ellipsoid_points(center: &[Rational], radii: &[Rational]) -> u64 {
    let n = center.len();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let lo = (&center[i] - &radii[i]).ceil().to_integer().to_i64().unwrap();
            let hi = (&center[i] + &radii[i]).floor().to_integer().to_i64().unwrap();
            (lo, hi)
        })
        .collect();
    let mut count = 0;
    let mut p: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        let s: Rational = (0..n)
            .map(|i| {
                let t = (Rational::from_integer(BigInt::from(p[i])) - &center[i]) / &radii[i];
                &t * &t
            })
            .sum();
        if s <= rat(1, 1) {
            count += 1;
        }
        let mut i = 0;
        while i < n && p[i] == ranges[i].1 {
            p[i] = ranges[i].0;
            i += 1;
        }
        if i == n {
            return count;
        }
        p[i] += 1;
    }
}

#[test]
fn lattice_counts_on_random_regions() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x15_0c0u64);
    for trial in 0..100 {
        let n = rng.gen_range(2..=3);
        let (count, volume, bound, region): (u64, f64, f64, Box<dyn Region>) = if trial % 2 == 0 {
            let lo: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, -12, 4)).collect();
            let hi: Vec<Rational> =
                lo.iter().map(|l| l + random_rational(&mut rng, 0, 14)).collect();
            let count: u64 = lo
                .iter()
                .zip(&hi)
                .map(|(l, h)| {
                    let len: BigInt = h.floor().to_integer() - l.ceil().to_integer() + 1;
                    len.to_u64().unwrap()
                })
                .product();
            let sides: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| to_f64(h) - to_f64(l)).collect();
            let e = elementary(&sides);
            let bound = e[..n].iter().sum();
            (count, e[n], bound, Box::new(BoxRegion::new(lo, hi).unwrap()))
        } else {
            let center: Vec<Rational> = (0..n).map(|_| random_rational(&mut rng, -5, 5)).collect();
            let radii: Vec<Rational> = (0..n)
                .map(|_| {
                    let d = rng.gen_range(1..=5);
                    rat(rng.gen_range(d..=9 * d), d)
                })
                .collect();
            let count = ellipsoid_points(&center, &radii);
            let r: Vec<f64> = radii.iter().map(to_f64).collect();
            let e = elementary(&r);
            let volume = unit_ball(n) * e[n];
            // projections onto m coordinates are m-dimensional ellipsoids
            let bound = (0..n).map(|m| unit_ball(m) * e[m]).sum();
            (count, volume, bound, Box::new(Ellipsoid::new(center, radii).unwrap()))
        };
        assert!((count as f64 - volume).abs() <= bound, "trial {trial}: {count} vs {volume} ± {bound}");
        let got = davenport_count(region.as_ref()).unwrap();
        assert_eq!(got.count, count, "trial {trial}");
        assert!((got.volume - volume).abs() < 1e-9 * volume.max(1.0), "trial {trial}");
        assert!((got.error_bound - bound).abs() < 1e-9 * bound, "trial {trial}");
    }
}

#[test]
fn two_squares_count_matches_circle_scan() {
    const N: i64 = 10_000;
    let mut circle = vec![0u64; N as usize + 1];
    for x in -100i64..=100 {
        for y in -100i64..=100 {
            let m = x * x + y * y;
            if m <= N {
                circle[m as usize] += 1;
            }
        }
    }
    for n in 1..=N as u64 {
        assert_eq!(r2(n), circle[n as usize], "n={n}");
    }
}

#[test]
fn b_four_is_a_quarter_of_r2_at_fourth_powers() {
    for n in 1u64..=100 {
        let m = n.pow(4);
        let root = (m as f64).sqrt() as u64 + 1;
        let mut reps = 0u64;
        for x in 0..=root {
            let rest = match m.checked_sub(x * x) {
                Some(r) => r,
                None => break,
            };
            let y = (rest as f64).sqrt() as u64;
            for y in y.saturating_sub(1)..=y + 1 {
                if y * y == rest {
                    // signs of nonzero coordinates
                    reps += match (x, y) {
                        (0, 0) => 1,
                        (0, _) | (_, 0) => 2,
                        _ => 4,
                    };
                }
            }
        }
        assert_eq!(4 * b_four(n), reps, "n={n}");
    }
}

#[test]
fn b_four_is_multiplicative() {
    const N: u64 = 10_000;
    for m in 1..=N {
        for n in 1..=N / m {
            if m.gcd(&n) == 1 {
                assert_eq!(b_four(m * n), b_four(m) * b_four(n), "m={m}, n={n}");
            }
        }
    }
}

#[test]
fn summatory_matches_pointwise_sum() {
    let mut running = 0u64;
    let checkpoints = [1u64, 2, 5, 13, 100, 997, 10_000, 65_537, 200_000];
    let mut next = 0;
    for t in 1..=*checkpoints.last().unwrap() {
        running += b_four(t);
        if t == checkpoints[next] {
            assert_eq!(summatory_b4(t), running, "T={t}");
            next += 1;
        }
    }
    assert_eq!(summatory_b4(0), 0);
}

fn synthetic(alpha: f64, beta: u32, c: f64) -> Vec<(f64, f64)> {
    (3..=12).map(|k| {
        let x = 10f64.powi(k);
        (x, c * x.powf(alpha) * x.ln().powi(beta as i32))
    })
    .collect()
}

proptest! {
    #[test]
    fn fit_recovers_exact_power_laws(alpha in 0.05f64..1.0, beta in 0u32..=2, c in 0.1f64..50.0) {
        let fit = fit_growth(&synthetic(alpha, beta, c), &[0, 1, 2]).unwrap();
        prop_assert_eq!(fit.beta, beta);
        prop_assert!((fit.alpha - alpha).abs() < 1e-9);
        prop_assert!((fit.c / c - 1.0).abs() < 1e-6);
    }

    #[test]
    fn fixed_log_power_shifts_alpha_only(alpha in 0.05f64..1.0, c in 0.1f64..50.0) {
        let samples = synthetic(alpha, 1, c);
        let right = fit_with_beta(&samples, 1).unwrap();
        let wrong = fit_with_beta(&samples, 0).unwrap();
        prop_assert!(right.residual < 1e-12);
        prop_assert!(wrong.residual > right.residual);
        prop_assert!(wrong.alpha > right.alpha);
    }
}

#[test]
fn fit_preconditions() {
    let few = &synthetic(0.5, 0, 1.0)[..3];
    let err = fit_growth(few, &[0, 1]).unwrap_err().to_string();
    assert!(err.contains("need ≥ 4 samples"), "{err}");
    let narrow: Vec<(f64, f64)> = (0..5).map(|k| (1000.0 + k as f64, 10.0)).collect();
    assert!(fit_growth(&narrow, &[0]).is_err());
    let mut with_zero = synthetic(0.5, 0, 1.0);
    with_zero[0].1 = 0.0;
    assert!(fit_growth(&with_zero, &[0]).is_err());
}
