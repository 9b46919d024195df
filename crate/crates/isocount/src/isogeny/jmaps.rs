//! j-maps of the genus-zero curves X₀(N) in a fixed hauptmodul `t`.
//!
//! Each entry is `j = num(t)/den(t)` with `num` monic of degree `[SL₂(Z) :
//! Γ₀(N)]`. The hauptmodul is the eta quotient with a simple zero at the
//! cusp 0 and a pole at ∞ normalized so that the finite cusps are exactly
//! the roots of `den`; `t = ∞` is the remaining cusp (the pole of `j` there
//! has order `deg num − deg den`, the width of that cusp).

use num_bigint::BigInt;
use num_traits::Zero;
use once_cell::sync::Lazy;

use crate::error::{domain, Error, Result};
use crate::numtheory::Rational;

use super::poly::{rational_roots, IntPolynomial};

/// Levels with a j-map in the registry.
pub const SUPPORTED_LEVELS: [u32; 10] = [2, 3, 4, 5, 6, 8, 9, 12, 16, 18];

/// `j = num(t) / den(t)` for one level.
#[derive(Clone, Debug)]
pub struct JMap {
    pub level: u32,
    pub num: IntPolynomial,
    pub den: IntPolynomial,
    /// Rational non-cusp `t` with `j(t) = 0`.
    pub t_j0: Vec<Rational>,
    /// Rational non-cusp `t` with `j(t) = 1728`.
    pub t_j1728: Vec<Rational>,
}

impl JMap {
    pub fn is_cusp(&self, t: &Rational) -> bool {
        self.den.eval(t).is_zero()
    }

    pub fn eval(&self, t: &Rational) -> Result<Rational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return domain(format!("t = {t} is a cusp of X0({})", self.level));
        }
        Ok(self.num.eval(t) / d)
    }
}

fn p(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c)
}

fn prod(fs: &[(IntPolynomial, u32)]) -> IntPolynomial {
    fs.iter().fold(p(&[1]), |acc, (f, e)| &acc * &f.pow(*e))
}

/// Substitute `s = inner(t)` into `f(s)`.
fn compose(f: &IntPolynomial, inner: &IntPolynomial) -> IntPolynomial {
    let mut acc = IntPolynomial::zero();
    for c in f.coeffs().iter().rev() {
        acc = &(&acc * inner) + &IntPolynomial::constant(c.clone());
    }
    acc
}

fn build(level: u32) -> (IntPolynomial, IntPolynomial) {
    let t = p(&[0, 1]);
    match level {
        2 => (p(&[16, 1]).pow(3), t),
        3 => (prod(&[(p(&[27, 1]), 1), (p(&[3, 1]), 3)]), t),
        4 => (p(&[16, 16, 1]).pow(3), prod(&[(t, 1), (p(&[16, 1]), 1)])),
        5 => (p(&[5, 10, 1]).pow(3), t),
        6 => (
            prod(&[(p(&[6, 1]), 3), (p(&[24, 84, 18, 1]), 3)]),
            prod(&[(t, 1), (p(&[8, 1]), 3), (p(&[9, 1]), 2)]),
        ),
        8 => (
            p(&[16, 128, 80, 16, 1]).pow(3),
            prod(&[(t, 1), (p(&[4, 1]), 2), (p(&[8, 1]), 1)]),
        ),
        9 => (
            prod(&[(p(&[3, 1]), 3), (p(&[3, 27, 9, 1]), 3)]),
            prod(&[(t, 1), (p(&[27, 9, 1]), 1)]),
        ),
        12 => (
            prod(&[(p(&[6, 6, 1]), 3), (p(&[24, 504, 732, 432, 126, 18, 1]), 3)]),
            prod(&[
                (t, 1),
                (p(&[2, 1]), 3),
                (p(&[3, 1]), 4),
                (p(&[4, 1]), 3),
                (p(&[6, 1]), 1),
            ]),
        ),
        16 => {
            // the level-8 numerator evaluated at t(t + 4)
            let s = p(&[0, 4, 1]);
            (
                compose(&p(&[16, 128, 80, 16, 1]), &s).pow(3),
                prod(&[(t, 1), (p(&[4, 1]), 1), (p(&[2, 1]), 4), (p(&[8, 4, 1]), 1)]),
            )
        }
        18 => (
            prod(&[
                (p(&[6, 12, 6, 1]), 3),
                (p(&[24, 1008, 3096, 4404, 3672, 1944, 666, 144, 18, 1]), 3),
            ]),
            prod(&[
                (t, 1),
                (p(&[2, 1]), 9),
                (p(&[3, 1]), 2),
                (p(&[3, 3, 1]), 2),
                (p(&[12, 6, 1]), 1),
            ]),
        ),
        _ => unreachable!("level checked by caller"),
    }
}

fn non_cusp_roots(f: &IntPolynomial, den: &IntPolynomial) -> Vec<Rational> {
    rational_roots(f)
        .expect("registry polynomials are small")
        .into_iter()
        .filter(|t| !den.eval(t).is_zero())
        .collect()
}

static REGISTRY: Lazy<Vec<JMap>> = Lazy::new(|| {
    SUPPORTED_LEVELS
        .iter()
        .map(|&level| {
            let (num, den) = build(level);
            let shifted = &num - &den.scale(&BigInt::from(1728));
            JMap {
                level,
                t_j0: non_cusp_roots(&num, &den),
                t_j1728: non_cusp_roots(&shifted, &den),
                num,
                den,
            }
        })
        .collect()
});

/// The j-map of X₀(N).
pub fn jmap_for(level: u32) -> Result<&'static JMap> {
    REGISTRY
        .iter()
        .find(|j| j.level == level)
        .ok_or(Error::UnsupportedLevel(level))
}

/// Every registered j-map.
pub fn all_jmaps() -> &'static [JMap] {
    &REGISTRY
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::rint;

    fn index(n: u32) -> usize {
        // ψ(N) = N ∏_{p | N} (1 + 1/p)
        let mut psi = n as usize;
        let mut m = n;
        for q in [2u32, 3, 5] {
            if m % q == 0 {
                psi = psi / q as usize * (q as usize + 1);
                while m % q == 0 {
                    m /= q;
                }
            }
        }
        psi
    }

    #[test]
    fn degree_is_the_index() {
        for j in all_jmaps() {
            assert_eq!(j.num.degree().unwrap(), index(j.level), "N={}", j.level);
            assert!(j.den.degree().unwrap() < j.num.degree().unwrap());
            assert_eq!(j.num.leading().unwrap(), &BigInt::from(1));
        }
    }

    // num − 1728·den factors as below; every root over 1728 has even
    // ramification except where a level-2 or level-5 elliptic point sits.
    #[test]
    fn fibre_over_1728() {
        let sq = |f: IntPolynomial| f.pow(2);
        let expected: Vec<(u32, IntPolynomial)> = vec![
            (2, &p(&[64, 1]) * &sq(p(&[-8, 1]))),
            (3, sq(p(&[-27, 18, 1]))),
            (4, &sq(p(&[8, 1])) * &sq(p(&[-8, 16, 1]))),
            (5, &p(&[125, 22, 1]) * &sq(p(&[-1, 4, 1]))),
            (6, &sq(p(&[24, 12, 1])) * &sq(p(&[-72, 504, 192, 24, 1]))),
            (8, &sq(p(&[8, 8, 1])) * &sq(p(&[-8, 128, 80, 16, 1]))),
            (9, sq(p(&[-27, 486, 891, 504, 135, 18, 1]))),
            (
                12,
                &sq(p(&[24, 72, 48, 12, 1]))
                    * &sq(p(&[-72, 3024, 7416, 7488, 4080, 1296, 240, 24, 1])),
            ),
            (
                16,
                &sq(p(&[8, 32, 24, 8, 1])) * &sq(p(&[-8, 512, 1408, 1664, 1104, 448, 112, 16, 1])),
            ),
        ];
        for (n, f) in expected {
            let j = jmap_for(n).unwrap();
            assert_eq!(&j.num - &j.den.scale(&BigInt::from(1728)), f, "N={n}");
        }
    }

    #[test]
    fn fibre_over_1728_is_a_square_for_18() {
        let j = jmap_for(18).unwrap();
        let f = &j.num - &j.den.scale(&BigInt::from(1728));
        // compare with the square of the polynomial whose coefficients are
        // the exact integer square roots found by undetermined coefficients
        let deg = f.degree().unwrap() / 2;
        let mut r = vec![BigInt::from(0); deg + 1];
        r[deg] = BigInt::from(1);
        for k in (0..deg).rev() {
            // coefficient of t^{deg+k} in r² determines r_k
            let mut s = BigInt::from(0);
            for i in (k + 1)..=deg {
                let jdx = deg + k - i;
                if jdx > k && jdx <= deg {
                    s += &r[i] * &r[jdx];
                }
            }
            r[k] = (f.coeff(deg + k) - s) / BigInt::from(2);
        }
        let root = IntPolynomial::new(r);
        assert_eq!(root.pow(2), f);
    }

    #[test]
    fn special_fibres() {
        assert_eq!(jmap_for(2).unwrap().t_j0, vec![rint(-16)]);
        assert_eq!(jmap_for(2).unwrap().t_j1728, vec![rint(-64), rint(8)]);
        assert!(jmap_for(5).unwrap().t_j0.is_empty());
        assert!(jmap_for(5).unwrap().t_j1728.is_empty());
        assert_eq!(jmap_for(6).unwrap().t_j0, vec![rint(-6)]);
        assert!(jmap_for(7).is_err());
        assert!(jmap_for(2).unwrap().eval(&rint(0)).is_err());
        assert_eq!(jmap_for(2).unwrap().eval(&rint(-16)).unwrap(), rint(0));
    }
}
