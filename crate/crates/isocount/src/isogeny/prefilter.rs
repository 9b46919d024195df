//! Cheap necessary conditions for an N-isogeny, used to skip most curves
//! before the j-map test.
//!
//! If `2 | N` the curve needs rational 2-torsion and if `3 | N` a rational
//! 3-isogeny kernel. Both come down to an integer root of a fixed monic
//! polynomial in `(A, B)`, so a root must exist modulo every small prime;
//! residue tables make that check a handful of lookups.

use crate::curves::Curve;

use super::velu::{three_kernel_ys, two_torsion_xs};

const PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

struct Table {
    p: u64,
    cubic: Vec<bool>,
    quartic: Vec<bool>,
}

impl Table {
    fn new(p: u64) -> Self {
        let mut cubic = vec![false; (p * p) as usize];
        let mut quartic = vec![false; (p * p) as usize];
        for a in 0..p {
            for b in 0..p {
                let idx = (a * p + b) as usize;
                cubic[idx] = (0..p).any(|x| (x * x % p * x + a * x + b) % p == 0);
                // y⁴ + 18Ay² + 108By − 27A² with the negative term moved over
                quartic[idx] = (0..p).any(|y| {
                    let y2 = y * y % p;
                    let lhs = (y2 * y2 + 18 % p * a % p * y2 + 108 % p * b % p * y) % p;
                    lhs == 27 % p * (a * a % p) % p
                });
            }
        }
        Table { p, cubic, quartic }
    }

    fn index(&self, a: i64, b: i64) -> usize {
        let p = self.p as i64;
        (a.rem_euclid(p) * p + b.rem_euclid(p)) as usize
    }
}

/// Necessary-condition filter for one level.
pub struct IsogenyFilter {
    need2: bool,
    need3: bool,
    tables: Vec<Table>,
}

impl IsogenyFilter {
    pub fn new(level: u32) -> Self {
        IsogenyFilter {
            need2: level % 2 == 0,
            need3: level % 3 == 0,
            tables: PRIMES.iter().map(|&p| Table::new(p)).collect(),
        }
    }

    /// False only when the curve certainly has no `level`-isogeny.
    pub fn admits(&self, c: &Curve) -> bool {
        let (a, b) = (c.a(), c.b());
        for t in &self.tables {
            let i = t.index(a, b);
            if (self.need2 && !t.cubic[i]) || (self.need3 && !t.quartic[i]) {
                return false;
            }
        }
        (!self.need2 || !two_torsion_xs(c).is_empty())
            && (!self.need3 || !three_kernel_ys(c).is_empty())
    }
}
