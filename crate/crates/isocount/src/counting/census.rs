//! Brute-force census over all short Weierstrass models in the height box.

use std::time::Instant;

use rayon::prelude::*;

use crate::curves::{discriminant_part, naive_height, Curve};
use crate::error::Result;
use crate::isogeny::{check_level, has_isogeny, IsogenyFilter};
use crate::numtheory::{iroot_u128, max_below, sieve};

use super::{check_grid, counts_from_heights, split_range, CensusResult, Engine, Enumeration};

/// Census of minimal curves of height `< X` with an `N`-isogeny.
pub struct CensusJob {
    level: u32,
    x: u128,
    amax: i64,
    bmax: i64,
    filter: IsogenyFilter,
    primes: Vec<i64>,
}

impl CensusJob {
    pub fn new(level: u32, x: u64) -> Result<Self> {
        check_level(level)?;
        let x = x as u128;
        let amax = max_below(x, 3) as i64;
        let bmax = max_below(x, 2) as i64;
        // p⁴ | A ≠ 0 needs p ≤ |A|^{1/4}; for A = 0, p⁶ | B needs p ≤ |B|^{1/6}
        let top = iroot_u128(amax as u128, 4).max(iroot_u128(bmax as u128, 6)) as i64;
        let primes = sieve()
            .primes()
            .iter()
            .map(|&p| p as i64)
            .take_while(|&p| p <= top)
            .collect();
        Ok(CensusJob { level, x, amax, bmax, filter: IsogenyFilter::new(level), primes })
    }

    /// Call `visit` on every counted curve with `A ∈ [lo, hi]`.
    fn scan(&self, lo: i64, hi: i64, mut visit: impl FnMut(&Curve)) -> Result<()> {
        let mut bad = Vec::new();
        for a in lo.max(-self.amax)..=hi.min(self.amax) {
            // primes that could make (a, b) non-minimal, with the power of
            // p that b must then be divisible by
            bad.clear();
            for &p in &self.primes {
                if a == 0 || a % p.pow(4) == 0 {
                    bad.push(p.pow(6));
                }
            }
            for b in -self.bmax..=self.bmax {
                if bad.iter().any(|&q| b % q == 0) || discriminant_part(a, b) == 0 {
                    continue;
                }
                if naive_height(a, b) >= self.x {
                    continue;
                }
                let c = Curve::new(a, b)?;
                if self.filter.admits(&c) && has_isogeny(&c, self.level)? {
                    visit(&c);
                }
            }
        }
        Ok(())
    }

    /// Heights of the counted curves with `A ∈ [lo, hi]`.
    pub fn heights(&self, lo: i64, hi: i64) -> Result<Vec<u128>> {
        let mut out = Vec::new();
        self.scan(lo, hi, |c| out.push(c.naive_height()))?;
        Ok(out)
    }

    /// Counted curves with `A ∈ [lo, hi]`, in scan order.
    pub fn curves(&self, lo: i64, hi: i64) -> Result<Vec<Curve>> {
        let mut out = Vec::new();
        self.scan(lo, hi, |c| out.push(*c))?;
        Ok(out)
    }
}

impl Enumeration for CensusJob {
    fn outer_range(&self) -> Option<(i64, i64)> {
        Some((-self.amax, self.amax))
    }

    fn count_range(&self, lo: i64, hi: i64) -> Result<u64> {
        let mut n = 0;
        self.scan(lo, hi, |_| n += 1)?;
        Ok(n)
    }

    fn engine(&self) -> Engine {
        Engine::Census
    }
}

/// Exact number of minimal curves of height `< X` with a rational cyclic
/// `N`-isogeny, by scanning every model in the box.
pub fn census(level: u32, x: u64) -> Result<CensusResult> {
    super::run(Engine::Census, level, x)
}

/// Census counts at every bound of an increasing grid, in one scan.
pub fn census_grid(level: u32, grid: &[u64]) -> Result<Vec<u64>> {
    check_grid(grid)?;
    let job = CensusJob::new(level, *grid.last().unwrap())?;
    let heights: Vec<Vec<u128>> = split_range(job.outer_range(), super::DEFAULT_PARTITIONS)
        .into_par_iter()
        .map(|(lo, hi)| if lo > hi { Ok(Vec::new()) } else { job.heights(lo, hi) })
        .collect::<Result<_>>()?;
    Ok(counts_from_heights(heights.concat(), grid))
}

/// Census results for every bound of a grid, timed as one run.
pub fn census_grid_results(level: u32, grid: &[u64]) -> Result<Vec<CensusResult>> {
    let start = Instant::now();
    let counts = census_grid(level, grid)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(grid
        .iter()
        .zip(counts)
        .map(|(&x, count)| CensusResult { level, x, count, engine: Engine::Census, elapsed })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isogeny::has_isogeny_route_b;

    #[test]
    fn tiny_bounds() {
        assert_eq!(census(3, 1).unwrap().count, 0);
        // (±1, 0) and (0, ±1); the four curves with A, B = ±1 have no 2-torsion
        assert_eq!(census(2, 2).unwrap().count, 4);
        assert!(census(7, 100).is_err());
    }

    #[test]
    fn level_two_at_100_matches_a_plain_loop() {
        let mut expected = 0;
        for a in -4i64..=4 {
            for b in -9i64..=9 {
                let Ok(c) = Curve::new(a, b) else { continue };
                if c.naive_height() < 100 && c.is_minimal() && has_isogeny_route_b(&c, 2).unwrap()
                {
                    expected += 1;
                }
            }
        }
        assert_eq!(census(2, 100).unwrap().count, expected);
    }

    #[test]
    fn grid_matches_single_runs() {
        let grid = [10, 100, 1000, 5000];
        let counts = census_grid(6, &grid).unwrap();
        for (x, c) in grid.iter().zip(counts) {
            assert_eq!(census(6, *x).unwrap().count, c);
        }
        assert!(census_grid(2, &[100, 10]).is_err());
    }
}
