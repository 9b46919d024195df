//! Counting pipelines.
//!
//! Every engine enumerates over an outer integer variable (`A` for the
//! census and the family enumeration, `a` for section tuples). A job is
//! built once for a given `(N, X)` and then counts any contiguous range of
//! the outer variable; counts over disjoint ranges add up to the total, so
//! callers can split the work however they like.

mod census;
mod param;
mod stack;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};

pub use census::{census, census_grid, census_grid_results, CensusJob};
pub use param::{count_j0_3, param_count, param_curves, param_grid, param_grid_results, ParamJob};
pub use stack::{
    count_quadric5, quadric5_grid, stack_count_pairs, stack_count_triples, HeightVector,
    PairJob, Quadric5Job, TripleJob,
};

/// Which pipeline produced a count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Census,
    Param,
    Stack,
}

impl Engine {
    pub fn tag(self) -> &'static str {
        match self {
            Engine::Census => "census",
            Engine::Param => "param",
            Engine::Stack => "stack",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "census" => Ok(Engine::Census),
            "param" => Ok(Engine::Param),
            "stack" => Ok(Engine::Stack),
            _ => domain(format!("unknown engine '{s}'")),
        }
    }
}

/// One count `𝒩(N, X)` with its provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusResult {
    pub level: u32,
    pub x: u64,
    pub count: u64,
    pub engine: Engine,
    /// Wall-clock seconds.
    pub elapsed: f64,
}

/// A counting job for fixed `(N, X)`, split over its outer variable.
pub trait Enumeration: Sync {
    /// Inclusive range of the outer variable, `None` when nothing is counted.
    fn outer_range(&self) -> Option<(i64, i64)>;

    /// Count of objects whose outer variable lies in `[lo, hi]`.
    fn count_range(&self, lo: i64, hi: i64) -> Result<u64>;

    fn engine(&self) -> Engine;
}

/// Split `[lo, hi]` into exactly `parts` contiguous pieces, the first ones
/// one longer when the length does not divide evenly. Pieces past the end
/// of a short range are empty (`lo > hi`).
pub fn split_range(range: Option<(i64, i64)>, parts: usize) -> Vec<(i64, i64)> {
    let parts = parts.max(1);
    let Some((lo, hi)) = range else {
        return vec![(1, 0); parts];
    };
    let len = (hi - lo + 1).max(0) as u64;
    let (q, r) = (len / parts as u64, len % parts as u64);
    let mut out = Vec::with_capacity(parts);
    let mut start = lo;
    for k in 0..parts as u64 {
        let size = (q + u64::from(k < r)) as i64;
        out.push((start, start + size - 1));
        start += size;
    }
    out
}

/// Total over `parts` partitions, evaluated in parallel on the current
/// rayon pool.
pub fn count_partitioned(job: &dyn Enumeration, parts: usize) -> Result<u64> {
    split_range(job.outer_range(), parts)
        .into_par_iter()
        .map(|(lo, hi)| if lo > hi { Ok(0) } else { job.count_range(lo, hi) })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Build the job for `engine` at level `N` and bound `X`.
///
/// The stack engine picks the pair, triple or quadric count by level.
pub fn build_job(engine: Engine, level: u32, x: u64) -> Result<Box<dyn Enumeration>> {
    Ok(match engine {
        Engine::Census => Box::new(CensusJob::new(level, x)?),
        Engine::Param => Box::new(ParamJob::new(level, x)?),
        Engine::Stack => match level {
            2 | 4 => Box::new(PairJob::new(level, x)?),
            3 | 6 | 8 | 9 => Box::new(TripleJob::new(level, x)?),
            5 => Box::new(Quadric5Job::new(x)),
            _ => return Err(Error::UnsupportedLevel(level)),
        },
    })
}

/// Run a job to completion with the default partitioning.
pub fn run(engine: Engine, level: u32, x: u64) -> Result<CensusResult> {
    let start = Instant::now();
    let job = build_job(engine, level, x)?;
    let count = count_partitioned(job.as_ref(), DEFAULT_PARTITIONS)?;
    Ok(CensusResult { level, x, count, engine, elapsed: start.elapsed().as_secs_f64() })
}

/// Partitions used when the caller does not choose.
pub const DEFAULT_PARTITIONS: usize = 64;

/// Counts at each bound of `grid`, from the sorted heights of everything
/// counted at the largest bound.
pub(crate) fn counts_from_heights(mut heights: Vec<u128>, grid: &[u64]) -> Vec<u64> {
    heights.sort_unstable();
    grid.iter()
        .map(|&x| heights.partition_point(|&h| h < x as u128) as u64)
        .collect()
}

/// Möbius function on `1..=n`.
pub(crate) fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![1i8; n + 1];
    let mut is_composite = vec![false; n + 1];
    for p in 2..=n {
        if is_composite[p] {
            continue;
        }
        for k in (p..=n).step_by(p) {
            if k > p {
                is_composite[k] = true;
            }
            mu[k] = -mu[k];
        }
        let pp = p * p;
        for k in (pp..=n).step_by(pp) {
            mu[k] = 0;
        }
    }
    if n >= 1 {
        mu[0] = 0;
    }
    mu
}

/// `#{1 ≤ m ≤ bound : m is k-th-power-free}`.
pub(crate) fn count_power_free(bound: u64, k: u32) -> u64 {
    if bound == 0 {
        return 0;
    }
    let top = crate::numtheory::iroot_u128(bound as u128, k) as usize;
    let mu = mobius_table(top);
    let mut total: i64 = 0;
    for (d, &m) in mu.iter().enumerate().skip(1) {
        if m != 0 {
            total += m as i64 * (bound / (d as u64).pow(k)) as i64;
        }
    }
    total as u64
}

pub(crate) fn check_grid(grid: &[u64]) -> Result<()> {
    if grid.is_empty() {
        return domain("empty height grid");
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return domain("height grid must be strictly increasing");
    }
    Ok(())
}
