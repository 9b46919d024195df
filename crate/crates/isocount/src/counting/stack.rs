//! Counts of integer section tuples.
//!
//! A tuple `(a_i)` with height `max |a_i|^{p_i} < X` is counted when it
//! satisfies (†): no prime `ℓ` has `ℓ^{12}` dividing every `|a_i|^{p_i}`,
//! i.e. no `ℓ` with `ℓ^{e_i} | a_i` for all `i`, where `e_i = ⌈12/p_i⌉`. The
//! all-zero tuple is never counted. Tuples whose curve would be singular
//! are kept; these are raw tuple counts.

use std::time::Instant;


use crate::error::{domain, Error, Result};
use crate::numtheory::{factorize_u64, max_below};

use super::{check_grid, count_power_free, counts_from_heights, CensusResult, Engine, Enumeration};

/// Weights `p_i` of a weighted height, all dividing `n = 12`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightVector {
    pub p: Vec<u32>,
    pub n: u32,
}

impl HeightVector {
    pub fn new(p: &[u32]) -> Result<Self> {
        if p.is_empty() || p.iter().any(|&w| w == 0 || 12 % w != 0) {
            return domain(format!("height weights {p:?} must divide 12"));
        }
        Ok(HeightVector { p: p.to_vec(), n: 12 })
    }

    /// `max |v_i|^{p_i}`.
    pub fn height(&self, values: &[i64]) -> u128 {
        values
            .iter()
            .zip(&self.p)
            .map(|(&v, &w)| (v.unsigned_abs() as u128).saturating_pow(w))
            .max()
            .unwrap_or(0)
    }

    /// Largest `|v|` allowed in coordinate `i` below `X`.
    pub fn radius(&self, i: usize, x: u64) -> i64 {
        max_below(x as u128, self.p[i]) as i64
    }

    /// `e_i = ⌈n / p_i⌉`: (†) fails at `ℓ` when `ℓ^{e_i} | v_i` for every `i`.
    pub fn exponents(&self) -> Vec<u32> {
        self.p.iter().map(|&w| self.n.div_ceil(w)).collect()
    }
}

/// Primes `ℓ` with `ℓ^e | a`, for `a ≠ 0`.
fn primes_with_power(a: i64, e: u32) -> Vec<u64> {
    factorize_u64(a.unsigned_abs())
        .pairs()
        .iter()
        .filter(|&&(_, k)| k >= e)
        .map(|&(p, _)| p)
        .collect()
}

fn divisible(v: i64, p: u64, e: u32) -> bool {
    v % (p as i64).pow(e) == 0
}

/// Pairs `(a, b)` with weights `(6, 3)` for `N = 2` and `(6, 6)` for `N = 4`.
pub struct PairJob {
    hv: HeightVector,
    amax: i64,
    bmax: i64,
}

impl PairJob {
    pub fn new(level: u32, x: u64) -> Result<Self> {
        let hv = match level {
            2 => HeightVector::new(&[6, 3])?,
            4 => HeightVector::new(&[6, 6])?,
            _ => return Err(Error::UnsupportedLevel(level)),
        };
        Ok(PairJob { amax: hv.radius(0, x), bmax: hv.radius(1, x), hv })
    }

    fn count_at(&self, a: i64) -> u64 {
        let e = self.hv.exponents();
        if a == 0 {
            // b ≠ 0 and e_b-th-power-free
            return 2 * count_power_free(self.bmax as u64, e[1]);
        }
        // inclusion-exclusion over the primes whose e_b-th power b must avoid
        let bad = primes_with_power(a, e[0]);
        let mut total: i64 = 0;
        for mask in 0u32..(1 << bad.len()) {
            let mut d: i64 = 1;
            for (i, &p) in bad.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    d = d.saturating_mul((p as i64).pow(e[1]));
                }
            }
            let multiples = 2 * (self.bmax / d) + 1;
            total += if mask.count_ones() % 2 == 0 { multiples } else { -multiples };
        }
        total as u64
    }
}

impl Enumeration for PairJob {
    fn outer_range(&self) -> Option<(i64, i64)> {
        Some((-self.amax, self.amax))
    }

    fn count_range(&self, lo: i64, hi: i64) -> Result<u64> {
        Ok((lo.max(-self.amax)..=hi.min(self.amax)).map(|a| self.count_at(a)).sum())
    }

    fn engine(&self) -> Engine {
        Engine::Stack
    }
}

/// Triples on `b² = ac`: weights `(6, 3, 2)` for `N = 3` and `(6, 6, 6)` for
/// `N ∈ {6, 8, 9}`.
pub struct TripleJob {
    hv: HeightVector,
    amax: i64,
    bmax: i64,
    cmax: i64,
}

impl TripleJob {
    pub fn new(level: u32, x: u64) -> Result<Self> {
        let hv = match level {
            3 => HeightVector::new(&[6, 3, 2])?,
            6 | 8 | 9 => HeightVector::new(&[6, 6, 6])?,
            _ => return Err(Error::UnsupportedLevel(level)),
        };
        Ok(TripleJob {
            amax: hv.radius(0, x),
            bmax: hv.radius(1, x),
            cmax: hv.radius(2, x),
            hv,
        })
    }

    fn count_at(&self, a: i64) -> u64 {
        let e = self.hv.exponents();
        if a == 0 {
            // b² = 0 forces b = 0; then c ≠ 0 must be e_c-th-power-free
            return 2 * count_power_free(self.cmax as u64, e[2]);
        }
        // a | b² exactly when s | b, s = ∏ ℓ^{⌈v_ℓ(a)/2⌉}
        let fac = factorize_u64(a.unsigned_abs());
        let s: i64 = fac.pairs().iter().map(|&(p, k)| (p as i64).pow(k.div_ceil(2))).product();
        let bad = primes_with_power(a, e[0]);
        let mut n = 0;
        let mut b = -(self.bmax / s) * s;
        while b <= self.bmax {
            let c = (b as i128 * b as i128 / a as i128) as i64;
            if c.abs() <= self.cmax && !bad.iter().any(|&p| divisible(b, p, e[1]) && divisible(c, p, e[2])) {
                n += 1;
            }
            b += s;
        }
        n
    }
}

impl Enumeration for TripleJob {
    fn outer_range(&self) -> Option<(i64, i64)> {
        Some((-self.amax, self.amax))
    }

    fn count_range(&self, lo: i64, hi: i64) -> Result<u64> {
        Ok((lo.max(-self.amax)..=hi.min(self.amax)).map(|a| self.count_at(a)).sum())
    }

    fn engine(&self) -> Engine {
        Engine::Stack
    }
}

/// Triples on `b² − a²c − 4bc + 8c² = 0` with weights `(6, 3, 3)`.
pub struct Quadric5Job {
    hv: HeightVector,
    x: u64,
    amax: i64,
}

impl Quadric5Job {
    pub fn new(x: u64) -> Self {
        let hv = HeightVector::new(&[6, 3, 3]).expect("weights divide 12");
        Quadric5Job { amax: hv.radius(0, x), hv, x }
    }

    /// Solutions with first coordinate `a ≠ 0`, (†) not yet applied.
    fn solutions_at(&self, a: i64) -> Vec<(i64, i64)> {
        let a2 = a as i128 * a as i128;
        let mut out = Vec::new();
        // U = 4b − 8c, V = 8c − a², U² + V² = a⁴
        for (u, v) in two_square_representations_of_fourth_power(a.unsigned_abs()) {
            let v8 = v + a2;
            if v8 % 8 != 0 {
                continue;
            }
            let c = v8 / 8;
            let u8 = u + 8 * c;
            if u8 % 4 != 0 {
                continue;
            }
            out.push(((u8 / 4) as i64, c as i64));
        }
        out
    }

    fn count_at(&self, a: i64) -> u64 {
        if a == 0 {
            // only (0, 0, 0), which is excluded
            return 0;
        }
        let e = self.hv.exponents();
        let bad = primes_with_power(a, e[0]);
        self.solutions_at(a)
            .into_iter()
            .filter(|&(b, c)| self.hv.height(&[a, b, c]) < self.x as u128)
            .filter(|&(b, c)| !bad.iter().any(|&p| divisible(b, p, e[1]) && divisible(c, p, e[2])))
            .count() as u64
    }

    /// Heights of the counted triples with `a ∈ [lo, hi]`.
    fn heights(&self, lo: i64, hi: i64) -> Vec<u128> {
        let e = self.hv.exponents();
        let mut out = Vec::new();
        for a in lo.max(-self.amax)..=hi.min(self.amax) {
            if a == 0 {
                continue;
            }
            let bad = primes_with_power(a, e[0]);
            for (b, c) in self.solutions_at(a) {
                if !bad.iter().any(|&p| divisible(b, p, e[1]) && divisible(c, p, e[2])) {
                    let h = self.hv.height(&[a, b, c]);
                    if h < self.x as u128 {
                        out.push(h);
                    }
                }
            }
        }
        out
    }
}

impl Enumeration for Quadric5Job {
    fn outer_range(&self) -> Option<(i64, i64)> {
        Some((-self.amax, self.amax))
    }

    fn count_range(&self, lo: i64, hi: i64) -> Result<u64> {
        Ok((lo.max(-self.amax)..=hi.min(self.amax)).map(|a| self.count_at(a)).sum())
    }

    fn engine(&self) -> Engine {
        Engine::Stack
    }
}

/// All `(U, V) ∈ Z²` with `U² + V² = m⁴`, from the factorization of `m` in
/// the Gaussian integers.
fn two_square_representations_of_fourth_power(m: u64) -> Vec<(i128, i128)> {
    type G = (i128, i128);
    let mul = |x: G, y: G| -> G { (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0) };
    let pow = |x: G, k: u32| -> G { (0..k).fold((1, 0), |acc, _| mul(acc, x)) };
    // each entry lists the Gaussian integers of norm p^{4k} up to units
    let mut choices: Vec<Vec<G>> = Vec::new();
    for &(p, k) in factorize_u64(m).pairs() {
        let e = 4 * k;
        let p = p as i128;
        match p % 4 {
            2 => choices.push(vec![pow((1, 1), e)]),
            3 => choices.push(vec![(p.pow(e / 2), 0)]),
            _ => {
                let pi = gaussian_prime_over(p);
                let conj = (pi.0, -pi.1);
                choices.push((0..=e).map(|i| mul(pow(pi, i), pow(conj, e - i))).collect());
            }
        }
    }
    let mut reps: Vec<G> = vec![(1, 0)];
    for opts in choices {
        reps = reps.iter().flat_map(|&r| opts.iter().map(move |&o| mul(r, o))).collect();
    }
    let units: [G; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
    let mut out: Vec<G> = reps.iter().flat_map(|&r| units.iter().map(move |&u| mul(r, u))).collect();
    out.sort_unstable();
    out.dedup();
    out
}

// x + iy with x² + y² = p for a prime p ≡ 1 mod 4
fn gaussian_prime_over(p: i128) -> (i128, i128) {
    let mut x = 1;
    while x * x < p {
        let y2 = p - x * x;
        let y = (y2 as f64).sqrt() as i128;
        for y in [y - 1, y, y + 1] {
            if y > 0 && y * y == y2 {
                return (x, y);
            }
        }
        x += 1;
    }
    unreachable!("{p} is not a sum of two squares")
}

fn timed(engine: Engine, level: u32, x: u64, f: impl FnOnce() -> Result<u64>) -> Result<CensusResult> {
    let start = Instant::now();
    let count = f()?;
    Ok(CensusResult { level, x, count, engine, elapsed: start.elapsed().as_secs_f64() })
}

/// (†)-minimal pairs below `X` for `N ∈ {2, 4}`.
pub fn stack_count_pairs(level: u32, x: u64) -> Result<CensusResult> {
    let job = PairJob::new(level, x)?;
    timed(Engine::Stack, level, x, || super::count_partitioned(&job, super::DEFAULT_PARTITIONS))
}

/// (†)-minimal triples on `b² = ac` below `X` for `N ∈ {3, 6, 8, 9}`.
pub fn stack_count_triples(level: u32, x: u64) -> Result<CensusResult> {
    let job = TripleJob::new(level, x)?;
    timed(Engine::Stack, level, x, || super::count_partitioned(&job, super::DEFAULT_PARTITIONS))
}

/// (†)-minimal triples on the level-5 quadric below `X`.
pub fn count_quadric5(x: u64) -> Result<CensusResult> {
    let job = Quadric5Job::new(x);
    timed(Engine::Stack, 5, x, || super::count_partitioned(&job, super::DEFAULT_PARTITIONS))
}

/// Quadric counts at every bound of an increasing grid.
pub fn quadric5_grid(grid: &[u64]) -> Result<Vec<u64>> {
    check_grid(grid)?;
    let job = Quadric5Job::new(*grid.last().unwrap());
    Ok(counts_from_heights(job.heights(-job.amax, job.amax), grid))
}
