//! Enumeration of twist families.
//!
//! Every curve with an N-isogeny is a quadratic twist of a fibre
//! `y² = x³ + f(t)x + g(t)` of the level's family. Writing `t = a/b^m` in
//! lowest terms and clearing denominators gives integer forms `F(a, b)`,
//! `G(a, b)`; dividing out the largest `u` with `u² | F`, `u³ | G` leaves a
//! twist-minimal pair `(F₁, G₁)`, and the curves of height `< X` in its twist
//! class are exactly `(d²F₁, ±d³G₁)` for squarefree `d` with
//! `d⁶·max(|F₁|³, G₁²) < X`.
//!
//! The search region for `(a, b)` is made finite by two facts. The height
//! `max(|F|³, G²)` is weighted homogeneous, so it is at least
//! `κ·max(|a|^{1/m}, b)^{6n}` with `κ` its minimum on the unit sphere of that
//! weighting; and `u` is bounded, by a local search for the levels with
//! `m = 1` and by `u ≤ 3c`, `c = ∏_{p | b, p² | a} p`, for `N = 3`.
//! Violations of either bound are reported as errors, never skipped.

use std::collections::{HashMap, HashSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::analytic::square_boundary_minimum;
use crate::curves::discriminant_part;
use crate::error::{domain, Error, Result};
use crate::families::{family, FamilySpec, FAMILY_LEVELS};
use crate::numtheory::{factorize_u128, factorize_u64, is_power_free, max_below, val_i128, Rational};
use crate::Curve;

use super::{check_grid, count_power_free, counts_from_heights, CensusResult, Engine, Enumeration};

/// `F(a, b) = Σ f_i a^i b^{2n − m i}` and `G(a, b) = Σ g_i a^i b^{3n − m i}`.
#[derive(Clone, Debug)]
struct Forms {
    m: u32,
    n: u32,
    f: Vec<i128>,
    g: Vec<i128>,
}

impl Forms {
    fn from_family(fam: &FamilySpec) -> Result<Self> {
        let lam = BigInt::from(fam.lambda);
        let conv = |c: &BigInt, k: u32| -> Result<i128> {
            let v = c * lam.pow(k);
            let (q, r) = v.div_rem(&fam.den);
            if !r.is_zero() {
                return domain("family scaling does not clear denominators");
            }
            q.to_i128().ok_or(Error::Overflow("family coefficients"))
        };
        Ok(Forms {
            m: fam.m,
            n: fam.n,
            f: fam.f.coeffs().iter().map(|c| conv(c, 2)).collect::<Result<_>>()?,
            g: fam.g.coeffs().iter().map(|c| conv(c, 3)).collect::<Result<_>>()?,
        })
    }

    fn eval_one(coeffs: &[i128], weight: u32, m: u32, a: i128, b: i128) -> Option<i128> {
        let mut acc: i128 = 0;
        for (i, &c) in coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let term = c
                .checked_mul(a.checked_pow(i as u32)?)?
                .checked_mul(b.checked_pow(weight - m * i as u32)?)?;
            acc = acc.checked_add(term)?;
        }
        Some(acc)
    }

    /// `(F, G)` at `(a, b)`, or `None` if a value leaves 128 bits.
    fn eval(&self, a: i128, b: i128) -> Option<(i128, i128)> {
        let f = Self::eval_one(&self.f, 2 * self.n, self.m, a, b);
        let g = Self::eval_one(&self.g, 3 * self.n, self.m, a, b);
        // a sum can overflow while the value does not; fall back to BigInt
        match (f, g) {
            (Some(f), Some(g)) => Some((f, g)),
            _ => {
                let fb = self.eval_big(&self.f, 2 * self.n, a, b);
                let gb = self.eval_big(&self.g, 3 * self.n, a, b);
                Some((fb.to_i128()?, gb.to_i128()?))
            }
        }
    }

    fn eval_big(&self, coeffs: &[i128], weight: u32, a: i128, b: i128) -> BigInt {
        let (a, b) = (BigInt::from(a), BigInt::from(b));
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| BigInt::from(c) * a.pow(i as u32) * b.pow(weight - self.m * i as u32))
            .sum()
    }

    fn eval_f64(&self, x: f64, y: f64) -> (f64, f64) {
        let e = |coeffs: &[i128], weight: u32| -> f64 {
            coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c as f64 * x.powi(i as i32) * y.powi((weight - self.m * i as u32) as i32))
                .sum()
        };
        (e(&self.f, 2 * self.n), e(&self.g, 3 * self.n))
    }

    /// `(F mod ℓ^j, G mod ℓ^j)` for a residue class.
    fn eval_mod(&self, a: u128, b: u128, modulus: u128) -> (u128, u128) {
        let e = |coeffs: &[i128], weight: u32| -> u128 {
            let mut acc = 0u128;
            for (i, &c) in coeffs.iter().enumerate() {
                let mut term = c.rem_euclid(modulus as i128) as u128;
                for _ in 0..i {
                    term = term * a % modulus;
                }
                for _ in 0..(weight - self.m * i as u32) {
                    term = term * b % modulus;
                }
                acc = (acc + term) % modulus;
            }
            acc
        };
        (e(&self.f, 2 * self.n), e(&self.g, 3 * self.n))
    }
}

/// Largest `k` with `ℓ^{2k} | F(a, b)` and `ℓ^{3k} | G(a, b)` over coprime
/// `(a, b)`, found by refining residue classes mod `ℓ^j` until the
/// valuations that decide `k` are pinned down.
fn max_twist_exponent(forms: &Forms, ell: u64) -> Result<u32> {
    let ell = ell as u128;
    let val = |v: u128, j: u32| -> Option<u32> {
        if v == 0 {
            return None;
        }
        let mut k = 0;
        let mut v = v;
        while v % ell == 0 && k < j {
            v /= ell;
            k += 1;
        }
        Some(k)
    };
    let mut best = 0;
    let mut stack: Vec<(u128, u128, u32, u128)> = Vec::new();
    for a in 0..ell {
        for b in 0..ell {
            if a % ell != 0 || b % ell != 0 {
                stack.push((a, b, 1, ell));
            }
        }
    }
    while let Some((a, b, j, modulus)) = stack.pop() {
        let (fv, gv) = forms.eval_mod(a, b, modulus);
        let settled = match (val(fv, j), val(gv, j)) {
            (Some(x), Some(y)) => Some((x / 2).min(y / 3)),
            (Some(x), None) if j / 3 >= x / 2 => Some(x / 2),
            (None, Some(y)) if j / 2 >= y / 3 => Some(y / 3),
            _ => None,
        };
        if let Some(k) = settled {
            best = best.max(k);
            continue;
        }
        let next = modulus * ell;
        if next > 1 << 62 {
            return domain(format!("twist exponent at {ell} is unbounded for level {}", forms.n));
        }
        for x in 0..ell {
            for y in 0..ell {
                stack.push((a + x * modulus, b + y * modulus, j + 1, next));
            }
        }
    }
    Ok(best)
}

/// Divide out the largest `u` with `u² | F`, `u³ | G`; returns `(F₁, G₁, u)`.
fn twist_reduce(f: i128, g: i128) -> Result<(i128, i128, u128)> {
    let gcd = f.unsigned_abs().gcd(&g.unsigned_abs());
    if gcd == 0 {
        return domain("both family forms vanish");
    }
    let (mut f, mut g, mut u) = (f, g, 1u128);
    for &(p, _) in factorize_u128(gcd)?.pairs() {
        let vf = if f == 0 { u32::MAX } else { val_i128(f, p) };
        let vg = if g == 0 { u32::MAX } else { val_i128(g, p) };
        let k = (vf / 2).min(vg / 3);
        let pk = (p as i128).pow(k);
        f /= pk * pk;
        g /= pk * pk * pk;
        u *= pk as u128;
    }
    Ok((f, g, u))
}

fn height(f: i128, g: i128) -> u128 {
    let f = f.unsigned_abs();
    let g = g.unsigned_abs();
    f.saturating_mul(f).saturating_mul(f).max(g.saturating_mul(g))
}

/// Rational lower bound for `max(|F|³, G²)` on the boundary of `[−1, 1]²`.
fn kappa(forms: &Forms) -> Result<Rational> {
    let min = square_boundary_minimum(
        |x, y| {
            let (f, g) = forms.eval_f64(x, y);
            (f.abs().powi(3)).max(g * g)
        },
        KAPPA_SAMPLES,
    );
    if !(min > 0.0) {
        return domain("family forms share a real zero");
    }
    // the sampled minimum is halved to cover the gaps between samples
    Rational::from_float(min * KAPPA_SAFETY).ok_or(Error::Overflow("kappa"))
}

const KAPPA_SAMPLES: usize = 200_000;
const KAPPA_SAFETY: f64 = 0.5;

/// Largest integer `r` with `r^k · κ ≤ bound`.
fn max_radius(bound: &BigInt, kappa: &Rational, k: u32) -> u64 {
    let q = (Rational::from_integer(bound.clone()) / kappa).floor().to_integer();
    q.nth_root(k).to_u64().unwrap_or(u64::MAX)
}

struct Collector {
    x: u128,
    level: u32,
    out: HashSet<(i64, i64)>,
}

impl Collector {
    /// Record every twist of the twist-minimal `(F₁, G₁)` below the bound.
    fn add_twists(&mut self, f1: i128, g1: i128) -> Result<()> {
        let h1 = height(f1, g1);
        if h1 >= self.x {
            return Ok(());
        }
        let (f1, g1) = (f1 as i64, g1 as i64);
        if discriminant_part(f1, g1) == 0 {
            return Ok(());
        }
        // the j = 0 curves of level 3 are counted separately
        if self.level == 3 && f1 == 0 {
            return Ok(());
        }
        let mut d: u64 = 1;
        loop {
            let d6 = (d as u128).pow(6);
            if d6.saturating_mul(h1) >= self.x {
                break;
            }
            if is_power_free(d, 2) {
                let (d2, d3) = ((d * d) as i64, (d * d * d) as i64);
                self.out.insert((d2 * f1, d3 * g1));
                self.out.insert((d2 * f1, -d3 * g1));
            }
            d += 1;
        }
        Ok(())
    }
}

/// Family enumeration for one `(N, X)`, holding the full curve list.
pub struct ParamJob {
    level: u32,
    x: u64,
    amax: i64,
    /// Sorted minimal `(A, B)` from the family, `j = 0` at level 3 excluded.
    curves: Vec<(i64, i64)>,
}

impl ParamJob {
    pub fn new(level: u32, x: u64) -> Result<Self> {
        Self::with_margin(level, x, 1)
    }

    /// Enumerate over the search region for the bound `margin·X` while still
    /// counting heights below `X`; a larger region can only add candidates,
    /// so this checks that the regions are not too tight.
    pub fn with_margin(level: u32, x: u64, margin: u64) -> Result<Self> {
        if !FAMILY_LEVELS.contains(&level) {
            return Err(Error::UnsupportedLevel(level));
        }
        let fam = family(level)?;
        let forms = Forms::from_family(fam)?;
        let mut col = Collector { x: x as u128, level, out: HashSet::new() };
        let search_x = BigInt::from(x) * BigInt::from(margin.max(1));
        if x > 1 {
            if forms.m == 1 {
                enumerate_coprime(&forms, &mut col, &search_x)?;
            } else if level == 3 {
                enumerate_level3(&forms, &mut col, &search_x)?;
            } else {
                return domain(format!("no region for level {level}"));
            }
        }
        let mut curves: Vec<_> = col.out.into_iter().collect();
        curves.sort_unstable();
        Ok(ParamJob { level, x, amax: max_below(x as u128, 3) as i64, curves })
    }

    /// Family curves (and, at level 3, the `j = 0` curves), sorted.
    pub fn curves(&self) -> Vec<Curve> {
        let mut all: Vec<Curve> =
            self.curves.iter().map(|&(a, b)| Curve::new(a, b).expect("nonsingular")).collect();
        if self.level == 3 {
            let bmax = max_below(self.x as u128, 2) as i64;
            for b in (-bmax..=bmax).filter(|&b| b != 0 && is_power_free(b.unsigned_abs(), 6)) {
                all.push(Curve::new(0, b).expect("nonsingular"));
            }
            all.sort_unstable();
        }
        all
    }
}

impl Enumeration for ParamJob {
    fn outer_range(&self) -> Option<(i64, i64)> {
        Some((-self.amax, self.amax))
    }

    fn count_range(&self, lo: i64, hi: i64) -> Result<u64> {
        let start = self.curves.partition_point(|&(a, _)| a < lo);
        let end = self.curves.partition_point(|&(a, _)| a <= hi);
        let mut n = (end - start) as u64;
        if self.level == 3 && lo <= 0 && 0 <= hi {
            n += count_j0_3(self.x);
        }
        Ok(n)
    }

    fn engine(&self) -> Engine {
        Engine::Param
    }
}

/// Levels with `m = 1`: `t = a/b` with `gcd(a, b) = 1`, `b ≥ 0`.
fn enumerate_coprime(forms: &Forms, col: &mut Collector, search_x: &BigInt) -> Result<()> {
    let mut u_max: u128 = 1;
    let mut allowed: HashMap<u64, u32> = HashMap::new();
    for ell in [2u64, 3] {
        let k = max_twist_exponent(forms, ell)?;
        allowed.insert(ell, k);
        u_max *= (ell as u128).pow(k);
    }
    let kap = kappa(forms)?;
    let bound = search_x * BigInt::from(u_max).pow(6);
    let r = max_radius(&bound, &kap, 6 * forms.n) as i128;
    let x_times_u6 = col.x.saturating_mul(u_max.pow(6));
    for b in 0..=r {
        for a in -r..=r {
            if (b == 0 && a != 1) || a.unsigned_abs().gcd(&(b as u128)) != 1 {
                continue;
            }
            let Some((f, g)) = forms.eval(a, b) else {
                // |F| or |G| ≥ 2^127 puts the reduced height far above X
                continue;
            };
            if height(f, g) >= x_times_u6 {
                continue;
            }
            let (f1, g1, u) = twist_reduce(f, g)?;
            check_reduction(u, &allowed, a, b)?;
            col.add_twists(f1, g1)?;
        }
    }
    Ok(())
}

fn check_reduction(u: u128, allowed: &HashMap<u64, u32>, a: i128, b: i128) -> Result<()> {
    if u == 1 {
        return Ok(());
    }
    for &(p, e) in factorize_u128(u)?.pairs() {
        if allowed.get(&p).is_none_or(|&k| e > k) {
            return domain(format!("twist reduction {u} at t = {a}/{b} exceeds the local bound"));
        }
    }
    Ok(())
}

/// Level 3: `t = a/b³` with `b ≥ 1` and `gcd(a, b³)` cube-free.
fn enumerate_level3(forms: &Forms, col: &mut Collector, search_x: &BigInt) -> Result<()> {
    let kap = kappa(forms)?;
    let scaled = BigInt::from(729u32) * search_x;
    // b⁶κ ≤ 729X, from b^{12}κ ≤ 729Xc⁶ and c ≤ b
    let bmax = max_radius(&scaled, &kap, 6);
    for b in 1..=bmax as i128 {
        let primes: Vec<u64> = factorize_u64(b as u64).primes().collect();
        for mask in 0u32..(1 << primes.len()) {
            let c: u64 = primes
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &p)| p)
                .product();
            let bound_c = &scaled * BigInt::from(c).pow(6);
            // M = max(|a|^{1/3}, b) satisfies M^{12}κ ≤ 729Xc⁶
            if BigInt::from(b).pow(12) * kap.numer() > &bound_c * kap.denom() {
                continue;
            }
            let amax = max_radius(&bound_c, &kap, 4) as i128;
            let skip_above = col.x.saturating_mul((3 * c as u128).pow(6));
            let step = (c * c) as i128;
            for k in -(amax / step)..=(amax / step) {
                let a = k * step;
                if !canonical_with_c(a, &primes, mask) {
                    continue;
                }
                let Some((f, g)) = forms.eval(a, b) else { continue };
                if height(f, g) >= skip_above {
                    continue;
                }
                let (f1, g1, u) = twist_reduce(f, g)?;
                if u > 3 * c as u128 {
                    return domain(format!("twist reduction {u} at t = {a}/{b}^3 exceeds 3c = {}", 3 * c));
                }
                col.add_twists(f1, g1)?;
            }
        }
    }
    Ok(())
}

// gcd(a, b³) cube-free, and p² | a exactly for the primes of b in `mask`
fn canonical_with_c(a: i128, primes: &[u64], mask: u32) -> bool {
    primes.iter().enumerate().all(|(i, &p)| {
        let v = if a == 0 { u32::MAX } else { val_i128(a, p) };
        v <= 2 && ((v == 2) == (mask & (1 << i) != 0))
    })
}

/// `#{b ≠ 0 : b² < X, b sixth-power-free}`: the curves `y² = x³ + b`,
/// all of which have a rational 3-isogeny.
pub fn count_j0_3(x: u64) -> u64 {
    2 * count_power_free(max_below(x as u128, 2) as u64, 6)
}

/// Exact `𝒩(N, X)` by family enumeration.
pub fn param_count(level: u32, x: u64) -> Result<CensusResult> {
    super::run(Engine::Param, level, x)
}

/// Every curve the family enumeration counts at `(N, X)`, sorted.
pub fn param_curves(level: u32, x: u64) -> Result<Vec<Curve>> {
    Ok(ParamJob::new(level, x)?.curves())
}

/// Family counts at every bound of an increasing grid.
pub fn param_grid(level: u32, grid: &[u64]) -> Result<Vec<u64>> {
    check_grid(grid)?;
    let job = ParamJob::new(level, *grid.last().unwrap())?;
    let heights = job.curves().iter().map(Curve::naive_height).collect();
    Ok(counts_from_heights(heights, grid))
}

/// Family results for every bound of a grid, timed as one run.
pub fn param_grid_results(level: u32, grid: &[u64]) -> Result<Vec<CensusResult>> {
    let start = Instant::now();
    let counts = param_grid(level, grid)?;
    let elapsed = start.elapsed().as_secs_f64();
    Ok(grid
        .iter()
        .zip(counts)
        .map(|(&x, count)| CensusResult { level, x, count, engine: Engine::Param, elapsed })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_examples() {
        assert_eq!(count_j0_3(1), 0);
        assert_eq!(count_j0_3(2), 2);
        assert_eq!(count_j0_3(101), 20);
        // b = ±64 is the first exclusion
        assert_eq!(count_j0_3(64 * 64 + 1), 2 * 63);
        assert_eq!(count_j0_3(65 * 65 + 1), 2 * 64);
    }

    #[test]
    fn level3_forms() {
        let f = Forms::from_family(family(3).unwrap()).unwrap();
        assert_eq!(f.eval(1, 1), Some((15, 11)));
        assert_eq!(f.eval(0, 2), Some((-48, 128)));
    }

    #[test]
    fn twist_exponents_are_small() {
        for &level in &FAMILY_LEVELS[1..] {
            let forms = Forms::from_family(family(level).unwrap()).unwrap();
            for ell in [2, 3] {
                let k = max_twist_exponent(&forms, ell).unwrap();
                assert!(k <= 12, "N={level}, ℓ={ell}: {k}");
            }
        }
    }

    #[test]
    fn twist_reduce_examples() {
        assert_eq!(twist_reduce(16, 64).unwrap(), (1, 1, 4));
        assert_eq!(twist_reduce(0, 128).unwrap(), (0, 2, 4));
        assert_eq!(twist_reduce(-3, 2).unwrap(), (-3, 2, 1));
    }

    #[test]
    fn trivial_bound() {
        for &level in &FAMILY_LEVELS {
            assert_eq!(param_count(level, 1).unwrap().count, 0);
        }
        assert!(param_count(5, 100).is_err());
    }
}
