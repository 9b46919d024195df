//! Lattice points in regions, the summatory function of `B(n⁴)`, and
//! growth-rate fits. This is the only module that uses floating point.

use num_traits::{Signed, ToPrimitive};

use crate::error::{domain, Result};
use crate::numtheory::{rint, Rational};

/// Growth shapes `X^α (log X)^β` by level, with `α = num/den`.
pub const TABLE1: [(u32, (u32, u32), u32); 10] = [
    (2, (1, 2), 0),
    (3, (1, 2), 0),
    (4, (1, 3), 0),
    (5, (1, 6), 2),
    (6, (1, 6), 1),
    (8, (1, 6), 1),
    (9, (1, 6), 1),
    (12, (1, 6), 0),
    (16, (1, 6), 0),
    (18, (1, 6), 0),
];

/// Expected `(α, β)` for a level.
pub fn expected_growth(level: u32) -> Option<(f64, u32)> {
    TABLE1
        .iter()
        .find(|(n, _, _)| *n == level)
        .map(|&(_, (p, q), b)| (p as f64 / q as f64, b))
}

/// A closed bounded region in `Rⁿ` in the sense of Davenport's lemma: every
/// line parallel to an axis meets it in at most `h` intervals, and the same
/// holds for its coordinate projections.
pub trait Region {
    fn dimension(&self) -> usize;

    /// Exact membership of a rational point.
    fn contains(&self, point: &[Rational]) -> bool;

    /// `[lo_i, hi_i]` per coordinate, or `None` if the region is unbounded.
    fn bounding_box(&self) -> Option<Vec<(Rational, Rational)>>;

    fn h(&self) -> u32;

    fn volume(&self) -> f64;

    /// `V_m` for `m = 0..n`: the sum of the m-dimensional volumes of the
    /// projections onto the coordinate subspaces of dimension `m`; `V_0 = 1`.
    fn projection_volumes(&self) -> Vec<f64>;
}

/// `Π [lo_i, hi_i]`; empty when some `lo_i > hi_i`.
#[derive(Clone, Debug)]
pub struct BoxRegion {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl BoxRegion {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return domain("box corners must have the same positive dimension");
        }
        Ok(BoxRegion { lo, hi })
    }

    fn sides(&self) -> Vec<f64> {
        self.lo
            .iter()
            .zip(&self.hi)
            .map(|(l, h)| (h - l).to_f64().unwrap_or(0.0).max(0.0))
            .collect()
    }

    fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| l > h)
    }
}

/// `e_m(x_1, …, x_n)` for `m = 0..n`.
fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; xs.len() + 1];
    e[0] = 1.0;
    for (k, &x) in xs.iter().enumerate() {
        for m in (1..=k + 1).rev() {
            e[m] += e[m - 1] * x;
        }
    }
    e
}

impl Region for BoxRegion {
    fn dimension(&self) -> usize {
        self.lo.len()
    }

    fn contains(&self, p: &[Rational]) -> bool {
        p.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| l <= x && x <= h)
    }

    fn bounding_box(&self) -> Option<Vec<(Rational, Rational)>> {
        Some(self.lo.iter().cloned().zip(self.hi.iter().cloned()).collect())
    }

    fn h(&self) -> u32 {
        1
    }

    fn volume(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.sides().iter().product()
    }

    fn projection_volumes(&self) -> Vec<f64> {
        let n = self.dimension();
        if self.is_empty() {
            let mut v = vec![0.0; n];
            v[0] = 1.0;
            return v;
        }
        elementary_symmetric(&self.sides())[..n].to_vec()
    }
}

/// `Σ ((x_i − c_i)/r_i)² ≤ 1` with every `r_i > 0`.
#[derive(Clone, Debug)]
pub struct Ellipsoid {
    pub center: Vec<Rational>,
    pub radii: Vec<Rational>,
}

impl Ellipsoid {
    pub fn new(center: Vec<Rational>, radii: Vec<Rational>) -> Result<Self> {
        if center.len() != radii.len() || center.is_empty() {
            return domain("center and radii must have the same positive dimension");
        }
        if radii.iter().any(|r| !r.is_positive()) {
            return domain("ellipsoid radii must be positive");
        }
        Ok(Ellipsoid { center, radii })
    }
}

/// Volume of the unit ball in `Rᵐ`.
fn unit_ball_volume(m: usize) -> f64 {
    match m {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(m - 2) * 2.0 * std::f64::consts::PI / m as f64,
    }
}

impl Region for Ellipsoid {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn contains(&self, p: &[Rational]) -> bool {
        let s: Rational = p
            .iter()
            .zip(self.center.iter().zip(&self.radii))
            .map(|(x, (c, r))| {
                let t = (x - c) / r;
                &t * &t
            })
            .sum();
        s <= rint(1)
    }

    fn bounding_box(&self) -> Option<Vec<(Rational, Rational)>> {
        Some(self.center.iter().zip(&self.radii).map(|(c, r)| (c - r, c + r)).collect())
    }

    fn h(&self) -> u32 {
        1
    }

    fn volume(&self) -> f64 {
        let n = self.dimension();
        unit_ball_volume(n) * self.radii.iter().map(|r| r.to_f64().unwrap()).product::<f64>()
    }

    fn projection_volumes(&self) -> Vec<f64> {
        // the projection onto a coordinate subspace is the ellipsoid with
        // the corresponding radii
        let r: Vec<f64> = self.radii.iter().map(|r| r.to_f64().unwrap()).collect();
        let e = elementary_symmetric(&r);
        (0..self.dimension()).map(|m| unit_ball_volume(m) * e[m]).collect()
    }
}

/// `|x_1| ≤ r` with the other coordinates free; unbounded when `n > 1`.
#[derive(Clone, Debug)]
pub struct Slab {
    pub dimension: usize,
    pub half_width: Rational,
}

impl Region for Slab {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn contains(&self, p: &[Rational]) -> bool {
        p[0].abs() <= self.half_width
    }

    fn bounding_box(&self) -> Option<Vec<(Rational, Rational)>> {
        if self.dimension > 1 {
            return None;
        }
        Some(vec![(-self.half_width.clone(), self.half_width.clone())])
    }

    fn h(&self) -> u32 {
        1
    }

    fn volume(&self) -> f64 {
        if self.dimension > 1 {
            f64::INFINITY
        } else {
            2.0 * self.half_width.to_f64().unwrap()
        }
    }

    fn projection_volumes(&self) -> Vec<f64> {
        let mut v = vec![f64::INFINITY; self.dimension];
        v[0] = 1.0;
        v
    }
}

/// Lattice count of a region with Davenport's bound.
#[derive(Clone, Debug, PartialEq)]
pub struct DavenportCount {
    pub count: u64,
    pub volume: f64,
    pub error_bound: f64,
}

/// Count lattice points by scanning the bounding box and compare with the
/// volume; fails if the region is unbounded or the bound does not hold.
pub fn davenport_count(r: &dyn Region) -> Result<DavenportCount> {
    let n = r.dimension();
    let Some(bbox) = r.bounding_box() else {
        return domain("region is unbounded");
    };
    let ranges: Vec<(i64, i64)> = bbox
        .iter()
        .map(|(lo, hi)| {
            let l = lo.ceil().to_integer().to_i64().unwrap();
            let h = hi.floor().to_integer().to_i64().unwrap();
            (l, h)
        })
        .collect();
    let mut count = 0u64;
    if ranges.iter().all(|(l, h)| l <= h) {
        let mut point: Vec<i64> = ranges.iter().map(|r| r.0).collect();
        'scan: loop {
            let q: Vec<Rational> = point.iter().map(|&v| rint(v)).collect();
            if r.contains(&q) {
                count += 1;
            }
            for i in 0..n {
                if point[i] < ranges[i].1 {
                    point[i] += 1;
                    continue 'scan;
                }
                point[i] = ranges[i].0;
            }
            break;
        }
    }
    let h = r.h() as f64;
    let volume = r.volume();
    let error_bound: f64 = r
        .projection_volumes()
        .iter()
        .enumerate()
        .map(|(m, v)| h.powi((n - m) as i32) * v)
        .sum();
    if (count as f64 - volume).abs() > error_bound + 1e-9 * error_bound.max(1.0) {
        return domain(format!(
            "lattice count {count} is further than {error_bound} from volume {volume}"
        ));
    }
    Ok(DavenportCount { count, volume, error_bound })
}

/// `Σ_{1 ≤ n ≤ T} B(n⁴)`, with the multiplicative `B(n⁴)` sieved linearly.
pub fn summatory_b4(t: u64) -> u64 {
    let t = t as usize;
    if t == 0 {
        return 0;
    }
    // value[n] = B(n⁴); pw[n] = largest power of spf(n) dividing n; ex[n] its exponent
    let mut value = vec![0u32; t + 1];
    let mut pw = vec![0u32; t + 1];
    let mut ex = vec![0u8; t + 1];
    let mut primes: Vec<u32> = Vec::new();
    value[1] = 1;
    let local = |p: usize, k: u32| -> u32 {
        if p % 4 == 1 {
            4 * k + 1
        } else {
            1
        }
    };
    let mut total: u64 = 1;
    for n in 2..=t {
        if value[n] == 0 {
            primes.push(n as u32);
            value[n] = local(n, 1);
            pw[n] = n as u32;
            ex[n] = 1;
        }
        for &p in &primes {
            let p = p as usize;
            let m = n * p;
            if m > t {
                break;
            }
            if n % p == 0 {
                // p is the smallest prime of n: raise its exponent
                pw[m] = pw[n] * p as u32;
                ex[m] = ex[n] + 1;
                let rest = n / pw[n] as usize;
                value[m] = value[rest] * local(p, ex[m] as u32);
                break;
            }
            pw[m] = p as u32;
            ex[m] = 1;
            value[m] = value[n] * value[p];
        }
        total += value[n] as u64;
    }
    total
}

/// Least-squares fit of `log count = log c + α log X + β log log X`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub alpha: f64,
    pub beta: u32,
    pub c: f64,
    /// Sum of squared residuals in `log count`.
    pub residual: f64,
}

/// Fit with `β` fixed.
pub fn fit_with_beta(samples: &[(f64, f64)], beta: u32) -> Result<GrowthFit> {
    check_samples(samples)?;
    let pts: Vec<(f64, f64)> =
        samples.iter().map(|&(x, n)| (x.ln(), n.ln() - beta as f64 * x.ln().ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let alpha = sxy / sxx;
    let intercept = my - alpha * mx;
    let residual = pts.iter().map(|p| (p.1 - intercept - alpha * p.0).powi(2)).sum();
    Ok(GrowthFit { alpha, beta, c: intercept.exp(), residual })
}

/// Best fit over the candidate log-powers; ties go to the smaller `β`.
pub fn fit_growth(samples: &[(f64, f64)], beta_candidates: &[u32]) -> Result<GrowthFit> {
    if beta_candidates.is_empty() || beta_candidates.iter().any(|&b| b > 2) {
        return domain("log-power candidates must come from {0, 1, 2}");
    }
    let mut best: Option<GrowthFit> = None;
    for &beta in beta_candidates {
        let fit = fit_with_beta(samples, beta)?;
        let better = match &best {
            None => true,
            Some(b) => {
                fit.residual < b.residual - 1e-12 * b.residual.max(1e-300)
                    || (fit.residual <= b.residual && fit.beta < b.beta)
            }
        };
        if better {
            best = Some(fit);
        }
    }
    Ok(best.expect("at least one candidate"))
}

fn check_samples(samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 4 {
        return domain(format!("need ≥ 4 samples, got {}", samples.len()));
    }
    if samples.iter().any(|&(x, n)| !(x > 1.0) || !(n > 0.0) || !x.is_finite() || !n.is_finite()) {
        return domain("samples need X > 1 and positive counts");
    }
    let lo = samples.iter().map(|s| s.0).fold(f64::INFINITY, f64::min);
    let hi = samples.iter().map(|s| s.0).fold(0.0, f64::max);
    if (hi / lo).log10() < 3.0 - 1e-9 {
        return domain("samples must span at least three decades of X");
    }
    Ok(())
}

/// Minimum of `h` on the boundary of `[−1, 1]²`, sampled at `samples`
/// evenly spaced points per edge.
pub fn square_boundary_minimum(h: impl Fn(f64, f64) -> f64, samples: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=samples {
        let s = -1.0 + 2.0 * i as f64 / samples as f64;
        for (x, y) in [(s, 1.0), (s, -1.0), (1.0, s), (-1.0, s)] {
            best = best.min(h(x, y));
        }
    }
    best
}
