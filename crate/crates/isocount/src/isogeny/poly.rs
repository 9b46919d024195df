//! Univariate integer polynomials and exact root finding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::numtheory::{factorize_u64, val_int, Rational};

/// Integer polynomial, coefficients stored constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `t`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Coefficients as `i128`, failing if any does not fit.
    pub fn to_i128(&self) -> Result<Vec<i128>> {
        self.coeffs
            .iter()
            .map(|c| c.to_i128().ok_or(Error::Overflow("polynomial coefficient")))
            .collect()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(BigInt::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn eval_int(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    /// Evaluate `p(x/y) · y^d` for a fixed target degree `d >= deg p`.
    pub fn homogenize_eval(&self, x: &BigInt, y: &BigInt, d: usize) -> BigInt {
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut xpow = BigInt::one();
        let mut xs = Vec::with_capacity(d + 1);
        for _ in 0..=d {
            xs.push(xpow.clone());
            xpow *= x;
        }
        for i in (0..=d).rev() {
            let c = self.coeff(i);
            if !c.is_zero() {
                acc += c * &xs[i] * &ypow;
            }
            ypow *= y;
        }
        acc
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || o.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// All rational roots, each once, in increasing order.
///
/// Candidates `±p/q` have `q | lead` and `p | const`; the exponent of each
/// prime in a root is further pinned to an integer slope of the p-adic
/// Newton polygon, which leaves very few candidates to test exactly.
pub fn rational_roots(p: &IntPolynomial) -> Result<Vec<Rational>> {
    if p.is_zero() {
        return domain("the zero polynomial has every rational as a root");
    }
    let content = p.content();
    let mut coeffs: Vec<BigInt> = p.coeffs().iter().map(|c| c / &content).collect();
    let mut roots = Vec::new();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        roots.push(Rational::zero());
        coeffs.drain(..zeros);
    }
    let q = IntPolynomial::new(coeffs);
    if q.degree().unwrap_or(0) >= 1 {
        roots.extend(nonzero_rational_roots(&q)?);
    }
    roots.sort();
    Ok(roots)
}

fn to_u64_abs(n: &BigInt) -> Result<u64> {
    n.abs().to_u64().ok_or_else(|| Error::TooLarge(n.to_string()))
}

// `q` has nonzero constant term and positive degree.
fn nonzero_rational_roots(q: &IntPolynomial) -> Result<Vec<Rational>> {
    let lead = to_u64_abs(q.leading().unwrap())?;
    let cons = to_u64_abs(&q.coeffs()[0])?;
    let mut primes: Vec<u64> = factorize_u64(lead).primes().collect();
    primes.extend(factorize_u64(cons).primes());
    primes.sort_unstable();
    primes.dedup();

    // per prime, the admissible exponents of that prime in a root
    let mut choices: Vec<(u64, Vec<i64>)> = Vec::with_capacity(primes.len());
    for &l in &primes {
        let slopes = newton_slopes(q, l);
        if slopes.is_empty() {
            return Ok(Vec::new());
        }
        choices.push((l, slopes));
    }

    let mut candidates = vec![(BigInt::one(), BigInt::one())];
    for (l, vals) in &choices {
        let bl = BigInt::from(*l);
        let mut next = Vec::with_capacity(candidates.len() * vals.len());
        for (num, den) in &candidates {
            for &v in vals {
                if v >= 0 {
                    next.push((num * bl.pow(v as u32), den.clone()));
                } else {
                    next.push((num.clone(), den * bl.pow((-v) as u32)));
                }
            }
        }
        candidates = next;
    }

    let d = q.degree().unwrap();
    let mut roots = Vec::new();
    for (num, den) in candidates {
        for s in [BigInt::one(), -BigInt::one()] {
            let n = &num * &s;
            if q.homogenize_eval(&n, &den, d).is_zero() {
                roots.push(Rational::new(n, den.clone()));
            }
        }
    }
    Ok(roots)
}

/// Integer exponents `λ` such that the `l`-adic Newton polygon of `q` has a
/// segment of slope `−λ`; every nonzero root in Q has `v_l` among them.
fn newton_slopes(q: &IntPolynomial, l: u64) -> Vec<i64> {
    let pts: Vec<(i64, i64)> = q
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i as i64, val_int(c, l) as i64))
        .collect();
    // lower convex hull, left to right
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above segment a-p
            if (b.1 - a.1) * (p.0 - a.0) >= (p.1 - a.1) * (b.0 - a.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        if dy % dx == 0 {
            out.push(-(dy / dx));
        }
    }
    out
}

/// Integer roots of an integer polynomial given as `i128` coefficients
/// (constant term first), found exactly.
///
/// Real roots of the derivative are located to unit cells recursively;
/// between those cells the polynomial is monotone on the integers, so each
/// stretch is settled by a binary search. All arithmetic is exact.
pub fn integer_roots(c: &[i128]) -> Result<Vec<i128>> {
    let mut c: Vec<i128> = c.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    if c.is_empty() {
        return domain("the zero polynomial has every integer as a root");
    }
    let mut roots = Vec::new();
    let zeros = c.iter().take_while(|&&v| v == 0).count();
    if zeros > 0 {
        roots.push(0);
        c.drain(..zeros);
    }
    if c.len() >= 2 {
        let r = root_bound(&c)?;
        let crit = critical_cells(&derivative_i128(&c), r)?;
        for k in scan_monotone(&c, r, &crit, true)? {
            roots.push(k);
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

fn derivative_i128(c: &[i128]) -> Vec<i128> {
    c.iter().enumerate().skip(1).map(|(i, v)| v * i as i128).collect()
}

fn eval_i128(c: &[i128], x: i128) -> Result<i128> {
    let mut acc: i128 = 0;
    for &v in c.iter().rev() {
        acc = acc
            .checked_mul(x)
            .and_then(|a| a.checked_add(v))
            .ok_or(Error::Overflow("integer root search"))?;
    }
    Ok(acc)
}

// Cauchy bound: every complex root has |z| <= 1 + max |c_i / c_n|.
fn root_bound(c: &[i128]) -> Result<i128> {
    let lead = c.last().unwrap().unsigned_abs();
    let m = c[..c.len() - 1].iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let r = 1 + m / lead + 1;
    i128::try_from(r).map_err(|_| Error::Overflow("root bound"))
}

fn sign(v: i128) -> i32 {
    v.signum() as i32
}

/// Integers `k` in `[-r, r]` such that the interval `[k, k+1]` may contain
/// a real root of `c` (a superset is fine).
fn critical_cells(c: &[i128], r: i128) -> Result<Vec<i128>> {
    let mut c: Vec<i128> = c.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Ok(Vec::new());
    }
    let inner = critical_cells(&derivative_i128(&c), r)?;
    let mut cells = scan_monotone(&c, r, &inner, false)?;
    for &k in &inner {
        cells.push(k);
    }
    cells.sort_unstable();
    cells.dedup();
    Ok(cells)
}

/// Walk the monotone stretches of `c` between the cells `crit` over
/// `[-r, r]`. With `exact`, return integer zeros; otherwise return the cells
/// `k` where a sign change (or zero) happens on `[k, k+1]`.
fn scan_monotone(c: &[i128], r: i128, crit: &[i128], exact: bool) -> Result<Vec<i128>> {
    let mut out = Vec::new();
    let mut breaks: Vec<i128> = crit.iter().copied().filter(|&k| k >= -r - 1 && k <= r).collect();
    breaks.sort_unstable();
    breaks.dedup();
    // integers next to a critical cell are checked directly
    for &k in &breaks {
        for x in [k, k + 1] {
            let v = eval_i128(c, x)?;
            if exact {
                if v == 0 {
                    out.push(x);
                }
            } else {
                let w = eval_i128(c, x + 1)?;
                if v == 0 || sign(v) != sign(w) {
                    out.push(x);
                    out.push(x - 1);
                }
            }
        }
    }
    let mut lo = -r;
    let mut segments = Vec::new();
    for &k in &breaks {
        if k >= lo {
            segments.push((lo, k));
        }
        lo = lo.max(k + 1);
    }
    segments.push((lo, r));
    for (a, b) in segments {
        if a > b {
            continue;
        }
        let (fa, fb) = (eval_i128(c, a)?, eval_i128(c, b)?);
        if fa == 0 {
            out.push(a);
            if !exact {
                out.push(a - 1);
            }
        }
        if fb == 0 {
            out.push(b);
            if !exact {
                out.push(b - 1);
            }
        }
        if fa == 0 || fb == 0 || sign(fa) == sign(fb) {
            continue;
        }
        // monotone with a strict sign change: first index where the sign flips
        let (mut lo_i, mut hi_i) = (a, b);
        while hi_i - lo_i > 1 {
            let mid = lo_i + (hi_i - lo_i) / 2;
            let fm = eval_i128(c, mid)?;
            if fm == 0 {
                lo_i = mid;
                hi_i = mid;
                break;
            }
            if sign(fm) == sign(fa) {
                lo_i = mid;
            } else {
                hi_i = mid;
            }
        }
        if exact {
            if eval_i128(c, lo_i)? == 0 {
                out.push(lo_i);
            }
            if eval_i128(c, hi_i)? == 0 {
                out.push(hi_i);
            }
        } else {
            out.push(lo_i);
            out.push(lo_i - 1);
            out.push(hi_i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::rat;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn rational_roots_examples() {
        assert_eq!(rational_roots(&p(&[-1, 0, 1])).unwrap(), vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(rational_roots(&p(&[-3, 2])).unwrap(), vec![rat(3, 2)]);
        assert!(rational_roots(&p(&[1, 0, 1])).unwrap().is_empty());
        assert!(rational_roots(&IntPolynomial::zero()).is_err());
        assert!(rational_roots(&p(&[5])).unwrap().is_empty());
    }

    #[test]
    fn rational_roots_with_multiplicity_and_zero() {
        // t²(2t − 3)³(t + 4)
        let f = &(&p(&[0, 0, 1]) * &p(&[-3, 2]).pow(3)) * &p(&[4, 1]);
        assert_eq!(rational_roots(&f).unwrap(), vec![rat(-4, 1), rat(0, 1), rat(3, 2)]);
        // (12t − 5)(7t + 18) scaled by content 6
        let g = (&p(&[-5, 12]) * &p(&[18, 7])).scale(&BigInt::from(6));
        assert_eq!(rational_roots(&g).unwrap(), vec![rat(-18, 7), rat(5, 12)]);
    }

    #[test]
    fn integer_roots_examples() {
        assert_eq!(integer_roots(&[-1, 0, 1]).unwrap(), vec![-1, 1]);
        assert_eq!(integer_roots(&[0, -1, 0, 1]).unwrap(), vec![-1, 0, 1]);
        assert!(integer_roots(&[1, 1, 1]).unwrap().is_empty());
        // (x − 1000)(x + 3)(x − 4)(x − 5) expanded
        let f = &(&p(&[-1000, 1]) * &p(&[3, 1])) * &(&p(&[-4, 1]) * &p(&[-5, 1]));
        assert_eq!(integer_roots(&f.to_i128().unwrap()).unwrap(), vec![-3, 4, 5, 1000]);
        // close non-integer roots around an integer root: (x − 7)(4x² − 57x + 203)
        let g = &p(&[-7, 1]) * &p(&[203, -57, 4]);
        assert_eq!(integer_roots(&g.to_i128().unwrap()).unwrap(), vec![7]);
        // repeated root
        let h = p(&[-2, 1]).pow(3);
        assert_eq!(integer_roots(&h.to_i128().unwrap()).unwrap(), vec![2]);
    }

    #[test]
    fn homogeneous_evaluation() {
        let f = p(&[1, 2, 3]);
        // 3(2/5)² + 2(2/5) + 1 scaled by 5²
        assert_eq!(f.homogenize_eval(&BigInt::from(2), &BigInt::from(5), 2), BigInt::from(12 + 20 + 25));
        assert_eq!(f.eval(&rat(2, 5)), rat(57, 25));
    }
}
