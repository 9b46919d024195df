//! Short Weierstrass curves `y² = x³ + Ax + B` over the integers, with the
//! naive height, j-invariant, minimal models, quadratic twists and the
//! chord-tangent group law on rational points.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{domain, Error, Result};
use crate::numtheory::{factorize_u64, rint, Rational};

/// A nonsingular integral short Weierstrass model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Curve {
    a: i64,
    b: i64,
}

/// `4A³ + 27B²` in 128-bit arithmetic.
pub fn discriminant_part(a: i64, b: i64) -> i128 {
    let a = a as i128;
    let b = b as i128;
    4 * a * a * a + 27 * b * b
}

impl Curve {
    /// Reject singular pairs.
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if discriminant_part(a, b) == 0 {
            return domain(format!("y^2 = x^3 + {a}x + {b} is singular"));
        }
        Ok(Curve { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// `max(|A|³, B²)`.
    pub fn naive_height(&self) -> u128 {
        naive_height(self.a, self.b)
    }

    /// `1728 · 4A³ / (4A³ + 27B²)`.
    pub fn j_invariant(&self) -> Rational {
        let a3 = BigInt::from(self.a).pow(3);
        let den = BigInt::from(4) * &a3 + BigInt::from(27) * BigInt::from(self.b).pow(2);
        Rational::new(BigInt::from(6912) * a3, den)
    }

    /// No prime `p` with `p⁴ | A` and `p⁶ | B`.
    pub fn is_minimal(&self) -> bool {
        minimal_scale(self.a, self.b) == 1
    }

    /// Quadratic twist by a squarefree `d`, returned minimal.
    pub fn twist(&self, d: i64) -> Result<Curve> {
        if d == 0 {
            return domain("twist by 0");
        }
        let a = (d as i128).pow(2) * self.a as i128;
        let b = (d as i128).pow(3) * self.b as i128;
        minimize_i128(a, b)
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", self.a, self.b)
    }
}

/// `max(|A|³, B²)` without constructing a curve.
pub fn naive_height(a: i64, b: i64) -> u128 {
    let a = a.unsigned_abs() as u128;
    let b = b.unsigned_abs() as u128;
    (a * a * a).max(b * b)
}

/// Largest `d` with `d⁴ | A` and `d⁶ | B` (the pair must not be (0,0)).
pub fn minimal_scale(a: i64, b: i64) -> u64 {
    let g = a.unsigned_abs().gcd(&b.unsigned_abs());
    if g == 1 {
        return 1;
    }
    let mut d = 1u64;
    for &(p, _) in factorize_u64(g).pairs() {
        let ea = if a == 0 { u32::MAX } else { crate::numtheory::val_i128(a as i128, p) };
        let eb = if b == 0 { u32::MAX } else { crate::numtheory::val_i128(b as i128, p) };
        let k = (ea / 4).min(eb / 6);
        d *= p.pow(k);
    }
    d
}

/// Divide out the largest `d` with `d⁴ | A`, `d⁶ | B`.
pub fn minimize(a: i64, b: i64) -> Result<Curve> {
    if discriminant_part(a, b) == 0 {
        return domain(format!("y^2 = x^3 + {a}x + {b} is singular"));
    }
    let d = minimal_scale(a, b) as i64;
    Curve::new(a / d.pow(4), b / d.pow(6))
}

/// `minimize` for inputs that may exceed 64 bits before reduction.
pub fn minimize_i128(a: i128, b: i128) -> Result<Curve> {
    if let (Ok(a), Ok(b)) = (i64::try_from(a), i64::try_from(b)) {
        return minimize(a, b);
    }
    let (a, b) = minimize_big(&BigInt::from(a), &BigInt::from(b))?;
    Ok(Curve { a, b })
}

/// Minimal model of a rational pair `(A, B)`: scale to integers, then
/// reduce. Fails if the minimal model does not fit 64-bit coefficients.
pub fn minimize_rational(a: &Rational, b: &Rational) -> Result<Curve> {
    // y² = x³ + u⁴A x + u⁶B with u = lcm of the denominators
    let u = a.denom().lcm(b.denom());
    let ai = (a * Rational::from_integer(u.pow(4))).to_integer();
    let bi = (b * Rational::from_integer(u.pow(6))).to_integer();
    let (a, b) = minimize_big(&ai, &bi)?;
    Ok(Curve { a, b })
}

fn minimize_big(a: &BigInt, b: &BigInt) -> Result<(i64, i64)> {
    let disc = BigInt::from(4) * a.pow(3) + BigInt::from(27) * b.pow(2);
    if disc.is_zero() {
        return domain("singular pair");
    }
    let g = a.gcd(b);
    let (mut a, mut b) = (a.clone(), b.clone());
    // primes with p⁴ | A and p⁶ | B divide g; strip the small ones directly
    let mut rest = g.clone();
    let mut p = 2u64;
    while p < 1_000_000 && rest.abs() > BigInt::from(1) {
        let bp = BigInt::from(p);
        if (&rest % &bp).is_zero() {
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
            let (p4, p6) = (bp.pow(4), bp.pow(6));
            while (&a % &p4).is_zero() && (&b % &p6).is_zero() {
                a /= &p4;
                b /= &p6;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let rest = rest.abs();
    if rest > BigInt::from(1) {
        let r = u64::try_from(&rest).map_err(|_| Error::TooLarge(rest.to_string()))?;
        for q in factorize_u64(r).primes() {
            let bq = BigInt::from(q);
            let (q4, q6) = (bq.pow(4), bq.pow(6));
            while (&a % &q4).is_zero() && (&b % &q6).is_zero() {
                a /= &q4;
                b /= &q6;
            }
        }
    }
    let a = i64::try_from(&a).map_err(|_| Error::Overflow("minimal model"))?;
    let b = i64::try_from(&b).map_err(|_| Error::Overflow("minimal model"))?;
    Ok((a, b))
}

/// A rational point or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

/// `y² = x³ + Ax + B` with rational coefficients; carries the group law.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCurve {
    pub a: Rational,
    pub b: Rational,
}

impl RationalCurve {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let disc = rint(4) * &a * &a * &a + rint(27) * &b * &b;
        if disc.is_zero() {
            return domain("singular curve");
        }
        Ok(RationalCurve { a, b })
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y * y == x * x * x + &self.a * x + &self.b,
        }
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y),
        }
    }

    /// Chord-tangent addition; both points must lie on the curve.
    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return CurvePoint::Infinity;
            }
            (rint(3) * x1 * x1 + &self.a) / (rint(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1;
        CurvePoint::affine(x3, y3)
    }

    /// `kP` by double-and-add.
    pub fn scalar_mul(&self, p: &CurvePoint, k: u64) -> Result<CurvePoint> {
        if !self.contains(p) {
            return domain("point is not on the curve");
        }
        let mut acc = CurvePoint::Infinity;
        let mut base = p.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            base = self.add(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }
}

impl From<Curve> for RationalCurve {
    fn from(c: Curve) -> Self {
        RationalCurve { a: rint(c.a), b: rint(c.b) }
    }
}

/// `kP` on an integral curve.
pub fn scalar_mul(c: &Curve, p: &CurvePoint, k: u64) -> Result<CurvePoint> {
    RationalCurve::from(*c).scalar_mul(p, k)
}

/// Whether `r` is a nonzero rational square.
pub(crate) fn is_rational_square(r: &Rational) -> bool {
    !r.is_negative() && crate::numtheory::rational_root_exact(r, 2).is_some()
}
