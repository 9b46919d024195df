//! Twist families `y² = x³ + u²f(t)x + u³g(t)` whose fibres, up to
//! quadratic twist, are exactly the curves with a rational N-isogeny.
//!
//! For `N = 3` the family is the one with a rational 3-torsion point, in its
//! own coordinate. For the other levels `t` is the X₀(N) hauptmodul of the
//! j-map registry and the family is the coprime model
//! `f = −3·∛num`, `g = 2·√(num − 1728·den)`, so that
//! `4f³ + 27g² = −2⁸3⁶·den` and `j = num/den` on the nose. For `N = 8` the
//! two index-2 subgroups `H` give families differing by a constant
//! quadratic twist, which the `u` parameter absorbs; this registry stores
//! the one above.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::error::{domain, Error, Result};
use crate::isogeny::{jmap_for, IntPolynomial};
use crate::numtheory::{rint, Rational};

/// Levels with a registered family.
pub const FAMILY_LEVELS: [u32; 8] = [3, 4, 6, 8, 9, 12, 16, 18];

/// One family and its invariants.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub level: u32,
    /// Numerators of `f` and `g`; the polynomials are `f/den`, `g/den`.
    pub f: IntPolynomial,
    pub g: IntPolynomial,
    pub den: BigInt,
    pub r: u32,
    pub s: u32,
    pub m: u32,
    pub n: u32,
    pub h: u32,
    pub w: Rational,
    /// j-invariant of the fibre at `t`, in the family coordinate.
    pub jmap_num: IntPolynomial,
    pub jmap_den: IntPolynomial,
    /// Smallest `λ > 0` with `λ²f` and `λ³g` integral.
    pub lambda: i64,
}

impl FamilySpec {
    fn new(level: u32, f: &[i64], g: &[i64], den: i64) -> Self {
        let f = IntPolynomial::from_i64(f);
        let g = IntPolynomial::from_i64(g);
        let den = BigInt::from(den);
        let r = f.degree().unwrap() as u32;
        let s = g.degree().unwrap() as u32;
        // n/m = max(r/2, s/3) in lowest terms
        let (num, dd) = if 3 * r >= 2 * s { (r, 2) } else { (s, 3) };
        let gcd = num.gcd(&dd);
        let (n, m) = (num / gcd, dd / gcd);
        let h = n * (m - 1) / m;
        let w = if h == 0 {
            rint(0)
        } else {
            let a = Rational::new(BigInt::from(3 * h), BigInt::from(s));
            let b = Rational::new(BigInt::from(2 * h), BigInt::from(r));
            a.max(b)
        };
        let lambda = (1..=den.to_string().parse::<i64>().unwrap())
            .find(|&l| {
                let l = BigInt::from(l);
                let fl = f.scale(&l.pow(2));
                let gl = g.scale(&l.pow(3));
                fl.coeffs().iter().all(|c| c.is_multiple_of(&den))
                    && gl.coeffs().iter().all(|c| c.is_multiple_of(&den))
            })
            .expect("λ = den always works");
        // j = 1728·4f³ / (4f³ + 27g²) with the denominators cleared
        let f3 = f.pow(3).scale(&BigInt::from(4));
        let g2 = g.pow(2).scale(&(BigInt::from(27) * &den));
        let mut jnum = f3.scale(&BigInt::from(1728));
        let mut jden = &f3 + &g2;
        let c = jnum.content().gcd(&jden.content());
        let sign = if jnum.leading().unwrap() < &BigInt::zero() { -BigInt::one() } else { BigInt::one() };
        jnum = IntPolynomial::new(jnum.coeffs().iter().map(|x| x / &c * &sign).collect());
        jden = IntPolynomial::new(jden.coeffs().iter().map(|x| x / &c * &sign).collect());
        FamilySpec { level, f, g, den, r, s, m, n, h, w, jmap_num: jnum, jmap_den: jden, lambda }
    }

    /// `(f(t), g(t))`.
    pub fn eval_fg(&self, t: &Rational) -> (Rational, Rational) {
        let d = Rational::from_integer(self.den.clone());
        (self.f.eval(t) / &d, self.g.eval(t) / &d)
    }

    /// `(u²f(t), u³g(t))`, rejecting degenerate fibres.
    pub fn curve(&self, u: &Rational, t: &Rational) -> Result<(Rational, Rational)> {
        if u.is_zero() {
            return domain("u = 0 gives no curve");
        }
        let (f, g) = self.eval_fg(t);
        let disc = rint(4) * &f * &f * &f + rint(27) * &g * &g;
        if disc.is_zero() {
            return domain(format!("the N={} family degenerates at t = {t}", self.level));
        }
        Ok((u * u * f, u * u * u * g))
    }

    /// j-invariant of the fibre at `t`.
    pub fn jmap(&self, t: &Rational) -> Result<Rational> {
        let d = self.jmap_den.eval(t);
        if d.is_zero() {
            return domain(format!("t = {t} is a cusp of the N={} family", self.level));
        }
        Ok(self.jmap_num.eval(t) / d)
    }

    /// `(r, s, m, n, h, w)`.
    pub fn invariants(&self) -> (u32, u32, u32, u32, u32, Rational) {
        (self.r, self.s, self.m, self.n, self.h, self.w.clone())
    }
}

static FAMILIES: Lazy<Vec<FamilySpec>> = Lazy::new(|| {
    vec![
        // 2t − 1/3 and t² − (2/3)t + 2/27
        FamilySpec::new(3, &[-9, 54], &[2, -18, 27], 27),
        FamilySpec::new(4, &[-48, -48, -3], &[-128, 240, 48, 2], 1),
        FamilySpec::new(6, &[-432, -1584, -576, -72, -3], &[-3456, 22464, 21168, 6768, 1008, 72, 2], 1),
        FamilySpec::new(8, &[-48, -384, -240, -48, -3], &[-128, 1920, 3312, 1792, 432, 48, 2], 1),
        FamilySpec::new(9, &[-27, -252, -162, -36, -3], &[-54, 972, 1782, 1008, 270, 36, 2], 1),
        FamilySpec::new(
            12,
            &[-432, -9504, -22320, -22464, -12240, -3888, -720, -72, -3],
            &[
                -3456, 134784, 784512, 1715904, 2058480, 1552608, 784368, 273024, 65808, 10800,
                1152, 72, 2,
            ],
            1,
        ),
        FamilySpec::new(
            16,
            &[-48, -1536, -4224, -4992, -3312, -1344, -336, -48, -3],
            &[
                -128, 7680, 54912, 141184, 199920, 181248, 112896, 49920, 15792, 3520, 528, 48, 2,
            ],
            1,
        ),
        FamilySpec::new(
            18,
            &[
                -432, -19008, -92448, -208944, -283392, -255744, -161280, -72576, -23328, -5256,
                -792, -72, -3,
            ],
            &[
                -3456, 269568, 3182976, 14765760, 39714624, 71668800, 93488688, 92047104,
                70230240, 42183792, 20110464, 7623936, 2288880, 538272, 97200, 13032, 1224, 72,
                2,
            ],
            1,
        ),
    ]
});

/// The registered family for level `N`.
pub fn family(level: u32) -> Result<&'static FamilySpec> {
    if level == 7 {
        return domain(
            "N=7 is unsupported: f and g share the factor t^2 + 13t + 49 in every model",
        );
    }
    FAMILIES
        .iter()
        .find(|f| f.level == level)
        .ok_or(Error::UnsupportedLevel(level))
}

/// All registered families.
pub fn all_families() -> &'static [FamilySpec] {
    &FAMILIES
}

/// `(u²f_N(t), u³g_N(t))`.
pub fn family_curve(level: u32, u: &Rational, t: &Rational) -> Result<(Rational, Rational)> {
    family(level)?.curve(u, t)
}

/// `(u²f_N(t), u³g_N(t))` evaluated at any `t`, cusps included; the
/// fibre there is singular.
pub fn family_coefficients(level: u32, u: &Rational, t: &Rational) -> Result<(Rational, Rational)> {
    let (f, g) = family(level)?.eval_fg(t);
    Ok((u * u * f, u * u * u * g))
}

/// `(r, s, m, n, h, w)` for a family level.
pub fn table2_invariants(level: u32) -> Result<(u32, u32, u32, u32, u32, Rational)> {
    Ok(family(level)?.invariants())
}

/// j-invariant above `t`: in the family coordinate where a family exists,
/// otherwise on the X₀(N) hauptmodul.
pub fn jmap(level: u32, t: &Rational) -> Result<Rational> {
    match family(level) {
        Ok(f) => f.jmap(t),
        Err(Error::UnsupportedLevel(_)) => jmap_for(level)?.eval(t),
        Err(e) => Err(e),
    }
}

/// Text dump of every frozen polynomial: one per line, coefficients
/// separated by spaces, constant term first; `#` lines label them.
pub fn registry_dump() -> String {
    let mut out = String::new();
    for fam in all_families() {
        let _ = writeln!(out, "# N={} f (denominator {})", fam.level, fam.den);
        let _ = writeln!(out, "{}", fam.f);
        let _ = writeln!(out, "# N={} g (denominator {})", fam.level, fam.den);
        let _ = writeln!(out, "{}", fam.g);
        let _ = writeln!(out, "# N={} family j-map numerator", fam.level);
        let _ = writeln!(out, "{}", fam.jmap_num);
        let _ = writeln!(out, "# N={} family j-map denominator", fam.level);
        let _ = writeln!(out, "{}", fam.jmap_den);
    }
    for jm in crate::isogeny::jmaps::all_jmaps() {
        let _ = writeln!(out, "# X0({}) j-map numerator", jm.level);
        let _ = writeln!(out, "{}", jm.num);
        let _ = writeln!(out, "# X0({}) j-map denominator", jm.level);
        let _ = writeln!(out, "{}", jm.den);
    }
    out
}
