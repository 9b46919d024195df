//! Integer and rational arithmetic: factorization, valuations, power-free
//! parts and the sum-of-two-squares functions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use once_cell::sync::Lazy;

use crate::error::{domain, Error, Result};

/// Exact rationals. `num_rational` keeps the numerator and denominator
/// coprime with a positive denominator.
pub type Rational = BigRational;

/// Build `n/d` from machine integers. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Build the rational integer `n`.
pub fn rint(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Default bound for the smallest-prime-factor table.
pub const DEFAULT_SIEVE_BOUND: usize = 10_000_000;

/// Smallest-prime-factor table up to a fixed bound.
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    /// Linear sieve over `0..=bound`.
    pub fn new(bound: usize) -> Self {
        let bound = bound.max(2);
        let mut spf = vec![0u32; bound + 1];
        let mut primes = Vec::new();
        for i in 2..=bound {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > bound {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n` for `2 <= n <= bound`.
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    fn push_factors(&self, mut n: u64, out: &mut Vec<u64>) {
        while n > 1 {
            let p = self.spf(n);
            out.push(p);
            n /= p;
        }
    }
}

static SIEVE: Lazy<Sieve> = Lazy::new(|| Sieve::new(DEFAULT_SIEVE_BOUND));

/// The shared smallest-prime-factor table (built on first use).
pub fn sieve() -> &'static Sieve {
    &SIEVE
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Product of the prime powers (i.e. `|n|`).
    pub fn value(&self) -> u128 {
        self.pairs.iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e))
    }

    /// All positive divisors, unsorted.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.pairs {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs
    }

    fn from_primes(mut primes: Vec<u64>) -> Self {
        primes.sort_unstable();
        let mut pairs: Vec<(u64, u32)> = Vec::new();
        for p in primes {
            match pairs.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => pairs.push((p, 1)),
            }
        }
        Factorization { pairs }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .pairs
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Factor a nonzero integer.
pub fn factorize(n: i64) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    Ok(factorize_u64(n.unsigned_abs()))
}

/// Factor a positive integer (1 gives the empty factorization).
pub fn factorize_u64(n: u64) -> Factorization {
    let mut primes = Vec::new();
    collect_prime_factors(n, sieve(), &mut primes);
    Factorization::from_primes(primes)
}

/// Factor an integer given as `u128`; only values below 2^64 are supported.
pub fn factorize_u128(n: u128) -> Result<Factorization> {
    if n == 0 {
        return domain("cannot factor 0");
    }
    match u64::try_from(n) {
        Ok(v) => Ok(factorize_u64(v)),
        Err(_) => Err(Error::TooLarge(n.to_string())),
    }
}

fn collect_prime_factors(mut n: u64, sv: &Sieve, out: &mut Vec<u64>) {
    if n <= sv.bound() {
        sv.push_factors(n, out);
        return;
    }
    // strip small primes first; what remains is usually prime or a semiprime
    for &p in sv.primes().iter().take(1000) {
        let p = p as u64;
        if p * p > n {
            break;
        }
        while n % p == 0 {
            out.push(p);
            n /= p;
        }
    }
    if n <= sv.bound() {
        sv.push_factors(n, out);
        return;
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if m <= sv.bound() {
            sv.push_factors(m, out);
        } else if is_prime_u64(m) {
            out.push(m);
        } else {
            let d = pollard_rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant; `n` must be odd and composite.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let (mut g, mut r, mut q) = (1u64, 1u64, 1u64);
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..(r - k).min(128) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Exponent of the prime `p` in a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exponent of the prime `p` in a nonzero machine integer.
pub fn val_i128(mut n: i128, p: u64) -> u32 {
    debug_assert!(n != 0);
    let p = p as i128;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// p-adic valuation of a nonzero rational.
pub fn val_p(q: &Rational, p: u64) -> Result<i64> {
    if q.is_zero() {
        return domain("valuation of 0 is infinite");
    }
    if p < 2 || !is_prime_u64(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(val_int(q.numer(), p) as i64 - val_int(q.denom(), p) as i64)
}

/// Write `n = core * d^k` with `core` k-th-power free and `d > 0` maximal.
pub fn power_free_decompose(n: i64, k: u32) -> Result<(i64, u64)> {
    if n == 0 {
        return domain("power-free part of 0 is undefined");
    }
    if k < 2 {
        return domain("k must be at least 2");
    }
    let mut core = n.signum();
    let mut d = 1u64;
    for &(p, e) in factorize(n)?.pairs() {
        d *= p.pow(e / k);
        core *= (p as i64).pow(e % k);
    }
    Ok((core, d))
}

/// True when no prime appears in `n` to a power `>= k`.
pub fn is_power_free(n: u64, k: u32) -> bool {
    n != 0 && factorize_u64(n).pairs().iter().all(|&(_, e)| e < k)
}

/// `B(n^4)`: multiplicative with value `4k+1` at `p^k` for `p ≡ 1 mod 4`
/// and 1 at every other prime power.
pub fn b_four(n: u64) -> u64 {
    assert!(n >= 1, "b_four is defined for n >= 1");
    factorize_u64(n)
        .pairs()
        .iter()
        .filter(|&&(p, _)| p % 4 == 1)
        .map(|&(_, k)| 4 * k as u64 + 1)
        .product()
}

/// Number of ordered pairs `(x, y)` of integers with `x² + y² = n`.
pub fn r2(n: u64) -> u64 {
    assert!(n >= 1, "r2 is defined for n >= 1");
    let mut b = 1u64;
    for &(p, e) in factorize_u64(n).pairs() {
        if p % 4 == 3 && e % 2 == 1 {
            return 0;
        }
        if p % 4 == 1 {
            b *= e as u64 + 1;
        }
    }
    4 * b
}

/// Minimality of a section tuple: false exactly when some prime `p` has
/// `p^n` dividing every `|a_i|^{p_i}` (zero entries are divisible by all).
pub fn is_dagger_minimal(values: &[i64], powers: &[u32], n: u32) -> Result<bool> {
    if values.len() != powers.len() {
        return domain("values and powers differ in length");
    }
    if powers.iter().any(|&p| p == 0 || n % p != 0) {
        return domain("every power must divide n");
    }
    if values.iter().all(|&v| v == 0) {
        return domain("all-zero tuple has no minimality");
    }
    let g = values.iter().fold(0u64, |g, &v| g.gcd(&v.unsigned_abs()));
    for p in factorize_u64(g).primes() {
        let fails = values.iter().zip(powers).all(|(&v, &pw)| {
            v == 0 || (pw as u64) * val_i128(v as i128, p) as u64 >= n as u64
        });
        if fails {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Floor of the k-th root of `n`.
pub fn iroot_u128(n: u128, k: u32) -> u128 {
    if n < 2 || k == 1 {
        return n;
    }
    let mut x = (n as f64).powf(1.0 / k as f64) as u128;
    // correct the floating estimate in both directions
    let pow_le = |x: u128| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            match acc.checked_mul(x) {
                Some(v) if v <= n => acc = v,
                _ => return false,
            }
        }
        true
    };
    while x > 0 && !pow_le(x) {
        x -= 1;
    }
    while pow_le(x + 1) {
        x += 1;
    }
    x
}

/// Largest integer `m >= 0` with `m^k < x` (strict), for `x >= 1`.
pub fn max_below(x: u128, k: u32) -> u128 {
    if x == 0 {
        return 0;
    }
    iroot_u128(x - 1, k)
}

/// Exact k-th root of a rational, if it exists.
pub fn rational_root_exact(q: &Rational, k: u32) -> Option<Rational> {
    let n = bigint_root_exact(q.numer(), k)?;
    let d = bigint_root_exact(q.denom(), k)?;
    Some(Rational::new(n, d))
}

fn bigint_root_exact(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return bigint_root_exact(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if r.pow(k) == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small_values() {
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(12).unwrap().pairs(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(-10_000).unwrap().pairs(), &[(2, 4), (5, 4)]);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn factorize_beyond_sieve() {
        let n = 1_000_000_007u64 * 998_244_353;
        assert_eq!(factorize_u64(n).pairs(), &[(998_244_353, 1), (1_000_000_007, 1)]);
        let m = (1u64 << 61) - 1;
        assert_eq!(factorize_u64(m).pairs(), &[(m, 1)]);
        let k = 2u64.pow(5) * 3u64.pow(2) * 10_000_019u64 * 10_000_079;
        assert_eq!(factorize_u64(k).value(), k as u128);
    }

    #[test]
    fn valuations() {
        assert_eq!(val_p(&rat(8, 3), 2).unwrap(), 3);
        assert_eq!(val_p(&rat(8, 3), 3).unwrap(), -1);
        assert_eq!(val_p(&rint(1), 7).unwrap(), 0);
        assert!(val_p(&rint(0), 7).is_err());
    }

    #[test]
    fn power_free_parts() {
        assert_eq!(power_free_decompose(64, 12).unwrap(), (64, 1));
        assert_eq!(power_free_decompose(1 << 13, 12).unwrap(), (2, 2));
        assert_eq!(power_free_decompose(243 * 5, 2).unwrap(), (15, 9));
        assert_eq!(power_free_decompose(-16, 2).unwrap(), (-1, 4));
    }

    #[test]
    fn b_four_and_r2_values() {
        assert_eq!(b_four(1), 1);
        assert_eq!(b_four(5), 5);
        assert_eq!(b_four(15), 5);
        assert_eq!(b_four(25), 9);
        assert_eq!(r2(25), 12);
        assert_eq!(r2(3), 0);
        assert_eq!(r2(1), 4);
        assert_eq!(r2(9), 4);
    }

    #[test]
    fn dagger_examples() {
        assert!(is_dagger_minimal(&[1, 1], &[6, 3], 12).unwrap());
        assert!(!is_dagger_minimal(&[4, 16], &[6, 3], 12).unwrap());
        // 2 appears to exponents 1,2,3; six times the smallest is 6 < 12
        assert!(is_dagger_minimal(&[2, 4, 8], &[6, 6, 6], 12).unwrap());
        assert!(!is_dagger_minimal(&[4, 0, 8], &[6, 6, 6], 12).unwrap());
        assert!(is_dagger_minimal(&[0, 0], &[6, 3], 12).is_err());
        assert!(is_dagger_minimal(&[1, 1], &[5, 3], 12).is_err());
    }

    #[test]
    fn integer_roots_of_powers() {
        assert_eq!(iroot_u128(63, 3), 3);
        assert_eq!(iroot_u128(64, 3), 4);
        assert_eq!(max_below(64, 3), 3);
        assert_eq!(max_below(65, 3), 4);
        assert_eq!(max_below(1, 2), 0);
        assert_eq!(iroot_u128(u64::MAX as u128, 2), u32::MAX as u128);
        assert_eq!(rational_root_exact(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(rational_root_exact(&rat(-4, 9), 2), None);
    }
}
