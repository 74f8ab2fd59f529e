//! Helpers around arbitrary-precision rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"num/den"`, `"num"` or a finite decimal literal such as `"0.125"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational literal: {text:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        let digits = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp);
        let mut n: BigInt = digits.parse().map_err(|_| bad())?;
        if neg {
            n = -n;
        }
        let d = BigInt::from(10u32).pow(fp.len() as u32);
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Formats as `"num/den"` (the denominator is always written).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Very large numerator/denominator: fall back to scaled division.
        let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
        let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Best rational with denominator `den` nearest to `x`.
pub fn rational_near(x: f64, den: &BigInt) -> Rational {
    let scaled = x * den.to_f64().unwrap_or(f64::MAX);
    let n = BigInt::from(scaled.round() as i128);
    BigRational::new(n, den.clone())
}

/// Returns the integer square root when `n` is a perfect square.
pub fn exact_isqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a non-negative rational, if it is rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = exact_isqrt(q.numer().magnitude())?;
    let d = exact_isqrt(q.denom().magnitude())?;
    Some(BigRational::new(
        BigInt::from_biguint(Sign::Plus, n),
        BigInt::from_biguint(Sign::Plus, d),
    ))
}

/// Decides whether `√q` is irrational for a positive rational `q`.
///
/// `q` is stored in lowest terms, so `√q` is rational exactly when numerator
/// and denominator are both perfect squares.
pub fn sqrt_is_irrational(q: &Rational) -> Result<bool> {
    if !q.is_positive() {
        return Err(Error::Domain(format!(
            "sqrt_is_irrational needs q > 0, got {}",
            format_rational(q)
        )));
    }
    Ok(rational_sqrt(q).is_none())
}

/// Membership in ℕ = {1, 2, 3, ...}.
pub fn is_natural(q: &Rational) -> bool {
    q.is_integer() && q.is_positive()
}

/// Splits `n = a² · s` with `s` square-free.
///
/// Trial division runs up to the cube root of what remains; the leftover
/// cofactor then has at most two prime factors, so a perfect-square test
/// finishes the decomposition exactly.
pub fn square_free_decompose(n: &BigUint) -> (BigUint, BigUint) {
    if n.is_zero() {
        return (BigUint::zero(), BigUint::one());
    }
    if let Some(v) = n.to_u128() {
        let (a, s) = square_free_u128(v);
        return (BigUint::from(a), BigUint::from(s));
    }
    let mut rest = n.clone();
    let mut a = BigUint::one();
    let mut s = BigUint::one();
    let mut p = BigUint::from(2u32);
    loop {
        if &p * &p * &p > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            a *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= &p;
            }
        }
        p += if p == BigUint::from(2u32) { 1u32 } else { 2u32 };
    }
    if let Some(r) = exact_isqrt(&rest) {
        a *= r;
    } else {
        s *= rest;
    }
    (a, s)
}

fn square_free_u128(mut rest: u128) -> (u128, u128) {
    let mut a: u128 = 1;
    let mut s: u128 = 1;
    let mut p: u128 = 2;
    while p.saturating_mul(p).saturating_mul(p) <= rest {
        let mut e = 0u32;
        while rest.is_multiple_of(p) {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            a *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = rest.sqrt();
    if r * r == rest {
        a *= r;
    } else {
        s *= rest;
    }
    (a, s)
}

/// Integer ceiling of a positive rational.
pub fn ceil_rational(q: &Rational) -> BigInt {
    let (d, r) = q.numer().div_mod_floor(q.denom());
    if r.is_zero() {
        d
    } else {
        d + 1
    }
}
