//! Quadratic surds `r·√d` and finite sums of them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::precision::Fixed;
use super::rational::{
    exact_isqrt, format_rational, parse_rational, rational_to_f64, square_free_decompose, Rational,
};
use crate::error::{Error, Result};

/// The real number `r·√d` with `d` square-free.
///
/// `d = 1` exactly when the value is rational; zero is stored as `0·√1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticSurd {
    r: Rational,
    d: BigUint,
}

impl QuadraticSurd {
    pub fn new(r: Rational, d: BigUint) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::Domain("surd radicand must be positive".into()));
        }
        let (a, s) = square_free_decompose(&d);
        let r = r * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, a));
        if r.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self { r, d: s })
    }

    pub fn zero() -> Self {
        Self {
            r: Rational::zero(),
            d: BigUint::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        Self { r, d: BigUint::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `√q` for a non-negative rational `q`.
    pub fn sqrt_of(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Domain(format!(
                "square root of negative rational {}",
                format_rational(q)
            )));
        }
        if q.is_zero() {
            return Ok(Self::zero());
        }
        // √(n/d) = √(n·d) / d
        let nd = q.numer().magnitude() * q.denom().magnitude();
        let inv_d = BigRational::new(BigInt::one(), q.denom().clone());
        Self::new(inv_d, nd)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.r
    }

    pub fn radicand(&self) -> &BigUint {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.r.is_positive()
    }

    pub fn is_rational(&self) -> bool {
        self.d.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.r.clone())
    }

    /// `(r√d)² = r²d`, always rational.
    pub fn square(&self) -> Rational {
        &self.r * &self.r * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.d.clone()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        // √a·√b = g·√(ab/g²) with g = gcd(a, b); the quotient stays square-free.
        let g = num_integer::Integer::gcd(&self.d, &other.d);
        let d = (&self.d / &g) * (&other.d / &g);
        let r = &self.r * &other.r * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, g));
        if r.is_zero() {
            return Self::zero();
        }
        Self { r, d }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            r: &self.r * q,
            d: self.d.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("reciprocal of zero surd".into()));
        }
        // 1/(r√d) = √d / (r d)
        let rd = &self.r * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, self.d.clone()));
        Ok(Self {
            r: rd.recip(),
            d: self.d.clone(),
        })
    }

    /// `self / other` when the quotient is rational (equal radicands).
    pub fn ratio_if_rational(&self, other: &Self) -> Option<Rational> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Rational::zero());
        }
        (self.d == other.d).then(|| &self.r / &other.r)
    }

    /// `√self` when it is again a quadratic surd, i.e. when `self` is a
    /// non-negative rational.
    pub fn sqrt(&self) -> Option<Self> {
        let q = self.as_rational()?;
        Self::sqrt_of(&q).ok()
    }

    pub fn to_fixed(&self, digits: u32) -> Fixed {
        Fixed::from_rational(&self.r, digits).mul(&Fixed::sqrt_of_uint(&self.d, digits))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.r) * self.d.to_string().parse::<f64>().unwrap_or(f64::NAN).sqrt()
    }

    pub fn to_sum(&self) -> SurdSum {
        SurdSum::from_terms(vec![(self.d.clone(), self.r.clone())])
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d.is_one() {
            write!(f, "{}", self.r)
        } else {
            write!(f, "{}*sqrt({})", self.r, self.d)
        }
    }
}

/// Parses the display form: `q`, `sqrt(d)` or `q*sqrt(d)`.
impl std::str::FromStr for QuadraticSurd {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let t = text.trim();
        let bad = || Error::Parse(format!("not a quadratic surd: {text:?}"));
        let (coef, rest) = match t.find("sqrt(") {
            None => return Ok(Self::from_rational(parse_rational(t)?)),
            Some(0) => ("1", t),
            Some(i) => (t[..i].strip_suffix('*').ok_or_else(bad)?, &t[i..]),
        };
        let d = rest
            .strip_prefix("sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?
            .trim()
            .parse::<BigUint>()
            .map_err(|_| bad())?;
        Self::new(parse_rational(coef)?, d)
    }
}

/// Wire form: `{"r": "num/den", "d": radicand}`.
#[derive(Serialize, Deserialize)]
struct SurdRepr {
    r: String,
    d: u64,
}

impl Serialize for QuadraticSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = u64::try_from(&self.d).map_err(serde::ser::Error::custom)?;
        SurdRepr {
            r: format_rational(&self.r),
            d,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticSurd {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SurdRepr::deserialize(de)?;
        let r = parse_rational(&repr.r).map_err(serde::de::Error::custom)?;
        QuadraticSurd::new(r, BigUint::from(repr.d)).map_err(serde::de::Error::custom)
    }
}

/// Element `Σ cᵢ·√dᵢ` of a multi-quadratic field with pairwise inequivalent
/// radicands.
///
/// Square roots of distinct square-free integers are linearly independent
/// over ℚ, so the canonical form is zero iff every coefficient is zero. Terms
/// are merged whenever the product of their radicands is a perfect square,
/// which avoids factoring the (possibly large) raw radicands.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: Vec<(BigUint, Rational)>,
}

impl SurdSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::from_terms(vec![(BigUint::one(), q)])
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `√q` for a non-negative rational, without factoring.
    pub fn sqrt_of_rational(q: &Rational) -> Result<Self> {
        if q.is_negative() {
            return Err(Error::Domain("square root of a negative rational".into()));
        }
        let nd = q.numer().magnitude() * q.denom().magnitude();
        let inv_d = BigRational::new(BigInt::one(), q.denom().clone());
        Ok(Self::from_terms(vec![(nd, inv_d)]))
    }

    pub fn from_terms(raw: Vec<(BigUint, Rational)>) -> Self {
        let mut out = Self::zero();
        for (d, c) in raw {
            out.push_term(d, c);
        }
        out.terms.retain(|(_, c)| !c.is_zero());
        out.terms.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    fn push_term(&mut self, d: BigUint, c: Rational) {
        if c.is_zero() || d.is_zero() {
            return;
        }
        for (rep, coeff) in self.terms.iter_mut() {
            let prod = &d * &*rep;
            if let Some(root) = exact_isqrt(&prod) {
                // √d = √(d·rep)/rep · √rep
                let factor = BigRational::new(
                    BigInt::from_biguint(Sign::Plus, root),
                    BigInt::from_biguint(Sign::Plus, rep.clone()),
                );
                *coeff += c * factor;
                return;
            }
        }
        // Perfect squares fold into the rational term.
        if let Some(root) = exact_isqrt(&d) {
            if !d.is_one() {
                self.push_term(BigUint::one(), c * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, root)));
                return;
            }
        }
        self.terms.push((d, c));
    }

    pub fn terms(&self) -> &[(BigUint, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(d, c)] if d.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut raw = self.terms.clone();
        raw.extend(other.terms.iter().cloned());
        Self::from_terms(raw)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(d, c)| (d.clone(), c * q)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let g = num_integer::Integer::gcd(d1, d2);
                let d = (d1 / &g) * (d2 / &g);
                let c = c1 * c2 * BigRational::from_integer(BigInt::from_biguint(Sign::Plus, g));
                raw.push((d, c));
            }
        }
        Self::from_terms(raw)
    }

    /// Exact sign, decided by interval refinement of each square root.
    pub fn signum(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        let mut bits: u64 = 64;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Rational enclosure `[lo, hi]` of the value using `⌊√(d·4^b)⌋ / 2^b`.
    fn enclosure(&self, bits: u64) -> (Rational, Rational) {
        let scale = BigUint::one() << bits;
        let den = BigInt::from_biguint(Sign::Plus, scale.clone());
        let mut lo = Rational::zero();
        let mut hi = Rational::zero();
        for (d, c) in &self.terms {
            let root = (d * &scale * &scale).sqrt();
            let exact = &root * &root == d * &scale * &scale;
            let low = BigRational::new(BigInt::from_biguint(Sign::Plus, root.clone()), den.clone());
            let high = if exact {
                low.clone()
            } else {
                BigRational::new(BigInt::from_biguint(Sign::Plus, root + 1u32), den.clone())
            };
            if c.is_positive() {
                lo += c * &low;
                hi += c * &high;
            } else {
                lo += c * &high;
                hi += c * &low;
            }
        }
        (lo, hi)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| rational_to_f64(c) * d.to_string().parse::<f64>().unwrap_or(f64::NAN).sqrt())
            .sum()
    }
}

impl From<&QuadraticSurd> for SurdSum {
    fn from(s: &QuadraticSurd) -> Self {
        s.to_sum()
    }
}
