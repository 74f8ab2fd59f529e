//! Decimal fixed-point numbers with a big-integer mantissa.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::rational::{rational_to_f64, Rational};

const GUARD: u32 = 12;

/// Value `mant / 10^scale`, where `scale` is the requested digit count plus
/// guard digits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    scale: u32,
}

fn pow10(e: u32) -> BigInt {
    BigInt::from(10u32).pow(e)
}

fn div_round(n: BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if (r * 2u32) >= *d {
        q + 1
    } else {
        q
    }
}

impl Fixed {
    pub fn from_rational(q: &Rational, digits: u32) -> Self {
        let scale = digits + GUARD;
        let mant = div_round(q.numer() * pow10(scale), q.denom());
        Self { mant, scale }
    }

    pub fn from_int(n: i64, digits: u32) -> Self {
        let scale = digits + GUARD;
        Self {
            mant: BigInt::from(n) * pow10(scale),
            scale,
        }
    }

    pub fn sqrt_of_uint(n: &BigUint, digits: u32) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from_biguint(Sign::Plus, n.clone())), digits)
            .sqrt()
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, u32) {
        match self.scale.cmp(&other.scale) {
            std::cmp::Ordering::Equal => (self.mant.clone(), other.mant.clone(), self.scale),
            std::cmp::Ordering::Less => (
                &self.mant * pow10(other.scale - self.scale),
                other.mant.clone(),
                other.scale,
            ),
            std::cmp::Ordering::Greater => (
                self.mant.clone(),
                &other.mant * pow10(self.scale - other.scale),
                self.scale,
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Self { mant: a + b, scale }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Self { mant: a - b, scale }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        Self {
            mant: div_round(a * b, &pow10(scale)),
            scale,
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        let (a, b, scale) = self.aligned(other);
        let (num, den) = if b.is_negative() { (-a, -b) } else { (a, b) };
        Self {
            mant: div_round(num * pow10(scale), &den),
            scale,
        }
    }

    /// Square root, truncated; negative inputs give zero.
    pub fn sqrt(&self) -> Self {
        if !self.mant.is_positive() {
            return Self {
                mant: BigInt::zero(),
                scale: self.scale,
            };
        }
        let m = (&self.mant * pow10(self.scale)).magnitude().sqrt();
        Self {
            mant: BigInt::from_biguint(Sign::Plus, m),
            scale: self.scale,
        }
    }

    pub fn to_rational(&self) -> Rational {
        BigRational::new(self.mant.clone(), pow10(self.scale))
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.to_rational())
    }

    /// Decimal rendering with `digits` digits after the point (truncated).
    pub fn to_decimal(&self, digits: u32) -> String {
        let cut = self.scale.saturating_sub(digits);
        let m = &self.mant / pow10(cut);
        let neg = m.is_negative();
        let s = m.magnitude().to_string();
        let d = digits as usize;
        let s = if s.len() <= d { format!("{}{}", "0".repeat(d + 1 - s.len()), s) } else { s };
        let (ip, fp) = s.split_at(s.len() - d);
        format!("{}{}.{}", if neg { "-" } else { "" }, ip, fp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rational::rat;

    #[test]
    fn sqrt_two_digits() {
        let s = Fixed::sqrt_of_uint(&BigUint::from(2u32), 50);
        assert_eq!(
            s.to_decimal(50),
            "1.41421356237309504880168872420969807856967187537694"
        );
    }

    #[test]
    fn arithmetic() {
        let a = Fixed::from_rational(&rat(3, 2), 30);
        let b = Fixed::from_rational(&rat(1, 3), 30);
        let q = a.div(&b).to_rational() - rat(9, 2);
        assert!(rational_to_f64(&q).abs() < 1e-35);
        let p = a.mul(&b).sub(&Fixed::from_rational(&rat(1, 2), 30));
        assert!(p.to_f64().abs() < 1e-35);
        assert_eq!(a.add(&Fixed::from_int(1, 30)).to_f64(), 2.5);
    }
}
