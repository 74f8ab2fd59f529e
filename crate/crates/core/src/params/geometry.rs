//! Rectangular torus generators and the derived wave-number scalings `ν_k = 1/L_k`.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::precision::Fixed;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// One torus generator.
///
/// `Length` stores `L = r√d` directly. `Pow4` stores only `L⁴ = r√d`, which is
/// what the anisotropic cases need: there `L²` is a fourth root and has no
/// quadratic-surd form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Generator {
    Pow4 { pow4: QuadraticSurd },
    Length(QuadraticSurd),
}

impl Generator {
    pub fn pow4(&self) -> QuadraticSurd {
        match self {
            Generator::Length(l) => {
                let sq = l.square();
                QuadraticSurd::from_rational(&sq * &sq)
            }
            Generator::Pow4 { pow4 } => pow4.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusGeometry {
    generators: [Generator; 2],
    l4: [QuadraticSurd; 2],
    nu4: [QuadraticSurd; 2],
}

impl TorusGeometry {
    pub fn new(g1: Generator, g2: Generator) -> Result<Self> {
        let l4 = [g1.pow4(), g2.pow4()];
        for (k, v) in l4.iter().enumerate() {
            if !v.is_positive() {
                return Err(Error::Domain(format!("generator L{} must be positive", k + 1)));
            }
        }
        if let Generator::Length(l) = &g1 {
            if !l.is_positive() {
                return Err(Error::Domain("generator L1 must be positive".into()));
            }
        }
        if let Generator::Length(l) = &g2 {
            if !l.is_positive() {
                return Err(Error::Domain("generator L2 must be positive".into()));
            }
        }
        let nu4 = [l4[0].recip()?, l4[1].recip()?];
        Ok(Self {
            generators: [g1, g2],
            l4,
            nu4,
        })
    }

    pub fn from_lengths(l1: QuadraticSurd, l2: QuadraticSurd) -> Result<Self> {
        Self::new(Generator::Length(l1), Generator::Length(l2))
    }

    /// Geometry with prescribed `ν_k = r_k√d_k`.
    pub fn from_nu(nu1: QuadraticSurd, nu2: QuadraticSurd) -> Result<Self> {
        Self::from_lengths(nu1.recip()?, nu2.recip()?)
    }

    /// Geometry with prescribed `ν_k⁴`.
    pub fn from_nu4(nu4_1: QuadraticSurd, nu4_2: QuadraticSurd) -> Result<Self> {
        Self::new(
            Generator::Pow4 { pow4: nu4_1.recip()? },
            Generator::Pow4 { pow4: nu4_2.recip()? },
        )
    }

    /// The standard torus, `L = (1, 1)`.
    pub fn unit() -> Self {
        Self::from_lengths(QuadraticSurd::from_int(1), QuadraticSurd::from_int(1)).expect("unit torus")
    }

    pub fn generator(&self, k: usize) -> &Generator {
        &self.generators[k]
    }

    pub fn l4(&self, k: usize) -> &QuadraticSurd {
        &self.l4[k]
    }

    pub fn nu4(&self, k: usize) -> &QuadraticSurd {
        &self.nu4[k]
    }

    /// `L_k` when it is itself a quadratic surd.
    pub fn length(&self, k: usize) -> Option<QuadraticSurd> {
        match &self.generators[k] {
            Generator::Length(l) => Some(l.clone()),
            Generator::Pow4 { pow4 } => pow4.sqrt().and_then(|l2| l2.sqrt()),
        }
    }

    /// `ν_k` when it is a quadratic surd.
    pub fn nu(&self, k: usize) -> Option<QuadraticSurd> {
        self.length(k).and_then(|l| l.recip().ok())
    }

    /// `ν_k² = √(ν_k⁴)`, available exactly when `ν_k⁴` is rational.
    pub fn nu2(&self, k: usize) -> Option<QuadraticSurd> {
        self.nu4[k].sqrt()
    }

    /// `ν₂⁴/ν₁⁴` when rational.
    pub fn nu4_ratio(&self) -> Option<num_rational::BigRational> {
        self.nu4[1].ratio_if_rational(&self.nu4[0])
    }

    /// `ν₂²/ν₁² = √(ν₂⁴/ν₁⁴)`, a quadratic surd whenever the quartic ratio is rational.
    pub fn nu2_ratio(&self) -> Option<QuadraticSurd> {
        QuadraticSurd::sqrt_of(&self.nu4_ratio()?).ok()
    }

    /// `ν₁²ν₂² = √(ν₁⁴ν₂⁴)` when the product of the quartic powers is rational.
    pub fn nu2_product(&self) -> Option<QuadraticSurd> {
        self.nu4[0].mul(&self.nu4[1]).sqrt()
    }

    pub fn nu_fixed(&self, k: usize, digits: u32) -> Fixed {
        self.nu4[k].to_fixed(digits).sqrt().sqrt()
    }

    pub fn nu_f64(&self) -> [f64; 2] {
        [self.nu_fixed(0, 30).to_f64(), self.nu_fixed(1, 30).to_f64()]
    }

    /// Axis exchange `(L₁, L₂) → (L₂, L₁)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.generators[1].clone(), self.generators[0].clone()).expect("valid geometry")
    }

    /// True when each `ν_k⁴` is rational (the geometries admitted by `S′`).
    pub fn quartic_rational(&self) -> bool {
        self.nu4.iter().all(|v| v.radicand() == &BigUint::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::rational::{rat, rat_int};

    #[test]
    fn nu_times_l_is_one() {
        let g = TorusGeometry::from_lengths(
            QuadraticSurd::new(rat(1, 2), BigUint::from(3u32)).unwrap(),
            QuadraticSurd::from_int(2),
        )
        .unwrap();
        for k in 0..2 {
            let l = g.length(k).unwrap();
            let nu = g.nu(k).unwrap();
            assert_eq!(l.mul(&nu), QuadraticSurd::from_int(1));
        }
        // L₁ = √3/2, so ν₁⁴ = 16/9.
        assert_eq!(g.nu4(0).as_rational(), Some(rat(16, 9)));
    }

    #[test]
    fn quartic_generators() {
        let s2 = QuadraticSurd::new(rat_int(1), BigUint::from(2u32)).unwrap();
        let g = TorusGeometry::from_nu4(s2.clone(), s2.scale(&rat_int(2))).unwrap();
        assert!(g.nu2(0).is_none());
        assert_eq!(g.nu4_ratio(), Some(rat_int(2)));
        assert_eq!(g.nu2_ratio().unwrap(), s2);
        assert_eq!(g.nu2_product().unwrap().square(), rat_int(4));
        let nu = g.nu_f64();
        assert!((nu[0] - 2f64.powf(0.125)).abs() < 1e-15);
    }

    #[test]
    fn generator_json_forms() {
        let a: Generator = serde_json::from_str(r#"{"r":"1/1","d":2}"#).unwrap();
        assert!(matches!(a, Generator::Length(_)));
        let b: Generator = serde_json::from_str(r#"{"pow4":{"r":"1/2","d":2}}"#).unwrap();
        assert!(matches!(b, Generator::Pow4 { .. }));
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"pow4":{"r":"1/2","d":2}}"#);
    }
}
