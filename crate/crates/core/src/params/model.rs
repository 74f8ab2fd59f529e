//! Model coefficients and the combined problem description.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::geometry::{Generator, TorusGeometry};
use super::rational::rat_int;
use super::surd::{QuadraticSurd, SurdSum};
use crate::error::{Error, Result};

/// Coefficients `μ, m, λ, p` and the bifurcation modes `j*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mu: QuadraticSurd,
    pub m: QuadraticSurd,
    pub lambda: f64,
    pub p: u32,
    pub jstar: [i64; 2],
}

impl ModelParams {
    pub fn new(mu: QuadraticSurd, m: QuadraticSurd, lambda: f64, p: u32, jstar: [i64; 2]) -> Result<Self> {
        let out = Self {
            mu,
            m,
            lambda,
            p,
            jstar,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mu.is_positive() {
            return Err(Error::Domain("mu must be positive".into()));
        }
        if !self.m.is_positive() {
            return Err(Error::Domain("m must be positive".into()));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Domain("lambda must be positive and finite".into()));
        }
        if self.p < 1 {
            return Err(Error::Domain("p must be at least 1".into()));
        }
        if self.jstar.iter().any(|&j| j < 1) {
            return Err(Error::Domain("jstar entries must be positive integers".into()));
        }
        Ok(())
    }
}

/// Model parameters together with the torus.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub params: ModelParams,
    pub geom: TorusGeometry,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    mu: QuadraticSurd,
    m: QuadraticSurd,
    #[serde(rename = "L1")]
    l1: Generator,
    #[serde(rename = "L2")]
    l2: Generator,
    lambda: f64,
    p: u32,
    jstar: [i64; 2],
}

impl Serialize for Problem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProblemRepr {
            mu: self.params.mu.clone(),
            m: self.params.m.clone(),
            l1: self.geom.generator(0).clone(),
            l2: self.geom.generator(1).clone(),
            lambda: self.params.lambda,
            p: self.params.p,
            jstar: self.params.jstar,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Problem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = ProblemRepr::deserialize(de)?;
        let params = ModelParams::new(r.mu, r.m, r.lambda, r.p, r.jstar).map_err(serde::de::Error::custom)?;
        let geom = TorusGeometry::new(r.l1, r.l2).map_err(serde::de::Error::custom)?;
        Ok(Problem { params, geom })
    }
}

impl Problem {
    pub fn new(params: ModelParams, geom: TorusGeometry) -> Result<Self> {
        params.validate()?;
        Ok(Self { params, geom })
    }

    /// `μ = 1, m = 1/2, ν = (1, 1), j* = (1, 2), λ = 1, p = 1`.
    pub fn running_example() -> Self {
        let params = ModelParams::new(
            QuadraticSurd::from_int(1),
            QuadraticSurd::from_rational(super::rational::rat(1, 2)),
            1.0,
            1,
            [1, 2],
        )
        .expect("valid");
        Self {
            params,
            geom: TorusGeometry::unit(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    /// Exact comparison of `ν₁j₁*` with `ν₂j₂*` via fourth powers.
    pub fn compare_axes(&self) -> Ordering {
        let [j1, j2] = self.params.jstar;
        let a = self.geom.nu4(0).scale(&rat_int(j1.pow(4)));
        let b = self.geom.nu4(1).scale(&rat_int(j2.pow(4)));
        SurdSum::from(&a).sub(&SurdSum::from(&b)).signum()
    }

    /// `ν₁j₁* ≠ ν₂j₂*`.
    pub fn standing_hypothesis_holds(&self) -> bool {
        self.compare_axes() != Ordering::Equal
    }

    pub fn require_standing_hypothesis(&self) -> Result<()> {
        if self.standing_hypothesis_holds() {
            Ok(())
        } else {
            Err(Error::Precondition(
                "standing hypothesis violated: nu1*j1* equals nu2*j2*".into(),
            ))
        }
    }

    /// Axis exchange `(ν₁, j₁*) ↔ (ν₂, j₂*)`.
    pub fn swapped(&self) -> Self {
        let mut params = self.params.clone();
        params.jstar = [params.jstar[1], params.jstar[0]];
        Self {
            params,
            geom: self.geom.swapped(),
        }
    }

    pub fn coeffs(&self) -> Coeffs {
        let digits = 30;
        let nu4 = [
            self.geom.nu4(0).to_fixed(digits).to_f64(),
            self.geom.nu4(1).to_fixed(digits).to_f64(),
        ];
        let nu2 = [
            self.geom.nu4(0).to_fixed(digits).sqrt().to_f64(),
            self.geom.nu4(1).to_fixed(digits).sqrt().to_f64(),
        ];
        Coeffs {
            mu: self.params.mu.to_fixed(digits).to_f64(),
            m: self.params.m.to_fixed(digits).to_f64(),
            nu: self.geom.nu_f64(),
            nu2,
            nu4,
            lambda: self.params.lambda,
            p: self.params.p,
            jstar: self.params.jstar,
        }
    }
}

/// Floating-point image of a [`Problem`] used by the numerical modules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coeffs {
    pub mu: f64,
    pub m: f64,
    pub nu: [f64; 2],
    pub nu2: [f64; 2],
    pub nu4: [f64; 2],
    pub lambda: f64,
    pub p: u32,
    pub jstar: [i64; 2],
}

impl Coeffs {
    /// `λ_j = ν₁²j₁² + ν₂²j₂²`, the symbol of `−Δ_ν`.
    pub fn lap(&self, j: [i64; 2]) -> f64 {
        self.nu2[0] * (j[0] * j[0]) as f64 + self.nu2[1] * (j[1] * j[1]) as f64
    }
}
