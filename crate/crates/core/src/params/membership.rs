//! Exact membership tests for the admissible parameter sets `S` and `S′`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::Problem;
use super::rational::{is_natural, rat_int, sqrt_is_irrational, Rational};
use super::surd::QuadraticSurd;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetId {
    #[serde(rename = "S")]
    S,
    #[serde(rename = "S'")]
    SPrime,
}

impl fmt::Display for SetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SetId::S => "S",
            SetId::SPrime => "S'",
        })
    }
}

impl std::str::FromStr for SetId {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S" | "s" => Ok(SetId::S),
            "S'" | "Sprime" | "sprime" | "s'" => Ok(SetId::SPrime),
            _ => Err(crate::error::Error::Parse(format!("unknown set id {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub set_id: SetId,
    pub case_id: Option<u8>,
    pub failed_conditions: Vec<String>,
}

/// Defining conditions of `S`, in canonical report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SCondition {
    Nu4RatioRational,
    MuNu14Rational,
    MRational,
    MOverMuNu14NotNatural,
    MOverMuNu24NotNatural,
    SqrtRatioIrrational,
    NuRatioSqrtRatioIrrational,
}

impl SCondition {
    pub const ALL: [SCondition; 7] = [
        SCondition::Nu4RatioRational,
        SCondition::MuNu14Rational,
        SCondition::MRational,
        SCondition::MOverMuNu14NotNatural,
        SCondition::MOverMuNu24NotNatural,
        SCondition::SqrtRatioIrrational,
        SCondition::NuRatioSqrtRatioIrrational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SCondition::Nu4RatioRational => "nu4_ratio_rational",
            SCondition::MuNu14Rational => "mu_nu1_4_rational",
            SCondition::MRational => "m_rational",
            SCondition::MOverMuNu14NotNatural => "m_over_mu_nu1_4_not_natural",
            SCondition::MOverMuNu24NotNatural => "m_over_mu_nu2_4_not_natural",
            SCondition::SqrtRatioIrrational => "sqrt_ratio_irrational",
            SCondition::NuRatioSqrtRatioIrrational => "nu_ratio_sqrt_ratio_irrational",
        }
    }

    fn structural(self) -> bool {
        matches!(
            self,
            SCondition::Nu4RatioRational | SCondition::MuNu14Rational | SCondition::MRational
        )
    }
}

/// Defining conditions of `S′`, in canonical report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SPrimeCondition {
    Nu4_1Rational,
    Nu4_2Rational,
    Nu2RatioRational,
    MuSquaredRational,
    MSquaredRational,
    MOverMuIrrational,
}

impl SPrimeCondition {
    pub const ALL: [SPrimeCondition; 6] = [
        SPrimeCondition::Nu4_1Rational,
        SPrimeCondition::Nu4_2Rational,
        SPrimeCondition::Nu2RatioRational,
        SPrimeCondition::MuSquaredRational,
        SPrimeCondition::MSquaredRational,
        SPrimeCondition::MOverMuIrrational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SPrimeCondition::Nu4_1Rational => "nu1_4_rational",
            SPrimeCondition::Nu4_2Rational => "nu2_4_rational",
            SPrimeCondition::Nu2RatioRational => "nu2_ratio_rational",
            SPrimeCondition::MuSquaredRational => "mu_squared_rational",
            SPrimeCondition::MSquaredRational => "m_squared_rational",
            SPrimeCondition::MOverMuIrrational => "m_over_mu_irrational",
        }
    }
}

/// Quantities shared by the `S` conditions; `None` where a structural
/// condition fails and the quantity has no exact form.
struct SContext {
    mu_nu14: Option<Rational>,
    mu_nu24: Option<Rational>,
    m: Option<Rational>,
    ratio: Option<Rational>,
    nu_ratio_inv: Option<QuadraticSurd>,
}

impl SContext {
    fn new(problem: &Problem) -> Self {
        let g = &problem.geom;
        let p = &problem.params;
        let nu4_ratio = g.nu4_ratio();
        let mu_nu14 = p.mu.mul(g.nu4(0)).as_rational();
        let mu_nu24 = match (&mu_nu14, &nu4_ratio) {
            (Some(a), Some(q)) => Some(a * q),
            _ => None,
        };
        let m = p.m.as_rational();
        let [j1, j2] = p.jstar;
        let ratio = match (&mu_nu14, &mu_nu24, &m) {
            (Some(a), Some(b), Some(m)) => {
                let num = a * rat_int(j1.pow(4)) + m;
                let den = b * rat_int(j2.pow(4)) + m;
                Some(num / den)
            }
            _ => None,
        };
        let nu_ratio_inv = g.nu2_ratio().and_then(|r| r.recip().ok());
        Self {
            mu_nu14,
            mu_nu24,
            m,
            ratio,
            nu_ratio_inv,
        }
    }

    fn holds(&self, c: SCondition, nu4_ratio_ok: bool) -> Option<bool> {
        match c {
            SCondition::Nu4RatioRational => Some(nu4_ratio_ok),
            SCondition::MuNu14Rational => Some(self.mu_nu14.as_ref().is_some_and(|v| v > &rat_int(0))),
            SCondition::MRational => Some(self.m.is_some()),
            SCondition::MOverMuNu14NotNatural => {
                let (m, a) = (self.m.as_ref()?, self.mu_nu14.as_ref()?);
                Some(!is_natural(&(m / a)))
            }
            SCondition::MOverMuNu24NotNatural => {
                let (m, b) = (self.m.as_ref()?, self.mu_nu24.as_ref()?);
                Some(!is_natural(&(m / b)))
            }
            SCondition::SqrtRatioIrrational => sqrt_is_irrational(self.ratio.as_ref()?).ok(),
            SCondition::NuRatioSqrtRatioIrrational => {
                let root = QuadraticSurd::sqrt_of(self.ratio.as_ref()?).ok()?;
                Some(!self.nu_ratio_inv.as_ref()?.mul(&root).is_rational())
            }
        }
    }
}

/// Case label (1..=6) of the geometry within `S`, if any.
pub fn classify_case(problem: &Problem) -> Option<u8> {
    let g = &problem.geom;
    g.nu4_ratio()?;
    let ratio_rational = g.nu2_ratio().is_some_and(|r| r.is_rational());
    if g.quartic_rational() {
        let r1 = g.nu2(0).is_some_and(|v| v.is_rational());
        let r2 = g.nu2(1).is_some_and(|v| v.is_rational());
        Some(match (r1, r2) {
            (true, true) => 1,
            (false, true) => 2,
            (true, false) => 3,
            (false, false) if ratio_rational => 1,
            (false, false) => 4,
        })
    } else if ratio_rational {
        Some(5)
    } else {
        Some(6)
    }
}

pub fn check_membership_s(problem: &Problem) -> Result<MembershipReport> {
    check_membership_s_ordered(problem, &SCondition::ALL)
}

/// Evaluates the `S` conditions in the given order; the report does not
/// depend on the order.
pub fn check_membership_s_ordered(problem: &Problem, order: &[SCondition]) -> Result<MembershipReport> {
    problem.require_standing_hypothesis()?;
    let ctx = SContext::new(problem);
    let nu4_ratio_ok = problem.geom.nu4_ratio().is_some_and(|q| q > rat_int(0));
    let structural_ok = SCondition::ALL
        .iter()
        .filter(|c| c.structural())
        .all(|&c| ctx.holds(c, nu4_ratio_ok) == Some(true));
    let mut failed: Vec<SCondition> = Vec::new();
    for &c in order {
        if !c.structural() && !structural_ok {
            continue;
        }
        if ctx.holds(c, nu4_ratio_ok) != Some(true) {
            failed.push(c);
        }
    }
    failed.sort();
    failed.dedup();
    Ok(MembershipReport {
        member: failed.is_empty(),
        set_id: SetId::S,
        case_id: classify_case(problem),
        failed_conditions: failed.into_iter().map(|c| c.name().to_string()).collect(),
    })
}

pub fn check_membership_sprime(problem: &Problem) -> Result<MembershipReport> {
    check_membership_sprime_ordered(problem, &SPrimeCondition::ALL)
}

pub fn check_membership_sprime_ordered(
    problem: &Problem,
    order: &[SPrimeCondition],
) -> Result<MembershipReport> {
    problem.require_standing_hypothesis()?;
    let g = &problem.geom;
    let p = &problem.params;
    let mut failed: Vec<SPrimeCondition> = Vec::new();
    for &c in order {
        let ok = match c {
            SPrimeCondition::Nu4_1Rational => g.nu4(0).is_rational(),
            SPrimeCondition::Nu4_2Rational => g.nu4(1).is_rational(),
            SPrimeCondition::Nu2RatioRational => g.nu2_ratio().is_some_and(|r| r.is_rational()),
            // Squares of quadratic surds are rational by construction.
            SPrimeCondition::MuSquaredRational => p.mu.square() > rat_int(0),
            SPrimeCondition::MSquaredRational => p.m.square() > rat_int(0),
            SPrimeCondition::MOverMuIrrational => p.m.ratio_if_rational(&p.mu).is_none(),
        };
        if !ok {
            failed.push(c);
        }
    }
    failed.sort();
    failed.dedup();
    Ok(MembershipReport {
        member: failed.is_empty(),
        set_id: SetId::SPrime,
        case_id: None,
        failed_conditions: failed.into_iter().map(|c| c.name().to_string()).collect(),
    })
}

pub fn check_membership(problem: &Problem, set: SetId) -> Result<MembershipReport> {
    match set {
        SetId::S => check_membership_s(problem),
        SetId::SPrime => check_membership_sprime(problem),
    }
}

/// The set the problem belongs to, if any.
pub fn admissible_set(problem: &Problem) -> Result<Option<SetId>> {
    if check_membership_s(problem)?.member {
        return Ok(Some(SetId::S));
    }
    if check_membership_sprime(problem)?.member {
        return Ok(Some(SetId::SPrime));
    }
    Ok(None)
}
