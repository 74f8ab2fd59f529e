//! Constructive density: admissible parameters near any target.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::membership::{check_membership, SetId};
use super::model::Problem;
use super::surd::QuadraticSurd;
use crate::error::{Error, Result};

/// Limits on the rational grid search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleBudget {
    /// Total membership checks before giving up.
    pub max_checks: usize,
    /// Grid points tried per denominator before the denominator grows.
    pub per_denominator: usize,
}

impl Default for SampleBudget {
    fn default() -> Self {
        Self {
            max_checks: 20_000,
            per_denominator: 64,
        }
    }
}

fn pow2_at_least(x: f64) -> BigInt {
    let mut d = BigInt::one();
    let mut v = 1.0f64;
    while v < x {
        d *= 2u32;
        v *= 2.0;
    }
    d
}

fn nearest(x: f64, den: &BigInt) -> BigRational {
    super::rational::rational_near(x, den)
}

/// Grid points `k/D` ordered by distance from `center·D`, restricted to
/// positive values within `radius` of `center`.
fn grid_outward(center: f64, radius: f64, den: &BigInt, limit: usize) -> Vec<BigRational> {
    let df = super::rational::rational_to_f64(&BigRational::from_integer(den.clone()));
    let c = (center * df).round() as i128;
    let mut out = Vec::new();
    let mut step: i128 = 0;
    while out.len() < limit {
        let mut any = false;
        for k in if step == 0 { vec![c] } else { vec![c + step, c - step] } {
            let v = k as f64 / df;
            if (v - center).abs() < radius {
                any = true;
                if k > 0 {
                    out.push(BigRational::new(BigInt::from(k), den.clone()));
                }
            }
        }
        if !any {
            break;
        }
        step += 1;
    }
    out
}

/// Returns a copy of `template` with `(μ, m)` replaced by an admissible pair
/// within `epsilon` of `target` in each coordinate.
pub fn sample_dense(
    template: &Problem,
    target: (f64, f64),
    epsilon: f64,
    set: SetId,
    budget: SampleBudget,
) -> Result<Problem> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let (mu0, m0) = target;
    if !(mu0 > 0.0 && m0 > 0.0 && mu0.is_finite() && m0.is_finite()) {
        return Err(Error::Domain("target must lie in the open positive quadrant".into()));
    }
    template.require_standing_hypothesis()?;
    let geom = &template.geom;
    let mu = match set {
        SetId::S => {
            if geom.nu4_ratio().is_none() {
                return Err(Error::Precondition(
                    "geometry incompatible with S: nu2^4/nu1^4 is not rational".into(),
                ));
            }
            // μ̃ = q/ν₁⁴ with q rational, so μ̃ν₁⁴ = q.
            let nu14 = geom.nu4(0).to_f64();
            let den = pow2_at_least(4.0 / (epsilon * nu14));
            let mut q = nearest(mu0 * nu14, &den);
            if q <= BigRational::zero() {
                q = BigRational::new(BigInt::one(), den);
            }
            geom.nu4(0).recip()?.scale(&q)
        }
        SetId::SPrime => {
            let ok = geom.nu4(0).is_rational()
                && geom.nu4(1).is_rational()
                && geom.nu2_ratio().is_some_and(|r| r.is_rational());
            if !ok {
                return Err(Error::Precondition(
                    "geometry incompatible with S': needs rational nu_k^4 and nu2^2/nu1^2".into(),
                ));
            }
            let den = pow2_at_least(4.0 / epsilon);
            let mut q = nearest(mu0, &den);
            if q <= BigRational::zero() {
                q = BigRational::new(BigInt::one(), den);
            }
            QuadraticSurd::from_rational(q)
        }
    };
    if (mu.to_f64() - mu0).abs() >= epsilon {
        return Err(Error::BudgetExhausted("could not place mu within epsilon".into()));
    }

    let mut checks = 0usize;
    let mut den = pow2_at_least(2.0 / epsilon);
    let mut candidate = template.clone();
    candidate.params.mu = mu;
    while checks < budget.max_checks {
        let grid = match set {
            SetId::S => grid_outward(m0, epsilon, &den, budget.per_denominator),
            // m̃ = √q with q near m₀²; |√q − m₀| < ε when |q − m₀²| < ε·m₀.
            SetId::SPrime => grid_outward(m0 * m0, epsilon * m0, &den, budget.per_denominator),
        };
        for q in grid {
            if checks >= budget.max_checks {
                break;
            }
            checks += 1;
            let m = match set {
                SetId::S => QuadraticSurd::from_rational(q),
                SetId::SPrime => QuadraticSurd::sqrt_of(&q)?,
            };
            if (m.to_f64() - m0).abs() >= epsilon {
                continue;
            }
            candidate.params.m = m;
            if check_membership(&candidate, set)?.member {
                return Ok(candidate);
            }
        }
        den *= 3u32;
    }
    Err(Error::BudgetExhausted(format!(
        "no admissible parameters found after {checks} membership checks"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::membership::check_membership;

    #[test]
    fn samples_recheck() {
        let p = Problem::running_example();
        for (eps, set) in [(0.1, SetId::S), (1e-6, SetId::S), (0.1, SetId::SPrime), (1e-6, SetId::SPrime)] {
            let s = sample_dense(&p, (1.0, 1.0), eps, set, SampleBudget::default()).unwrap();
            assert!(check_membership(&s, set).unwrap().member);
            assert!((s.params.mu.to_f64() - 1.0).abs() < eps);
            assert!((s.params.m.to_f64() - 1.0).abs() < eps);
        }
    }

    #[test]
    fn rejects_nonpositive_epsilon() {
        let p = Problem::running_example();
        assert!(matches!(
            sample_dense(&p, (1.0, 1.0), 0.0, SetId::S, SampleBudget::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn tiny_budget_fails_cleanly() {
        let p = Problem::running_example();
        let b = SampleBudget {
            max_checks: 0,
            per_denominator: 1,
        };
        assert!(matches!(
            sample_dense(&p, (1.0, 1.0), 0.1, SetId::S, b),
            Err(Error::BudgetExhausted(_))
        ));
    }
}
