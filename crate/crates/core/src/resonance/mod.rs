//! Dispersion analysis at the linearization: critical frequencies, the
//! symbol `Θ`, resonant lattice modes, the constant `K` and the matrix `A`.

pub mod exact;

use nalgebra::Matrix4;
use num_complex::Complex64;
use num_rational::BigRational;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{admissible_set, Coeffs, Fixed, Problem, SetId};
pub use exact::{ExactTheta, Route};

pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalData {
    pub omega_star: [f64; 2],
    /// Decimal expansions at `precision` digits after the point.
    pub omega_star_decimal: [String; 2],
    pub kernel_modes: [[i64; 2]; 4],
    pub precision: u32,
}

/// `(ω_k*)² = μν_k⁴(j_k*)² + m/(j_k*)²` as an exact multi-quadratic number.
pub fn omega_star_squared(problem: &Problem, k: usize) -> crate::params::SurdSum {
    let s = problem.params.jstar[k];
    let a = problem.params.mu.mul(problem.geom.nu4(k));
    crate::params::SurdSum::from(&a.scale(&crate::params::rat_int(s * s))).add(
        &crate::params::SurdSum::from(
            &problem
                .params
                .m
                .scale(&BigRational::new(BigInt::from(1), BigInt::from(s * s))),
        ),
    )
}

pub fn kernel_modes(jstar: [i64; 2]) -> [[i64; 2]; 4] {
    [[jstar[0], 0], [-jstar[0], 0], [0, jstar[1]], [0, -jstar[1]]]
}

pub fn critical_frequencies(problem: &Problem, digits: u32) -> Result<CriticalData> {
    problem.require_standing_hypothesis()?;
    let mut omega = [0.0; 2];
    let mut dec = [String::new(), String::new()];
    for k in 0..2 {
        let s = problem.params.jstar[k];
        let a = problem.params.mu.mul(problem.geom.nu4(k)).to_fixed(digits);
        let m = problem.params.m.to_fixed(digits);
        let s2 = Fixed::from_int(s * s, digits);
        let w2 = a.mul(&s2).add(&m.div(&s2));
        let w = w2.sqrt();
        omega[k] = w.to_f64();
        dec[k] = w.to_decimal(digits);
    }
    Ok(CriticalData {
        omega_star: omega,
        omega_star_decimal: dec,
        kernel_modes: kernel_modes(problem.params.jstar),
        precision: digits,
    })
}

/// `Θ(j, ω, α, γ) = −(ω·j)² + μλ_j² + m + i(α + γλ_j²)(ω·j)` with `λ_j = ν₁²j₁² + ν₂²j₂²`.
#[inline]
pub fn theta_symbol(j: [i64; 2], omega: [f64; 2], alpha: f64, gamma: f64, c: &Coeffs) -> Complex64 {
    let wj = omega[0] * j[0] as f64 + omega[1] * j[1] as f64;
    let l = c.lap(j);
    let l2 = l * l;
    Complex64::new(-wj * wj + c.mu * l2 + c.m, (alpha + gamma * l2) * wj)
}

/// Magnitude of the largest term in `Re Θ`, used to scale the floating hit test.
fn theta_scale(j: [i64; 2], omega: [f64; 2], c: &Coeffs) -> f64 {
    let wj = omega[0] * j[0] as f64 + omega[1] * j[1] as f64;
    let l = c.lap(j);
    (wj * wj).max(c.mu * l * l).max(c.m).max(1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMethod {
    Exact,
    Floating,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceScan {
    pub radius: i64,
    pub hits: Vec<[i64; 2]>,
    pub method: ScanMethod,
    /// True when every reported hit was confirmed by exact arithmetic.
    pub exact_rechecked: bool,
    /// Set the parameters belong to, if any.
    pub set_id: Option<SetId>,
}

pub const FLOAT_TOL: f64 = 1e-8;

fn lattice(radius: i64) -> impl Iterator<Item = [i64; 2]> {
    (-radius..=radius).flat_map(move |a| (-radius..=radius).map(move |b| [a, b]))
}

pub fn enumerate_resonances(problem: &Problem, radius: i64, method: ScanMethod) -> Result<ResonanceScan> {
    if radius < 1 {
        return Err(Error::Domain(format!("scan radius must be positive, got {radius}")));
    }
    problem.require_standing_hypothesis()?;
    let set_id = admissible_set(problem)?;
    match method {
        ScanMethod::Exact => {
            if set_id.is_none() {
                return Err(Error::MethodRefused(
                    "parameters belong to neither S nor S'; use the floating method".into(),
                ));
            }
            let ex = ExactTheta::new(problem).ok_or_else(|| {
                Error::MethodRefused("symbol coefficients have no exact quadratic form".into())
            })?;
            let hits = lattice(radius).filter(|&j| ex.is_zero(j)).collect();
            Ok(ResonanceScan {
                radius,
                hits,
                method,
                exact_rechecked: true,
                set_id,
            })
        }
        ScanMethod::Floating => {
            let c = problem.coeffs();
            let crit = critical_frequencies(problem, DEFAULT_DIGITS)?;
            let w = crit.omega_star;
            let candidates: Vec<[i64; 2]> = lattice(radius)
                .filter(|&j| theta_symbol(j, w, 0.0, 0.0, &c).norm() < FLOAT_TOL * theta_scale(j, w, &c))
                .collect();
            let (hits, rechecked) = match ExactTheta::new(problem) {
                Some(ex) => (candidates.into_iter().filter(|&j| ex.is_zero(j)).collect(), true),
                None => (candidates, false),
            };
            Ok(ResonanceScan {
                radius,
                hits,
                method,
                exact_rechecked: rechecked,
                set_id,
            })
        }
    }
}

/// `K = ⌈(2C² + 1)/(μ·min(ν₁,ν₂)⁴)⌉` with `C = max_k ω_k* + ϱ`.
pub fn compute_k(problem: &Problem, varrho: f64) -> Result<u64> {
    if !(varrho > 0.0 && varrho.is_finite()) {
        return Err(Error::Domain(format!("varrho must be positive, got {varrho}")));
    }
    let crit = critical_frequencies(problem, DEFAULT_DIGITS)?;
    let c = problem.coeffs();
    let big_c = crit.omega_star[0].max(crit.omega_star[1]) + varrho;
    let nu_min4 = c.nu4[0].min(c.nu4[1]);
    let k = ((2.0 * big_c * big_c + 1.0) / (c.mu * nu_min4)).ceil();
    Ok(k.max(1.0) as u64)
}

pub fn default_varrho(crit: &CriticalData) -> f64 {
    0.1 * crit.omega_star[0].min(crit.omega_star[1])
}

/// Lattice points with `K ≤ |j|² ≤ 4K` where the bound `|Θ| ≥ |j|²` fails,
/// over the given frequencies and damping pairs.
pub fn symbol_bound_violations(
    c: &Coeffs,
    k: u64,
    omegas: &[[f64; 2]],
    damping: &[(f64, f64)],
) -> Vec<[i64; 2]> {
    let k = k as i64;
    let r = (2.0 * (k as f64).sqrt()).ceil() as i64 + 1;
    let mut bad = Vec::new();
    for j in lattice(r) {
        let n2 = j[0] * j[0] + j[1] * j[1];
        if n2 < k || n2 > 4 * k {
            continue;
        }
        let fails = omegas.iter().any(|&w| {
            damping
                .iter()
                .any(|&(a, g)| theta_symbol(j, w, a, g, c).norm() < n2 as f64)
        });
        if fails {
            bad.push(j);
        }
    }
    bad
}

/// Linearization of the bifurcation system at `(ρ, ω, α, γ) = (0, ω*, 0, 0)`.
///
/// Rows: frequency and damping equation for mode 1, then for mode 2.
/// Columns: `(ω₁, ω₂, α, γ)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BifurcationMatrix {
    pub entries: [[f64; 4]; 4],
    pub det_closed: f64,
    pub det_numeric: f64,
}

impl BifurcationMatrix {
    pub fn matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|r, c| self.entries[r][c])
    }
}

pub fn bifurcation_matrix(problem: &Problem) -> Result<BifurcationMatrix> {
    let crit = critical_frequencies_unchecked(problem, DEFAULT_DIGITS);
    let c = problem.coeffs();
    let [w1, w2] = crit;
    let [j1, j2] = [problem.params.jstar[0] as f64, problem.params.jstar[1] as f64];
    let entries = [
        [-2.0 * w1 * j1 * j1, 0.0, 0.0, 0.0],
        [0.0, 0.0, -w1 * j1, -w1 * c.nu4[0] * j1.powi(5)],
        [0.0, -2.0 * w2 * j2 * j2, 0.0, 0.0],
        [0.0, 0.0, -w2 * j2, -w2 * c.nu4[1] * j2.powi(5)],
    ];
    let (n1, n2) = (c.nu[0] * j1, c.nu[1] * j2);
    let det_closed = -4.0 * w1 * w1 * j1.powi(3) * w2 * w2 * j2.powi(3)
        * (n2 * n2 + n1 * n1)
        * (n2 + n1)
        * (n2 - n1);
    let m = Matrix4::from_fn(|r, col| entries[r][col]);
    let det_numeric = m.lu().determinant();
    Ok(BifurcationMatrix {
        entries,
        det_closed,
        det_numeric,
    })
}

/// Critical frequencies without the standing-hypothesis check.
fn critical_frequencies_unchecked(problem: &Problem, digits: u32) -> [f64; 2] {
    let mut omega = [0.0; 2];
    for (k, w) in omega.iter_mut().enumerate() {
        let s = problem.params.jstar[k];
        let a = problem.params.mu.mul(problem.geom.nu4(k)).to_fixed(digits);
        let m = problem.params.m.to_fixed(digits);
        let s2 = Fixed::from_int(s * s, digits);
        *w = a.mul(&s2).add(&m.div(&s2)).sqrt().to_f64();
    }
    omega
}
