//! Lyapunov–Schmidt solver: range equation for `w = y + z`, the
//! four-dimensional bifurcation system for `(ω₁, ω₂, α, γ)`, and continuation
//! in the amplitudes `ρ`.

pub mod branch;
pub mod reduced;

use nalgebra::{DMatrix, DVector, Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{Coeffs, Problem};
use crate::resonance::{bifurcation_matrix, compute_k, critical_frequencies, default_varrho, theta_symbol, DEFAULT_DIGITS};
use crate::spectral::{
    derivative_weight, kernel_field, nonlinearity, FourierField, SpectralSplit, Target, DEFAULT_N,
};
pub use branch::{continue_branch, Branch, BranchStatus, Origin, PathKind, PathSpec};
pub use reduced::reduced_residual_1d;

/// Modulus below which `Θ` on the finite block counts as singular.
pub const SINGULAR_THETA: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub tol_inner: f64,
    pub tol_outer: f64,
    /// Radius of the frequency neighbourhood; defaults to `0.1·min ω*`.
    pub varrho: Option<f64>,
    pub max_sweeps: usize,
    pub max_outer: usize,
    pub fd_step: f64,
    /// Step of the difference quotient replacing `G_k/ρ_k` at `ρ_k = 0`.
    pub rho_zero_step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: DEFAULT_N,
            tol_inner: 1e-11,
            tol_outer: 1e-10,
            varrho: None,
            max_sweeps: 50,
            max_outer: 30,
            fd_step: 1e-7,
            rho_zero_step: 1e-6,
        }
    }
}

/// The bifurcation unknowns `(ω₁, ω₂, α, γ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Unknowns {
    pub omega: [f64; 2],
    pub alpha: f64,
    pub gamma: f64,
}

impl Unknowns {
    fn to_vec(self) -> Vector4<f64> {
        Vector4::new(self.omega[0], self.omega[1], self.alpha, self.gamma)
    }

    fn from_vec(v: &Vector4<f64>) -> Self {
        Self {
            omega: [v[0], v[1]],
            alpha: v[2],
            gamma: v[3],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeSolution {
    pub w: FourierField,
    /// `H⁰` norm of the range-equation defect.
    pub residual: f64,
    pub sweeps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BifurcationResidual {
    pub r: [f64; 4],
    /// Some `ρ_k` was positive but below `1e-12` and was treated as zero.
    pub tiny_rho_warning: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WaveSolution {
    pub rho: [f64; 2],
    pub omega: [f64; 2],
    pub alpha: f64,
    pub gamma: f64,
    pub w: FourierField,
    pub residual_full: f64,
    pub residual_bif: [f64; 4],
    #[serde(rename = "N")]
    pub n: usize,
    pub iterations: usize,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl WaveSolution {
    pub fn unknowns(&self) -> Unknowns {
        Unknowns {
            omega: self.omega,
            alpha: self.alpha,
            gamma: self.gamma,
        }
    }

    /// The travelling-wave profile `φ = v(ρ) + w`.
    pub fn profile(&self, jstar: [i64; 2]) -> Result<FourierField> {
        Ok(kernel_field(self.rho, jstar, self.n)?.add(&self.w))
    }
}

/// Solver state shared by all solves for one problem and truncation.
#[derive(Clone, Debug)]
pub struct Solver {
    problem: Problem,
    c: Coeffs,
    cfg: SolverConfig,
    omega_star: [f64; 2],
    k: u64,
    split: SpectralSplit,
    a: Matrix4<f64>,
    /// Upper half of `J₂`.
    z_upper: Vec<[i64; 2]>,
}

impl Solver {
    pub fn new(problem: &Problem, cfg: SolverConfig) -> Result<Self> {
        problem.require_standing_hypothesis()?;
        for (name, t) in [("tol_inner", cfg.tol_inner), ("tol_outer", cfg.tol_outer)] {
            if !(t > 0.0) {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        let crit = critical_frequencies(problem, DEFAULT_DIGITS)?;
        let varrho = cfg.varrho.unwrap_or_else(|| default_varrho(&crit));
        let k = compute_k(problem, varrho)?;
        let jmax = problem.params.jstar[0].max(problem.params.jstar[1]) as usize;
        let need = ((k as f64).sqrt().ceil() as usize).max(jmax);
        if cfg.n < need {
            return Err(Error::Precondition(format!(
                "truncation N = {} is below max(ceil(sqrt(K)), j*) = {need} (K = {k})",
                cfg.n
            )));
        }
        let split = SpectralSplit::new(problem.params.jstar, k);
        let z_upper = split
            .z_modes()
            .into_iter()
            .filter(|&j| crate::spectral::field::is_upper(j))
            .collect();
        Ok(Self {
            problem: problem.clone(),
            c: problem.coeffs(),
            cfg,
            omega_star: crit.omega_star,
            k,
            split,
            a: bifurcation_matrix(problem)?.matrix(),
            z_upper,
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.c
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn omega_star(&self) -> [f64; 2] {
        self.omega_star
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn split(&self) -> &SpectralSplit {
        &self.split
    }

    pub fn trivial_unknowns(&self) -> Unknowns {
        Unknowns {
            omega: self.omega_star,
            alpha: 0.0,
            gamma: 0.0,
        }
    }

    fn theta(&self, j: [i64; 2], x: &Unknowns) -> Complex64 {
        theta_symbol(j, x.omega, x.alpha, x.gamma, &self.c)
    }

    fn kernel(&self, rho: [f64; 2]) -> Result<FourierField> {
        kernel_field(rho, self.problem.params.jstar, self.cfg.n)
    }

    fn range_defect(&self, v: &FourierField, w: &FourierField, x: &Unknowns) -> f64 {
        let f = nonlinearity(&v.add(w), x.omega, &self.c);
        let mut acc = 0.0;
        for (j, wj) in w.iter() {
            if self.split.in_target(j, Target::W) {
                acc += 2.0 * (self.theta(j, x) * wj - f.get(j)).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Solves `Π_W(L w − F(v(ρ) + w)) = 0`.
    pub fn solve_range(&self, rho: [f64; 2], x: &Unknowns, init: Option<&FourierField>) -> Result<RangeSolution> {
        let v = self.kernel(rho)?;
        for &j in &self.z_upper {
            let t = self.theta(j, x).norm();
            if t < SINGULAR_THETA {
                return Err(Error::NearSingular {
                    j1: j[0],
                    j2: j[1],
                    modulus: t,
                });
            }
        }
        let n = self.cfg.n;
        if rho == [0.0, 0.0] {
            return Ok(RangeSolution {
                w: FourierField::zeros(n),
                residual: 0.0,
                sweeps: 0,
            });
        }
        let mut w = match init {
            Some(w0) => crate::spectral::project(&w0.resized(n), Target::W, &self.split),
            None => FourierField::zeros(n),
        };
        let mut res = self.range_defect(&v, &w, x);
        let mut sweeps = 0;
        let mut polish = 0;
        loop {
            if res <= self.cfg.tol_inner {
                if polish >= 5 {
                    break;
                }
                let trial = self.sweep(&v, &w, x)?;
                let r2 = self.range_defect(&v, &trial, x);
                if r2 < res {
                    w = trial;
                    let halved = r2 <= 0.5 * res;
                    res = r2;
                    polish += 1;
                    if halved {
                        continue;
                    }
                }
                break;
            }
            if sweeps >= self.cfg.max_sweeps {
                return Err(Error::NonConvergence {
                    context: "range equation sweeps".into(),
                    iterations: sweeps,
                    residual: res,
                });
            }
            w = self.sweep(&v, &w, x)?;
            sweeps += 1;
            let r2 = self.range_defect(&v, &w, x);
            if !r2.is_finite() {
                return Err(Error::NonConvergence {
                    context: "range equation diverged".into(),
                    iterations: sweeps,
                    residual: r2,
                });
            }
            res = r2;
        }
        Ok(RangeSolution { w, residual: res, sweeps })
    }

    /// One contraction sweep on `J₁` followed by Newton on `J₂`.
    fn sweep(&self, v: &FourierField, w: &FourierField, x: &Unknowns) -> Result<FourierField> {
        let f = nonlinearity(&v.add(w), x.omega, &self.c);
        let mut out = w.clone();
        let modes: Vec<[i64; 2]> = w.upper_modes().collect();
        for j in modes {
            if self.split.in_target(j, Target::Y) {
                out.set(j, f.get(j) / self.theta(j, x));
            }
        }
        self.newton_z(v, &mut out, x)?;
        Ok(out)
    }

    fn z_defect(&self, v: &FourierField, w: &FourierField, x: &Unknowns) -> (DVector<f64>, f64) {
        let f = nonlinearity(&v.add(w), x.omega, &self.c);
        let mut r = Vec::with_capacity(2 * self.z_upper.len());
        for &j in &self.z_upper {
            let d = self.theta(j, x) * w.get(j) - f.get(j);
            r.push(d.re);
            if j != [0, 0] {
                r.push(d.im);
            }
        }
        let r = DVector::from_vec(r);
        let norm = r.amax();
        (r, norm)
    }

    fn newton_z(&self, v: &FourierField, w: &mut FourierField, x: &Unknowns) -> Result<()> {
        let (mut r, mut norm) = self.z_defect(v, w, x);
        for _ in 0..8 {
            if norm <= 1e-3 * self.cfg.tol_inner * 1e-3 || norm == 0.0 {
                break;
            }
            let jac = self.z_jacobian(&v.add(w), x);
            let step = jac.lu().solve(&(-&r)).ok_or_else(|| Error::NonConvergence {
                context: "singular Jacobian on the finite range block".into(),
                iterations: 0,
                residual: norm,
            })?;
            let mut lam = 1.0;
            let mut accepted = false;
            for _ in 0..5 {
                let trial = self.apply_z_step(w, &step, lam);
                let (rt, nt) = self.z_defect(v, &trial, x);
                if nt < norm {
                    *w = trial;
                    r = rt;
                    norm = nt;
                    accepted = true;
                    break;
                }
                lam *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        Ok(())
    }

    fn apply_z_step(&self, w: &FourierField, step: &DVector<f64>, lam: f64) -> FourierField {
        let mut out = w.clone();
        let mut i = 0;
        for &j in &self.z_upper {
            let re = step[i];
            i += 1;
            let im = if j != [0, 0] {
                i += 1;
                step[i - 1]
            } else {
                0.0
            };
            out.set(j, w.get(j) + Complex64::new(re, im) * lam);
        }
        out
    }

    /// Real Jacobian of `z ↦ Θz − Π_Z F(φ)` on the upper half of `J₂`.
    fn z_jacobian(&self, phi: &FourierField, x: &Unknowns) -> DMatrix<f64> {
        let g = derivative_weight(phi, x.omega, &self.c);
        let idx: Vec<([i64; 2], bool)> = self
            .z_upper
            .iter()
            .flat_map(|&j| {
                if j == [0, 0] {
                    vec![(j, false)]
                } else {
                    vec![(j, false), (j, true)]
                }
            })
            .collect();
        let dim = idx.len();
        let mut jac = DMatrix::zeros(dim, dim);
        let i = Complex64::new(0.0, 1.0);
        for (col, &(l, imag)) in idx.iter().enumerate() {
            let wl = x.omega[0] * l[0] as f64 + x.omega[1] * l[1] as f64;
            for (row, &(k, row_imag)) in idx.iter().enumerate() {
                let gm = g.get([k[0] - l[0], k[1] - l[1]]);
                let gp = g.get([k[0] + l[0], k[1] + l[1]]);
                let diag = if k == l { self.theta(k, x) } else { Complex64::new(0.0, 0.0) };
                let val = if l == [0, 0] {
                    diag
                } else if imag {
                    diag * i + (gm + gp) * wl
                } else {
                    diag - i * wl * (gm - gp)
                };
                jac[(row, col)] = if row_imag { val.im } else { val.re };
            }
        }
        jac
    }

    fn mode(&self, k: usize) -> [i64; 2] {
        let s = self.problem.params.jstar;
        if k == 0 {
            [s[0], 0]
        } else {
            [0, s[1]]
        }
    }

    /// Defects of the four bifurcation equations at `(ρ, ω, α, γ)` with range component `w`.
    pub fn bifurcation_residual(&self, rho: [f64; 2], x: &Unknowns, w: &FourierField) -> Result<BifurcationResidual> {
        let mut r = [0.0; 4];
        let mut warn = false;
        let mut f_cache: Option<FourierField> = None;
        for k in 0..2 {
            let mode = self.mode(k);
            let g = if rho[k] < 1e-12 {
                warn |= rho[k] > 0.0;
                let h = self.cfg.rho_zero_step;
                let q = |h: f64| -> Result<Complex64> {
                    let mut rh = rho;
                    rh[k] = h;
                    let wh = self.solve_range(rh, x, Some(w))?.w;
                    let f = nonlinearity(&self.kernel(rh)?.add(&wh), x.omega, &self.c);
                    Ok(f.get(mode) / h)
                };
                // the quotient is even in h, so one Richardson step removes the O(h²) bias
                (q(h / 2.0)? * 4.0 - q(h)?) / 3.0
            } else {
                let f = match &f_cache {
                    Some(f) => f.clone(),
                    None => {
                        let f = nonlinearity(&self.kernel(rho)?.add(w), x.omega, &self.c);
                        f_cache = Some(f.clone());
                        f
                    }
                };
                f.get(mode) / rho[k]
            };
            let t = self.theta(mode, x);
            let (gp, gm) = (g.re, -g.im);
            r[2 * k] = t.re - gp;
            r[2 * k + 1] = -t.im - gm;
        }
        Ok(BifurcationResidual {
            r,
            tiny_rho_warning: warn,
        })
    }

    /// `H⁰` norm of `Θ φ − F(φ)` for a profile `φ`, evaluated at truncation `n`.
    pub fn profile_residual(&self, phi: &FourierField, x: &Unknowns, n: usize) -> f64 {
        let phi = phi.resized(n);
        let f = nonlinearity(&phi, x.omega, &self.c);
        let mut acc = 0.0;
        for (j, c) in phi.iter() {
            acc += 2.0 * (self.theta(j, x) * c - f.get(j)).norm_sqr();
        }
        acc.sqrt()
    }

    pub fn full_residual(&self, rho: [f64; 2], x: &Unknowns, w: &FourierField, n: usize) -> Result<f64> {
        Ok(self.profile_residual(&self.kernel(rho)?.add(w), x, n))
    }

    /// Finite-difference Jacobian of the bifurcation residual in `(ω₁, ω₂, α, γ)`.
    pub fn fd_jacobian(&self, rho: [f64; 2], x: &Unknowns, w: &FourierField) -> Result<Matrix4<f64>> {
        let base = self.bifurcation_residual(rho, x, w)?.r;
        let h = self.cfg.fd_step;
        let mut jac = Matrix4::zeros();
        for col in 0..4 {
            let mut xv = x.to_vec();
            xv[col] += h;
            let xp = Unknowns::from_vec(&xv);
            let wp = self.solve_range(rho, &xp, Some(w))?.w;
            let rp = self.bifurcation_residual(rho, &xp, &wp)?.r;
            for row in 0..4 {
                jac[(row, col)] = (rp[row] - base[row]) / h;
            }
        }
        Ok(jac)
    }

    /// Outer Newton iteration on `(ω₁, ω₂, α, γ)` at fixed amplitudes.
    pub fn solve_wave(&self, rho: [f64; 2], init: Option<&WaveSolution>) -> Result<WaveSolution> {
        if rho.iter().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Domain(format!("amplitudes must be non-negative, got {rho:?}")));
        }
        let n = self.cfg.n;
        if rho == [0.0, 0.0] {
            return Ok(WaveSolution {
                rho,
                omega: self.omega_star,
                alpha: 0.0,
                gamma: 0.0,
                w: FourierField::zeros(n),
                residual_full: self.full_residual(rho, &self.trivial_unknowns(), &FourierField::zeros(n), n)?,
                residual_bif: [0.0; 4],
                n,
                iterations: 0,
                warnings: Vec::new(),
            });
        }
        let mut x = init.map(|s| s.unknowns()).unwrap_or_else(|| self.trivial_unknowns());
        let mut w = self.solve_range(rho, &x, init.map(|s| &s.w))?.w;
        let mut br = self.bifurcation_residual(rho, &x, &w)?;
        let mut warnings = Vec::new();
        let scale = 1.0 + self.omega_star[0].max(self.omega_star[1]).powi(2)
            * (self.problem.params.jstar[0].max(self.problem.params.jstar[1]) as f64).powi(2);
        let mut iterations = 0;
        let mut stalls = 0;
        while iterations < self.cfg.max_outer {
            let rn = Vector4::from(br.r).amax();
            if rn <= 1e-15 * scale {
                break;
            }
            let jac = if iterations == 0 { self.a } else { self.fd_jacobian(rho, &x, &w)? };
            iterations += 1;
            let step = jac.lu().solve(&(-Vector4::from(br.r))).ok_or_else(|| Error::NonConvergence {
                context: "singular bifurcation Jacobian".into(),
                iterations,
                residual: rn,
            })?;
            let mut lam = 1.0;
            let mut accepted = None;
            for _ in 0..6 {
                let xt = Unknowns::from_vec(&(x.to_vec() + step * lam));
                let wt = self.solve_range(rho, &xt, Some(&w))?.w;
                let bt = self.bifurcation_residual(rho, &xt, &wt)?;
                if Vector4::from(bt.r).amax() < rn {
                    accepted = Some((xt, wt, bt));
                    break;
                }
                lam *= 0.5;
            }
            match accepted {
                Some((xt, wt, bt)) => {
                    let dx = (step * lam).amax();
                    x = xt;
                    w = wt;
                    br = bt;
                    if dx <= 1e-14 * (1.0 + x.to_vec().amax()) {
                        break;
                    }
                    stalls = 0;
                }
                None => {
                    stalls += 1;
                    if stalls >= 2 {
                        break;
                    }
                }
            }
        }
        if br.tiny_rho_warning {
            warnings.push("amplitude below 1e-12 treated as zero".to_string());
        }
        let residual_full = self.full_residual(rho, &x, &w, n)?;
        if !(residual_full <= self.cfg.tol_outer) {
            return Err(Error::NonConvergence {
                context: format!("bifurcation Newton at rho = {rho:?}"),
                iterations,
                residual: residual_full,
            });
        }
        Ok(WaveSolution {
            rho,
            omega: x.omega,
            alpha: x.alpha,
            gamma: x.gamma,
            w,
            residual_full,
            residual_bif: br.r,
            n,
            iterations,
            warnings,
        })
    }
}

/// Convenience wrapper: one range solve with default settings.
pub fn solve_range(
    rho: [f64; 2],
    x: &Unknowns,
    problem: &Problem,
    n: usize,
    tol: f64,
) -> Result<FourierField> {
    let solver = Solver::new(
        problem,
        SolverConfig {
            n,
            tol_inner: tol,
            ..SolverConfig::default()
        },
    )?;
    Ok(solver.solve_range(rho, x, None)?.w)
}

/// Convenience wrapper: one wave solve from the trivial initial guess.
pub fn solve_wave(rho: [f64; 2], problem: &Problem, n: usize, tol: f64) -> Result<WaveSolution> {
    let solver = Solver::new(
        problem,
        SolverConfig {
            n,
            tol_outer: tol,
            ..SolverConfig::default()
        },
    )?;
    solver.solve_wave(rho, None)
}

/// Leading-order damping for `p = 1`: solves
/// `α + γν_k⁴(j_k*)⁴ = 3λ(ρ_k²ω_k²(j_k*)² + 2ρ_l²ω_l²(j_l*)²)`, `l ≠ k`.
pub fn cubic_damping_oracle(problem: &Problem, rho: [f64; 2]) -> Result<(f64, f64)> {
    let c = problem.coeffs();
    let w = critical_frequencies(problem, DEFAULT_DIGITS)?.omega_star;
    let s = [problem.params.jstar[0] as f64, problem.params.jstar[1] as f64];
    let e = |k: usize| rho[k] * rho[k] * w[k] * w[k] * s[k] * s[k];
    let b1 = 3.0 * c.lambda * (e(0) + 2.0 * e(1));
    let b2 = 3.0 * c.lambda * (e(1) + 2.0 * e(0));
    let n1 = c.nu4[0] * s[0].powi(4);
    let n2 = c.nu4[1] * s[1].powi(4);
    let gamma = (b2 - b1) / (n2 - n1);
    Ok((b1 - gamma * n1, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{QuadraticSurd, TorusGeometry};

    fn solver() -> Solver {
        Solver::new(&Problem::running_example(), SolverConfig::default()).unwrap()
    }

    #[test]
    fn zero_amplitude_is_trivial() {
        let s = solver();
        let x = s.trivial_unknowns();
        let r = s.solve_range([0.0, 0.0], &x, None).unwrap();
        assert_eq!(r.w.max_abs(), 0.0);
        let b = s.bifurcation_residual([0.0, 0.0], &x, &r.w).unwrap();
        assert!(b.r.iter().all(|v| v.abs() < 1e-12), "{:?}", b.r);
        let sol = s.solve_wave([0.0, 0.0], None).unwrap();
        assert_eq!(sol.omega, s.omega_star());
        assert!(sol.residual_full < 1e-14);
    }

    #[test]
    fn rotating_range_is_axis_supported() {
        let s = solver();
        let r = s.solve_range([0.0, 1e-2], &s.trivial_unknowns(), None).unwrap();
        let off = r.w.iter().filter(|(j, _)| j[0] != 0).map(|(_, c)| c.norm()).fold(0.0, f64::max);
        assert!(off <= 1e-12 && r.w.max_abs() > 0.0);
    }

    #[test]
    fn range_scales_cubically() {
        let s = solver();
        let x = s.trivial_unknowns();
        let rhos = [1e-3, 10f64.powf(-2.5), 1e-2];
        let norms: Vec<f64> = rhos
            .iter()
            .map(|&r| s.solve_range([r, r], &x, None).unwrap().w.h0_norm())
            .collect();
        let slope = fit_slope(&rhos, &norms);
        assert!((slope - 3.0).abs() < 0.1, "{slope}");
    }

    pub(crate) fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
        let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
        let n = lx.len() as f64;
        let mx = lx.iter().sum::<f64>() / n;
        let my = ly.iter().sum::<f64>() / n;
        let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
        sxy / sxx
    }

    #[test]
    fn leading_order_coefficients() {
        let s = solver();
        let x = s.trivial_unknowns();
        let rho = [1e-3, 2e-3];
        let w = s.solve_range(rho, &x, None).unwrap().w;
        let f = nonlinearity(&s.kernel(rho).unwrap().add(&w), x.omega, s.coeffs());
        let g1 = f.get([1, 0]) / rho[0];
        let [w1, w2] = x.omega;
        let expect = -3.0 * w1 * (rho[0].powi(2) * w1 * w1 + 2.0 * rho[1].powi(2) * w2 * w2 * 4.0);
        assert!(((-g1.im) - expect).abs() < 1e-3 * expect.abs());
        let half = [rho[0] / 2.0, rho[1] / 2.0];
        let wh = s.solve_range(half, &x, None).unwrap().w;
        let fh = nonlinearity(&s.kernel(half).unwrap().add(&wh), x.omega, s.coeffs());
        let gh = fh.get([1, 0]) / half[0];
        let order = (g1.re / gh.re).log2();
        assert!((order - 4.0).abs() < 0.1, "{order}");
    }

    #[test]
    fn jacobian_seed_matches_matrix() {
        let s = solver();
        let x = s.trivial_unknowns();
        let w = FourierField::zeros(s.config().n);
        let jac = s.fd_jacobian([0.0, 0.0], &x, &w).unwrap();
        let scale = s.a.amax();
        for r in 0..4 {
            for c in 0..4 {
                let a = s.a[(r, c)];
                let err = (jac[(r, c)] - a).abs();
                assert!(err <= 1e-6 * a.abs().max(scale * 1e-3), "({r},{c}): {} vs {a}", jac[(r, c)]);
            }
        }
    }

    #[test]
    fn solves_running_example() {
        let s = solver();
        let rho = [1e-3, 1e-3];
        let sol = s.solve_wave(rho, None).unwrap();
        assert!(sol.residual_full <= 1e-10);
        let (a, g) = cubic_damping_oracle(s.problem(), rho).unwrap();
        assert!((a - 106.5e-6).abs() < 1e-12 && (g + 3e-6).abs() < 1e-12);
        assert!((sol.alpha - a).abs() < 0.05 * a.abs(), "{} vs {a}", sol.alpha);
        assert!((sol.gamma - g).abs() < 0.05 * g.abs(), "{} vs {g}", sol.gamma);
        assert!(sol.alpha.max(sol.gamma) > 0.0);
        let coarse = s.full_residual(rho, &sol.unknowns(), &sol.w, 2 * sol.n).unwrap();
        assert!(coarse <= 1e-9);
    }

    #[test]
    fn translation_keeps_residual() {
        let s = solver();
        let sol = s.solve_wave([1e-2, 1e-2], None).unwrap();
        let phi = sol.profile([1, 2]).unwrap();
        let base = s.profile_residual(&phi, &sol.unknowns(), sol.n);
        let moved = s.profile_residual(&phi.translated([0.7, -1.3]), &sol.unknowns(), sol.n);
        assert!((base - moved).abs() <= 1e-12);
    }

    #[test]
    fn exchange_symmetry() {
        let mut p = Problem::running_example();
        p.geom = TorusGeometry::from_nu4(QuadraticSurd::from_int(2), QuadraticSurd::from_int(1)).unwrap();
        let a = Solver::new(&p, SolverConfig::default()).unwrap().solve_wave([1e-2, 5e-3], None).unwrap();
        let b = Solver::new(&p.swapped(), SolverConfig::default())
            .unwrap()
            .solve_wave([5e-3, 1e-2], None)
            .unwrap();
        assert!((a.omega[0] - b.omega[1]).abs() < 1e-10 && (a.omega[1] - b.omega[0]).abs() < 1e-10);
        assert!((a.alpha - b.alpha).abs() < 1e-10 && (a.gamma - b.gamma).abs() < 1e-10);
        assert!(a.w.sub(&b.w.transposed()).max_abs() < 1e-10);
    }

    #[test]
    fn first_axis_decouples_from_second_scaling() {
        let solve = |nu2_4: i64| {
            let mut p = Problem::running_example();
            p.geom = TorusGeometry::from_nu4(QuadraticSurd::from_int(1), QuadraticSurd::from_int(nu2_4)).unwrap();
            Solver::new(&p, SolverConfig::default()).unwrap().solve_wave([1e-2, 0.0], None).unwrap()
        };
        let a = solve(1);
        let b = solve(3);
        assert!((a.omega[0] - b.omega[0]).abs() < 1e-10);
        let eff = |s: &WaveSolution| s.alpha + s.gamma;
        assert!((eff(&a) - eff(&b)).abs() < 1e-10, "{} vs {}", eff(&a), eff(&b));
    }

    #[test]
    fn negative_amplitude_rejected() {
        assert!(matches!(solver().solve_wave([-1e-3, 0.0], None), Err(Error::Domain(_))));
    }

    #[test]
    fn small_truncation_rejected() {
        let cfg = SolverConfig {
            n: 2,
            ..SolverConfig::default()
        };
        assert!(matches!(
            Solver::new(&Problem::running_example(), cfg),
            Err(Error::Precondition(_))
        ));
    }
}
