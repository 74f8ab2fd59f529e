//! One-dimensional reduced equation satisfied by rotating waves.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Solver, WaveSolution};
use crate::error::{Error, Result};
use crate::resonance::theta_symbol;
use crate::spectral::{default_grid, kernel_field};

/// `H⁰` defect of the rotating-wave equation `Θ(a e_k) ψ_a = F_k(ψ)_a`,
/// `|a| ≤ N`, where `ψ` is the profile restricted to the active axis `k` and
/// `F_k(ψ) = λ(ω_k ψ')^{2p+1}` is evaluated by a 1-D transform.
///
/// Modes off the active axis are ignored; the caller checks separately that
/// they vanish.
pub fn reduced_residual_1d(solver: &Solver, sol: &WaveSolution) -> Result<f64> {
    let k = match (sol.rho[0] > 0.0, sol.rho[1] > 0.0) {
        (true, true) => {
            return Err(Error::Precondition(format!(
                "rotating-wave reduction needs one zero amplitude, got {:?}",
                sol.rho
            )))
        }
        (false, true) => 1,
        _ => 0,
    };
    let c = solver.coeffs();
    let n = sol.n;
    let phi = kernel_field(sol.rho, c.jstar, n)?.add(&sol.w);
    let axis = |a: i64| if k == 0 { [a, 0] } else { [0, a] };
    let m = default_grid(c.p, n);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let ni = n as i64;
    for a in -ni..=ni {
        let d = Complex64::new(0.0, sol.omega[k] * a as f64) * phi.get(axis(a));
        buf[a.rem_euclid(m as i64) as usize] = d;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(m).process(&mut buf);
    let e = 2 * c.p as i32 + 1;
    for x in buf.iter_mut() {
        *x = Complex64::new(c.lambda * x.re.powi(e), 0.0);
    }
    planner.plan_fft_forward(m).process(&mut buf);
    let norm = 1.0 / m as f64;
    let mut acc = 0.0;
    for a in -ni..=ni {
        let f = buf[a.rem_euclid(m as i64) as usize] * norm;
        let t = theta_symbol(axis(a), sol.omega, sol.alpha, sol.gamma, c);
        acc += 2.0 * (t * phi.get(axis(a)) - f).norm_sqr();
    }
    Ok(acc.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Problem;
    use crate::solver::SolverConfig;

    #[test]
    fn rotating_waves_solve_the_reduced_equation() {
        let s = Solver::new(&Problem::running_example(), SolverConfig::default()).unwrap();
        for rho in [[1e-2, 0.0], [0.0, 1e-2]] {
            let sol = s.solve_wave(rho, None).unwrap();
            let r = reduced_residual_1d(&s, &sol).unwrap();
            assert!(r <= 1e-10, "{rho:?}: {r}");
            assert!((r - sol.residual_full).abs() < 1e-12);
        }
        let both = s.solve_wave([1e-3, 1e-3], None).unwrap();
        assert!(reduced_residual_1d(&s, &both).is_err());
    }

    #[test]
    fn detects_a_wrong_frequency() {
        let s = Solver::new(&Problem::running_example(), SolverConfig::default()).unwrap();
        let mut sol = s.solve_wave([1e-2, 0.0], None).unwrap();
        sol.alpha += 1e-3;
        assert!(reduced_residual_1d(&s, &sol).unwrap() > 1e-6);
    }
}
