//! Natural-parameter continuation along straight amplitude paths.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Solver, WaveSolution};
use crate::error::{Error, Result};

/// Smallest amplitude increment tried before a branch is truncated.
pub const MIN_STEP: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    /// `ρ = (σ, 0)`.
    Axis1,
    /// `ρ = (0, σ)`.
    Axis2,
    /// `ρ = (σ, σ)`.
    Diagonal,
    /// Explicit list of amplitudes.
    Points,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec {
    pub kind: PathKind,
    /// Final value of `σ` for the straight paths.
    #[serde(default)]
    pub max: f64,
    #[serde(default)]
    pub steps: usize,
    #[serde(default)]
    pub points: Vec<[f64; 2]>,
}

impl PathSpec {
    pub fn straight(kind: PathKind, max: f64, steps: usize) -> Self {
        Self {
            kind,
            max,
            steps,
            points: Vec::new(),
        }
    }

    pub fn points(points: Vec<[f64; 2]>) -> Self {
        Self {
            kind: PathKind::Points,
            max: 0.0,
            steps: 0,
            points,
        }
    }

    /// Grid amplitudes `σ_i = max·i/steps`, `i = 0..=steps`, or the explicit list.
    pub fn grid(&self) -> Result<Vec<[f64; 2]>> {
        let at = |s: f64| match self.kind {
            PathKind::Axis1 => [s, 0.0],
            PathKind::Axis2 => [0.0, s],
            _ => [s, s],
        };
        let pts = match self.kind {
            PathKind::Points => self.points.clone(),
            _ => {
                if !(self.max >= 0.0 && self.max.is_finite()) {
                    return Err(Error::Domain(format!("path maximum must be finite and non-negative, got {}", self.max)));
                }
                if self.steps == 0 {
                    return Err(Error::Domain("a straight path needs at least one step".into()));
                }
                (0..=self.steps)
                    .map(|i| at(self.max * i as f64 / self.steps as f64))
                    .collect()
            }
        };
        if pts.iter().flatten().any(|r| !(*r >= 0.0 && r.is_finite())) {
            return Err(Error::Domain("path amplitudes must be finite and non-negative".into()));
        }
        Ok(pts)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Rotating,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum BranchStatus {
    Complete,
    Truncated {
        /// Amplitude the continuation could not reach.
        failed_at: [f64; 2],
        last_step: f64,
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub points: Vec<WaveSolution>,
    pub origin: Origin,
    pub path: PathSpec,
    pub status: BranchStatus,
}

impl Branch {
    pub fn is_complete(&self) -> bool {
        self.status == BranchStatus::Complete
    }

    pub const CSV_HEADER: &'static str = "rho1,rho2,omega1,omega2,alpha,gamma,residual_full,norm_w_H0,N";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for p in &self.points {
            let _ = writeln!(
                s,
                "{:e},{:e},{:.17e},{:.17e},{:.17e},{:.17e},{:e},{:e},{}",
                p.rho[0],
                p.rho[1],
                p.omega[0],
                p.omega[1],
                p.alpha,
                p.gamma,
                p.residual_full,
                p.w.h0_norm(),
                p.n
            );
        }
        s
    }
}

fn on_axis(r: [f64; 2]) -> bool {
    r[0] == 0.0 || r[1] == 0.0
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Continues a branch along `path`, warm-starting each solve from the previous
/// point. A failed step is retried with half the increment; once the increment
/// drops below [`MIN_STEP`] the branch is returned truncated.
pub fn continue_branch(solver: &Solver, path: &PathSpec) -> Result<Branch> {
    let grid = path.grid()?;
    let origin = match grid.first() {
        Some(&r) if r != [0.0, 0.0] && on_axis(r) => Origin::Rotating,
        _ => Origin::Trivial,
    };
    if let Some(&r) = grid.first() {
        if !on_axis(r) {
            return Err(Error::Precondition(format!(
                "path must start at rho = 0 or on a rotating-wave axis, starts at {r:?}"
            )));
        }
    }
    let mut points: Vec<WaveSolution> = Vec::with_capacity(grid.len());
    let mut status = BranchStatus::Complete;
    'grid: for (i, &target) in grid.iter().enumerate() {
        let Some(prev) = points.last().cloned() else {
            match solver.solve_wave(target, None) {
                Ok(s) => {
                    points.push(s);
                    continue;
                }
                Err(e) => {
                    status = BranchStatus::Truncated {
                        failed_at: target,
                        last_step: 0.0,
                        reason: e.to_string(),
                    };
                    break;
                }
            }
        };
        let start = prev.rho;
        let span = (target[0] - start[0]).abs().max((target[1] - start[1]).abs());
        if span == 0.0 {
            points.push(prev);
            continue;
        }
        let mut t = 0.0f64;
        let mut dt = 1.0;
        let mut warm = prev;
        while t < 1.0 {
            let tn = (t + dt).min(1.0);
            let rho = if tn == 1.0 { target } else { lerp(start, target, tn) };
            match solver.solve_wave(rho, Some(&warm)) {
                Ok(s) => {
                    warm = s;
                    t = tn;
                }
                Err(e) => {
                    dt *= 0.5;
                    if dt * span < MIN_STEP {
                        status = BranchStatus::Truncated {
                            failed_at: rho,
                            last_step: dt * span,
                            reason: format!("step {i}: {e}"),
                        };
                        break 'grid;
                    }
                }
            }
        }
        points.push(warm);
    }
    Ok(Branch {
        points,
        origin,
        path: path.clone(),
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Problem;
    use crate::solver::SolverConfig;

    fn solver() -> Solver {
        Solver::new(&Problem::running_example(), SolverConfig::default()).unwrap()
    }

    #[test]
    fn grid_shapes() {
        let g = PathSpec::straight(PathKind::Axis1, 1e-2, 10).grid().unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[10], [1e-2, 0.0]);
        assert_eq!(PathSpec::straight(PathKind::Diagonal, 1.0, 2).grid().unwrap()[1], [0.5, 0.5]);
        assert!(PathSpec::straight(PathKind::Axis2, -1.0, 2).grid().is_err());
        assert!(PathSpec::straight(PathKind::Axis2, 1.0, 0).grid().is_err());
    }

    #[test]
    fn empty_path_gives_empty_branch() {
        let b = continue_branch(&solver(), &PathSpec::points(Vec::new())).unwrap();
        assert!(b.points.is_empty());
        assert!(b.is_complete());
        assert_eq!(b.to_csv().lines().count(), 1);
    }

    #[test]
    fn off_axis_start_is_rejected() {
        let p = PathSpec::points(vec![[1e-3, 1e-3]]);
        assert!(matches!(continue_branch(&solver(), &p), Err(Error::Precondition(_))));
    }

    #[test]
    fn axis_branch_is_rotating() {
        let s = solver();
        let b = continue_branch(&s, &PathSpec::straight(PathKind::Axis1, 1e-2, 4)).unwrap();
        assert!(b.is_complete());
        assert_eq!(b.points.len(), 5);
        assert_eq!(b.origin, Origin::Trivial);
        let ws = s.omega_star();
        for p in &b.points {
            assert!(p.residual_full <= 1e-10);
            for (j, c) in p.w.iter() {
                if j[1] != 0 {
                    assert!(c.norm() <= 1e-12, "{j:?} {c}");
                }
            }
            assert!((p.omega[1] - ws[1]).abs() <= 100.0 * p.rho[0].powi(4));
        }
        for w in b.points.windows(2) {
            assert!((w[1].rho[0] - w[0].rho[0] - 2.5e-3).abs() < 1e-15);
        }
        let csv = b.to_csv();
        assert_eq!(csv.lines().count(), 6);
        assert!(csv.starts_with(Branch::CSV_HEADER));
    }

    #[test]
    fn branch_from_rotating_wave() {
        let b = continue_branch(&solver(), &PathSpec::points(vec![[2e-3, 0.0], [2e-3, 1e-3], [2e-3, 2e-3]])).unwrap();
        assert_eq!(b.origin, Origin::Rotating);
        assert!(b.is_complete());
        assert!(b.points.iter().skip(1).all(|p| p.alpha.max(p.gamma) > 0.0));
    }

    #[test]
    fn json_roundtrip() {
        let b = continue_branch(&solver(), &PathSpec::straight(PathKind::Diagonal, 1e-3, 1)).unwrap();
        let js = serde_json::to_string(&b).unwrap();
        let back: Branch = serde_json::from_str(&js).unwrap();
        assert_eq!(back.points.len(), 2);
        assert_eq!(back.status, BranchStatus::Complete);
    }
}
