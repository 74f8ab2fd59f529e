//! Fourier representation of real fields, multiplier operators, the
//! pseudo-spectral nonlinearity and the kernel/range projections.

pub mod field;
pub mod grid;

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Coeffs;
use crate::resonance::{kernel_modes, theta_symbol};
pub use field::FourierField;
pub use grid::{smooth_size, Grid};

pub const DEFAULT_N: usize = 16;

/// `v(ρ) = ρ₁(e^{ij₁*θ₁} + c.c.) + ρ₂(e^{ij₂*θ₂} + c.c.)`.
pub fn kernel_field(rho: [f64; 2], jstar: [i64; 2], n: usize) -> Result<FourierField> {
    if rho.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::Domain(format!("amplitudes must be non-negative, got {rho:?}")));
    }
    if (n as i64) < jstar[0].max(jstar[1]) {
        return Err(Error::Precondition(format!(
            "truncation N = {n} does not contain the kernel modes {jstar:?}"
        )));
    }
    let mut f = FourierField::zeros(n);
    f.set([jstar[0], 0], Complex64::new(rho[0], 0.0));
    f.set([0, jstar[1]], Complex64::new(rho[1], 0.0));
    Ok(f)
}

/// `L_{ω,α,γ}φ`: multiplication by `Θ(j, ω, α, γ)`.
pub fn apply_linear(f: &FourierField, omega: [f64; 2], alpha: f64, gamma: f64, c: &Coeffs) -> FourierField {
    f.multiply(|j| theta_symbol(j, omega, alpha, gamma, c))
}

/// `(ω·∇)φ`: multiplier `i(ω·j)`.
pub fn omega_grad(f: &FourierField, omega: [f64; 2]) -> FourierField {
    f.multiply(|j| Complex64::new(0.0, omega[0] * j[0] as f64 + omega[1] * j[1] as f64))
}

/// `Δ_ν φ`: multiplier `−λ_j`.
pub fn laplacian(f: &FourierField, c: &Coeffs) -> FourierField {
    f.multiply(|j| Complex64::new(-c.lap(j), 0.0))
}

/// Grid size that evaluates a degree-`(2p+1)` product of band-`N` fields
/// without aliasing into `|j|∞ ≤ N`.
pub fn required_grid(p: u32, n: usize) -> usize {
    (2 * p as usize + 2) * n + 1
}

pub fn default_grid(p: u32, n: usize) -> usize {
    smooth_size(required_grid(p, n))
}

/// `F(ω, φ) = λ((ω·∇)φ)^{2p+1}` truncated to the band of `φ`.
pub fn nonlinearity(f: &FourierField, omega: [f64; 2], c: &Coeffs) -> FourierField {
    nonlinearity_on_grid(f, omega, c, default_grid(c.p, f.n())).expect("default grid is alias-free")
}

pub fn nonlinearity_on_grid(f: &FourierField, omega: [f64; 2], c: &Coeffs, m: usize) -> Result<FourierField> {
    power_map(&omega_grad(f, omega), c.lambda, 2 * c.p + 1, m, f.n())
}

/// `scale·g^e` computed on an `m`-grid and truncated to `|j|∞ ≤ out_n`.
pub fn power_map(g: &FourierField, scale: f64, e: u32, m: usize, out_n: usize) -> Result<FourierField> {
    let need = (e as usize + 1) * g.n() + 1;
    if m < need {
        return Err(Error::Config(format!(
            "grid M = {m} aliases a degree-{e} product of band {}; need M >= {need}",
            g.n()
        )));
    }
    let grid = Grid::cached(m);
    let mut v = grid.to_physical(g);
    for x in v.iter_mut() {
        *x = scale * x.powi(e as i32);
    }
    Ok(grid.from_physical(&v, out_n))
}

/// Coefficients `|k|∞ ≤ 2N` of `λ(2p+1)((ω·∇)φ)^{2p}`, the weight of the
/// derivative `DF(φ)h = weight · (ω·∇)h`.
pub fn derivative_weight(f: &FourierField, omega: [f64; 2], c: &Coeffs) -> FourierField {
    let m = default_grid(c.p, f.n());
    let grid = Grid::cached(m);
    let mut v = grid.to_physical(&omega_grad(f, omega));
    let e = 2 * c.p as i32;
    let s = c.lambda * (2 * c.p + 1) as f64;
    for x in v.iter_mut() {
        *x = s * x.powi(e);
    }
    grid.from_physical(&v, 2 * f.n())
}

/// Block of the retained lattice a mode belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    /// `J⊥`, the kernel modes.
    V,
    /// `J₁`, `|j|² ≥ K`.
    Y,
    /// `J₂`, the finite remainder.
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Target {
    V,
    W,
    Y,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSplit {
    pub kernel_modes: [[i64; 2]; 4],
    pub k: u64,
}

impl SpectralSplit {
    pub fn new(jstar: [i64; 2], k: u64) -> Self {
        Self {
            kernel_modes: kernel_modes(jstar),
            k,
        }
    }

    pub fn block(&self, j: [i64; 2]) -> Block {
        if self.kernel_modes.contains(&j) {
            Block::V
        } else if (j[0] * j[0] + j[1] * j[1]) as u64 >= self.k {
            Block::Y
        } else {
            Block::Z
        }
    }

    /// `J₂` as an ordered set (independent of truncation).
    pub fn z_modes(&self) -> BTreeSet<[i64; 2]> {
        let r = (self.k as f64).sqrt().ceil() as i64;
        (-r..=r)
            .flat_map(|a| (-r..=r).map(move |b| [a, b]))
            .filter(|&j| self.block(j) == Block::Z)
            .collect()
    }

    pub fn in_target(&self, j: [i64; 2], t: Target) -> bool {
        let b = self.block(j);
        match t {
            Target::V => b == Block::V,
            Target::W => b != Block::V,
            Target::Y => b == Block::Y,
            Target::Z => b == Block::Z,
        }
    }
}

pub fn project(f: &FourierField, target: Target, split: &SpectralSplit) -> FourierField {
    f.map_modes(|j| split.in_target(j, target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Problem;
    use crate::resonance::critical_frequencies;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn coeffs() -> Coeffs {
        Problem::running_example().coeffs()
    }

    fn omega_star() -> [f64; 2] {
        critical_frequencies(&Problem::running_example(), 50).unwrap().omega_star
    }

    pub(crate) fn random_field(n: usize, band: usize, seed: u64) -> FourierField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = FourierField::zeros(n);
        let b = band as i64;
        for a in -b..=b {
            for c in -b..=b {
                if field::is_upper([a, c]) {
                    f.set([a, c], Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
                }
            }
        }
        f
    }

    #[test]
    fn kernel_field_examples() {
        assert_eq!(kernel_field([0.0, 0.0], [1, 2], 4).unwrap().max_abs(), 0.0);
        let v = kernel_field([1.0, 0.0], [1, 2], 4).unwrap();
        assert_eq!(v.get([-1, 0]), Complex64::new(1.0, 0.0));
        assert!((v.eval([0.0, 0.3]) - 2.0).abs() < 1e-15);
        let v = kernel_field([0.5, 1.0 / 3.0], [1, 2], 4).unwrap();
        assert!((v.h0_norm() - (13.0f64 / 9.0).sqrt()).abs() < 1e-15);
        assert!(kernel_field([-0.1, 0.0], [1, 2], 4).is_err());
        assert!(kernel_field([0.1, 0.0], [1, 5], 4).is_err());
    }

    #[test]
    fn kernel_is_annihilated() {
        let v = kernel_field([0.3, 0.7], [1, 2], 8).unwrap();
        let lv = apply_linear(&v, omega_star(), 0.0, 0.0, &coeffs());
        assert!(lv.max_abs() < 1e-14);
    }

    #[test]
    fn linear_on_mode_one_one() {
        let mut f = FourierField::zeros(4);
        f.set([1, 1], Complex64::new(1.0, 0.0));
        let g = apply_linear(&f, omega_star(), 0.0, 0.0, &coeffs());
        assert!((g.get([1, 1]).re + 6.0999).abs() < 1e-4);
        assert!((g.get([-1, -1]).re + 6.0999).abs() < 1e-4);
    }

    #[test]
    fn cubic_of_cosine() {
        let mut c = coeffs();
        c.lambda = 1.0;
        c.p = 1;
        let v = kernel_field([1.0, 0.0], [1, 2], 4).unwrap();
        let f = nonlinearity(&v, [1.0, 0.0], &c);
        assert!((f.get([1, 0]) - Complex64::new(0.0, 3.0)).norm() < 1e-13);
        assert!((f.get([3, 0]) - Complex64::new(0.0, -1.0)).norm() < 1e-13);
        assert!(nonlinearity(&FourierField::zeros(4), [1.0, 1.0], &c).max_abs() == 0.0);
        let mut k = FourierField::zeros(4);
        k.set([0, 0], Complex64::new(2.0, 0.0));
        assert!(nonlinearity(&k, [1.0, 1.0], &c).max_abs() == 0.0);
    }

    #[test]
    fn small_grid_is_refused() {
        let v = kernel_field([1.0, 0.0], [1, 2], 4).unwrap();
        assert!(matches!(
            nonlinearity_on_grid(&v, [1.0, 0.0], &coeffs(), 16),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn dealiasing_is_grid_independent() {
        let c = coeffs();
        let f = random_field(16, 4, 7).scale(0.1);
        let m = default_grid(c.p, 16);
        let a = nonlinearity_on_grid(&f, omega_star(), &c, m).unwrap();
        let b = nonlinearity_on_grid(&f, omega_star(), &c, 2 * m).unwrap();
        assert!(a.sub(&b).max_abs() < 1e-13);
    }

    #[test]
    fn derivative_weight_matches_difference() {
        let c = coeffs();
        let w = omega_star();
        let f = random_field(6, 2, 3).scale(0.2);
        let h = random_field(6, 2, 4).scale(1e-4);
        let fd = nonlinearity(&f.add(&h), w, &c)
            .sub(&nonlinearity(&f.sub(&h), w, &c))
            .scale(0.5);
        let g = derivative_weight(&f, w, &c);
        // DF(f)h = g · (ω·∇)h, product truncated to N = 6.
        let dh = omega_grad(&h, w);
        let grid = Grid::cached(64);
        let a = grid.to_physical(&g);
        let b = grid.to_physical(&dh.resized(12));
        let v: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let lin = grid.from_physical(&v, 6);
        assert!(lin.sub(&fd).max_abs() < 1e-6 * fd.max_abs());
    }

    #[test]
    fn projections_partition_identity() {
        let split = SpectralSplit::new([1, 2], 11);
        let f = random_field(8, 8, 11);
        let s = project(&f, Target::Y, &split)
            .add(&project(&f, Target::Z, &split))
            .add(&project(&f, Target::V, &split));
        assert!(s.sub(&f).max_abs() <= 1e-15);
        let w = project(&f, Target::W, &split);
        assert!(w.add(&project(&f, Target::V, &split)).sub(&f).max_abs() <= 1e-15);
        let v = kernel_field([0.2, 0.1], [1, 2], 8).unwrap();
        assert_eq!(project(&v, Target::V, &split), v);
        assert_eq!(project(&v, Target::W, &split).max_abs(), 0.0);
        let z = split.z_modes();
        assert!(z.contains(&[0, 0]) && !z.contains(&[1, 0]) && !z.contains(&[3, 3]));
        assert!((z.len() as f64) < std::f64::consts::PI * 11.0 + 10.0);
    }

    #[test]
    fn multiplier_consistency() {
        let c = coeffs();
        let (w, a, g) = (omega_star(), 0.7, -0.3);
        let f = random_field(8, 8, 5);
        let total = apply_linear(&f, w, a, g, &c);
        let d = omega_grad(&f, w);
        let lap2 = laplacian(&laplacian(&f, &c), &c);
        let parts = omega_grad(&d, w)
            .add(&lap2.scale(c.mu))
            .add(&d.scale(a))
            .add(&omega_grad(&lap2, w).scale(g))
            .add(&f.scale(c.m));
        let rel = total.sub(&parts).max_abs() / total.max_abs();
        assert!(rel < 1e-13, "{rel}");
    }

    #[test]
    fn alpha_linearity() {
        let c = coeffs();
        let w = omega_star();
        let f = random_field(6, 6, 9);
        let a = apply_linear(&f, w, 0.3 + 1.1, 0.2, &c);
        let b = apply_linear(&f, w, 0.3, 0.2, &c)
            .add(&apply_linear(&f, w, 1.1, 0.2, &c))
            .sub(&apply_linear(&f, w, 0.0, 0.2, &c));
        assert!(a.sub(&b).max_abs() < 1e-14 * f.max_abs() * 1e4);
    }

    #[test]
    fn algebra_constant_is_stable() {
        // Fitted ratio ‖φψ‖₂ / (‖φ‖₂‖ψ‖₂) over random low-band fields, at N and 2N.
        let fit = |n: usize| {
            (0..20)
                .map(|s| {
                    let a = random_field(n, 3, 100 + s).scale(0.1);
                    let b = random_field(n, 3, 200 + s).scale(0.1);
                    let grid = Grid::cached(smooth_size(4 * n + 1));
                    let pa = grid.to_physical(&a);
                    let pb = grid.to_physical(&b);
                    let v: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
                    let ab = grid.from_physical(&v, n);
                    ab.sobolev_norm(2.0).unwrap() / (a.sobolev_norm(2.0).unwrap() * b.sobolev_norm(2.0).unwrap())
                })
                .fold(0.0, f64::max)
        };
        let (c1, c2) = (fit(8), fit(16));
        assert!(c1 > 0.0 && (c1 - c2).abs() <= 1e-12 * c1);
    }

    proptest! {
        #[test]
        fn operations_preserve_reality(seed in 0u64..1000, w1 in 0.5f64..3.0, w2 in 0.5f64..3.0) {
            let c = coeffs();
            let f = random_field(6, 6, seed).scale(0.3);
            prop_assert!(apply_linear(&f, [w1, w2], 0.5, -0.5, &c).hermitian_defect() <= 1e-14);
            prop_assert!(nonlinearity(&f, [w1, w2], &c).hermitian_defect() <= 1e-14);
            let split = SpectralSplit::new([1, 2], 11);
            prop_assert!(project(&f, Target::Y, &split).hermitian_defect() <= 1e-14);
        }
    }
}
