//! Truncated Fourier coefficient arrays of real fields on the 2-torus.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coefficients `c_j`, `|j|∞ ≤ N`, of `φ(θ) = Σ c_j e^{i j·θ}`.
///
/// Storage is the full square; the Hermitian relation `c_{−j} = conj(c_j)` is
/// maintained by every constructor and operation.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierField {
    n: usize,
    data: Vec<Complex64>,
}

impl FourierField {
    pub fn zeros(n: usize) -> Self {
        let side = 2 * n + 1;
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); side * side],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn side(&self) -> usize {
        2 * self.n + 1
    }

    pub fn contains(&self, j: [i64; 2]) -> bool {
        let n = self.n as i64;
        j[0].abs() <= n && j[1].abs() <= n
    }

    fn index(&self, j: [i64; 2]) -> usize {
        let n = self.n as i64;
        ((j[0] + n) as usize) * self.side() + (j[1] + n) as usize
    }

    /// `c_j`, zero outside the retained band.
    pub fn get(&self, j: [i64; 2]) -> Complex64 {
        if self.contains(j) {
            self.data[self.index(j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    /// Sets `c_j = c` and `c_{−j} = conj(c)`; for `j = 0` only the real part is kept.
    pub fn set(&mut self, j: [i64; 2], c: Complex64) {
        if !self.contains(j) {
            return;
        }
        let (a, b) = (self.index(j), self.index([-j[0], -j[1]]));
        if a == b {
            self.data[a] = Complex64::new(c.re, 0.0);
        } else {
            self.data[a] = c;
            self.data[b] = c.conj();
        }
    }

    /// Lattice points `|j|∞ ≤ N`.
    pub fn modes(&self) -> impl Iterator<Item = [i64; 2]> + '_ {
        let n = self.n as i64;
        (-n..=n).flat_map(move |a| (-n..=n).map(move |b| [a, b]))
    }

    /// One representative of each `±j` pair: `j₁ > 0`, or `j₁ = 0, j₂ ≥ 0`.
    pub fn upper_modes(&self) -> impl Iterator<Item = [i64; 2]> + '_ {
        self.modes().filter(|j| is_upper(*j))
    }

    pub fn iter(&self) -> impl Iterator<Item = ([i64; 2], Complex64)> + '_ {
        self.modes().map(move |j| (j, self.data[self.index(j)]))
    }

    /// Coefficient-wise `c_j ↦ f(j)·c_j`; `f` must satisfy `f(−j) = conj f(j)`.
    pub fn multiply(&self, f: impl Fn([i64; 2]) -> Complex64) -> Self {
        let mut out = self.clone();
        for j in self.modes() {
            let i = self.index(j);
            out.data[i] = self.data[i] * f(j);
        }
        out
    }

    pub fn map_modes(&self, keep: impl Fn([i64; 2]) -> bool) -> Self {
        let mut out = self.clone();
        for j in self.modes() {
            if !keep(j) {
                let i = self.index(j);
                out.data[i] = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.n.max(other.n);
        let mut a = self.resized(n);
        let b = other.resized(n);
        for (x, y) in a.data.iter_mut().zip(&b.data) {
            *x += *y;
        }
        a
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    pub fn axpy(&mut self, a: f64, x: &Self) {
        assert_eq!(self.n, x.n, "axpy needs equal truncation");
        for (y, xv) in self.data.iter_mut().zip(&x.data) {
            *y += xv * a;
        }
    }

    /// Truncates or zero-pads to `|j|∞ ≤ n`.
    pub fn resized(&self, n: usize) -> Self {
        if n == self.n {
            return self.clone();
        }
        let mut out = Self::zeros(n);
        let m = n.min(self.n) as i64;
        for a in -m..=m {
            for b in -m..=m {
                let i = out.index([a, b]);
                out.data[i] = self.get([a, b]);
            }
        }
        out
    }

    /// `‖φ‖_s² = Σ (1 + |j|^{2s}) |c_j|²` over retained modes (with `0⁰ = 1`).
    pub fn sobolev_norm(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("Sobolev index must be non-negative, got {s}")));
        }
        Ok(self.sobolev_norm_sq(s).sqrt())
    }

    pub(crate) fn sobolev_norm_sq(&self, s: f64) -> f64 {
        self.iter()
            .map(|(j, c)| {
                let r2 = (j[0] * j[0] + j[1] * j[1]) as f64;
                let w = if s == 0.0 { 1.0 } else { r2.powf(s) };
                (1.0 + w) * c.norm_sqr()
            })
            .sum()
    }

    pub fn h0_norm(&self) -> f64 {
        self.sobolev_norm_sq(0.0).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest `|c_{−j} − conj(c_j)|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.modes()
            .map(|j| (self.get([-j[0], -j[1]]) - self.get(j).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Value at a point `θ`, by direct summation.
    pub fn eval(&self, theta: [f64; 2]) -> f64 {
        self.iter()
            .map(|(j, c)| {
                let ph = j[0] as f64 * theta[0] + j[1] as f64 * theta[1];
                (c * Complex64::new(ph.cos(), ph.sin())).re
            })
            .sum()
    }

    /// Translation `φ(θ + c)`: `c_j ↦ e^{i j·c} c_j`.
    pub fn translated(&self, shift: [f64; 2]) -> Self {
        self.multiply(|j| {
            let ph = j[0] as f64 * shift[0] + j[1] as f64 * shift[1];
            Complex64::new(ph.cos(), ph.sin())
        })
    }

    /// Axis exchange `φ(θ₁, θ₂) ↦ φ(θ₂, θ₁)`.
    pub fn transposed(&self) -> Self {
        let mut out = Self::zeros(self.n);
        for j in self.modes() {
            let i = out.index([j[1], j[0]]);
            out.data[i] = self.get(j);
        }
        out
    }
}

pub fn is_upper(j: [i64; 2]) -> bool {
    j[0] > 0 || (j[0] == 0 && j[1] >= 0)
}

/// JSON wire form listing the upper half-lattice only.
#[derive(Serialize, Deserialize)]
struct FieldRepr {
    #[serde(rename = "N")]
    n: usize,
    coeffs: Vec<(i64, i64, f64, f64)>,
}

impl Serialize for FourierField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .upper_modes()
            .filter_map(|j| {
                let c = self.get(j);
                (c.re != 0.0 || c.im != 0.0).then_some((j[0], j[1], c.re, c.im))
            })
            .collect();
        FieldRepr { n: self.n, coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierField {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let r = FieldRepr::deserialize(de)?;
        let mut f = FourierField::zeros(r.n);
        for (a, b, re, im) in r.coeffs {
            if !f.contains([a, b]) {
                return Err(serde::de::Error::custom(format!("mode ({a}, {b}) outside N = {}", r.n)));
            }
            if !is_upper([a, b]) {
                return Err(serde::de::Error::custom(format!("mode ({a}, {b}) is not in the upper half-lattice")));
            }
            f.set([a, b], Complex64::new(re, im));
        }
        Ok(f)
    }
}
