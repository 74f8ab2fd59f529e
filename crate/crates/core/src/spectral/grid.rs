//! Physical-space grids and 2-D transforms.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::FourierField;

/// Smallest integer `≥ x` whose only prime factors are 2, 3 and 5.
pub fn smooth_size(x: usize) -> usize {
    let mut n = x.max(1);
    loop {
        let mut r = n;
        for p in [2, 3, 5] {
            while r.is_multiple_of(p) {
                r /= p;
            }
        }
        if r == 1 {
            return n;
        }
        n += 1;
    }
}

/// Uniform `M × M` grid on `[0, 2π)²` with cached transform plans.
pub struct Grid {
    m: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

thread_local! {
    static GRIDS: RefCell<HashMap<usize, Rc<Grid>>> = RefCell::new(HashMap::new());
}

impl Grid {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            m,
            fwd: planner.plan_fft_forward(m),
            inv: planner.plan_fft_inverse(m),
        }
    }

    /// Per-thread shared grid of size `m`.
    pub fn cached(m: usize) -> Rc<Grid> {
        GRIDS.with(|g| g.borrow_mut().entry(m).or_insert_with(|| Rc::new(Grid::new(m))).clone())
    }

    pub fn size(&self) -> usize {
        self.m
    }

    fn transform_2d(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        fft.process(data);
        let mut t = vec![Complex64::new(0.0, 0.0); m * m];
        transpose(data, &mut t, m);
        fft.process(&mut t);
        transpose(&t, data, m);
    }

    /// Point values `φ(2πa/M, 2πb/M)`, row-major in `(a, b)`.
    pub fn to_physical(&self, f: &FourierField) -> Vec<f64> {
        let m = self.m as i64;
        assert!(2 * f.n() < self.m, "grid too small for field band");
        let mut data = vec![Complex64::new(0.0, 0.0); self.m * self.m];
        for (j, c) in f.iter() {
            let a = j[0].rem_euclid(m) as usize;
            let b = j[1].rem_euclid(m) as usize;
            data[a * self.m + b] = c;
        }
        self.transform_2d(&mut data, &self.inv);
        data.into_iter().map(|c| c.re).collect()
    }

    /// Coefficients `|j|∞ ≤ n` of grid values, symmetrized to be exactly Hermitian.
    pub fn from_physical(&self, values: &[f64], n: usize) -> FourierField {
        let m = self.m as i64;
        let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform_2d(&mut data, &self.fwd);
        let norm = 1.0 / (self.m * self.m) as f64;
        let at = |j: [i64; 2]| {
            let a = j[0].rem_euclid(m) as usize;
            let b = j[1].rem_euclid(m) as usize;
            data[a * self.m + b] * norm
        };
        let mut out = FourierField::zeros(n);
        let modes: Vec<[i64; 2]> = out.upper_modes().collect();
        for j in modes {
            let c = (at(j) + at([-j[0], -j[1]]).conj()) * 0.5;
            out.set(j, c);
        }
        out
    }

    /// Grid mean of the values, i.e. the zero coefficient.
    pub fn mean(values: &[f64]) -> f64 {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], m: usize) {
    for a in 0..m {
        for b in 0..m {
            dst[b * m + a] = src[a * m + b];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_sizes() {
        assert_eq!(smooth_size(65), 72);
        assert_eq!(smooth_size(7), 8);
        assert_eq!(smooth_size(1), 1);
        assert_eq!(smooth_size(97), 100);
    }

    #[test]
    fn roundtrip() {
        let mut f = FourierField::zeros(4);
        f.set([1, -3], Complex64::new(0.3, -0.7));
        f.set([0, 0], Complex64::new(1.5, 0.0));
        f.set([4, 4], Complex64::new(-0.2, 0.1));
        let g = Grid::new(12);
        let v = g.to_physical(&f);
        let theta = [2.0 * std::f64::consts::PI * 5.0 / 12.0, 2.0 * std::f64::consts::PI * 7.0 / 12.0];
        assert!((v[5 * 12 + 7] - f.eval(theta)).abs() < 1e-13);
        let back = g.from_physical(&v, 4);
        assert!(back.sub(&f).max_abs() < 1e-14);
    }
}
