//! Exact zero test for the fixed-frequency symbol on the integer lattice.
//!
//! `Θ(j, ω*, 0, 0) = P(j) − 2ω₁*ω₂* j₁j₂` where `P` has coefficients in a
//! multi-quadratic field. When `ω₁*²ω₂*²` is rational the product `ω₁*ω₂*` is a
//! surd and `Θ` itself is such a polynomial (direct route). Otherwise the
//! equation is squared into `P² = 4ω₁*²ω₂*²j₁²j₂²` and each root is filtered by
//! the sign condition `sign P(j) = sign(j₁j₂)` (squared route).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::params::rational::{exact_isqrt, rat_int, Rational};
use crate::params::{Problem, QuadraticSurd, SurdSum};

type Mono = (u32, u32);

/// Polynomial in `(j₁, j₂)` with multi-quadratic coefficients.
#[derive(Clone, Debug, Default)]
pub struct SurdPoly {
    terms: BTreeMap<Mono, SurdSum>,
}

impl SurdPoly {
    pub fn term(mono: Mono, c: SurdSum) -> Self {
        let mut p = Self::default();
        p.add_term(mono, c);
        p
    }

    fn add_term(&mut self, mono: Mono, c: SurdSum) {
        let e = self.terms.entry(mono).or_default();
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term((ma.0 + mb.0, ma.1 + mb.1), ca.mul(cb));
            }
        }
        out
    }

    pub fn eval(&self, j: [i64; 2]) -> SurdSum {
        let mut acc = SurdSum::zero();
        for (&(a, b), c) in &self.terms {
            let v = BigInt::from(j[0]).pow(a) * BigInt::from(j[1]).pow(b);
            acc = acc.add(&c.scale(&BigRational::from_integer(v)));
        }
        acc
    }

    /// Splits along radicand classes into integer polynomials that must
    /// vanish simultaneously.
    pub fn class_polys(&self) -> ClassPolys {
        let mut reps: Vec<(BigUint, Vec<(Mono, Rational)>)> = Vec::new();
        for (&mono, c) in &self.terms {
            for (d, coeff) in c.terms() {
                let mut placed = false;
                for (rep, list) in reps.iter_mut() {
                    if let Some(root) = exact_isqrt(&(d * &*rep)) {
                        let f = BigRational::new(
                            BigInt::from_biguint(Sign::Plus, root),
                            BigInt::from_biguint(Sign::Plus, rep.clone()),
                        );
                        list.push((mono, coeff * f));
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    reps.push((d.clone(), vec![(mono, coeff.clone())]));
                }
            }
        }
        let mut classes = Vec::new();
        for (_, list) in reps {
            let mut merged: BTreeMap<Mono, Rational> = BTreeMap::new();
            for (m, c) in list {
                *merged.entry(m).or_insert_with(Rational::zero) += c;
            }
            merged.retain(|_, c| !c.is_zero());
            if merged.is_empty() {
                continue;
            }
            let lcm = merged
                .values()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<(Mono, BigInt)> = merged
                .into_iter()
                .map(|(m, c)| (m, (c * BigRational::from_integer(lcm.clone())).to_integer()))
                .collect();
            classes.push(IntPoly::new(ints));
        }
        ClassPolys { classes }
    }
}

#[derive(Clone, Debug)]
pub struct IntPoly {
    big: Vec<(Mono, BigInt)>,
    small: Option<Vec<(Mono, i128)>>,
}

impl IntPoly {
    fn new(big: Vec<(Mono, BigInt)>) -> Self {
        let small = big
            .iter()
            .map(|(m, c)| c.to_i128().map(|v| (*m, v)))
            .collect::<Option<Vec<_>>>();
        Self { big, small }
    }

    fn eval_checked(&self, j: [i64; 2]) -> Option<i128> {
        let small = self.small.as_ref()?;
        let mut acc: i128 = 0;
        for &((a, b), c) in small {
            let v = (j[0] as i128)
                .checked_pow(a)?
                .checked_mul((j[1] as i128).checked_pow(b)?)?;
            acc = acc.checked_add(c.checked_mul(v)?)?;
        }
        Some(acc)
    }

    pub fn is_zero_at(&self, j: [i64; 2]) -> bool {
        if let Some(v) = self.eval_checked(j) {
            return v == 0;
        }
        let mut acc = BigInt::zero();
        for ((a, b), c) in &self.big {
            acc += c * BigInt::from(j[0]).pow(*a) * BigInt::from(j[1]).pow(*b);
        }
        acc.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct ClassPolys {
    classes: Vec<IntPoly>,
}

impl ClassPolys {
    pub fn vanishes_at(&self, j: [i64; 2]) -> bool {
        self.classes.iter().all(|p| p.is_zero_at(j))
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Direct,
    Squared,
}

/// Exact decision procedure for `Θ(j, ω*, 0, 0) = 0`.
#[derive(Clone, Debug)]
pub struct ExactTheta {
    route: Route,
    polys: ClassPolys,
    p: SurdPoly,
}

fn sum(q: &QuadraticSurd) -> SurdSum {
    SurdSum::from(q)
}

impl ExactTheta {
    /// `None` when some coefficient of the symbol has no multi-quadratic form
    /// (for instance when `ν₁⁴ν₂⁴` is irrational).
    pub fn new(problem: &Problem) -> Option<Self> {
        let g = &problem.geom;
        let mu = &problem.params.mu;
        let m = sum(&problem.params.m);
        let [s1, s2] = problem.params.jstar;
        let a1 = sum(&mu.mul(g.nu4(0)));
        let a2 = sum(&mu.mul(g.nu4(1)));
        let c12 = sum(&mu.mul(&g.nu2_product()?)).scale(&rat_int(2));
        let w = |a: &SurdSum, s: i64| {
            a.scale(&rat_int(s * s))
                .add(&m.scale(&BigRational::new(BigInt::one(), BigInt::from(s * s))))
        };
        let w1 = w(&a1, s1);
        let w2 = w(&a2, s2);
        let p = SurdPoly::term((2, 0), w1.neg())
            .add(&SurdPoly::term((0, 2), w2.neg()))
            .add(&SurdPoly::term((4, 0), a1))
            .add(&SurdPoly::term((0, 4), a2))
            .add(&SurdPoly::term((2, 2), c12))
            .add(&SurdPoly::term((0, 0), m));
        let ww = w1.mul(&w2);
        if let Some(q) = ww.as_rational() {
            let root = SurdSum::sqrt_of_rational(&q).ok()?;
            let theta = p.add(&SurdPoly::term((1, 1), root.scale(&rat_int(-2))));
            Some(Self {
                route: Route::Direct,
                polys: theta.class_polys(),
                p,
            })
        } else {
            let sq = p.mul(&p).add(&SurdPoly::term((2, 2), ww.scale(&rat_int(-4))));
            Some(Self {
                route: Route::Squared,
                polys: sq.class_polys(),
                p,
            })
        }
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn is_zero(&self, j: [i64; 2]) -> bool {
        if !self.polys.vanishes_at(j) {
            return false;
        }
        match self.route {
            Route::Direct => true,
            Route::Squared => {
                let pj = self.p.eval(j).signum();
                let target = (j[0] * j[1]).signum();
                let want = match target {
                    1 => Ordering::Greater,
                    -1 => Ordering::Less,
                    _ => Ordering::Equal,
                };
                pj == want
            }
        }
    }
}
