//! Travelling-wave bifurcation for the damped beam equation
//! `u_tt + μΔ²u + αu_t + γΔ²u_t + mu = λ(u_t)^{2p+1}` on rectangular tori.

// NaN must fail these checks, so `!(x <= tol)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod evolution;
pub mod params;
pub mod resonance;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use params::{
    check_membership_s, check_membership_sprime, sample_dense, MembershipReport, ModelParams, Problem,
    QuadraticSurd, Rational, SetId, TorusGeometry,
};
