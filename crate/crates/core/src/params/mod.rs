//! Exact parameter arithmetic and the admissible sets `S`, `S′`.

pub mod geometry;
pub mod membership;
pub mod model;
pub mod precision;
pub mod rational;
pub mod sample;
pub mod surd;

pub use geometry::{Generator, TorusGeometry};
pub use membership::{
    admissible_set, check_membership, check_membership_s, check_membership_sprime, classify_case,
    MembershipReport, SetId,
};
pub use model::{Coeffs, ModelParams, Problem};
pub use precision::Fixed;
pub use rational::{format_rational, parse_rational, rat, rat_int, sqrt_is_irrational, Rational};
pub use sample::{sample_dense, SampleBudget};
pub use surd::{QuadraticSurd, SurdSum};
