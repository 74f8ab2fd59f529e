use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Malformed input (JSON, rational literals, ...).
    #[error("parse error: {0}")]
    Parse(String),

    /// Run configuration is inconsistent (grid size, time step, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// The exact resonance method cannot be applied to these parameters.
    #[error("exact method refused: {0}")]
    MethodRefused(String),

    /// A bounded search (e.g. dense sampling) ran out of budget.
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),

    /// An iterative solver did not converge.
    #[error("no convergence after {iterations} iterations (last residual {residual:.3e}): {context}")]
    NonConvergence {
        context: String,
        iterations: usize,
        residual: f64,
    },

    /// The linear symbol is (numerically) singular on the finite range block.
    #[error("near-singular symbol at mode ({j1}, {j2}): |theta| = {modulus:.3e}")]
    NearSingular { j1: i64, j2: i64, modulus: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
