//! Taylor coefficients of Ramanujan's Δ at points of the upper half-plane.
//!
//! Exact recursions give the coefficients at CM points up to transcendental
//! factors. Reducing those recursions modulo primes yields periodicity
//! certificates for non-vanishing. Floating-point routes cross-check the
//! normalizations, locate zeros of the associated 𝓔_m functions, and test
//! the Poincaré series identities numerically.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod cmdata;
pub mod exactalg;
pub mod numerics;
pub mod periodicity;
pub mod petersson;
pub mod recurrences;
pub mod zerofinder;

use exactalg::FieldSpec;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u32),
    #[error("{0} is not a unit")]
    NonUnit(String),
    #[error("unknown discriminant {0}")]
    UnknownDiscriminant(i64),
    #[error("polynomial is not homogeneous of weight {0}")]
    NonHomogeneous(u32),
    #[error("budget exceeded after {steps} steps (theoretical bound {bound})")]
    BudgetExceeded { steps: u64, bound: String },
    #[error("deadline exceeded")]
    DeadlineExceeded,
    #[error("order {0} exceeds the coefficient-growth guard")]
    OrderTooLarge(u32),
    #[error("point must satisfy y >= sqrt(3)/2 (got y = {0}); reduce first")]
    NotReduced(f64),
    #[error("truncation policy rejected: {0}")]
    PolicyRejected(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("sign margin too small: {0}")]
    MarginTooSmall(String),
    #[error("quadrature did not converge: {0}")]
    NoConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
