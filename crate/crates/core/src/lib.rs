//! Exact arithmetic and exhaustive-search tooling for the exponential
//! Diophantine equation `(a^n - 1)(b^n - 1) = x^2`.
//!
//! The crate is layered bottom-up:
//!
//! - [`arith`]: arbitrary-precision roots, primality, factorization and
//!   square-free decomposition.
//! - [`pell`]: fundamental and k-th solutions of `u^2 - d v^2 = 1`.
//! - [`lucas`]: divisibility laws of the Pell `u`-sequence and primitive
//!   divisors of the `v`-sequence.
//! - [`ljunggren`]: bounded search for `x^p = 2 y^2 - 1`.
//! - [`diophantine`]: evaluation, gcd decomposition, scope predicates and
//!   bounded verification sweeps for the main equation.
//!
//! All integers are [`Natural`] (an alias for [`num_bigint::BigUint`]); no
//! operation has a fixed-width overflow mode.

pub mod arith;
pub mod decimal;
pub mod diophantine;
mod error;
pub mod ljunggren;
pub mod lucas;
pub mod pell;

pub use error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Natural = num_bigint::BigUint;
