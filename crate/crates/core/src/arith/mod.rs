//! Arbitrary-precision integer primitives.
//!
//! Everything here is a pure function of its arguments. Results are exact:
//! roots are corrected until their defining inequalities hold, primality is
//! deterministic below 2^64, and factorizations are re-multiplied before
//! they are returned.

mod factor;
mod prime;
mod roots;

pub use factor::{
    factorize, factorize_partial, squarefree_decompose, Factorization, PartialFactorization,
    SquarefreeDecomposition,
};
pub use prime::{is_prime, is_prime_u64, small_primes, BIG_MR_BASES};
pub(crate) use roots::SQUARE_FILTER_MODULUS;
pub use roots::{iroot, is_perfect_power, is_perfect_square, isqrt, square_residue_filter};
