//! Exact evaluation and mechanical verification of binomial sums whose
//! summands carry an absolute value:
//!
//! * `Σ_p C(2k, k+p) |p| = k C(2k, k)`
//! * `Σ_p Σ_q C(2k, k+p) C(2k, k+q) |p² − q²| = 2k² C(2k, k)²`
//!
//! together with every intermediate step of their telescoping proofs, a
//! brute-force enumeration oracle over ±1 sequences, and Monte Carlo
//! estimators for the corresponding expectations.

pub mod error;
pub mod exact;
pub mod identities;
pub mod oracle;
pub mod stochastic;

pub use error::Error;
pub use num_bigint::{BigInt, BigUint};

pub type Result<T> = std::result::Result<T, Error>;
