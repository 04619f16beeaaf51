//! Exact integer arithmetic: binomial coefficients with the zero-outside-range
//! convention, Pascal rows and Laurent polynomials with big-integer
//! coefficients.

mod laurent;

pub use laurent::{poly_binomial_power, LaurentPoly};

use num_bigint::{BigInt, BigUint};
use num_traits::One;

/// Arbitrary-precision natural number.
pub type BigNat = BigUint;

static ZERO: BigNat = BigNat::ZERO;

/// `C(n, k)`, defined to be zero when `k < 0`, `k > n` or `n < 0`.
///
/// Uses the multiplicative formula; every intermediate quotient is exact
/// because the running product after `i + 1` steps is `(i + 1)! * C(n, i + 1)`.
pub fn binomial(n: i64, k: i64) -> BigNat {
    if n < 0 || k < 0 || k > n {
        return BigNat::ZERO;
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigNat::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `[C(n, 0), ..., C(n, n)]`.
pub fn pascal_row(n: u64) -> Vec<BigNat> {
    let len = n as usize + 1;
    let mut row = Vec::with_capacity(len);
    row.push(BigNat::one());
    // Left half by the ratio C(n, j + 1) = C(n, j) * (n - j) / (j + 1),
    // right half by the palindrome.
    for j in 0..n / 2 {
        let next = &row[j as usize] * (n - j) / (j + 1);
        row.push(next);
    }
    while row.len() < len {
        let mirror = row[len - 1 - row.len()].clone();
        row.push(mirror);
    }
    row
}

/// `2^e` as a big natural.
pub fn pow2(e: u64) -> BigNat {
    BigNat::one() << e
}

/// Central binomial coefficient `C(2k, k)`.
pub fn central_binomial(k: u64) -> BigNat {
    binomial(2 * k as i64, k as i64)
}

/// One row of Pascal's triangle with total lookup under the zero convention.
///
/// All the sums in this crate index rows by `k + p` for signed offsets, so
/// lookups take an `i64` and return zero outside `0..=n`.
#[derive(Debug, Clone)]
pub struct BinomialRow {
    n: i64,
    entries: Vec<BigNat>,
}

impl BinomialRow {
    pub fn new(n: i64) -> Self {
        let entries = if n < 0 {
            Vec::new()
        } else {
            pascal_row(n as u64)
        };
        BinomialRow { n, entries }
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    /// `C(n, j)`; zero when `j` is outside `0..=n`.
    pub fn get(&self, j: i64) -> &BigNat {
        if j < 0 {
            return &ZERO;
        }
        self.entries.get(j as usize).unwrap_or(&ZERO)
    }

    /// Signed copy of `C(n, j)`.
    pub fn signed(&self, j: i64) -> BigInt {
        BigInt::from(self.get(j).clone())
    }

    pub fn entries(&self) -> &[BigNat] {
        &self.entries
    }
}
