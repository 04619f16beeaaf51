//! Brute-force oracle: enumerates every ±1 sequence of length `2k` and counts
//! how many reach each half-sum `p`. No binomial formula is used anywhere in
//! this module.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::exact::BigNat;
use crate::{Error, Result};

/// Default enumeration limit: `4^10` (about a million) sequences.
pub const DEFAULT_ORACLE_MAX: u64 = 10;

/// Largest `k` whose sequences can be indexed by a `u64`.
pub const HARD_ORACLE_MAX: u64 = 31;

const CHUNK: u64 = 1 << 14;

/// Number of length-`2k` ±1 sequences whose sum is `2p`, for each `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumHistogram {
    pub k: u64,
    pub counts: BTreeMap<i64, BigNat>,
}

impl SumHistogram {
    /// Count for offset `p` (zero outside the support).
    pub fn count(&self, p: i64) -> BigNat {
        self.counts.get(&p).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigNat {
        self.counts.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.counts
            .iter()
            .all(|(p, c)| self.counts.get(&-p) == Some(c))
    }
}

/// Enumerates with the default limit.
pub fn enumerate_histogram(k: u64) -> Result<SumHistogram> {
    enumerate_histogram_with_limit(k, DEFAULT_ORACLE_MAX)
}

/// Enumerates all `4^k` sign vectors; bit `i` of the index set means
/// `s_i = +1`. Rejects `k` above `limit` (itself capped at
/// [`HARD_ORACLE_MAX`]).
pub fn enumerate_histogram_with_limit(k: u64, limit: u64) -> Result<SumHistogram> {
    let limit = limit.min(HARD_ORACLE_MAX);
    if k > limit {
        return Err(Error::OracleLimit { k, limit });
    }
    let len = 2 * k;
    let vectors = 1u64 << len;
    let bins = len as usize + 1;
    let chunks = vectors.div_ceil(CHUNK);

    // Partial histograms merge by pointwise addition, so the result does not
    // depend on how rayon splits the chunks.
    let by_plus_count = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = vec![0u64; bins];
            let end = ((c + 1) * CHUNK).min(vectors);
            for v in c * CHUNK..end {
                local[v.count_ones() as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    // `plus` positive signs give sum `2 plus − 2k`, i.e. offset `plus − k`.
    let counts = by_plus_count
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(plus, c)| (plus as i64 - k as i64, BigNat::from(c)))
        .collect();
    Ok(SumHistogram { k, counts })
}

/// `Σ_p count(p) |p|`.
pub fn s0_from_histogram(h: &SumHistogram) -> BigNat {
    h.counts.iter().map(|(p, c)| c * p.unsigned_abs()).sum()
}

/// `Σ_p Σ_q count(p) count(q) |p² − q²|`.
pub fn s1_from_histogram(h: &SumHistogram) -> BigNat {
    let mut total = BigNat::zero();
    for (p, cp) in &h.counts {
        for (q, cq) in &h.counts {
            total += cp * cq * (p * p - q * q).unsigned_abs();
        }
    }
    total
}

pub fn oracle_s0(k: u64) -> Result<BigNat> {
    oracle_s0_with_limit(k, DEFAULT_ORACLE_MAX)
}

pub fn oracle_s0_with_limit(k: u64, limit: u64) -> Result<BigNat> {
    Ok(s0_from_histogram(&enumerate_histogram_with_limit(
        k, limit,
    )?))
}

pub fn oracle_s1(k: u64) -> Result<BigNat> {
    oracle_s1_with_limit(k, DEFAULT_ORACLE_MAX)
}

pub fn oracle_s1_with_limit(k: u64, limit: u64) -> Result<BigNat> {
    Ok(s1_from_histogram(&enumerate_histogram_with_limit(
        k, limit,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(k: u64) -> Vec<(i64, u64)> {
        enumerate_histogram(k)
            .unwrap()
            .counts
            .into_iter()
            .map(|(p, c)| (p, u64::try_from(&c).unwrap()))
            .collect()
    }

    #[test]
    fn histogram_examples() {
        assert_eq!(hist(0), vec![(0, 1)]);
        assert_eq!(hist(1), vec![(-1, 1), (0, 2), (1, 1)]);
        assert_eq!(hist(2), vec![(-2, 1), (-1, 4), (0, 6), (1, 4), (2, 1)]);
    }

    #[test]
    fn oracle_sums() {
        let n = |v: u64| BigNat::from(v);
        assert_eq!(oracle_s0(0).unwrap(), n(0));
        assert_eq!(oracle_s0(1).unwrap(), n(2));
        assert_eq!(oracle_s0(2).unwrap(), n(12));
        assert_eq!(oracle_s1(0).unwrap(), n(0));
        assert_eq!(oracle_s1(1).unwrap(), n(8));
        assert_eq!(oracle_s1(2).unwrap(), n(288));
    }

    #[test]
    fn mass_and_symmetry() {
        for k in 0..=8 {
            let h = enumerate_histogram(k).unwrap();
            assert_eq!(h.total(), BigNat::from(1u64 << (2 * k)));
            assert!(h.is_symmetric());
            let (lo, hi) = (
                *h.counts.keys().next().unwrap(),
                *h.counts.keys().last().unwrap(),
            );
            assert_eq!((lo, hi), (-(k as i64), k as i64));
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert_eq!(
            enumerate_histogram(11),
            Err(Error::OracleLimit { k: 11, limit: 10 })
        );
        assert!(enumerate_histogram_with_limit(11, 11).is_ok());
        assert_eq!(
            enumerate_histogram_with_limit(40, 100),
            Err(Error::OracleLimit {
                k: 40,
                limit: HARD_ORACLE_MAX
            })
        );
    }
}
