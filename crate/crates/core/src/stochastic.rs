//! Monte Carlo estimates of `E|p|` and `E|p² − q²|`, where `p` and `q` are
//! independent half-sums of `2k` fair ±1 draws, so `P(p) = C(2k, k+p) / 4^k`.
//! The exact expectations are `S0 / 4^k` and `S1 / 16^k`.
//!
//! Sampling is split into fixed-size blocks; block `b` seeks the ChaCha8
//! keystream to where a sequential run would be at its first sample. Results
//! are therefore bit-identical for any thread count, and equal to a plain
//! sequential pass over the stream.

use std::fmt;

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::exact::{pascal_row, pow2, BigNat};
use crate::identities::{s0_closed, s1_closed};
use crate::{Error, Result};

pub const RNG_ALGORITHM: &str = "chacha8";

/// Default `|z|` threshold for the consistency check.
pub const DEFAULT_Z_MAX: f64 = 5.0;

/// Default p-value floor for the chi-squared law check.
pub const DEFAULT_P_VALUE_FLOOR: f64 = 1e-4;

const BLOCK: u64 = 1 << 12;

/// Offset added to the stream id when a check is rerun.
const RESAMPLE_STREAM_OFFSET: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngSpec {
    pub algorithm: &'static str,
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        RngSpec {
            algorithm: RNG_ALGORITHM,
            seed,
            stream,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }

    fn fresh(&self) -> Self {
        RngSpec::new(self.seed, self.stream.wrapping_add(RESAMPLE_STREAM_OFFSET))
    }
}

/// Draws `2k` fair signs and returns half their sum.
pub fn sample_offset<R: RngCore + ?Sized>(k: u64, rng: &mut R) -> i64 {
    let mut remaining = 2 * k;
    let mut plus = 0u64;
    while remaining > 0 {
        let take = remaining.min(64);
        let mut bits = rng.next_u64();
        if take < 64 {
            bits &= (1u64 << take) - 1;
        }
        plus += u64::from(bits.count_ones());
        remaining -= take;
    }
    plus as i64 - k as i64
}

/// 32-bit keystream words consumed by one offset draw.
fn words_per_offset(k: u64) -> u128 {
    2 * u128::from((2 * k).div_ceil(64))
}

/// Exact non-negative rational, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rational {
    pub num: BigNat,
    pub den: BigNat,
}

impl Rational {
    pub fn new(num: BigNat, den: BigNat) -> Self {
        assert!(den != BigNat::ZERO, "zero denominator");
        let g = num.gcd(&den);
        if g == BigNat::ZERO {
            return Rational { num, den };
        }
        Rational {
            num: num / &g,
            den: den / &g,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Both parts can exceed f64's exact range; scale down together first.
        let shift = self.den.bits().saturating_sub(900);
        let num = (&self.num >> shift).to_f64().unwrap_or(f64::INFINITY);
        let den = (&self.den >> shift).to_f64().unwrap_or(f64::INFINITY);
        num / den
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `|p|`, expectation `S0 / 4^k`.
    MeanAbs,
    /// `|p² − q²|`, expectation `S1 / 16^k`.
    MeanAbsDiffSq,
}

impl Quantity {
    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::MeanAbs => "mean_abs",
            Quantity::MeanAbsDiffSq => "mean_absdiffsq",
        }
    }

    pub fn target(self, k: u64) -> Rational {
        match self {
            Quantity::MeanAbs => Rational::new(s0_closed(k), pow2(2 * k)),
            Quantity::MeanAbsDiffSq => Rational::new(s1_closed(k), pow2(4 * k)),
        }
    }

    fn draws_per_sample(self) -> u128 {
        match self {
            Quantity::MeanAbs => 1,
            Quantity::MeanAbsDiffSq => 2,
        }
    }

    fn sample<R: RngCore>(self, k: u64, rng: &mut R) -> f64 {
        match self {
            Quantity::MeanAbs => sample_offset(k, rng).unsigned_abs() as f64,
            Quantity::MeanAbsDiffSq => {
                let p = sample_offset(k, rng);
                let q = sample_offset(k, rng);
                (p * p - q * q).unsigned_abs() as f64
            }
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Accumulator {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    // Chan et al. pairwise update.
    fn merge(self, other: Accumulator) -> Accumulator {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Accumulator {
            n,
            mean: self.mean + delta * nb / n as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    pub quantity: Quantity,
    pub k: u64,
    pub n: u64,
    pub mean: f64,
    pub stderr: f64,
    pub target: Rational,
    /// `(mean − target) / stderr`; zero when both the spread and the error
    /// vanish, infinite when only the spread does.
    pub z: f64,
    pub rng: RngSpec,
}

fn estimate(quantity: Quantity, k: u64, n: u64, spec: RngSpec) -> Result<MCEstimate> {
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let words_per_sample = words_per_offset(k) * quantity.draws_per_sample();
    let blocks: Vec<Accumulator> = (0..n.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let mut rng = spec.rng();
            rng.set_word_pos(u128::from(b * BLOCK) * words_per_sample);
            let mut acc = Accumulator::default();
            for _ in b * BLOCK..((b + 1) * BLOCK).min(n) {
                acc.push(quantity.sample(k, &mut rng));
            }
            acc
        })
        .collect();
    let acc = blocks
        .into_iter()
        .fold(Accumulator::default(), Accumulator::merge);

    let variance = acc.m2 / (acc.n - 1) as f64;
    let stderr = (variance / acc.n as f64).sqrt();
    let target = quantity.target(k);
    let diff = acc.mean - target.to_f64();
    let z = if stderr > 0.0 {
        diff / stderr
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    };
    Ok(MCEstimate {
        quantity,
        k,
        n,
        mean: acc.mean,
        stderr,
        target,
        z,
        rng: spec,
    })
}

/// Estimate of `E|p|` from `n` draws.
pub fn mc_mean_abs(k: u64, n: u64, spec: RngSpec) -> Result<MCEstimate> {
    estimate(Quantity::MeanAbs, k, n, spec)
}

/// Estimate of `E|p² − q²|` from `n` independent pairs.
pub fn mc_mean_absdiffsq(k: u64, n: u64, spec: RngSpec) -> Result<MCEstimate> {
    estimate(Quantity::MeanAbsDiffSq, k, n, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    /// Both the first run and the rerun exceeded the threshold.
    Warn,
}

impl CheckStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Warn => "WARN",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyCheck {
    pub estimate: MCEstimate,
    /// The estimate was rerun on a fresh stream after exceeding `z_max`.
    pub resampled: bool,
    pub status: CheckStatus,
}

/// Estimates `quantity` and compares `|z|` with `z_max`. One exceedance
/// triggers a single rerun on a fresh stream; a second one is a warning.
pub fn consistency_check(
    quantity: Quantity,
    k: u64,
    n: u64,
    spec: RngSpec,
    z_max: f64,
) -> Result<ConsistencyCheck> {
    let first = estimate(quantity, k, n, spec)?;
    if first.z.abs() <= z_max {
        return Ok(ConsistencyCheck {
            estimate: first,
            resampled: false,
            status: CheckStatus::Pass,
        });
    }
    let second = estimate(quantity, k, n, spec.fresh())?;
    let status = if second.z.abs() <= z_max {
        CheckStatus::Pass
    } else {
        CheckStatus::Warn
    };
    Ok(ConsistencyCheck {
        estimate: second,
        resampled: true,
        status,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquaredReport {
    pub k: u64,
    pub n: u64,
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub passed: bool,
}

/// Goodness-of-fit of `n` offset draws against `C(2k, k+p) / 4^k`. Adjacent
/// offsets are pooled until each bin expects at least five draws.
pub fn offset_law_chi_squared(
    k: u64,
    n: u64,
    spec: RngSpec,
    p_value_floor: f64,
) -> Result<ChiSquaredReport> {
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let mut rng = spec.rng();
    let mut observed = vec![0u64; 2 * k as usize + 1];
    for _ in 0..n {
        let p = sample_offset(k, &mut rng);
        observed[(p + k as i64) as usize] += 1;
    }
    chi_squared_against_law(k, &observed, p_value_floor)
}

/// Chi-squared test of observed offset counts (index `p + k`) against the
/// exact law.
pub fn chi_squared_against_law(
    k: u64,
    observed: &[u64],
    p_value_floor: f64,
) -> Result<ChiSquaredReport> {
    assert_eq!(observed.len(), 2 * k as usize + 1, "one count per offset");
    let n: u64 = observed.iter().sum();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let scale = Rational::new(BigNat::from(n), pow2(2 * k));
    let expected: Vec<f64> = pascal_row(2 * k)
        .into_iter()
        .map(|c| Rational::new(c * &scale.num, scale.den.clone()).to_f64())
        .collect();

    let mut bins: Vec<(f64, f64)> = Vec::new();
    let mut pending = (0.0, 0.0);
    for (o, e) in observed.iter().zip(&expected) {
        pending.0 += *o as f64;
        pending.1 += e;
        if pending.1 >= 5.0 {
            bins.push(pending);
            pending = (0.0, 0.0);
        }
    }
    match bins.last_mut() {
        Some(last) => {
            last.0 += pending.0;
            last.1 += pending.1;
        }
        None => bins.push(pending),
    }

    let statistic: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = bins.len() as u64 - 1;
    let p_value = if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .expect("positive degrees of freedom")
            .sf(statistic)
    };
    Ok(ChiSquaredReport {
        k,
        n,
        statistic,
        dof,
        p_value,
        passed: p_value >= p_value_floor,
    })
}
