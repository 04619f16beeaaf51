//! The named sums, their closed forms, and a verifier for every step of the
//! telescoping argument that connects them.
//!
//! Notation used throughout: `C_n(j)` is `C(n, j)` under the zero convention,
//! and all direct sums run over offsets `p, q ∈ [−k−2, k+2]` so the region
//! where the convention kicks in is exercised as well.
//!
//! * `S0 = Σ_p C_{2k}(k+p) |p|`
//! * `S1 = Σ_p Σ_q C_{2k}(k+p) C_{2k}(k+q) |p² − q²|`
//! * `S2` is the part of `S1` with `p = 0` or `q = 0`
//! * `S3 = S1 − S2`, the part with `p, q ≠ 0`

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exact::{poly_binomial_power, pow2, BigNat, BinomialRow};
use crate::{Error, Result};

/// Label for each identity this module can check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    /// `S0` by direct summation equals `k C(2k, k)`.
    Lemma1,
    /// `S0` equals twice its positive half.
    Eq1,
    /// Termwise `p C(2k,k+p) = 2k C(2k−1,k+p−1) − k C(2k,k+p)`.
    PRewrite,
    /// `S1` by direct summation equals `2k² C(2k, k)²`.
    Theorem1,
    /// Zeroth moment from direct summation and from the generating function.
    Moment0,
    /// Second moment, direct and generating-function routes, equals `k 2^{2k−1}`.
    Moment2,
    /// Odd moments vanish.
    OddMoment,
    /// `S2` from the second moment equals `k 4^k C(2k, k)`.
    S2Closed,
    /// `S3` over the full `p, q ≠ 0` region, eight times the octant, and the closed form agree.
    S3Closed,
    /// Termwise decomposition of `(p² − q²) C C` into reduced-row products.
    Decomp,
    /// `C(2k, j) = C(2k−2, j) + 2 C(2k−2, j−1) + C(2k−2, j−2)`.
    Trinomial,
    /// Octant sum before and after the change of variables collapses to its `q = 0` boundary.
    Telescope,
    /// `S1 = S2 + S3`.
    Recombine,
    /// `S1 = 2 S0²`, i.e. `E|p² − q²| = 2 (E|p|)²`.
    MomentRelation,
}

impl IdentityId {
    pub const ALL: [IdentityId; 14] = [
        IdentityId::Lemma1,
        IdentityId::Eq1,
        IdentityId::PRewrite,
        IdentityId::Theorem1,
        IdentityId::Moment0,
        IdentityId::Moment2,
        IdentityId::OddMoment,
        IdentityId::S2Closed,
        IdentityId::S3Closed,
        IdentityId::Decomp,
        IdentityId::Trinomial,
        IdentityId::Telescope,
        IdentityId::Recombine,
        IdentityId::MomentRelation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IdentityId::Lemma1 => "LEMMA1",
            IdentityId::Eq1 => "EQ1",
            IdentityId::PRewrite => "P_REWRITE",
            IdentityId::Theorem1 => "THEOREM1",
            IdentityId::Moment0 => "MOMENT0",
            IdentityId::Moment2 => "MOMENT2",
            IdentityId::OddMoment => "ODD_MOMENT",
            IdentityId::S2Closed => "S2_CLOSED",
            IdentityId::S3Closed => "S3_CLOSED",
            IdentityId::Decomp => "DECOMP",
            IdentityId::Trinomial => "TRINOMIAL",
            IdentityId::Telescope => "TELESCOPE",
            IdentityId::Recombine => "RECOMBINE",
            IdentityId::MomentRelation => "MOMENT_RELATION",
        }
    }

    /// Smallest `k` the identity is stated for. The trinomial refinement
    /// reads row `2k − 2`, which does not exist at `k = 0`.
    pub fn min_k(self) -> u64 {
        match self {
            IdentityId::PRewrite
            | IdentityId::Decomp
            | IdentityId::Trinomial
            | IdentityId::Telescope => 1,
            _ => 0,
        }
    }

    /// Whether the check iterates over individual `(p, q)` terms. The report
    /// for a sweep counts terms rather than carrying sum values.
    pub fn is_sweep(self) -> bool {
        matches!(
            self,
            IdentityId::PRewrite | IdentityId::Decomp | IdentityId::Trinomial
        )
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are interchangeable.
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|id| id.as_str() == norm)
            .ok_or_else(|| Error::UnknownIdentity(s.to_string()))
    }
}

/// Parses a comma-separated identity list such as `"lemma1, THEOREM1"`.
/// Duplicates are dropped; the result is in canonical order.
pub fn parse_identity_list(s: &str) -> Result<Vec<IdentityId>> {
    let mut ids = Vec::new();
    for part in s.split(',') {
        if part.trim().is_empty() {
            return Err(Error::UnknownIdentity(part.to_string()));
        }
        ids.push(part.parse::<IdentityId>()?);
    }
    ids.sort();
    ids.dedup();
    Ok(ids)
}

/// Outcome of checking one identity at one `k`.
///
/// `equal` is true iff `lhs == rhs`. Identities that compare more than two
/// routes put the first route in `lhs` and, in `rhs`, the first route that
/// disagrees with it (or the last route when all agree). Sweep identities
/// put the number of terms checked in `lhs` and the number that held in
/// `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub k: u64,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub equal: bool,
}

impl IdentityReport {
    pub fn new(id: IdentityId, k: u64, lhs: impl Into<BigInt>, rhs: impl Into<BigInt>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        let equal = lhs == rhs;
        IdentityReport {
            id,
            k,
            lhs,
            rhs,
            equal,
        }
    }

    /// Report for a chain of routes that must all agree.
    fn chain(id: IdentityId, k: u64, routes: Vec<BigInt>) -> Self {
        let mut routes = routes.into_iter();
        let first = routes.next().expect("chain needs at least one route");
        let mut last = first.clone();
        for r in routes {
            if r != first {
                return IdentityReport::new(id, k, first, r);
            }
            last = r;
        }
        IdentityReport::new(id, k, first, last)
    }

    fn sweep(id: IdentityId, k: u64, checked: u64, held: u64) -> Self {
        IdentityReport::new(id, k, checked, held)
    }
}

/// Signed or absolute moment `Σ_p w(p) C(2k, k+p)` with `w(p) = p^r` or `|p|^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Moment {
    pub k: u64,
    pub order: u32,
    pub absolute: bool,
    pub value: BigInt,
}

impl Moment {
    pub fn signed(k: u64, order: u32) -> Self {
        Moment {
            k,
            order,
            absolute: false,
            value: moment(k, order),
        }
    }

    pub fn absolute(k: u64, order: u32) -> Self {
        let row = BinomialRow::new(2 * k as i64);
        let k_i = k as i64;
        let value = offsets(k)
            .map(|p| BigInt::from(p.abs()).pow(order) * row.signed(k_i + p))
            .sum();
        Moment {
            k,
            order,
            absolute: true,
            value,
        }
    }
}

fn offsets(k: u64) -> std::ops::RangeInclusive<i64> {
    let k = k as i64;
    -k - 2..=k + 2
}

fn to_nat(x: BigInt) -> BigNat {
    x.to_biguint()
        .expect("sum of non-negative terms came out negative")
}

/// Rows of Pascal's triangle used at one `k`, plus lazily computed sums so a
/// full verification pass evaluates each expensive sum once.
pub struct SumsAt {
    k: u64,
    /// Row `2k`.
    full: BinomialRow,
    /// Row `2k − 1`.
    odd: OnceCell<BinomialRow>,
    /// Row `2k − 2`.
    reduced: OnceCell<BinomialRow>,
    s0: OnceCell<BigNat>,
    s1: OnceCell<BigNat>,
    s3_octant: OnceCell<BigNat>,
}

impl SumsAt {
    pub fn new(k: u64) -> Self {
        let n = 2 * k as i64;
        SumsAt {
            k,
            full: BinomialRow::new(n),
            odd: OnceCell::new(),
            reduced: OnceCell::new(),
            s0: OnceCell::new(),
            s1: OnceCell::new(),
            s3_octant: OnceCell::new(),
        }
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    fn ki(&self) -> i64 {
        self.k as i64
    }

    /// `C(2k, k + p)`.
    fn c(&self, p: i64) -> &BigNat {
        self.full.get(self.ki() + p)
    }

    /// `C(2k − 1, k + p)`.
    fn o(&self, p: i64) -> &BigNat {
        self.odd
            .get_or_init(|| BinomialRow::new(2 * self.ki() - 1))
            .get(self.ki() + p)
    }

    /// `C(2k − 2, k + p)`.
    fn r(&self, p: i64) -> &BigNat {
        self.reduced
            .get_or_init(|| BinomialRow::new(2 * self.ki() - 2))
            .get(self.ki() + p)
    }

    pub fn central(&self) -> &BigNat {
        self.c(0)
    }

    pub fn s0_direct(&self) -> &BigNat {
        self.s0
            .get_or_init(|| offsets(self.k).map(|p| self.c(p) * p.unsigned_abs()).sum())
    }

    pub fn s0_closed(&self) -> BigNat {
        self.central() * self.k
    }

    /// `2 Σ_{p>0} p C(2k, k+p)`.
    pub fn s0_positive_half(&self) -> BigNat {
        let half: BigNat = (1..=self.ki() + 2).map(|p| self.c(p) * p as u64).sum();
        half * 2u32
    }

    pub fn moment(&self, order: u32) -> BigInt {
        offsets(self.k)
            .map(|p| BigInt::from(p).pow(order) * BigInt::from(self.c(p).clone()))
            .sum()
    }

    pub fn s1_direct(&self) -> &BigNat {
        self.s1.get_or_init(|| {
            let mut total = BigNat::zero();
            for p in offsets(self.k) {
                let cp = self.c(p);
                if cp.is_zero() {
                    continue;
                }
                let mut inner = BigNat::zero();
                for q in offsets(self.k) {
                    inner += self.c(q) * (p * p - q * q).unsigned_abs();
                }
                total += cp * inner;
            }
            total
        })
    }

    pub fn s1_closed(&self) -> BigNat {
        let c = self.central();
        c * c * (2 * self.k * self.k)
    }

    /// `2 C(2k, k) Σ_p p² C(2k, k+p)`: the `p = 0` column plus the `q = 0` row.
    pub fn s2_direct(&self) -> BigNat {
        self.central() * to_nat(self.moment(2)) * 2u32
    }

    pub fn s2_closed(&self) -> BigNat {
        self.central() * pow2(2 * self.k) * self.k
    }

    /// `8 Σ_{p>q>0} C(2k,k+p) C(2k,k+q) (p² − q²)`.
    pub fn s3_direct(&self) -> &BigNat {
        self.s3_octant.get_or_init(|| {
            let mut total = BigNat::zero();
            for p in 2..=self.ki() + 2 {
                let mut inner = BigNat::zero();
                for q in 1..p {
                    inner += self.c(q) * (p * p - q * q) as u64;
                }
                total += self.c(p) * inner;
            }
            total * 8u32
        })
    }

    /// `Σ_{p≠0} Σ_{q≠0} C(2k,k+p) C(2k,k+q) |p² − q²|` with no symmetry used.
    pub fn s3_direct_full(&self) -> BigNat {
        let mut total = BigNat::zero();
        for p in offsets(self.k).filter(|&p| p != 0) {
            let mut inner = BigNat::zero();
            for q in offsets(self.k).filter(|&q| q != 0) {
                inner += self.c(q) * (p * p - q * q).unsigned_abs();
            }
            total += self.c(p) * inner;
        }
        total
    }

    /// The closed form
    /// `8k(2k−1) { C(2k−2,k) [4^{k−1} − C(2k−2,k−1)]
    ///           − C(2k−2,k−1) [4^{k−1} − 2 C(2k−2,k) − C(2k−2,k−1)] }`.
    ///
    /// Evaluated literally, so the bracketed terms are signed.
    pub fn s3_closed(&self) -> BigInt {
        if self.k == 0 {
            return BigInt::zero();
        }
        let k = self.k;
        let a = BigInt::from(self.r(0).clone());
        let b = BigInt::from(self.r(-1).clone());
        let t = BigInt::from(pow2(2 * k - 2));
        let braces = &a * (&t - &b) - &b * (&t - &a * 2 - &b);
        braces * (8 * k * (2 * k - 1))
    }

    /// `k 2^{2k−1}`, written as `k 4^k / 2` so it stays integral at `k = 0`.
    pub fn second_moment_closed(&self) -> BigNat {
        pow2(2 * self.k) * self.k / 2u32
    }

    fn p_rewrite_sides(&self, p: i64) -> (BigInt, BigInt) {
        let lhs = BigInt::from(p) * BigInt::from(self.c(p).clone());
        let rhs = BigInt::from(self.o(p - 1) * (2 * self.k)) - BigInt::from(self.c(p) * self.k);
        (lhs, rhs)
    }

    fn decomposition_sides(&self, p: i64, q: i64) -> (BigInt, BigInt) {
        let cp = BigInt::from(self.c(p).clone());
        let cq = BigInt::from(self.c(q).clone());
        let lhs = &cp * &cq * (p * p - q * q);
        let rp = BigInt::from(self.r(p - 1).clone());
        let rq = BigInt::from(self.r(q - 1).clone());
        let factor = 2 * self.ki() * (2 * self.ki() - 1);
        let rhs = (cp * rq - rp * cq) * factor;
        (lhs, rhs)
    }

    fn trinomial_sides(&self, p: i64) -> (BigNat, BigNat) {
        let lhs = self.c(p).clone();
        let rhs = self.r(p) + self.r(p - 1) * 2u32 + self.r(p - 2);
        (lhs, rhs)
    }

    /// `Σ_{p>q>lo} C(2k−2, k+p+a) C(2k−2, k+q+b)` for `lo ∈ {0, −1}`.
    fn reduced_double_sum(&self, q_from: i64, a: i64, b: i64) -> BigNat {
        let top = self.ki() + 2;
        let mut total = BigNat::zero();
        for p in q_from + 1..=top {
            let rp = self.r(p + a);
            if rp.is_zero() {
                continue;
            }
            let inner: BigNat = (q_from..p).map(|q| self.r(q + b)).sum();
            total += rp * inner;
        }
        total
    }

    /// The four bracketed octant sums after the trinomial refinement, before
    /// any change of variables (all over `p > q > 0`).
    pub fn telescope_before_shift(&self) -> BigInt {
        let s = |a, b| BigInt::from(self.reduced_double_sum(1, a, b));
        let braces = (s(0, -1) - s(-1, -2)) + (s(-2, -1) - s(-1, 0));
        braces * self.telescope_factor()
    }

    /// The same after shifting `(p, q) → (p + 1, q + 1)` in the second and
    /// third sums, which moves their region to `p > q ≥ 0`.
    pub fn telescope_after_shift(&self) -> BigInt {
        let octant = |a, b| BigInt::from(self.reduced_double_sum(1, a, b));
        let with_axis = |a, b| BigInt::from(self.reduced_double_sum(0, a, b));
        let braces = (octant(0, -1) - with_axis(0, -1)) + (with_axis(-1, 0) - octant(-1, 0));
        braces * self.telescope_factor()
    }

    /// Surviving `q = 0` boundary terms:
    /// `2k(2k−1) { Σ_{p>0} C(2k−2,k+p−1) C(2k−2,k) − Σ_{p>0} C(2k−2,k+p) C(2k−2,k−1) }`.
    pub fn telescope_boundary(&self) -> BigInt {
        let top = self.ki() + 2;
        let first: BigNat = (1..=top).map(|p| self.r(p - 1)).sum();
        let second: BigNat = (1..=top).map(|p| self.r(p)).sum();
        let braces = BigInt::from(first * self.r(0)) - BigInt::from(second * self.r(-1));
        braces * self.telescope_factor()
    }

    fn telescope_factor(&self) -> i64 {
        let k = self.ki();
        2 * k * (2 * k - 1)
    }

    fn require(&self, id: IdentityId) -> Result<()> {
        if self.k < id.min_k() {
            return Err(Error::Precondition {
                op: id.as_str(),
                requirement: "k >= 1",
                k: self.k,
            });
        }
        Ok(())
    }

    pub fn verify(&self, id: IdentityId) -> Result<IdentityReport> {
        self.require(id)?;
        let k = self.k;
        let int = |n: &BigNat| BigInt::from(n.clone());
        let report = match id {
            IdentityId::Lemma1 => {
                IdentityReport::new(id, k, self.s0_direct().clone(), self.s0_closed())
            }
            IdentityId::Eq1 => {
                IdentityReport::new(id, k, self.s0_direct().clone(), self.s0_positive_half())
            }
            IdentityId::PRewrite => {
                let held = offsets(k)
                    .filter(|&p| {
                        let (l, r) = self.p_rewrite_sides(p);
                        l == r
                    })
                    .count();
                IdentityReport::sweep(id, k, offsets(k).count() as u64, held as u64)
            }
            IdentityId::Theorem1 => {
                IdentityReport::new(id, k, self.s1_direct().clone(), self.s1_closed())
            }
            IdentityId::Moment0 => IdentityReport::chain(
                id,
                k,
                vec![self.moment(0), moment_via_genfun(k, 0), pow2(2 * k).into()],
            ),
            IdentityId::Moment2 => IdentityReport::chain(
                id,
                k,
                vec![
                    self.moment(2),
                    moment_via_genfun(k, 2),
                    self.second_moment_closed().into(),
                ],
            ),
            IdentityId::OddMoment => IdentityReport::chain(
                id,
                k,
                vec![
                    BigInt::zero(),
                    self.moment(1),
                    self.moment(3),
                    self.moment(5),
                    moment_via_genfun(k, 1),
                ],
            ),
            IdentityId::S2Closed => IdentityReport::new(id, k, self.s2_direct(), self.s2_closed()),
            IdentityId::S3Closed => IdentityReport::chain(
                id,
                k,
                vec![
                    self.s3_direct_full().into(),
                    int(self.s3_direct()),
                    self.s3_closed(),
                ],
            ),
            IdentityId::Decomp => {
                let mut checked = 0u64;
                let mut held = 0u64;
                for p in offsets(k) {
                    for q in offsets(k) {
                        let (l, r) = self.decomposition_sides(p, q);
                        checked += 1;
                        held += u64::from(l == r);
                    }
                }
                IdentityReport::sweep(id, k, checked, held)
            }
            IdentityId::Trinomial => {
                let held = offsets(k)
                    .filter(|&p| {
                        let (l, r) = self.trinomial_sides(p);
                        l == r
                    })
                    .count();
                IdentityReport::sweep(id, k, offsets(k).count() as u64, held as u64)
            }
            IdentityId::Telescope => return self.telescope(),
            IdentityId::Recombine => IdentityReport::chain(
                id,
                k,
                vec![
                    int(self.s1_direct()),
                    self.s1_closed().into(),
                    int(&self.s2_closed()) + self.s3_closed(),
                ],
            ),
            IdentityId::MomentRelation => {
                let s0 = self.s0_closed();
                let s0_direct = self.s0_direct();
                IdentityReport::chain(
                    id,
                    k,
                    vec![
                        (&s0 * &s0 * 2u32).into(),
                        self.s1_closed().into(),
                        (s0_direct * s0_direct * 2u32).into(),
                        int(self.s1_direct()),
                    ],
                )
            }
        };
        Ok(report)
    }

    fn telescope(&self) -> Result<IdentityReport> {
        let id = IdentityId::Telescope;
        self.require(id)?;
        let s3 = self.s3_direct();
        let (eighth, rem) = s3.div_rem(&BigNat::from(8u32));
        if !rem.is_zero() {
            return Err(Error::NotDivisible {
                what: "S3",
                value: s3.to_string(),
                divisor: 8,
            });
        }
        Ok(IdentityReport::chain(
            id,
            self.k,
            vec![
                eighth.into(),
                self.telescope_before_shift(),
                self.telescope_after_shift(),
                self.telescope_boundary(),
            ],
        ))
    }
}

pub fn s0_direct(k: u64) -> BigNat {
    SumsAt::new(k).s0_direct().clone()
}

pub fn s0_closed(k: u64) -> BigNat {
    SumsAt::new(k).s0_closed()
}

/// Checks `S0 = 2 Σ_{p>0} p C(2k, k+p)`.
pub fn verify_eq1(k: u64) -> IdentityReport {
    SumsAt::new(k)
        .verify(IdentityId::Eq1)
        .expect("EQ1 has no precondition")
}

/// Checks `p C(2k, k+p) = 2k C(2k−1, k+p−1) − k C(2k, k+p)` for one term.
pub fn verify_p_rewrite(k: u64, p: i64) -> IdentityReport {
    let (lhs, rhs) = SumsAt::new(k).p_rewrite_sides(p);
    IdentityReport::new(IdentityId::PRewrite, k, lhs, rhs)
}

/// Signed moment `Σ_p p^r C(2k, k+p)` by direct summation.
pub fn moment(k: u64, r: u32) -> BigInt {
    SumsAt::new(k).moment(r)
}

/// The same moment through the generating function: apply `x d/dx` to
/// `x^{-k}(1+x)^{2k}` `r` times and evaluate at `x = 1`.
pub fn moment_via_genfun(k: u64, r: u32) -> BigInt {
    let mut f = poly_binomial_power(k);
    for _ in 0..r {
        f = f.apply_x_ddx();
    }
    f.eval_at_one()
}

pub fn s1_direct(k: u64) -> BigNat {
    SumsAt::new(k).s1_direct().clone()
}

pub fn s1_closed(k: u64) -> BigNat {
    SumsAt::new(k).s1_closed()
}

pub fn s2_direct(k: u64) -> BigNat {
    SumsAt::new(k).s2_direct()
}

pub fn s2_closed(k: u64) -> BigNat {
    SumsAt::new(k).s2_closed()
}

/// Eight times the octant sum `p > q > 0`.
pub fn s3_direct(k: u64) -> BigNat {
    SumsAt::new(k).s3_direct().clone()
}

/// `S3` summed over all `p, q ≠ 0` without using symmetry.
pub fn s3_direct_full(k: u64) -> BigNat {
    SumsAt::new(k).s3_direct_full()
}

pub fn s3_closed(k: u64) -> BigInt {
    SumsAt::new(k).s3_closed()
}

/// Checks `C(2k,k+p) C(2k,k+q) (p²−q²)
///   = 2k(2k−1) [C(2k,k+p) C(2k−2,k+q−1) − C(2k−2,k+p−1) C(2k,k+q)]`.
pub fn verify_decomposition_term(k: u64, p: i64, q: i64) -> Result<IdentityReport> {
    let sums = SumsAt::new(k);
    sums.require(IdentityId::Decomp)?;
    let (lhs, rhs) = sums.decomposition_sides(p, q);
    Ok(IdentityReport::new(IdentityId::Decomp, k, lhs, rhs))
}

/// Checks `C(2k, k+p) = C(2k−2, k+p) + 2 C(2k−2, k+p−1) + C(2k−2, k+p−2)`.
pub fn verify_trinomial(k: u64, p: i64) -> Result<IdentityReport> {
    let sums = SumsAt::new(k);
    sums.require(IdentityId::Trinomial)?;
    let (lhs, rhs) = sums.trinomial_sides(p);
    Ok(IdentityReport::new(IdentityId::Trinomial, k, lhs, rhs))
}

/// Three-way check of the telescoping collapse: `S3 / 8`, the four bracketed
/// octant sums (before and after the change of variables) and the surviving
/// boundary sums must all agree. Fails if `S3` is not a multiple of 8.
pub fn verify_telescope(k: u64) -> Result<IdentityReport> {
    SumsAt::new(k).telescope()
}

/// Checks `S1 = S2 + S3` against both the direct and closed `S1`.
pub fn verify_recombination(k: u64) -> IdentityReport {
    SumsAt::new(k)
        .verify(IdentityId::Recombine)
        .expect("RECOMBINE has no precondition")
}

/// Runs the selected identities at `k`, skipping any whose minimum `k` is
/// not met. A divisibility failure in the telescope check is reported as a
/// failed record comparing `S3` with eight times the boundary form.
pub fn verify_selected(k: u64, ids: &[IdentityId]) -> Vec<IdentityReport> {
    let sums = SumsAt::new(k);
    ids.iter()
        .filter(|id| k >= id.min_k())
        .map(|&id| match sums.verify(id) {
            Ok(report) => report,
            Err(_) => IdentityReport::new(
                id,
                k,
                sums.s3_direct().clone(),
                sums.telescope_boundary() * 8,
            ),
        })
        .collect()
}

/// Every identity at `k`.
pub fn verify_all(k: u64) -> Vec<IdentityReport> {
    verify_selected(k, &IdentityId::ALL)
}

/// `true` when every report in the batch holds.
pub fn all_pass(reports: &[IdentityReport]) -> bool {
    reports.iter().all(|r| r.equal)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigNat {
        BigNat::from(v)
    }

    fn i(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn s0_examples() {
        assert_eq!(s0_direct(0), n(0));
        assert_eq!(s0_direct(1), n(2));
        assert_eq!(s0_direct(2), n(12));
        assert_eq!(s0_closed(0), n(0));
        assert_eq!(s0_closed(2), n(12));
        assert_eq!(s0_closed(3), n(60));
    }

    #[test]
    fn eq1_examples() {
        for k in [0, 1, 5] {
            let r = verify_eq1(k);
            assert!(r.equal, "{r:?}");
        }
        assert_eq!(verify_eq1(0).lhs, i(0));
        assert_eq!(verify_eq1(1).rhs, i(2));
    }

    #[test]
    fn p_rewrite_examples() {
        let r = verify_p_rewrite(1, 1);
        assert!(r.equal);
        assert_eq!(r.lhs, i(1));
        let r = verify_p_rewrite(2, 0);
        assert!(r.equal);
        assert_eq!(r.rhs, i(0));
        let r = verify_p_rewrite(3, 4);
        assert!(r.equal);
        assert_eq!(r.lhs, i(0));
        // k = 0 is trivially true for every p.
        for p in -3..=3 {
            assert!(verify_p_rewrite(0, p).equal);
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment(1, 2), i(2));
        assert_eq!(moment(2, 2), i(16));
        assert_eq!(moment(3, 1), i(0));
        assert_eq!(moment(3, 0), i(64));
        assert_eq!(moment_via_genfun(1, 0), i(4));
        assert_eq!(moment_via_genfun(1, 2), i(2));
        assert_eq!(moment_via_genfun(2, 1), i(0));
    }

    #[test]
    fn absolute_moment_first_order_is_s0() {
        for k in 0..20 {
            let m = Moment::absolute(k, 1);
            assert_eq!(m.value, BigInt::from(s0_closed(k)));
            assert_eq!(Moment::signed(k, 2).value, moment(k, 2));
        }
    }

    #[test]
    fn s1_examples() {
        assert_eq!(s1_direct(0), n(0));
        assert_eq!(s1_direct(1), n(8));
        assert_eq!(s1_direct(2), n(288));
        assert_eq!(s1_closed(0), n(0));
        assert_eq!(s1_closed(1), n(8));
        assert_eq!(s1_closed(2), n(288));
    }

    #[test]
    fn s2_examples() {
        assert_eq!(s2_closed(0), n(0));
        assert_eq!(s2_closed(1), n(8));
        assert_eq!(s2_closed(2), n(192));
        for k in 0..10 {
            assert_eq!(s2_direct(k), s2_closed(k));
        }
    }

    #[test]
    fn s3_examples() {
        assert_eq!(s3_direct(1), n(0));
        assert_eq!(s3_direct(2), n(96));
        assert_eq!(s3_direct(3), s1_direct(3) - s2_closed(3));
        assert_eq!(s3_direct_full(2), n(96));
        assert_eq!(s3_closed(0), i(0));
        assert_eq!(s3_closed(1), i(0));
        assert_eq!(s3_closed(2), i(96));
    }

    #[test]
    fn decomposition_examples() {
        let r = verify_decomposition_term(2, 2, 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, i(12));
        let r = verify_decomposition_term(1, 1, 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, i(0));
        let r = verify_decomposition_term(3, 5, 1).unwrap();
        assert!(r.equal);
        assert_eq!(r.rhs, i(0));
        assert!(matches!(
            verify_decomposition_term(0, 0, 0),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn trinomial_examples() {
        let r = verify_trinomial(2, 0).unwrap();
        assert_eq!((r.lhs.clone(), r.equal), (i(6), true));
        let r = verify_trinomial(1, 1).unwrap();
        assert_eq!((r.rhs.clone(), r.equal), (i(1), true));
        let r = verify_trinomial(2, 3).unwrap();
        assert_eq!((r.lhs.clone(), r.equal), (i(0), true));
        assert!(verify_trinomial(0, 0).is_err());
    }

    #[test]
    fn telescope_examples() {
        let r = verify_telescope(1).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, i(0));
        let r = verify_telescope(2).unwrap();
        assert!(r.equal);
        assert_eq!(r.lhs, i(12));
        assert!(verify_telescope(4).unwrap().equal);
        assert!(verify_telescope(0).is_err());
    }

    #[test]
    fn telescope_intermediate_forms_agree() {
        for k in 1..15 {
            let s = SumsAt::new(k);
            let eighth = BigInt::from(s.s3_direct() / 8u32);
            assert_eq!(s.telescope_before_shift(), eighth, "k={k}");
            assert_eq!(s.telescope_after_shift(), eighth, "k={k}");
            assert_eq!(s.telescope_boundary(), eighth, "k={k}");
        }
    }

    #[test]
    fn recombination_examples() {
        let r = verify_recombination(0);
        assert!(r.equal);
        let r = verify_recombination(1);
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (i(8), i(8)));
        let r = verify_recombination(2);
        assert_eq!(
            (r.lhs.clone(), r.rhs.clone(), r.equal),
            (i(288), i(288), true)
        );
    }

    #[test]
    fn verify_all_small() {
        let zero = verify_all(0);
        assert!(all_pass(&zero));
        assert!(zero.iter().all(|r| r.id.min_k() == 0));
        for k in [1, 2, 10] {
            let reports = verify_all(k);
            assert_eq!(reports.len(), IdentityId::ALL.len());
            for r in &reports {
                assert!(r.equal, "{r:?}");
            }
        }
    }

    #[test]
    fn sweep_reports_count_terms() {
        let r = &verify_selected(3, &[IdentityId::Decomp])[0];
        assert_eq!(r.lhs, i(11 * 11));
        assert!(r.equal);
    }

    #[test]
    fn chain_reports_first_disagreement() {
        let r = IdentityReport::chain(IdentityId::Lemma1, 0, vec![i(1), i(1), i(2), i(3)]);
        assert_eq!((r.lhs, r.rhs, r.equal), (i(1), i(2), false));
        let r = IdentityReport::chain(IdentityId::Lemma1, 0, vec![i(4), i(4)]);
        assert!(r.equal);
    }

    #[test]
    fn identity_ids_parse() {
        for id in IdentityId::ALL {
            assert_eq!(id.as_str().parse::<IdentityId>().unwrap(), id);
        }
        assert_eq!(
            "odd-moment".parse::<IdentityId>().unwrap(),
            IdentityId::OddMoment
        );
        assert!("LEMMA2".parse::<IdentityId>().is_err());
        assert_eq!(
            parse_identity_list("theorem1,LEMMA1, lemma1").unwrap(),
            vec![IdentityId::Lemma1, IdentityId::Theorem1]
        );
        assert!(parse_identity_list("").is_err());
        assert!(parse_identity_list("LEMMA1,,EQ1").is_err());
    }
}
