use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Polynomial in `x` and `x^{-1}` with big-integer coefficients.
///
/// Stored sparsely; zero coefficients are never kept, so the zero polynomial
/// is the empty map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, BigInt::one())
    }

    /// `coeff * x^exp`.
    pub fn monomial(exp: i64, coeff: impl Into<BigInt>) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^exp` (zero when absent).
    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Non-zero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Smallest and largest exponent with a non-zero coefficient.
    pub fn support(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Multiplies by `x^by`.
    pub fn shift(&self, by: i64) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (e + by, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = LaurentPoly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The operator `x d/dx`: scales the coefficient of `x^p` by `p`, which
    /// annihilates the constant term.
    pub fn apply_x_ddx(&self) -> Self {
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (*e, c * *e))
                .collect(),
        }
    }

    /// Value at `x = 1`, i.e. the sum of all coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let (Some((lo_a, hi_a)), Some((lo_b, hi_b))) = (self.support(), rhs.support()) else {
            return LaurentPoly::zero();
        };
        // Accumulate densely over the product's exponent range.
        let lo = lo_a + lo_b;
        let mut acc = vec![BigInt::zero(); (hi_a + hi_b - lo) as usize + 1];
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                let slot = &mut acc[(e1 + e2 - lo) as usize];
                if c2.is_one() {
                    *slot += c1;
                } else {
                    *slot += c1 * c2;
                }
            }
        }
        LaurentPoly {
            coeffs: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i64, c))
                .collect(),
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

/// `f(x) = x^{-k} (1 + x)^{2k}`, whose coefficient of `x^p` is `C(2k, k + p)`.
///
/// Built by repeated multiplication with `1 + x`, never by reading binomial
/// coefficients, so moments taken from it form a route independent of the
/// direct sums.
pub fn poly_binomial_power(k: u64) -> LaurentPoly {
    let n = 2 * k as usize;
    // Dense coefficients of (1 + x)^j, updated in place for j = 1..=n:
    // multiplying by 1 + x adds each coefficient into its successor.
    let mut dense = vec![BigInt::zero(); n + 1];
    dense[0] = BigInt::one();
    for j in 1..=n {
        for i in (1..=j).rev() {
            let (head, tail) = dense.split_at_mut(i);
            tail[0] += &head[i - 1];
        }
    }
    LaurentPoly {
        coeffs: dense
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i as i64 - k as i64, c))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::binomial;
    use proptest::prelude::*;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn binomial_power_examples() {
        assert_eq!(poly_binomial_power(0), poly(&[(0, 1)]));
        assert_eq!(poly_binomial_power(1), poly(&[(-1, 1), (0, 2), (1, 1)]));
        assert_eq!(
            poly_binomial_power(2),
            poly(&[(-2, 1), (-1, 4), (0, 6), (1, 4), (2, 1)])
        );
    }

    #[test]
    fn binomial_power_matches_symmetric_form() {
        // x^{-k}(1+x)^{2k} = (x^{-1} + 2 + x)^k
        let base = poly(&[(-1, 1), (0, 2), (1, 1)]);
        for k in 0..12u32 {
            assert_eq!(poly_binomial_power(k as u64), base.pow(k));
        }
    }

    #[test]
    fn binomial_power_matches_generic_product() {
        let one_plus_x = poly(&[(0, 1), (1, 1)]);
        for k in 0..10u32 {
            let generic = &LaurentPoly::monomial(-(k as i64), 1) * &one_plus_x.pow(2 * k);
            assert_eq!(poly_binomial_power(k as u64), generic);
        }
    }

    #[test]
    fn x_ddx_examples() {
        assert!(poly(&[(0, 5)]).apply_x_ddx().is_zero());
        let f = poly(&[(-1, 1), (0, 2), (1, 1)]);
        assert_eq!(f.apply_x_ddx(), poly(&[(-1, -1), (1, 1)]));
        assert_eq!(f.apply_x_ddx().apply_x_ddx(), poly(&[(-1, 1), (1, 1)]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(LaurentPoly::zero().eval_at_one(), BigInt::zero());
        assert_eq!(
            poly(&[(-1, 1), (0, 2), (1, 1)]).eval_at_one(),
            BigInt::from(4)
        );
        assert_eq!(poly(&[(-1, 1), (1, 1)]).eval_at_one(), BigInt::from(2));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = poly(&[(-3, 2), (1, 5)]);
        let sum = &a + &(-&a);
        assert!(sum.is_zero());
        assert_eq!(sum.support(), None);
        assert_eq!(poly(&[(2, 3), (2, -3), (4, 1)]).support(), Some((4, 4)));
    }

    proptest! {
        #[test]
        fn binomial_power_coefficients(k in 0u64..40) {
            let f = poly_binomial_power(k);
            let k = k as i64;
            prop_assert_eq!(f.support(), Some((-k, k)));
            for p in -k - 2..=k + 2 {
                prop_assert_eq!(f.coeff(p), BigInt::from(binomial(2 * k, k + p)));
            }
        }

        #[test]
        fn x_ddx_then_eval_is_first_moment(
            terms in proptest::collection::vec((-20i64..20, -1000i64..1000), 0..12)
        ) {
            let f = poly(&terms);
            let expected: BigInt = f.terms().map(|(e, c)| c * e).sum();
            prop_assert_eq!(f.apply_x_ddx().eval_at_one(), expected);
        }

        #[test]
        fn product_evaluates_to_product(
            a in proptest::collection::vec((-8i64..8, -50i64..50), 0..6),
            b in proptest::collection::vec((-8i64..8, -50i64..50), 0..6),
        ) {
            let (a, b) = (poly(&a), poly(&b));
            prop_assert_eq!((&a * &b).eval_at_one(), a.eval_at_one() * b.eval_at_one());
        }
    }
}
