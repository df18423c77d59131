//! Coefficient rings for diagram algebras: exact rational functions in q, exact rationals at a
//! fixed modulus, or doubles.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::RatFunc;

/// Field operations used by the diagram code. Method names avoid clashing with `std::ops`.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn sum(&self, other: &Self) -> Self;
    fn prod(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;
    /// Best-effort numeric value, for diagnostics and tolerance checks.
    fn approx(&self) -> f64;

    fn diff(&self, other: &Self) -> Self {
        self.sum(&other.negated())
    }

    fn powu(&self, k: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..k {
            out = out.prod(self);
        }
        out
    }
}

/// Numeric mode: values with |x| ≤ this are treated as zero and pruned.
pub const NUMERIC_ZERO: f64 = 1e-13;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        self.abs() <= NUMERIC_ZERO
    }
    fn sum(&self, other: &Self) -> Self {
        self + other
    }
    fn prod(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| 1.0 / self)
    }
    fn approx(&self) -> f64 {
        *self
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn from_int(n: i64) -> Self {
        RatFunc::from_int(n)
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn sum(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn prod(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    /// Value at q = 2 (δ = 5/2), a generic point.
    fn approx(&self) -> f64 {
        self.eval(2.0)
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sum(&self, other: &Self) -> Self {
        self + other
    }
    fn prod(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Quantum integer [k] in a scalar ring where δ = [2] is known, via [k+1] = δ[k] − [k−1].
pub fn quantum_integer_from_delta<S: Scalar>(k: u32, delta: &S) -> S {
    let (mut prev, mut cur) = (S::zero(), S::one());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = delta.prod(&cur).diff(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recursion_matches_closed_form_quantum_integers() {
        let d = RatFunc::delta();
        for k in 0..15 {
            assert_eq!(quantum_integer_from_delta(k, &d), RatFunc::quantum_integer(k));
        }
    }

    #[test]
    fn numeric_zero_pruning() {
        assert!(Scalar::is_zero(&1e-14_f64));
        assert!(!Scalar::is_zero(&1e-12_f64));
        assert_eq!(Scalar::recip(&0.0_f64), None);
    }

    #[test]
    fn rational_mode_quantum_integers() {
        // q = 2: [3] = 4 + 1 + 1/4
        let d = BigRational::new(BigInt::from(5), BigInt::from(2));
        let three = quantum_integer_from_delta(3, &d);
        assert_eq!(three, BigRational::new(BigInt::from(21), BigInt::from(4)));
    }
}
