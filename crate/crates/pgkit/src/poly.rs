//! Exact polynomials, Laurent polynomials and rational functions in q with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense polynomial in q; `coeffs[i]` multiplies q^i. Trailing zeros are trimmed, so the zero
/// polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Poly::new(cs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    pub fn monomial(c: BigInt, exp: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); exp + 1];
        coeffs[exp] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// Number of factors of q dividing the polynomial.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::new(out)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Multiply by q^k.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::default();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Divide by q^k; the low k coefficients must vanish.
    fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.low_order() >= k || self.is_zero());
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    /// Gcd of the coefficients (non-negative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn div_scalar(&self, c: &BigInt) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|x| x / c).collect() }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::default();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        self.div_scalar(&c)
    }

    /// Pseudo-remainder of `self` by `d`: lead(d)^(deg self − deg d + 1)·self mod d.
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let mut r = self.clone();
        let dl = d.lead();
        let dd = d.degree();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let rl = r.lead();
            r = r.scale(&dl).sub(&d.scale(&rl).shift(shift));
        }
        r
    }

    /// Primitive gcd (positive leading coefficient) by the primitive remainder sequence.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            if b.degree() == 0 {
                return Poly::constant(BigInt::one());
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }

    /// Exact division; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Poly::default();
        }
        let dl = d.lead();
        let dd = d.degree();
        let mut r = self.clone();
        let mut q = vec![BigInt::zero(); self.degree().saturating_sub(dd) + 1];
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let (quot, rem) = r.lead().div_rem(&dl);
            assert!(rem.is_zero(), "inexact polynomial division");
            r = r.sub(&d.scale(&quot).shift(shift));
            q[shift] = quot;
        }
        assert!(r.is_zero(), "inexact polynomial division");
        Poly::new(q)
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * q + c.to_f64().unwrap_or(f64::NAN))
    }
}

/// Laurent polynomial Σ c_i q^(min_exp + i).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentPoly {
    min_exp: i64,
    body: Poly,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, body: Poly) -> Self {
        let low = body.low_order();
        if body.is_zero() {
            return LaurentPoly::default();
        }
        LaurentPoly { min_exp: min_exp + low as i64, body: body.unshift(low) }
    }

    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    pub fn from_int(c: i64) -> Self {
        LaurentPoly::new(0, Poly::constant(BigInt::from(c)))
    }

    pub fn monomial(c: i64, exp: i64) -> Self {
        LaurentPoly::new(exp, Poly::constant(BigInt::from(c)))
    }

    /// q + q^-1.
    pub fn delta() -> Self {
        LaurentPoly::monomial(1, 1).add(&LaurentPoly::monomial(1, -1))
    }

    /// Quantum integer [k] = q^(k−1) + q^(k−3) + ... + q^(1−k); [0] = 0.
    pub fn quantum_integer(k: u32) -> Self {
        let mut out = LaurentPoly::zero();
        for j in 0..k as i64 {
            out = out.add(&LaurentPoly::monomial(1, k as i64 - 1 - 2 * j));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn max_exp(&self) -> i64 {
        self.min_exp + self.body.degree() as i64
    }

    /// Coefficient of q^e.
    pub fn coeff(&self, e: i64) -> BigInt {
        if e < self.min_exp {
            return BigInt::zero();
        }
        self.body.coeffs().get((e - self.min_exp) as usize).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let m = self.min_exp.min(other.min_exp);
        let a = self.body.shift((self.min_exp - m) as usize);
        let b = other.body.shift((other.min_exp - m) as usize);
        LaurentPoly::new(m, a.add(&b))
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly { min_exp: self.min_exp, body: self.body.neg() }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.min_exp + other.min_exp, self.body.mul(&other.body))
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.body.eval(q) * q.powi(self.min_exp as i32)
    }

    /// Split as numerator / q^s with a genuine polynomial numerator.
    fn as_fraction(&self) -> (Poly, Poly) {
        if self.min_exp >= 0 {
            (self.body.shift(self.min_exp as usize), Poly::constant(BigInt::one()))
        } else {
            (self.body.clone(), Poly::monomial(BigInt::one(), (-self.min_exp) as usize))
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.body.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.min_exp + i as i64;
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            match (a.is_one(), e) {
                (_, 0) => write!(f, "{a}")?,
                (true, 1) => write!(f, "q")?,
                (true, _) => write!(f, "q^{e}")?,
                (false, 1) => write!(f, "{a}q")?,
                (false, _) => write!(f, "{a}q^{e}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Element of Q(q) in lowest terms: gcd(num, den) = 1, integer contents coprime, leading
/// coefficient of `den` positive. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        // Powers of q are the most common common factor; strip them before the general gcd.
        let s = num.low_order().min(den.low_order());
        let (mut num, mut den) = (num.unshift(s), den.unshift(s));
        if den.degree() > 0 && num.degree() > 0 {
            let g = num.gcd(&den);
            if g.degree() > 0 {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let mut c = num.content().gcd(&den.content());
        if den.lead().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar(&c);
            den = den.div_scalar(&c);
        }
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::default(), den: Poly::constant(BigInt::one()) }
    }

    pub fn one() -> Self {
        RatFunc::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        RatFunc::new(Poly::constant(BigInt::from(c)), Poly::constant(BigInt::one()))
    }

    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let (n, d) = p.as_fraction();
        RatFunc::new(n, d)
    }

    /// δ = q + q^-1.
    pub fn delta() -> Self {
        RatFunc::from_laurent(&LaurentPoly::delta())
    }

    pub fn quantum_integer(k: u32) -> Self {
        RatFunc::from_laurent(&LaurentPoly::quantum_integer(k))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num), self.den.clone());
        }
        RatFunc::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Option<RatFunc> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, k: u32) -> RatFunc {
        let mut out = RatFunc::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.num.eval(q) / self.den.eval(q)
    }

    /// The Laurent polynomial this equals, if the denominator is a monomial.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        if self.den.coeffs().len() != self.den.low_order() + 1 {
            return None;
        }
        let d = self.den.lead();
        let s = self.den.degree() as i64;
        let mut out = Vec::with_capacity(self.num.coeffs().len());
        for c in self.num.coeffs() {
            let (qt, r) = c.div_rem(&d);
            if !r.is_zero() {
                return None;
            }
            out.push(qt);
        }
        Some(LaurentPoly::new(-s, Poly::new(out)))
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_laurent() {
            Some(l) => write!(f, "{l}"),
            None => {
                let n = LaurentPoly::new(0, self.num.clone());
                let d = LaurentPoly::new(0, self.den.clone());
                write!(f, "({n})/({d})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qi(k: u32) -> LaurentPoly {
        LaurentPoly::quantum_integer(k)
    }

    #[test]
    fn quantum_integer_small_values() {
        assert!(qi(0).is_zero());
        assert_eq!(qi(1), LaurentPoly::one());
        assert_eq!(qi(2), LaurentPoly::delta());
        assert_eq!(qi(3).to_string(), "q^2 + 1 + q^-2");
    }

    #[test]
    fn quantum_integer_recursion() {
        for k in 1..=30 {
            assert_eq!(qi(2).mul(&qi(k)), qi(k + 1).add(&qi(k - 1)), "k = {k}");
        }
    }

    #[test]
    fn quantum_integer_numeric_matches_closed_form() {
        let q: f64 = 1.7;
        for k in 0..12 {
            let closed = (q.powi(k as i32) - q.powi(-(k as i32))) / (q - 1.0 / q);
            assert!((qi(k).eval(q) - closed).abs() < 1e-9 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn gcd_of_products() {
        let a = Poly::from_i64s(&[1, 1]); // 1 + q
        let b = Poly::from_i64s(&[-1, 0, 1]); // q^2 − 1
        let c = Poly::from_i64s(&[2, 0, 3]);
        let g = a.mul(&c).gcd(&b.mul(&c));
        assert_eq!(g, a.mul(&c).primitive());
        assert_eq!(a.mul(&c).div_exact(&g).degree(), 0);
    }

    #[test]
    fn ratfunc_normalizes() {
        let x = RatFunc::quantum_integer(4).div(&RatFunc::quantum_integer(2)).unwrap();
        // [4]/[2] = q^2 + q^-2
        assert_eq!(x.to_laurent().unwrap().to_string(), "q^2 + q^-2");
        let y = RatFunc::quantum_integer(3).div(&RatFunc::quantum_integer(2)).unwrap();
        assert!(y.to_laurent().is_none());
        assert_eq!(y.mul(&RatFunc::quantum_integer(2)), RatFunc::quantum_integer(3));
        let z = y.sub(&y);
        assert!(z.is_zero());
        assert_eq!(z, RatFunc::zero());
    }

    #[test]
    fn ratfunc_field_axioms_on_samples() {
        let a = RatFunc::quantum_integer(3).div(&RatFunc::quantum_integer(5)).unwrap();
        let b = RatFunc::delta().add(&RatFunc::from_int(-7));
        let c = RatFunc::quantum_integer(2).inv().unwrap();
        assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        assert_eq!(a.mul(&a.inv().unwrap()), RatFunc::one());
        let q = 1.37;
        assert!((a.mul(&b).eval(q) - a.eval(q) * b.eval(q)).abs() < 1e-12);
    }
}
