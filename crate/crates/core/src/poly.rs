//! Dense univariate polynomials over an exact or approximate scalar.
//!
//! Coefficient index i is the coefficient of z^i. The trailing coefficient
//! is kept nonzero (the zero polynomial is the empty vector), so `degree`
//! and equality are structural.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::scalar::ExactScalar;

/// Falling factorial a!/(a-b)!, understood to be 0 for a < b.
pub fn falling_factorial(a: usize, b: usize) -> BigInt {
    if a < b {
        return BigInt::from(0);
    }
    let mut acc = BigInt::one();
    for k in (a - b + 1)..=a {
        acc *= BigInt::from(k);
    }
    acc
}

/// The coefficient field seen by `Polynomial`. Implemented by the exact
/// Gaussian rationals and by `Complex64`.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_bigint(n: &BigInt) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Field division; the divisor must be nonzero.
    fn div(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Coeff for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn one() -> Self {
        ExactScalar::one()
    }
    fn from_int(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
    fn from_bigint(n: &BigInt) -> Self {
        ExactScalar::from_real(num_rational::BigRational::from_integer(n.clone()))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_bigint(n: &BigInt) -> Self {
        use num_traits::ToPrimitive;
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Polynomial<S: Coeff> {
    coeffs: Vec<S>,
}

impl<S: Coeff> Polynomial<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// z^k with unit coefficient.
    pub fn monomial(k: usize) -> Self {
        let mut v = vec![S::zero(); k + 1];
        v[k] = S::one();
        Polynomial { coeffs: v }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, z: &S) -> S {
        let mut acc = S::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i).add(&other.coeff(i)));
        }
        Self::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Self::new(v)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut v = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact k-fold derivative; drops to zero when k exceeds the degree.
    pub fn derivative(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= k {
            return Self::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() - k);
        for i in k..self.coeffs.len() {
            // coefficient of z^{i-k} picks up i!/(i-k)!
            let ff = falling_factorial(i, k);
            v.push(self.coeffs[i].mul(&S::from_bigint(&ff)));
        }
        Self::new(v)
    }

    /// k-fold antiderivative q with q^{(k)} = p and
    /// q(base) = q'(base) = ... = q^{(k-1)}(base) = 0; each successive
    /// primitive is anchored at the same base point.
    pub fn antiderivative_vanishing_at(&self, k: usize, base: &S) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            let mut v = Vec::with_capacity(p.coeffs.len() + 1);
            v.push(S::zero());
            for (i, c) in p.coeffs.iter().enumerate() {
                v.push(c.div(&S::from_int((i + 1) as i64)));
            }
            let mut q = Self::new(v);
            let at_base = q.eval(base);
            q = q.sub(&Self::constant(at_base));
            p = q;
        }
        p
    }
}

impl Polynomial<ExactScalar> {
    pub fn to_approx(&self) -> Polynomial<Complex64> {
        Polynomial::new(self.coeffs.iter().map(|c| c.to_complex()).collect())
    }
}

impl fmt::Display for Polynomial<ExactScalar> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})z", c)?,
                _ => write!(f, "({})z^{}", c, i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn es(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn falling_factorial_values() {
        assert_eq!(falling_factorial(3, 2), BigInt::from(6));
        assert_eq!(falling_factorial(2, 5), BigInt::from(0));
        assert_eq!(falling_factorial(5, 0), BigInt::from(1));
    }

    #[test]
    fn derivative_of_cube() {
        let p: Polynomial<ExactScalar> = Polynomial::monomial(3);
        assert_eq!(
            p.derivative(2),
            Polynomial::new(vec![es(0), es(6)]) // 6z
        );
        assert_eq!(p.derivative(4), Polynomial::zero());
    }

    #[test]
    fn derivative_of_omega_two() {
        // (z^2 - 2 w1 z)/2 differentiates to z - w1
        let w1 = ExactScalar::from_ratio(3, 4);
        let p = Polynomial::new(vec![
            es(0),
            (-&w1).clone(),
            ExactScalar::from_ratio(1, 2),
        ]);
        let d = p.derivative(1);
        assert_eq!(d, Polynomial::new(vec![(-&w1).clone(), es(1)]));
    }

    #[test]
    fn antiderivative_anchored() {
        // (1, 1, w0) -> z - w0
        let w0 = ExactScalar::from_ratio(2, 3);
        let one: Polynomial<ExactScalar> = Polynomial::one();
        let q = one.antiderivative_vanishing_at(1, &w0);
        assert_eq!(q, Polynomial::new(vec![(-&w0).clone(), es(1)]));

        // (z, 2, 0) -> z^3/6
        let z: Polynomial<ExactScalar> = Polynomial::monomial(1);
        let q = z.antiderivative_vanishing_at(2, &es(0));
        assert_eq!(
            q,
            Polynomial::new(vec![es(0), es(0), es(0), ExactScalar::from_ratio(1, 6)])
        );
    }

    #[test]
    fn antiderivative_of_omega_one() {
        // primitive of z - w1 vanishing at 0 is ((z-w1)^2 - w1^2)/2
        let w1 = ExactScalar::from_ratio(5, 7);
        let p = Polynomial::new(vec![(-&w1).clone(), es(1)]);
        let q = p.antiderivative_vanishing_at(1, &es(0));
        // ((z-w1)^2 - w1^2)/2 = z^2/2 - w1 z
        let expected = Polynomial::new(vec![es(0), (-&w1).clone(), ExactScalar::from_ratio(1, 2)]);
        assert_eq!(q, expected);
    }

    #[test]
    fn display_form() {
        let p = Polynomial::new(vec![
            es(0),
            ExactScalar::from_ratio(-1, 6),
            es(0),
            ExactScalar::from_ratio(1, 6),
        ]);
        assert_eq!(p.to_string(), "(-1/6)z + (1/6)z^3");
    }
}
