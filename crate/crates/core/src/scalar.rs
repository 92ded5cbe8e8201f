//! Scalar towers: exact Gaussian rationals and double-precision complex.
//!
//! `ExactScalar` is a complex number with arbitrary-precision rational real
//! and imaginary parts. All basis construction runs over this type so that
//! biorthogonality and duality identities hold exactly. The approximate
//! backend is plain `num_complex::Complex64`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Gaussian rational: re + im*i with exact rational components.
///
/// `BigRational` keeps itself gcd-reduced with a positive denominator, so
/// equality is decidable componentwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactScalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        ExactScalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        ExactScalar {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn from_real(re: BigRational) -> Self {
        ExactScalar {
            re,
            im: BigRational::zero(),
        }
    }

    /// Parses "p/q" or "p" as a real rational; an optional second component
    /// gives the imaginary part.
    pub fn parse_real(s: &str) -> Option<Self> {
        BigRational::from_str(s.trim()).ok().map(Self::from_real)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |self|^2 as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero ExactScalar");
        ExactScalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn abs(&self) -> f64 {
        self.to_complex().norm()
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &'a ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    };
}

impl<'b> Add<&'b ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &'b ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl<'b> Sub<&'b ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &'b ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl<'b> Mul<&'b ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &'b ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'b> Div<&'b ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &'b ExactScalar) -> ExactScalar {
        #[allow(clippy::suspicious_arithmetic_impl)] // division via field inverse
        {
            self * &rhs.inv()
        }
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        let a = ExactScalar::from_ratio(3, 7);
        let b = &a * &a.inv();
        assert_eq!(b, ExactScalar::one());

        let c = ExactScalar::new(
            BigRational::new(BigInt::from(2), BigInt::from(5)),
            BigRational::new(BigInt::from(-1), BigInt::from(3)),
        );
        assert_eq!(&c * &c.inv(), ExactScalar::one());
    }

    #[test]
    fn parse_and_display() {
        let a = ExactScalar::parse_real("-1/6").unwrap();
        assert_eq!(a, ExactScalar::from_ratio(-1, 6));
        assert_eq!(a.to_string(), "-1/6");
        assert_eq!(ExactScalar::from_int(5).to_string(), "5");
    }

    #[test]
    fn complex_arithmetic() {
        let i = ExactScalar::i();
        assert_eq!(&i * &i, ExactScalar::from_int(-1));
        assert_eq!(i.pow(4), ExactScalar::one());
    }
}
