//! Scalar traits shared by the exact and numeric halves of the engine.
//!
//! The algebraic containers ([`crate::exact::Matrix`], [`crate::freelie::LieElem`],
//! [`crate::sl2::Poly`], [`crate::modforms::Series`]) are generic over an
//! [`Scalar`], a field in which equality is exact. The numeric containers
//! ([`crate::periodpoly::NumericPolynomial`], [`crate::transport::GroupLikeElem`])
//! are generic over [`Real`], a floating point type.

use std::fmt::{Debug, Display};
use std::ops::Neg;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, Num, ToPrimitive};

/// Arbitrary-precision rational number, always stored reduced with positive denominator.
pub type Rational = BigRational;

/// Field element with exact equality and zero test.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + FromPrimitive + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every field of characteristic zero contains the integers")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }
}

impl<T> Scalar for T where
    T: Clone
        + Debug
        + Display
        + PartialEq
        + Num
        + Neg<Output = T>
        + FromPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Floating point scalar for the numerical integration and quadrature code.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("float literal representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Conversion from exact scalars into floating point.
pub trait ToReal<F: Real> {
    fn to_real(&self) -> F;
}

impl<F: Real> ToReal<F> for Rational {
    fn to_real(&self) -> F {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => F::lit(n / d),
            // huge numerators or denominators: keep the top bits of each
            _ => {
                let ns = self.numer().bits().saturating_sub(60);
                let ds = self.denom().bits().saturating_sub(60);
                let n = (self.numer() >> ns).to_f64().unwrap_or(0.0);
                let d = (self.denom() >> ds).to_f64().unwrap_or(1.0);
                F::lit(n / d * 2f64.powi(ns as i32 - ds as i32))
            }
        }
    }
}

impl<F: Real> ToReal<F> for f64 {
    fn to_real(&self) -> F {
        F::lit(*self)
    }
}

/// Parse a rational from `"num/den"` or `"num"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s.trim()).ok()
}

/// Canonical text form used in every JSON document: `"num/den"`, den omitted when 1.
pub fn rational_to_string(r: &Rational) -> String {
    r.to_string()
}

/// Integer-valued rational shorthand.
pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` shorthand; panics on zero denominator.
pub fn qq(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}
