//! Rational functions in canonical form.

use super::poly::Poly;
use super::{ExactError, ParamEnv, ParamSet, Rational};
use num_traits::One;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// An element of the field Q(p1, ..., pk).
///
/// Invariants: the denominator is nonzero, monic under graded-lex, and
/// coprime to the numerator, so two equal field elements are structurally
/// identical and `==` decides equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn from_parts(num: Poly, den: Poly) -> Result<Scalar, ExactError> {
        if den.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Scalar {
        if num.is_zero() {
            return Scalar { den: Poly::one(num.params()), num };
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        // monic denominator fixes the representative
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = Rational::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Scalar { num, den }
    }

    pub fn from_poly(p: Poly) -> Scalar {
        let one = Poly::one(p.params());
        Scalar { num: p, den: one }
    }

    pub fn zero(params: &Arc<ParamSet>) -> Scalar {
        Self::from_poly(Poly::zero(params))
    }

    pub fn one(params: &Arc<ParamSet>) -> Scalar {
        Self::from_poly(Poly::one(params))
    }

    pub fn constant(params: &Arc<ParamSet>, c: Rational) -> Scalar {
        Self::from_poly(Poly::constant(params, c))
    }

    pub fn int(params: &Arc<ParamSet>, n: i64) -> Scalar {
        Self::constant(params, Rational::from_integer(n.into()))
    }

    pub fn param(params: &Arc<ParamSet>, name: &str) -> Result<Scalar, ExactError> {
        let idx = params
            .index_of(name)
            .ok_or_else(|| ExactError::UndeclaredParameter(name.to_string()))?;
        Ok(Self::from_poly(Poly::var(params, idx)))
    }

    pub fn params(&self) -> &Arc<ParamSet> {
        self.num.params()
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// True iff this is the zero element, decided on the canonical form.
    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.as_constant().map_or(false, |c| c.is_one())
            && self.num.as_constant().map_or(false, |c| c.is_one())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ExactError> {
        if other.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Scalar::reduce(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Scalar, ExactError> {
        Scalar::one(self.params()).checked_div(self)
    }

    /// Replace bound parameters by rationals; the result is reduced.
    pub fn substitute(&self, env: &ParamEnv) -> Result<Scalar, ExactError> {
        env.validate(self.params())?;
        let values: Vec<Option<Rational>> = self
            .params()
            .names()
            .iter()
            .map(|n| env.get(n).cloned())
            .collect();
        let num = self.num.substitute_indexed(&values);
        let den = self.den.substitute_indexed(&values);
        if den.is_zero() {
            return Err(ExactError::PoleAtSubstitution);
        }
        Ok(Scalar::reduce(num, den))
    }

    /// Exact square root when one exists in the function field.
    pub fn sqrt(&self) -> Result<Scalar, ExactError> {
        let n = self.num.sqrt_exact().ok_or(ExactError::NotASquare)?;
        let d = self.den.sqrt_exact().ok_or(ExactError::NotASquare)?;
        Ok(Scalar::reduce(n, d))
    }

    /// Formal derivative with respect to a named parameter (quotient rule).
    pub fn derivative(&self, name: &str) -> Result<Scalar, ExactError> {
        let idx = self
            .params()
            .index_of(name)
            .ok_or_else(|| ExactError::UndeclaredParameter(name.to_string()))?;
        let dn = self.num.derivative(idx);
        let dd = self.den.derivative(idx);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        let den = self.den.mul(&self.den);
        Ok(Scalar::reduce(num, den))
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::reduce(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::reduce(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs)
            .expect("scalar division by zero; use checked_div for fallible division")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().map_or(false, |c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
