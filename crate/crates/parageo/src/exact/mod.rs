//! Exact scalar arithmetic: arbitrary-precision rationals and multivariate
//! rational functions in a declared list of parameters.
//!
//! Every quantity in the workbench is a [`Scalar`]: an element of the field
//! Q(p1, ..., pk) kept in a canonical form (reduced fraction, monic
//! denominator under graded-lex order), so equality is decidable by direct
//! structural comparison — no sampling, no tolerances.

mod parse;
mod poly;
mod scalar;

pub use parse::parse_scalar;
pub use poly::{Mono, Poly};
pub use scalar::Scalar;

use num_rational::BigRational;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Declared parameter list for an analysis session. Scalars are only
/// comparable and combinable when they share the same parameter set.
#[derive(Debug, PartialEq, Eq)]
pub struct ParamSet {
    names: Vec<String>,
}

impl ParamSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Arc<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = std::collections::BTreeSet::new();
        for n in &names {
            assert!(seen.insert(n.clone()), "duplicate parameter name {n}");
        }
        Arc::new(ParamSet { names })
    }

    /// The empty parameter set: plain rational arithmetic.
    pub fn empty() -> Arc<Self> {
        Self::new(Vec::<String>::new())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Bindings of parameters to exact rationals, used by `substitute`.
#[derive(Debug, Clone, Default)]
pub struct ParamEnv {
    bindings: BTreeMap<String, Rational>,
}

impl ParamEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, name: &str, value: Rational) -> Self {
        self.bindings.insert(name.to_string(), value);
        self
    }

    pub fn insert(&mut self, name: &str, value: Rational) {
        self.bindings.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.bindings.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.bindings.iter()
    }

    /// Check every bound name against the declared parameter list.
    pub fn validate(&self, params: &ParamSet) -> Result<(), ExactError> {
        for name in self.bindings.keys() {
            if params.index_of(name).is_none() {
                return Err(ExactError::UndeclaredParameter(name.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by the zero scalar")]
    DivisionByZero,
    #[error("denominator vanishes under the given substitution")]
    PoleAtSubstitution,
    #[error("undeclared parameter `{0}`")]
    UndeclaredParameter(String),
    #[error("scalar is not a perfect square")]
    NotASquare,
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Shorthand for the rational n/d.
pub fn ratq(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
