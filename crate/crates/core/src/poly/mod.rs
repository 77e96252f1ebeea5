//! Exact multivariate polynomials over QQ and F_p.
//!
//! Inverted variables use the companion encoding: inverting `t` adds a
//! variable `t_inv` and every ideal over the ring implicitly contains
//! `t*t_inv - 1`. The text grammar prints and parses polynomials over a given
//! ring; printing a parsed canonical string reproduces it byte for byte.

mod field;
mod monomial;
mod parse;
mod polynomial;
mod ring;

use thiserror::Error;

pub use field::{Coeff, Field};
pub use monomial::{Monomial, MonomialOrder, MAX_EXPONENT};
pub use polynomial::{laurent_encode, Poly};
pub use ring::{is_identifier, Ring, RingRef, VariableSet, INV_SUFFIX};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("characteristic {0} is not a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("exponent overflow (bound 2^31)")]
    ExponentOverflow,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("negative exponent on non-inverted variable `{0}`")]
    NegativeExponent(String),
    #[error("localization violated: image of inverted variable `{0}` is not certified invertible")]
    LocalizationViolated(String),
    #[error("expected {expected} exponents, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
