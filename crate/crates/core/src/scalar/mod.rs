//! Exact arithmetic: reduced rationals and signed square roots of rationals.

mod radical;
mod rational;

pub use radical::{CanonicalRadical, RadicalScalar, DEFAULT_FACTOR_BOUND};
pub use rational::{Rational, RationalParts};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow in exact arithmetic")]
    IntegerOverflow,
    #[error("cannot certify square-free part: cofactor {cofactor} exceeds the factor bound")]
    FactorizationIncomplete { cofactor: u128 },
    #[error("negative radicand {0}")]
    NegativeRadicand(Rational),
    #[error("sign must be -1, 0 or 1, got {0}")]
    InvalidSign(i8),
    #[error("cannot parse {0:?} as a number")]
    Parse(String),
}
