//! The 2×2 building blocks `A(x, a₁, a₂)`.
//!
//! A block has orthogonal rows, column square norms `a₁²` and `a₂²`, and a
//! first row whose squares sum to `x`. Its second row then carries
//! `y = a₁² + a₂² − x`. Such a real block exists iff
//!
//! * `a₁² + a₂² ≥ x > 0`, and
//! * `a₁², a₂²` lie on the same side of `x` (both `≥ x` or both `≤ x`).
//!
//! Every block is built with the sign pattern
//!
//! ```text
//! [  α    β  ]
//! [  cβ  −cα ]
//! ```
//!
//! so the two cross terms of the row inner product, `α·cβ` and `β·(−cα)`,
//! share a radicand and cancel exactly.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{RadicalScalar, Rational, ScalarError};

/// Which existence condition a requested block violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LemmaCondition {
    /// `x`, `a₁²` or `a₂²` is not strictly positive.
    NonPositive,
    /// `a₁² + a₂² < x`: the second row would need negative mass.
    SumBelowRow,
    /// One column norm is above `x` and the other below it.
    MixedSides,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlockError {
    #[error("no 2x2 block for x={x}, a1²={a1sq}, a2²={a2sq}: {condition:?}")]
    Infeasible {
        x: Rational,
        a1sq: Rational,
        a2sq: Rational,
        condition: LemmaCondition,
    },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Parameters of a block: first-row square sum and the two column square norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockSpec {
    pub x: Rational,
    pub a1sq: Rational,
    pub a2sq: Rational,
}

impl BlockSpec {
    pub fn new(x: Rational, a1sq: Rational, a2sq: Rational) -> Self {
        BlockSpec { x, a1sq, a2sq }
    }

    /// Second-row square sum `a₁² + a₂² − x`.
    pub fn y(&self) -> Result<Rational, ScalarError> {
        self.a1sq.checked_add(self.a2sq)?.checked_sub(self.x)
    }

    /// The first failing existence condition, if any.
    pub fn violation(&self) -> Result<Option<LemmaCondition>, ScalarError> {
        let BlockSpec { x, a1sq, a2sq } = *self;
        if !(x.is_positive() && a1sq.is_positive() && a2sq.is_positive()) {
            return Ok(Some(LemmaCondition::NonPositive));
        }
        if a1sq.checked_add(a2sq)? < x {
            return Ok(Some(LemmaCondition::SumBelowRow));
        }
        let both_above = a1sq >= x && a2sq >= x;
        let both_below = a1sq <= x && a2sq <= x;
        if !(both_above || both_below) {
            return Ok(Some(LemmaCondition::MixedSides));
        }
        Ok(None)
    }

    fn infeasible(&self, condition: LemmaCondition) -> BlockError {
        BlockError::Infeasible {
            x: self.x,
            a1sq: self.a1sq,
            a2sq: self.a2sq,
            condition,
        }
    }
}

/// True iff a real block with these parameters exists.
pub fn block_exists(spec: &BlockSpec) -> bool {
    matches!(spec.violation(), Ok(None))
}

/// An exact 2×2 block, `entries[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Block2x2 {
    pub entries: [[RadicalScalar; 2]; 2],
}

impl Block2x2 {
    /// A block is degenerate when one of its entries is exactly zero, which
    /// happens when a column norm sits exactly on `x` (or when `y = 0`).
    pub fn is_degenerate(&self) -> bool {
        self.entries.iter().flatten().any(RadicalScalar::is_zero)
    }

    /// The `y = 0` boundary: the second row is identically zero, so the
    /// scaling constant `c` of the orthogonal form is zero.
    pub fn has_zero_second_row(&self) -> bool {
        self.entries[1].iter().all(RadicalScalar::is_zero)
    }

    pub fn row_square_sum(&self, row: usize) -> Rational {
        self.entries[row][0].square() + self.entries[row][1].square()
    }

    pub fn col_square_sum(&self, col: usize) -> Rational {
        self.entries[0][col].square() + self.entries[1][col].square()
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries
            .iter()
            .flatten()
            .filter(|e| !e.is_zero())
            .count()
    }
}

/// Builds `A(x, a₁, a₂)`.
///
/// For `x = y` all four squared entries are `x/2`. Otherwise, with
/// `y = a₁² + a₂² − x`,
///
/// ```text
/// α²  = x(a₁² − y)/(x − y)      β²  = x(x − a₁²)/(x − y)
/// cβ² = y(x − a₁²)/(x − y)      cα² = y(a₁² − y)/(x − y)
/// ```
pub fn build_block(spec: &BlockSpec) -> Result<Block2x2, BlockError> {
    if let Some(condition) = spec.violation()? {
        return Err(spec.infeasible(condition));
    }
    let x = spec.x;
    let y = spec.y()?;
    let sqrt = |r: Rational| RadicalScalar::sqrt(r).map_err(BlockError::from);

    if x == y {
        let half = sqrt(x.checked_div(Rational::TWO)?)?;
        return Ok(Block2x2 {
            entries: [[half, half], [half, -half]],
        });
    }

    let denom = x.checked_sub(y)?;
    let a1_minus_y = spec.a1sq.checked_sub(y)?;
    let x_minus_a1 = x.checked_sub(spec.a1sq)?;
    let alpha_sq = x.checked_mul(a1_minus_y)?.checked_div(denom)?;
    let beta_sq = x.checked_mul(x_minus_a1)?.checked_div(denom)?;
    let c_beta_sq = y.checked_mul(x_minus_a1)?.checked_div(denom)?;
    let c_alpha_sq = y.checked_mul(a1_minus_y)?.checked_div(denom)?;

    Ok(Block2x2 {
        entries: [
            [sqrt(alpha_sq)?, sqrt(beta_sq)?],
            [sqrt(c_beta_sq)?, -sqrt(c_alpha_sq)?],
        ],
    })
}
