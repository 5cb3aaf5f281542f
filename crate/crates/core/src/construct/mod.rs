//! Spectral Tetris constructors.
//!
//! [`pnstc`] fills an `N × M` synthesis matrix left to right with a cursor.
//! While the current row still has room for the next column's squared norm,
//! that column gets a single entry `a_m`. Otherwise a 2×2 block closes the
//! current row and spills its second-row mass into the next one. The result
//! has pairwise orthogonal rows with square sums `λ_n`, columns of squared
//! norm `a_m²`, and at most two nonzeros per column.
//!
//! [`stc`] is the original unit-norm procedure; [`unit_tight`] and
//! [`equal_norm_frame`] build on it.

mod equal_norm;
mod tight;

pub use equal_norm::{equal_norm_frame, minimal_equal_norm_r, EqualNormFrame};
pub use tight::{k_inequality_scan, unit_tight, unit_tight_feasible, UnitTightVerdict};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{build_block, BlockError, BlockSpec, LemmaCondition};
use crate::matrix::{BlockKind, BlockRecord, SynthesisMatrix};
use crate::readiness::{FrameSpec, ReadinessError};
use crate::scalar::{RadicalScalar, Rational, ScalarError};

/// Why the cursor could not advance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StuckReason {
    /// The 2×2 block needed to close the row does not exist.
    BlockInfeasible(LemmaCondition),
    /// The block's second row carries more mass than the next eigenvalue.
    NegativeRemainder,
    /// A block was needed in the last row.
    NoRowBelow,
    /// A block was needed but only one column is left.
    NoSecondColumn,
    /// The row still has mass but every column is used.
    ColumnsExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("trace mismatch: eigenvalues sum to {eigenvalues}, squared norms sum to {norms}")]
    TraceMismatch {
        eigenvalues: Rational,
        norms: Rational,
    },
    #[error("construction stuck at row {row}, column {col}: {reason:?}")]
    ConstructionStuck {
        row: usize,
        col: usize,
        reason: StuckReason,
    },
    #[error("no unit-norm tight frame of {count} vectors in dimension {dim} via Spectral Tetris")]
    Infeasible { count: usize, dim: usize },
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("redundancy {count}/{dim} is outside the open interval (1, 2)")]
    OutOfRange { count: usize, dim: usize },
    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),
    #[error("{0} must be sorted")]
    NotSorted(&'static str),
    #[error("invalid frame spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl From<ReadinessError> for ConstructError {
    fn from(e: ReadinessError) -> Self {
        match e {
            ReadinessError::TraceMismatch { eigenvalues, norms } => {
                ConstructError::TraceMismatch { eigenvalues, norms }
            }
            ReadinessError::NotSorted(what) => ConstructError::NotSorted(what),
            ReadinessError::InvalidSpec(msg) => ConstructError::InvalidSpec(msg),
            ReadinessError::Scalar(e) => ConstructError::Scalar(e),
        }
    }
}

fn stuck(row: usize, col: usize, reason: StuckReason) -> ConstructError {
    ConstructError::ConstructionStuck { row, col, reason }
}

/// Places a 2×2 block with top-left corner `(row, col)` and logs it.
fn place_block(
    out: &mut SynthesisMatrix,
    row: usize,
    col: usize,
    entries: &[[RadicalScalar; 2]; 2],
) {
    let mut degenerate = false;
    for (dr, line) in entries.iter().enumerate() {
        for (dc, v) in line.iter().enumerate() {
            degenerate |= v.is_zero();
            out.set(row + dr, col + dc, *v);
        }
    }
    out.log(BlockRecord {
        kind: if degenerate {
            BlockKind::DegenerateBlock
        } else {
            BlockKind::Block2x2
        },
        rows: (row, row + 1),
        cols: (col, col + 1),
    });
}

fn place_singleton(out: &mut SynthesisMatrix, row: usize, col: usize, value: RadicalScalar) {
    out.set(row, col, value);
    out.log(BlockRecord {
        kind: BlockKind::Singleton,
        rows: (row, row),
        cols: (col, col),
    });
}

/// Prescribed-norms Spectral Tetris.
///
/// Works on a private copy of the spectrum. When a block closes row `n` its
/// second-row mass is subtracted from `λ_{n+1}` right away, before row
/// `n + 1` is visited. Block existence and nonnegativity of that remainder
/// are rechecked at every step, so the call fails with
/// [`ConstructError::ConstructionStuck`] exactly when the orderings are not
/// ready.
pub fn pnstc(spec: &FrameSpec) -> Result<SynthesisMatrix, ConstructError> {
    spec.check_trace()?;
    let (dim, count) = (spec.dim(), spec.count());
    let norms = spec.norms_sq();
    let mut remaining = spec.eigenvalues().to_vec();
    let mut out = SynthesisMatrix::zeros(dim, count);
    let mut m = 0;

    for n in 0..dim {
        if remaining[n].is_negative() {
            return Err(stuck(n, m, StuckReason::NegativeRemainder));
        }
        while remaining[n].is_positive() {
            if m >= count {
                return Err(stuck(n, m, StuckReason::ColumnsExhausted));
            }
            if remaining[n] >= norms[m] {
                place_singleton(&mut out, n, m, RadicalScalar::sqrt(norms[m])?);
                remaining[n] = remaining[n].checked_sub(norms[m])?;
                m += 1;
                continue;
            }
            if n + 1 >= dim {
                return Err(stuck(n, m, StuckReason::NoRowBelow));
            }
            if m + 1 >= count {
                return Err(stuck(n, m, StuckReason::NoSecondColumn));
            }
            let block_spec = BlockSpec::new(remaining[n], norms[m], norms[m + 1]);
            let block = build_block(&block_spec).map_err(|e| match e {
                BlockError::Infeasible { condition, .. } => {
                    stuck(n, m, StuckReason::BlockInfeasible(condition))
                }
                BlockError::Scalar(s) => ConstructError::Scalar(s),
            })?;
            place_block(&mut out, n, m, &block.entries);
            let spill = block_spec.y()?;
            remaining[n + 1] = remaining[n + 1].checked_sub(spill)?;
            if remaining[n + 1].is_negative() {
                return Err(stuck(n + 1, m + 2, StuckReason::NegativeRemainder));
            }
            remaining[n] = Rational::ZERO;
            m += 2;
        }
    }
    debug_assert_eq!(m, count, "trace identity leaves no unused column");
    Ok(out)
}

/// Unit-norm Spectral Tetris: `M = Σ λ_n` vectors of norm 1.
///
/// A row with at least 1 left takes `e_n`; a row with `λ < 1` left is closed
/// by the pair `√(λ/2)·e_n ± √(1 − λ/2)·e_{n+1}`.
pub fn stc(eigenvalues: &[Rational], count: usize) -> Result<SynthesisMatrix, ConstructError> {
    let spec = FrameSpec::unit(eigenvalues.to_vec(), count)?;
    spec.check_trace()?;
    let dim = eigenvalues.len();
    let mut remaining = eigenvalues.to_vec();
    let mut out = SynthesisMatrix::zeros(dim, count);
    let mut m = 0;

    for n in 0..dim {
        if remaining[n].is_negative() {
            return Err(stuck(n, m, StuckReason::NegativeRemainder));
        }
        while remaining[n].is_positive() {
            if m >= count {
                return Err(stuck(n, m, StuckReason::ColumnsExhausted));
            }
            let lam = remaining[n];
            if lam >= Rational::ONE {
                place_singleton(&mut out, n, m, RadicalScalar::sqrt(Rational::ONE)?);
                remaining[n] = lam.checked_sub(Rational::ONE)?;
                m += 1;
                continue;
            }
            if n + 1 >= dim {
                return Err(stuck(n, m, StuckReason::NoRowBelow));
            }
            if m + 1 >= count {
                return Err(stuck(n, m, StuckReason::NoSecondColumn));
            }
            let top = RadicalScalar::sqrt(lam.checked_div(Rational::TWO)?)?;
            let bottom =
                RadicalScalar::sqrt(Rational::ONE.checked_sub(lam.checked_div(Rational::TWO)?)?)?;
            place_block(&mut out, n, m, &[[top, top], [bottom, -bottom]]);
            remaining[n + 1] = remaining[n + 1].checked_sub(Rational::TWO.checked_sub(lam)?)?;
            if remaining[n + 1].is_negative() {
                return Err(stuck(n + 1, m + 2, StuckReason::NegativeRemainder));
            }
            remaining[n] = Rational::ZERO;
            m += 2;
        }
    }
    Ok(out)
}
