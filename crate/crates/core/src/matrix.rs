//! Sparse synthesis matrices with exact radical entries.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::{RadicalScalar, Rational, ScalarError};

/// How a group of entries entered the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    /// One entry `a_m` placed alone in its column.
    Singleton,
    /// A full 2×2 block with four nonzero entries.
    Block2x2,
    /// A 2×2 block with at least one exactly-zero entry.
    DegenerateBlock,
}

/// One placement step. Spans are inclusive and 0-based.
///
/// For 2×2 kinds, the first row holds the *initial points* of the block and
/// the second row its *terminal points*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockRecord {
    pub kind: BlockKind,
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl BlockRecord {
    pub fn is_block(&self) -> bool {
        self.kind != BlockKind::Singleton
    }

    fn shifted(&self, dr: usize, dc: usize) -> Self {
        BlockRecord {
            kind: self.kind,
            rows: (self.rows.0 + dr, self.rows.1 + dr),
            cols: (self.cols.0 + dc, self.cols.1 + dc),
        }
    }
}

/// An `N × M` matrix whose `m`-th column is the `m`-th frame vector.
///
/// Only nonzero entries are stored. Matrices produced by the constructors
/// also carry the log of placement steps that produced them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthesisMatrix {
    dim: usize,
    count: usize,
    entries: BTreeMap<(usize, usize), RadicalScalar>,
    block_log: Vec<BlockRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("entry ({row}, {col}) is outside a {dim}x{count} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        dim: usize,
        count: usize,
    },
    #[error("entry ({row}, {col}) given twice")]
    Duplicate { row: usize, col: usize },
    #[error("explicit zero at ({row}, {col})")]
    ExplicitZero { row: usize, col: usize },
}

impl SynthesisMatrix {
    pub fn zeros(dim: usize, count: usize) -> Self {
        SynthesisMatrix {
            dim,
            count,
            entries: BTreeMap::new(),
            block_log: Vec::new(),
        }
    }

    /// Assembles a matrix from explicit `(row, col, value)` triples.
    pub fn from_entries(
        dim: usize,
        count: usize,
        entries: impl IntoIterator<Item = (usize, usize, RadicalScalar)>,
        block_log: Vec<BlockRecord>,
    ) -> Result<Self, MatrixError> {
        let mut out = Self::zeros(dim, count);
        for (row, col, value) in entries {
            if row >= dim || col >= count {
                return Err(MatrixError::OutOfBounds {
                    row,
                    col,
                    dim,
                    count,
                });
            }
            if value.is_zero() {
                return Err(MatrixError::ExplicitZero { row, col });
            }
            if out.entries.insert((row, col), value).is_some() {
                return Err(MatrixError::Duplicate { row, col });
            }
        }
        out.block_log = block_log;
        Ok(out)
    }

    /// Number of rows `N`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of columns `M`.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn get(&self, row: usize, col: usize) -> RadicalScalar {
        self.entries
            .get(&(row, col))
            .copied()
            .unwrap_or(RadicalScalar::ZERO)
    }

    /// Stores `value`, dropping exact zeros.
    pub(crate) fn set(&mut self, row: usize, col: usize, value: RadicalScalar) {
        debug_assert!(row < self.dim && col < self.count);
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub(crate) fn log(&mut self, record: BlockRecord) {
        self.block_log.push(record);
    }

    pub fn block_log(&self) -> &[BlockRecord] {
        &self.block_log
    }

    /// Nonzero entries in `(row, col)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, RadicalScalar)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    /// Nonzero entries sorted by column, then row.
    pub fn entries_by_column(&self) -> Vec<(usize, usize, RadicalScalar)> {
        let mut v: Vec<_> = self.entries().collect();
        v.sort_by_key(|&(r, c, _)| (c, r));
        v
    }

    /// Nonzero `(col, value)` pairs of one row.
    pub fn row(&self, row: usize) -> Vec<(usize, RadicalScalar)> {
        self.entries
            .range((row, 0)..(row + 1, 0))
            .map(|(&(_, c), &v)| (c, v))
            .collect()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense_f64(&self) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.count]; self.dim];
        for (r, c, v) in self.entries() {
            out[r][c] = v.to_f64();
        }
        out
    }

    /// Multiplies every entry by `sqrt(factor)`.
    pub fn scaled_by_sqrt(&self, factor: Rational) -> Result<Self, ScalarError> {
        let mut out = Self::zeros(self.dim, self.count);
        for (r, c, v) in self.entries() {
            out.set(r, c, v.scale_by_sqrt(factor)?);
        }
        out.block_log = self.block_log.clone();
        Ok(out)
    }

    /// Block-diagonal matrix of `copies` copies of `self`.
    pub fn block_diagonal(&self, copies: usize) -> Self {
        let mut out = Self::zeros(self.dim * copies, self.count * copies);
        for p in 0..copies {
            let (dr, dc) = (p * self.dim, p * self.count);
            for (r, c, v) in self.entries() {
                out.set(r + dr, c + dc, v);
            }
            out.block_log
                .extend(self.block_log.iter().map(|b| b.shifted(dr, dc)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rad(s: i8, r: &str) -> RadicalScalar {
        RadicalScalar::new(s, r.parse().unwrap()).unwrap()
    }

    #[test]
    fn rows_and_columns() {
        let m = SynthesisMatrix::from_entries(
            2,
            3,
            [
                (0, 0, rad(1, "1")),
                (1, 2, rad(-1, "2")),
                (0, 2, rad(1, "3")),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(m.row(0), vec![(0, rad(1, "1")), (2, rad(1, "3"))]);
        assert_eq!(m.get(1, 1), RadicalScalar::ZERO);
        let cols: Vec<_> = m.entries_by_column().iter().map(|e| (e.0, e.1)).collect();
        assert_eq!(cols, vec![(0, 0), (0, 2), (1, 2)]);
    }

    #[test]
    fn import_rejects_bad_entries() {
        assert!(matches!(
            SynthesisMatrix::from_entries(1, 1, [(0, 1, rad(1, "1"))], vec![]),
            Err(MatrixError::OutOfBounds { .. })
        ));
        assert!(matches!(
            SynthesisMatrix::from_entries(1, 1, [(0, 0, RadicalScalar::ZERO)], vec![]),
            Err(MatrixError::ExplicitZero { .. })
        ));
        assert!(matches!(
            SynthesisMatrix::from_entries(1, 1, [(0, 0, rad(1, "1")), (0, 0, rad(1, "2"))], vec![]),
            Err(MatrixError::Duplicate { .. })
        ));
    }

    #[test]
    fn block_diagonal_copies() {
        let m = SynthesisMatrix::from_entries(
            1,
            2,
            [(0, 0, rad(1, "1")), (0, 1, rad(1, "1"))],
            vec![BlockRecord {
                kind: BlockKind::Singleton,
                rows: (0, 0),
                cols: (0, 0),
            }],
        )
        .unwrap();
        let d = m.block_diagonal(2);
        assert_eq!((d.dim(), d.count(), d.nnz()), (2, 4, 4));
        assert_eq!(d.get(1, 3), rad(1, "1"));
        assert_eq!(d.get(0, 3), RadicalScalar::ZERO);
        assert_eq!(d.block_log()[1].cols, (2, 2));
    }
}
