//! Checks that a synthesis matrix has the frame operator it claims.
//!
//! Row and column square sums are always exact: they are sums of radicands.
//! Orthogonality of two rows is decided either exactly, by canonicalizing
//! each product `±√(r·s)` to `c·√q` with `q` squarefree and requiring every
//! group of equal `q` to cancel, or in floating point.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::SynthesisMatrix;
use crate::readiness::FrameSpec;
use crate::scalar::{RadicalScalar, Rational, ScalarError, DEFAULT_FACTOR_BOUND};

/// Default tolerance for floating-point orthogonality.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "tolerance")]
pub enum VerifyMode {
    Exact,
    /// `|⟨r_i, r_j⟩| ≤ tol · ‖r_i‖ · ‖r_j‖`.
    Float(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub row_square_sums: Vec<Rational>,
    pub col_square_sums: Vec<Rational>,
    pub orthogonal: bool,
    pub mode: VerifyMode,
    pub nnz: usize,
    pub max_per_column: usize,
    /// `(min, max)` of the row sums; present only when the rows are
    /// orthogonal, so that the frame operator is diagonal.
    pub frame_bounds: Option<(Rational, Rational)>,
    /// Row sums, column sums and orthogonality all match the spec.
    pub matches_spec: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("row {0} is zero, so the vectors do not span")]
    ZeroRow(usize),
    #[error("matrix has no rows or no columns")]
    Empty,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// `(nnz, largest number of nonzeros in one column)`.
pub fn sparsity(f: &SynthesisMatrix) -> (usize, usize) {
    let mut per_col = vec![0usize; f.count()];
    for (_, c, _) in f.entries() {
        per_col[c] += 1;
    }
    (f.nnz(), per_col.into_iter().max().unwrap_or(0))
}

fn rows_of(f: &SynthesisMatrix) -> Vec<Vec<(usize, RadicalScalar)>> {
    (0..f.dim()).map(|r| f.row(r)).collect()
}

/// Exact inner product test of two sparse rows.
fn rows_cancel(
    a: &[(usize, RadicalScalar)],
    b: &[(usize, RadicalScalar)],
    factor_bound: u128,
) -> Result<bool, ScalarError> {
    // Raw radicands first: every product from one constructor block shares one.
    let mut raw: BTreeMap<Rational, Rational> = BTreeMap::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let p = a[i].1.checked_mul(b[j].1)?;
                let slot = raw.entry(p.radicand()).or_insert(Rational::ZERO);
                *slot = slot.checked_add(Rational::from(i32::from(p.sign())))?;
                i += 1;
                j += 1;
            }
        }
    }
    raw.retain(|_, count| !count.is_zero());
    if raw.is_empty() {
        return Ok(true);
    }
    let mut grouped: BTreeMap<u128, Rational> = BTreeMap::new();
    for (radicand, count) in raw {
        let c = RadicalScalar::sqrt(radicand)?.canonicalize(factor_bound)?;
        let slot = grouped.entry(c.squarefree).or_insert(Rational::ZERO);
        *slot = slot.checked_add(c.coefficient.checked_mul(count)?)?;
    }
    Ok(grouped.values().all(Rational::is_zero))
}

fn dot_f64(a: &[(usize, RadicalScalar)], b: &[(usize, RadicalScalar)]) -> f64 {
    let mut out = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out += a[i].1.to_f64() * b[j].1.to_f64();
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// [`verify_matrix_bounded`] with the default factorization bound.
pub fn verify_matrix(
    f: &SynthesisMatrix,
    spec: Option<&FrameSpec>,
    mode: VerifyMode,
) -> Result<VerificationReport, VerifyError> {
    verify_matrix_bounded(f, spec, mode, DEFAULT_FACTOR_BOUND)
}

/// Computes square sums, orthogonality, sparsity and frame bounds of `f`.
///
/// In exact mode a radicand that cannot be factored within `factor_bound`
/// surfaces as [`ScalarError::FactorizationIncomplete`]; float mode never
/// factors.
pub fn verify_matrix_bounded(
    f: &SynthesisMatrix,
    spec: Option<&FrameSpec>,
    mode: VerifyMode,
    factor_bound: u128,
) -> Result<VerificationReport, VerifyError> {
    if f.dim() == 0 || f.count() == 0 {
        return Err(VerifyError::Empty);
    }
    let rows = rows_of(f);
    let mut row_sums = Vec::with_capacity(f.dim());
    for (r, row) in rows.iter().enumerate() {
        if row.is_empty() {
            return Err(VerifyError::ZeroRow(r));
        }
        let sum = row
            .iter()
            .try_fold(Rational::ZERO, |acc, (_, v)| acc.checked_add(v.square()))?;
        row_sums.push(sum);
    }
    let mut col_sums = vec![Rational::ZERO; f.count()];
    for (_, c, v) in f.entries() {
        col_sums[c] = col_sums[c].checked_add(v.square())?;
    }

    let mut orthogonal = true;
    'pairs: for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let ok = match mode {
                VerifyMode::Exact => rows_cancel(&rows[i], &rows[j], factor_bound)?,
                VerifyMode::Float(tol) => {
                    let scale = (row_sums[i].to_f64() * row_sums[j].to_f64()).sqrt();
                    dot_f64(&rows[i], &rows[j]).abs() <= tol * scale
                }
            };
            if !ok {
                orthogonal = false;
                break 'pairs;
            }
        }
    }

    let frame_bounds = if orthogonal {
        let lo = *row_sums.iter().min().expect("nonempty");
        let hi = *row_sums.iter().max().expect("nonempty");
        Some((lo, hi))
    } else {
        None
    };
    let matches_spec = spec.map(|s| {
        orthogonal && row_sums.as_slice() == s.eigenvalues() && col_sums.as_slice() == s.norms_sq()
    });
    let (nnz, max_per_column) = sparsity(f);
    Ok(VerificationReport {
        row_square_sums: row_sums,
        col_square_sums: col_sums,
        orthogonal,
        mode,
        nnz,
        max_per_column,
        frame_bounds,
        matches_spec,
    })
}

/// Smallest and largest eigenvalue of `FF*`.
///
/// Exact row sums are used when the rows are exactly orthogonal; otherwise
/// the dense frame operator goes through a symmetric eigensolver, accurate
/// to about `1e-9` relative.
pub fn frame_bounds_float(f: &SynthesisMatrix) -> Result<(f64, f64), VerifyError> {
    match verify_matrix(f, None, VerifyMode::Exact) {
        Ok(VerificationReport {
            frame_bounds: Some((lo, hi)),
            ..
        }) => Ok((lo.to_f64(), hi.to_f64())),
        Ok(_) | Err(VerifyError::Scalar(_)) => Ok(eigen_extremes(&f.to_dense_f64())),
        Err(e) => Err(e),
    }
}

fn eigen_extremes(rows: &[Vec<f64>]) -> (f64, f64) {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    let f = DMatrix::from_fn(n, m, |r, c| rows[r][c]);
    let s = &f * f.transpose();
    let eig = SymmetricEigen::new(s).eigenvalues;
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Float verification of a dense matrix, e.g. one read from CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloatReport {
    pub row_square_sums: Vec<f64>,
    pub col_square_sums: Vec<f64>,
    pub orthogonal: bool,
    pub tolerance: f64,
    pub nnz: usize,
    pub max_per_column: usize,
    /// Extreme eigenvalues of `FF*`.
    pub frame_bounds: (f64, f64),
}

/// Verifies a dense row-major matrix in floating point.
///
/// Rows must all have the same length. Orthogonality uses the same
/// normalized test as [`VerifyMode::Float`].
pub fn verify_dense(rows: &[Vec<f64>], tol: f64) -> Result<FloatReport, VerifyError> {
    let m = rows.first().map_or(0, Vec::len);
    if m == 0 || rows.iter().any(|r| r.len() != m) {
        return Err(VerifyError::Empty);
    }
    let row_sums: Vec<f64> = rows.iter().map(|r| r.iter().map(|x| x * x).sum()).collect();
    if let Some(r) = row_sums.iter().position(|&s| s == 0.0) {
        return Err(VerifyError::ZeroRow(r));
    }
    let col_sums: Vec<f64> = (0..m)
        .map(|c| rows.iter().map(|r| r[c] * r[c]).sum())
        .collect();
    let mut orthogonal = true;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let dot: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            if dot.abs() > tol * (row_sums[i] * row_sums[j]).sqrt() {
                orthogonal = false;
            }
        }
    }
    let nnz = rows.iter().flatten().filter(|&&x| x != 0.0).count();
    let max_per_column = (0..m)
        .map(|c| rows.iter().filter(|r| r[c] != 0.0).count())
        .max()
        .unwrap_or(0);
    Ok(FloatReport {
        row_square_sums: row_sums,
        col_square_sums: col_sums,
        orthogonal,
        tolerance: tol,
        nnz,
        max_per_column,
        frame_bounds: eigen_extremes(rows),
    })
}
