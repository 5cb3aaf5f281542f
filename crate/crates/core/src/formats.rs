//! JSON file formats for frame specs and synthesis matrices.
//!
//! Output is canonical: object keys sorted, two-space indentation, one
//! trailing newline, no timestamps. The only field that varies between
//! builds is `metadata.generator`, which can be left out.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{BlockRecord, MatrixError, SynthesisMatrix};
use crate::readiness::{FrameSpec, ReadinessError};
use crate::scalar::{RadicalScalar, Rational, RationalParts, ScalarError};

/// Largest denominator used when a decimal norm is squared and rounded.
pub const DECIMAL_NORM_MAX_DEN: i128 = 1_000_000;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Readiness(#[from] ReadinessError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Input description of a frame: a spectrum plus exactly one way of giving
/// the norms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub dim: usize,
    pub eigenvalues: Vec<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms_squared: Option<Vec<Rational>>,
    /// Decimal norms, squared and rounded to a nearby rational.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<Vec<String>>,
    /// All norms 1; the number of vectors is the trace.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<bool>,
}

impl SpecFile {
    pub fn from_json_str(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn new(eigenvalues: Vec<Rational>, norms_squared: Vec<Rational>) -> Self {
        SpecFile {
            dim: eigenvalues.len(),
            eigenvalues,
            norms_squared: Some(norms_squared),
            norms: None,
            unit: None,
        }
    }

    /// Resolves the norms and builds a [`FrameSpec`]. Lossy conversions
    /// are reported in the returned warnings.
    pub fn to_frame_spec(&self) -> Result<(FrameSpec, Vec<String>), FormatError> {
        if self.dim != self.eigenvalues.len() {
            return Err(FormatError::Invalid(format!(
                "dim is {} but {} eigenvalues were given",
                self.dim,
                self.eigenvalues.len()
            )));
        }
        let unit = self.unit.unwrap_or(false);
        let given = [self.norms_squared.is_some(), self.norms.is_some(), unit];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(FormatError::Invalid(
                "give exactly one of norms_squared, norms, unit".into(),
            ));
        }
        let mut warnings = Vec::new();
        let norms_sq = if let Some(n) = &self.norms_squared {
            n.clone()
        } else if let Some(decimals) = &self.norms {
            let mut out = Vec::with_capacity(decimals.len());
            for d in decimals {
                let exact = Rational::from_decimal_str(d)?;
                let sq = exact.checked_mul(exact)?;
                let rounded = sq.nearest_with_denominator(DECIMAL_NORM_MAX_DEN)?;
                if rounded != sq || !sq.is_integer() {
                    warnings.push(format!("norm {d} squared to {rounded} (approximate)"));
                }
                out.push(rounded);
            }
            out
        } else {
            let total = Rational::checked_sum(&self.eigenvalues)?;
            if !total.is_integer() || total.is_negative() {
                return Err(FormatError::Invalid(format!(
                    "unit norms need an integer trace, got {total}"
                )));
            }
            vec![Rational::ONE; total.floor() as usize]
        };
        Ok((
            FrameSpec::new(self.eigenvalues.clone(), norms_sq)?,
            warnings,
        ))
    }

    pub fn to_json_string(&self) -> Result<String, FormatError> {
        canonical_json(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub version: String,
}

impl Generator {
    /// This library's name and version.
    pub fn current() -> Self {
        Generator {
            name: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixEntry {
    pub row: usize,
    pub col: usize,
    pub sign: i8,
    pub rad: RationalParts,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvalues: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms_squared: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    #[serde(rename = "blockLog", default)]
    pub block_log: Vec<BlockRecord>,
}

/// Serialized synthesis matrix. Entries are sorted by `(col, row)` and
/// never zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub dim: usize,
    pub count: usize,
    pub entries: Vec<MatrixEntry>,
    #[serde(default)]
    pub metadata: Metadata,
}

impl MatrixFile {
    pub fn from_matrix(
        f: &SynthesisMatrix,
        spec: Option<&FrameSpec>,
        generator: Option<Generator>,
    ) -> Self {
        let entries = f
            .entries_by_column()
            .into_iter()
            .map(|(row, col, v)| MatrixEntry {
                row,
                col,
                sign: v.sign(),
                rad: v.radicand().into(),
            })
            .collect();
        MatrixFile {
            dim: f.dim(),
            count: f.count(),
            entries,
            metadata: Metadata {
                eigenvalues: spec.map(|s| s.eigenvalues().to_vec()),
                norms_squared: spec.map(|s| s.norms_sq().to_vec()),
                generator,
                block_log: f.block_log().to_vec(),
            },
        }
    }

    /// Rebuilds the matrix, rejecting unsorted, zero, duplicate or
    /// out-of-range entries.
    pub fn to_matrix(&self) -> Result<SynthesisMatrix, FormatError> {
        if self
            .entries
            .windows(2)
            .any(|w| (w[0].col, w[0].row) >= (w[1].col, w[1].row))
        {
            return Err(FormatError::Invalid(
                "entries must be strictly sorted by (col, row)".into(),
            ));
        }
        let mut triples = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            let rad = Rational::try_from(e.rad)?;
            if e.sign == 0 || rad.is_zero() {
                return Err(MatrixError::ExplicitZero {
                    row: e.row,
                    col: e.col,
                }
                .into());
            }
            triples.push((e.row, e.col, RadicalScalar::new(e.sign, rad)?));
        }
        Ok(SynthesisMatrix::from_entries(
            self.dim,
            self.count,
            triples,
            self.metadata.block_log.clone(),
        )?)
    }

    /// The spec recorded in the metadata, if both sides are present.
    pub fn spec(&self) -> Result<Option<FrameSpec>, FormatError> {
        match (&self.metadata.eigenvalues, &self.metadata.norms_squared) {
            (Some(e), Some(n)) => Ok(Some(FrameSpec::new(e.clone(), n.clone())?)),
            _ => Ok(None),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json_string(&self) -> Result<String, FormatError> {
        canonical_json(self)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String, FormatError> {
    // `Value` objects are BTreeMaps, so a round trip through it sorts keys.
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
