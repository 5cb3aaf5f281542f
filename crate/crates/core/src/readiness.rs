//! Exact feasibility tests for Spectral Tetris.
//!
//! Given an ordered eigenvalue sequence `λ₁, …, λ_N` and an ordered sequence
//! of squared norms `a₁², …, a_M²`, the sequences are *ready* when their
//! totals agree and the cut points
//!
//! ```text
//! m_k = max { m : a₁² + … + a_m² ≤ λ₁ + … + λ_k }     (k < N),   m_N = M
//! ```
//!
//! satisfy, for every `k < N` with a positive deficit
//! `d_k = (λ₁ + … + λ_k) − (a₁² + … + a_{m_k}²)`:
//!
//! * `m_{k+1} − m_k ≥ 2` (the 2×2 block closing row `k` fits before row
//!   `k + 1` is full), and
//! * `a²_{m_k+2} ≥ d_k` (that block exists).
//!
//! Because every `a_m²` is positive the cut points are forced, so readiness
//! of fixed orderings is one linear scan.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Rational, ScalarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadinessError {
    #[error("trace mismatch: eigenvalues sum to {eigenvalues}, squared norms sum to {norms}")]
    TraceMismatch {
        eigenvalues: Rational,
        norms: Rational,
    },
    #[error("{0} must be sorted")]
    NotSorted(&'static str),
    #[error("invalid frame spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Target spectrum and squared column norms, both in the order they will be
/// fed to the constructor.
///
/// Construction checks positivity and caches prefix sums with overflow
/// checking. The trace identity `Σ a_m² = Σ λ_n` is *not* enforced here;
/// [`FrameSpec::trace_holds`] reports it and every operation that needs it
/// checks it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameSpec {
    eigenvalues: Vec<Rational>,
    norms_sq: Vec<Rational>,
    eig_prefix: Vec<Rational>,
    norm_prefix: Vec<Rational>,
}

impl FrameSpec {
    pub fn new(
        eigenvalues: Vec<Rational>,
        norms_sq: Vec<Rational>,
    ) -> Result<Self, ReadinessError> {
        if eigenvalues.is_empty() {
            return Err(ReadinessError::InvalidSpec("no eigenvalues".into()));
        }
        if norms_sq.is_empty() {
            return Err(ReadinessError::InvalidSpec("no frame vectors".into()));
        }
        if let Some(v) = eigenvalues.iter().find(|v| !v.is_positive()) {
            return Err(ReadinessError::InvalidSpec(format!(
                "eigenvalue {v} is not positive"
            )));
        }
        if let Some(v) = norms_sq.iter().find(|v| !v.is_positive()) {
            return Err(ReadinessError::InvalidSpec(format!(
                "squared norm {v} is not positive"
            )));
        }
        let eig_prefix = prefix_sums(&eigenvalues)?;
        let norm_prefix = prefix_sums(&norms_sq)?;
        Ok(FrameSpec {
            eigenvalues,
            norms_sq,
            eig_prefix,
            norm_prefix,
        })
    }

    /// All `count` vectors of unit norm.
    pub fn unit(eigenvalues: Vec<Rational>, count: usize) -> Result<Self, ReadinessError> {
        Self::new(eigenvalues, vec![Rational::ONE; count])
    }

    /// `dim` copies of `λ = Σ a_m² / dim`.
    pub fn tight(norms_sq: Vec<Rational>, dim: usize) -> Result<Self, ReadinessError> {
        if dim == 0 {
            return Err(ReadinessError::InvalidSpec(
                "dimension must be positive".into(),
            ));
        }
        let total = Rational::checked_sum(&norms_sq)?;
        let lambda = total.checked_div(Rational::from(dim))?;
        Self::new(vec![lambda; dim], norms_sq)
    }

    /// Dimension `N`.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Number of frame vectors `M`.
    pub fn count(&self) -> usize {
        self.norms_sq.len()
    }

    pub fn eigenvalues(&self) -> &[Rational] {
        &self.eigenvalues
    }

    pub fn norms_sq(&self) -> &[Rational] {
        &self.norms_sq
    }

    /// `λ₁ + … + λ_k`; `k = 0` gives zero.
    pub fn eigen_prefix(&self, k: usize) -> Rational {
        self.eig_prefix[k]
    }

    /// `a₁² + … + a_m²`; `m = 0` gives zero.
    pub fn norm_prefix(&self, m: usize) -> Rational {
        self.norm_prefix[m]
    }

    pub fn eigen_total(&self) -> Rational {
        self.eig_prefix[self.dim()]
    }

    pub fn norm_total(&self) -> Rational {
        self.norm_prefix[self.count()]
    }

    pub fn trace_holds(&self) -> bool {
        self.eigen_total() == self.norm_total()
    }

    pub(crate) fn check_trace(&self) -> Result<(), ReadinessError> {
        if self.trace_holds() {
            Ok(())
        } else {
            Err(ReadinessError::TraceMismatch {
                eigenvalues: self.eigen_total(),
                norms: self.norm_total(),
            })
        }
    }
}

fn prefix_sums(values: &[Rational]) -> Result<Vec<Rational>, ScalarError> {
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(Rational::ZERO);
    let mut acc = Rational::ZERO;
    for v in values {
        acc = acc.checked_add(*v)?;
        out.push(acc);
    }
    Ok(out)
}

/// The cut points `m_1 ≤ … ≤ m_N = M`, stored as column counts.
///
/// `cuts[k-1]` is the number of leading columns whose squared norms fit
/// inside `λ₁ + … + λ_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub cuts: Vec<usize>,
}

/// Which readiness condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReadinessCondition {
    /// Eigenvalue and squared-norm totals differ.
    TraceMismatch,
    /// The cumulative spectrum through row `k` already covers every column.
    UpperBoundI,
    /// Row `k` needs a closing 2×2 block but row `k + 1` fills up before the
    /// block's second column (`m_{k+1} − m_k < 2`).
    GapII,
    /// The block closing row `k` does not exist: `a²_{m_k+2}` is below the deficit.
    NormBoundII,
}

/// First failed condition. `k` is the 1-based row after which it fails
/// (`0` for a trace mismatch).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    pub k: usize,
    pub condition: ReadinessCondition,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReadinessReport {
    pub ready: bool,
    pub partition: Option<Partition>,
    pub violation: Option<Violation>,
}

impl ReadinessReport {
    fn ready(partition: Partition) -> Self {
        ReadinessReport {
            ready: true,
            partition: Some(partition),
            violation: None,
        }
    }

    fn failed(partition: Option<Partition>, k: usize, condition: ReadinessCondition) -> Self {
        ReadinessReport {
            ready: false,
            partition,
            violation: Some(Violation { k, condition }),
        }
    }
}

/// Forced cut points for the given orderings.
pub fn forced_partition(spec: &FrameSpec) -> Result<Partition, ReadinessError> {
    spec.check_trace()?;
    let (n, m_total) = (spec.dim(), spec.count());
    let mut cuts = Vec::with_capacity(n);
    let mut m = 0;
    for k in 1..n {
        let target = spec.eigen_prefix(k);
        while m < m_total && spec.norm_prefix(m + 1) <= target {
            m += 1;
        }
        cuts.push(m);
    }
    cuts.push(m_total);
    Ok(Partition { cuts })
}

/// Decides readiness of the sequences in their given order.
pub fn check_ready(spec: &FrameSpec) -> ReadinessReport {
    let partition = match forced_partition(spec) {
        Ok(p) => p,
        Err(_) => return ReadinessReport::failed(None, 0, ReadinessCondition::TraceMismatch),
    };
    let m_total = spec.count();
    let cuts = &partition.cuts;
    for k in 1..spec.dim() {
        let mk = cuts[k - 1];
        let target = spec.eigen_prefix(k);
        if mk == m_total {
            return ReadinessReport::failed(Some(partition), k, ReadinessCondition::UpperBoundI);
        }
        let deficit = target - spec.norm_prefix(mk);
        if deficit.is_zero() {
            continue;
        }
        if cuts[k] < mk + 2 {
            return ReadinessReport::failed(Some(partition), k, ReadinessCondition::GapII);
        }
        // a²_{m_k+2} in 1-based indexing.
        if spec.norms_sq()[mk + 1] < deficit {
            return ReadinessReport::failed(Some(partition), k, ReadinessCondition::NormBoundII);
        }
    }
    ReadinessReport::ready(partition)
}

fn is_sorted_by(values: &[Rational], ok: impl Fn(&Rational, &Rational) -> bool) -> bool {
    values.windows(2).all(|w| ok(&w[0], &w[1]))
}

/// Easily checked sufficient condition for increasing sequences:
/// `a²_{M−2ℓ} + a²_{M−2ℓ−1} ≤ λ_{N−ℓ}` for `ℓ = 0, …, N−1`.
///
/// An `ℓ` whose lower index falls below 1 imposes nothing.
pub fn easy_sufficient(spec: &FrameSpec) -> Result<bool, ReadinessError> {
    if !is_sorted_by(spec.eigenvalues(), |a, b| a <= b) {
        return Err(ReadinessError::NotSorted("eigenvalues (increasing)"));
    }
    if !is_sorted_by(spec.norms_sq(), |a, b| a <= b) {
        return Err(ReadinessError::NotSorted("squared norms (increasing)"));
    }
    if !spec.trace_holds() {
        return Ok(false);
    }
    let (n, m) = (spec.dim(), spec.count());
    let a = spec.norms_sq();
    let lam = spec.eigenvalues();
    for l in 0..n {
        // 1-based indices M−2ℓ and M−2ℓ−1.
        if m < 2 * l + 2 {
            continue;
        }
        let hi = m - 2 * l;
        let pair = a[hi - 1].checked_add(a[hi - 2])?;
        if pair > lam[n - l - 1] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The test `a₁² + a₂² ≤ λ`, `λ = Σ a_m² / N`, for decreasing squared norms.
///
/// This is often cited as sufficient for a tight frame, but it is not:
/// `(3, 3, 3, 2, 2, 2, 2)` in `R²` passes (`6 ≤ 17/2`) while row 1 is left
/// needing `5/2` and the next two columns, 3 and 2, lie on opposite sides of
/// it. Use [`tight_ready`] for the actual answer.
pub fn tight_sufficient(norms_sq: &[Rational], dim: usize) -> Result<bool, ReadinessError> {
    if dim == 0 || norms_sq.is_empty() {
        return Err(ReadinessError::InvalidSpec(
            "empty dimension or norm list".into(),
        ));
    }
    if !is_sorted_by(norms_sq, |a, b| a >= b) {
        return Err(ReadinessError::NotSorted("squared norms (decreasing)"));
    }
    let lambda = Rational::checked_sum(norms_sq)?.checked_div(Rational::from(dim))?;
    let top = match norms_sq {
        [a] => *a,
        [a, b, ..] => a.checked_add(*b)?,
        [] => unreachable!(),
    };
    Ok(top <= lambda)
}

/// Readiness of `norms_sq` against the constant spectrum `Σ a_m² / N`.
pub fn tight_ready(norms_sq: &[Rational], dim: usize) -> Result<ReadinessReport, ReadinessError> {
    let spec = FrameSpec::tight(norms_sq.to_vec(), dim)?;
    Ok(check_ready(&spec))
}

/// Readiness of a spectrum for `count` unit-norm vectors.
///
/// With unit norms the block-existence requirement is automatic (the deficit
/// is below 1), so only the cut and gap conditions can fail.
pub fn unit_ready(
    eigenvalues: &[Rational],
    count: usize,
) -> Result<ReadinessReport, ReadinessError> {
    let spec = FrameSpec::unit(eigenvalues.to_vec(), count)?;
    spec.check_trace()?;
    Ok(check_ready(&spec))
}

/// Whether `eigenvalues` majorizes `norms_sq`: sorted decreasing, every
/// partial sum of the spectrum dominates the matching partial sum of squared
/// norms, and the totals agree.
///
/// This is the existence test for *some* frame with these parameters,
/// independent of how it is constructed.
pub fn majorizes(eigenvalues: &[Rational], norms_sq: &[Rational]) -> bool {
    let mut lam = eigenvalues.to_vec();
    let mut a = norms_sq.to_vec();
    lam.sort_by(|x, y| y.cmp(x));
    a.sort_by(|x, y| y.cmp(x));
    let (Ok(lam_total), Ok(a_total)) = (Rational::checked_sum(&lam), Rational::checked_sum(&a))
    else {
        return false;
    };
    if lam_total != a_total {
        return false;
    }
    let (mut sl, mut sa) = (Rational::ZERO, Rational::ZERO);
    for (n, l) in lam.iter().enumerate() {
        sl = sl + *l;
        if let Some(v) = a.get(n) {
            sa = sa + *v;
        }
        if sa > sl {
            return false;
        }
    }
    true
}
