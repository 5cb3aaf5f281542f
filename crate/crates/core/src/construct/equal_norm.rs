//! Equal-norm frames for an arbitrary decreasing spectrum.
//!
//! Rescale the spectrum to `λ̃_n = r²·λ_n / Σλ` with `r` large enough that
//! every `λ̃_n ≥ 2` and `λ̃_1 ≤ r² − 3`, build `r²` unit vectors with that
//! spectrum, then shrink every vector by `√(Σλ)/r`.

use num_integer::Roots;

use super::{stc, ConstructError};
use crate::matrix::SynthesisMatrix;
use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EqualNormFrame {
    /// `r²` is the number of vectors.
    pub r: u64,
    /// Common squared norm `Σλ / r²`.
    pub norm_sq: Rational,
    pub matrix: SynthesisMatrix,
}

/// Smallest `r` with `r²·λ_N/Σλ ≥ 2` and `r²·(1 − λ₁/Σλ) ≥ 3`.
pub fn minimal_equal_norm_r(eigenvalues: &[Rational]) -> Result<u64, ConstructError> {
    let (total, eps) = check_spectrum(eigenvalues)?;
    let last = *eigenvalues.last().expect("checked nonempty");
    let need_tail = Rational::TWO.checked_mul(total)?.checked_div(last)?;
    let need_eps = Rational::integer(3).checked_div(eps)?;
    let need = need_tail.max(need_eps);
    // Smallest integer square at or above `need`.
    let ceil = need.floor() + i128::from(!need.is_integer());
    let mut r = (ceil.max(1) as u128).sqrt();
    while r * r < ceil as u128 {
        r += 1;
    }
    u64::try_from(r)
        .map_err(|_| ConstructError::Scalar(crate::scalar::ScalarError::IntegerOverflow))
}

/// Total `Σλ` and `ε = 1 − λ₁/Σλ`, after validating the input.
fn check_spectrum(eigenvalues: &[Rational]) -> Result<(Rational, Rational), ConstructError> {
    if eigenvalues.len() < 2 {
        return Err(ConstructError::DegenerateSpectrum(
            "need at least two eigenvalues".into(),
        ));
    }
    if eigenvalues.iter().any(|v| !v.is_positive()) {
        return Err(ConstructError::InvalidSpec(
            "eigenvalues must be positive".into(),
        ));
    }
    if eigenvalues.windows(2).any(|w| w[0] < w[1]) {
        return Err(ConstructError::NotSorted("eigenvalues (decreasing)"));
    }
    let total = Rational::checked_sum(eigenvalues)?;
    let eps = Rational::ONE.checked_sub(eigenvalues[0].checked_div(total)?)?;
    if !eps.is_positive() {
        return Err(ConstructError::DegenerateSpectrum(
            "largest eigenvalue carries the whole trace".into(),
        ));
    }
    Ok((total, eps))
}

/// Builds `r²` vectors of equal squared norm `Σλ/r²` whose frame operator is
/// `diag(λ)`. `r` defaults to [`minimal_equal_norm_r`]; an explicit `r` is
/// used as given and fails if the rescaled spectrum is not constructible.
pub fn equal_norm_frame(
    eigenvalues: &[Rational],
    r_override: Option<u64>,
) -> Result<EqualNormFrame, ConstructError> {
    let (total, _) = check_spectrum(eigenvalues)?;
    let r = match r_override {
        Some(0) => return Err(ConstructError::InvalidDims("r must be positive".into())),
        Some(r) => r,
        None => minimal_equal_norm_r(eigenvalues)?,
    };
    let count = usize::try_from(u128::from(r) * u128::from(r))
        .map_err(|_| ConstructError::InvalidDims("r² does not fit in memory".into()))?;
    let r_sq = Rational::from(count);
    let scale = r_sq.checked_div(total)?;
    let rescaled = eigenvalues
        .iter()
        .map(|l| l.checked_mul(scale))
        .collect::<Result<Vec<_>, _>>()?;
    let unit = stc(&rescaled, count)?;
    let norm_sq = total.checked_div(r_sq)?;
    let matrix = unit.scaled_by_sqrt(norm_sq)?;
    Ok(EqualNormFrame { r, norm_sq, matrix })
}
