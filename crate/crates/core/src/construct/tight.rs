//! Unit-norm tight frames: when Spectral Tetris works, and the construction.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{stc, ConstructError};
use crate::matrix::SynthesisMatrix;
use crate::scalar::Rational;

/// Outcome of the closed-form feasibility test for `M` unit vectors in `R^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitTightVerdict {
    pub feasible: bool,
    /// `M/N` in lowest terms.
    pub reduced: (u64, u64),
    /// `L` with `M/N = (2L − 1)/L`, when the redundancy has that form.
    pub witness_l: Option<u64>,
    /// Smallest `k` violating the per-row inequality, for infeasible inputs.
    pub failing_k: Option<usize>,
}

/// Spectral Tetris builds a unit-norm tight frame of `M` vectors in `R^N` iff
/// `λ = M/N ≥ 2` or `λ` reduces to `(2L − 1)/L`.
pub fn unit_tight_feasible(count: usize, dim: usize) -> Result<UnitTightVerdict, ConstructError> {
    if dim == 0 || count < dim {
        return Err(ConstructError::InvalidDims(format!(
            "need M >= N >= 1, got M={count}, N={dim}"
        )));
    }
    let g = count.gcd(&dim);
    let (p, q) = ((count / g) as u64, (dim / g) as u64);
    let mut verdict = UnitTightVerdict {
        feasible: false,
        reduced: (p, q),
        witness_l: None,
        failing_k: None,
    };
    if p >= 2 * q {
        verdict.feasible = true;
    } else if p == 2 * q - 1 {
        verdict.feasible = true;
        verdict.witness_l = Some(q);
    } else {
        verdict.failing_k = k_inequality_scan(count, dim)?;
    }
    Ok(verdict)
}

/// Smallest `k ∈ 1..N` with `kλ` not an integer and `⌊kλ⌋ > (k + 1)λ − 2`,
/// where `λ = M/N` and `N < M < 2N`.
///
/// `None` means every row transition of the unit-norm construction succeeds.
pub fn k_inequality_scan(count: usize, dim: usize) -> Result<Option<usize>, ConstructError> {
    if !(dim < count && count < 2 * dim) {
        return Err(ConstructError::OutOfRange { count, dim });
    }
    let lambda = Rational::new(count as i128, dim as i128)?;
    for k in 1..dim {
        let k_lambda = lambda.checked_mul(Rational::from(k))?;
        if k_lambda.is_integer() {
            continue;
        }
        let floor = Rational::integer(k_lambda.floor());
        let bound = lambda
            .checked_mul(Rational::from(k + 1))?
            .checked_sub(Rational::TWO)?;
        if floor > bound {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Unit-norm tight frame of `M` vectors in `R^N`.
///
/// With `P = gcd(M, N) > 1` the result is `P` diagonal copies of the frame for
/// `M/P` vectors in `R^{N/P}`; the coprime core comes from [`stc`] on the
/// constant spectrum `M/N`.
pub fn unit_tight(count: usize, dim: usize) -> Result<SynthesisMatrix, ConstructError> {
    if !unit_tight_feasible(count, dim)?.feasible {
        return Err(ConstructError::Infeasible { count, dim });
    }
    let p = count.gcd(&dim);
    let (m, n) = (count / p, dim / p);
    let lambda = Rational::new(m as i128, n as i128)?;
    let core = stc(&vec![lambda; n], m)?;
    Ok(if p > 1 { core.block_diagonal(p) } else { core })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Floating-point-free oracle: evaluate the inequality in integers,
    /// `⌊kM/N⌋·N ≤ (k+1)M − 2N` whenever `N ∤ kM`.
    fn scan_oracle(m: usize, n: usize) -> Option<usize> {
        (1..n).find(|&k| !(k * m).is_multiple_of(n) && ((k * m) / n) * n + 2 * n > (k + 1) * m)
    }

    #[test]
    fn scan_examples() {
        assert_eq!(k_inequality_scan(13, 8).unwrap(), Some(2));
        assert_eq!(scan_oracle(13, 8), Some(2));
        assert_eq!(k_inequality_scan(3, 2).unwrap(), None);
        assert_eq!(k_inequality_scan(7, 4).unwrap(), None);
        assert!(matches!(
            k_inequality_scan(8, 4),
            Err(ConstructError::OutOfRange { .. })
        ));
        assert!(matches!(
            k_inequality_scan(4, 4),
            Err(ConstructError::OutOfRange { .. })
        ));
    }

    #[test]
    fn scan_matches_integer_oracle() {
        for n in 2..=40 {
            for m in n + 1..2 * n {
                assert_eq!(
                    k_inequality_scan(m, n).unwrap(),
                    scan_oracle(m, n),
                    "M={m} N={n}"
                );
            }
        }
    }

    #[test]
    fn feasibility_examples() {
        let v = unit_tight_feasible(12, 8).unwrap();
        assert!(v.feasible);
        assert_eq!((v.reduced, v.witness_l), ((3, 2), Some(2)));
        let v = unit_tight_feasible(13, 8).unwrap();
        assert!(!v.feasible);
        assert_eq!(v.failing_k, Some(2));
        let v = unit_tight_feasible(16, 8).unwrap();
        assert!(v.feasible);
        assert_eq!(v.witness_l, None);
        let v = unit_tight_feasible(5, 5).unwrap();
        assert!(v.feasible, "orthonormal basis");
        assert!(unit_tight_feasible(3, 4).is_err());
        assert!(unit_tight_feasible(3, 0).is_err());
    }

    fn dense(m: &SynthesisMatrix) -> Vec<Vec<String>> {
        (0..m.dim())
            .map(|r| (0..m.count()).map(|c| m.get(r, c).to_string()).collect())
            .collect()
    }

    #[test]
    fn tight_examples() {
        let f = unit_tight(3, 2).unwrap();
        assert_eq!(
            dense(&f),
            vec![vec!["1", "1/2", "1/2"], vec!["0", "√(3/4)", "-√(3/4)"]]
        );
        let f = unit_tight(6, 4).unwrap();
        let core = unit_tight(3, 2).unwrap();
        assert_eq!(f, core.block_diagonal(2));
        assert_eq!(f.get(2, 3), core.get(0, 0));
        assert_eq!(f.get(3, 5), core.get(1, 2));
        let f = unit_tight(2, 1).unwrap();
        assert_eq!(dense(&f), vec![vec!["1", "1"]]);
        assert!(matches!(
            unit_tight(13, 8),
            Err(ConstructError::Infeasible { .. })
        ));
    }
}
