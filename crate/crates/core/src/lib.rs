//! Sparse frames with prescribed spectrum and norms, in exact arithmetic.
//!
//! Given eigenvalues `λ₁, …, λ_N` and squared norms `a₁², …, a_M²`, the
//! Spectral Tetris constructors build an `N × M` matrix whose columns have
//! the given norms and whose rows are orthogonal with square sums `λ_n`, so
//! the frame operator is `diag(λ)`. Every column has at most two nonzero
//! entries, and every entry is `±√q` for a rational `q`.
//!
//! ```
//! use spectral_tetris::{pnstc, verify_matrix, FrameSpec, Rational, VerifyMode};
//!
//! let q = |s: &str| s.parse::<Rational>().unwrap();
//! let spec = FrameSpec::new(vec![q("2"), q("5")], vec![q("3"), q("3"), q("1")]).unwrap();
//! let f = pnstc(&spec).unwrap();
//! assert_eq!(f.get(1, 1).to_string(), "-√2");
//! let report = verify_matrix(&f, Some(&spec), VerifyMode::Exact).unwrap();
//! assert_eq!(report.matches_spec, Some(true));
//! ```

pub mod blocks;
pub mod construct;
pub mod formats;
pub mod matrix;
pub mod readiness;
pub mod scalar;
pub mod search;
pub mod verify;

pub use blocks::{block_exists, build_block, Block2x2, BlockSpec, LemmaCondition};
pub use construct::{
    equal_norm_frame, k_inequality_scan, minimal_equal_norm_r, pnstc, stc, unit_tight,
    unit_tight_feasible, ConstructError, EqualNormFrame, StuckReason, UnitTightVerdict,
};
pub use formats::{MatrixFile, SpecFile};
pub use matrix::{BlockKind, BlockRecord, SynthesisMatrix};
pub use readiness::{
    check_ready, easy_sufficient, forced_partition, majorizes, tight_ready, tight_sufficient,
    unit_ready, FrameSpec, Partition, ReadinessCondition, ReadinessReport, Violation,
};
pub use scalar::{RadicalScalar, Rational, ScalarError};
pub use search::{
    find_ready_orderings, is_any_ordering_ready, OrderingVerdict, SearchRequest, SearchResult,
};
pub use verify::{frame_bounds_float, sparsity, verify_matrix, VerificationReport, VerifyMode};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/blocks.md")]
    mod blocks {}
    #[doc = include_str!("../../../book/src/readiness.md")]
    mod readiness {}
    #[doc = include_str!("../../../book/src/constructing.md")]
    mod constructing {}
    #[doc = include_str!("../../../book/src/tight.md")]
    mod tight {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
