//! Searching for ready orderings of unordered eigenvalues and norms.
//!
//! The search runs the constructor's cursor symbolically. Eigenvalues are
//! drawn when a row opens and squared norms when a column is filled, so a
//! prefix that would get the constructor stuck is abandoned immediately;
//! every completion of that prefix fails the same way. Candidates are drawn
//! from the *distinct* remaining values, which enumerates each distinct
//! permutation once.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blocks::{block_exists, BlockSpec};
use crate::readiness::{check_ready, FrameSpec};
use crate::scalar::{Rational, ScalarError};

/// Multisets to arrange, plus search limits.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchRequest {
    pub norms_sq: Vec<Rational>,
    pub eigenvalues: Vec<Rational>,
    pub max_results: usize,
    /// Upper bound on visited search nodes.
    pub budget: u64,
    /// Keep `norms_sq` in the given order and only permute the eigenvalues.
    #[serde(default)]
    pub fix_norm_order: bool,
    /// Keep `eigenvalues` in the given order and only permute the norms.
    #[serde(default)]
    pub fix_eigen_order: bool,
}

impl SearchRequest {
    pub fn new(norms_sq: Vec<Rational>, eigenvalues: Vec<Rational>) -> Self {
        SearchRequest {
            norms_sq,
            eigenvalues,
            max_results: usize::MAX,
            budget: 10_000_000,
            fix_norm_order: false,
            fix_eigen_order: false,
        }
    }
}

/// One ready arrangement. Field order gives the lexicographic order on
/// `(eigenvalues, norms_sq)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReadyOrdering {
    pub eigenvalues: Vec<Rational>,
    pub norms_sq: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    /// Sorted, without duplicates.
    pub orderings: Vec<ReadyOrdering>,
    /// Every distinct pair of orderings was decided.
    pub exhausted: bool,
    /// Nodes visited, heuristic checks included.
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("trace mismatch: eigenvalues sum to {eigenvalues}, squared norms sum to {norms}")]
    TraceMismatch {
        eigenvalues: Rational,
        norms: Rational,
    },
    #[error("invalid search request: {0}")]
    InvalidRequest(String),
    #[error("search budget exhausted after {} nodes", partial.nodes)]
    BudgetExhausted { partial: SearchResult },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Three-valued answer of [`is_any_ordering_ready`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderingVerdict {
    Ready,
    NotReady,
    /// The budget ran out before an answer was found.
    Indeterminate,
}

/// Remaining values on one side: a fixed sequence or a multiset.
#[derive(Debug, Clone)]
enum Pool {
    Fixed {
        seq: Vec<Rational>,
        next: usize,
    },
    Free {
        values: Vec<Rational>,
        counts: Vec<usize>,
    },
}

impl Pool {
    fn new(items: &[Rational], fixed: bool) -> Self {
        if fixed {
            return Pool::Fixed {
                seq: items.to_vec(),
                next: 0,
            };
        }
        let mut values: Vec<Rational> = Vec::new();
        let mut counts = Vec::new();
        let mut sorted = items.to_vec();
        sorted.sort();
        for v in sorted {
            if values.last() == Some(&v) {
                *counts.last_mut().unwrap() += 1;
            } else {
                values.push(v);
                counts.push(1);
            }
        }
        Pool::Free { values, counts }
    }

    fn remaining(&self) -> usize {
        match self {
            Pool::Fixed { seq, next } => seq.len() - next,
            Pool::Free { counts, .. } => counts.iter().sum(),
        }
    }

    fn candidates(&self) -> Vec<usize> {
        match self {
            Pool::Fixed { seq, next } => {
                if *next < seq.len() {
                    vec![*next]
                } else {
                    vec![]
                }
            }
            Pool::Free { counts, .. } => (0..counts.len()).filter(|&i| counts[i] > 0).collect(),
        }
    }

    fn take(&mut self, i: usize) -> Rational {
        match self {
            Pool::Fixed { seq, next } => {
                *next += 1;
                seq[i]
            }
            Pool::Free { values, counts } => {
                counts[i] -= 1;
                values[i]
            }
        }
    }

    fn put_back(&mut self, i: usize) {
        match self {
            Pool::Fixed { next, .. } => *next -= 1,
            Pool::Free { counts, .. } => counts[i] += 1,
        }
    }
}

enum Halt {
    Full,
    Budget,
    Scalar(ScalarError),
}

impl From<ScalarError> for Halt {
    fn from(e: ScalarError) -> Self {
        Halt::Scalar(e)
    }
}

struct Search {
    eigs: Pool,
    norms: Pool,
    eig_seq: Vec<Rational>,
    norm_seq: Vec<Rational>,
    found: BTreeSet<ReadyOrdering>,
    max_results: usize,
    budget: u64,
    nodes: u64,
}

impl Search {
    fn tick(&mut self) -> Result<(), Halt> {
        if self.nodes >= self.budget {
            return Err(Halt::Budget);
        }
        self.nodes += 1;
        Ok(())
    }

    fn record(&mut self, ordering: ReadyOrdering) -> Result<(), Halt> {
        self.found.insert(ordering);
        if self.found.len() >= self.max_results {
            Err(Halt::Full)
        } else {
            Ok(())
        }
    }

    /// Tests a complete pair of orderings directly.
    fn try_pair(
        &mut self,
        eigenvalues: Vec<Rational>,
        norms_sq: Vec<Rational>,
    ) -> Result<(), Halt> {
        self.tick()?;
        let spec =
            FrameSpec::new(eigenvalues.clone(), norms_sq.clone()).expect("request was validated");
        if check_ready(&spec).ready {
            self.record(ReadyOrdering {
                eigenvalues,
                norms_sq,
            })?;
        }
        Ok(())
    }

    /// A new row opens with `carry` already spent by the block above.
    fn open_row(&mut self, carry: Rational) -> Result<(), Halt> {
        if self.eigs.remaining() == 0 {
            if self.norms.remaining() == 0 && carry.is_zero() {
                let spec = FrameSpec::new(self.eig_seq.clone(), self.norm_seq.clone())
                    .expect("request was validated");
                debug_assert!(check_ready(&spec).ready);
                self.record(ReadyOrdering {
                    eigenvalues: self.eig_seq.clone(),
                    norms_sq: self.norm_seq.clone(),
                })?;
            }
            return Ok(());
        }
        for i in self.eigs.candidates() {
            self.tick()?;
            let v = self.eigs.take(i);
            self.eig_seq.push(v);
            let rem = v.checked_sub(carry)?;
            let step = if rem.is_zero() {
                self.open_row(Rational::ZERO)
            } else if rem.is_positive() {
                self.fill_row(rem)
            } else {
                Ok(())
            };
            self.eig_seq.pop();
            self.eigs.put_back(i);
            step?;
        }
        Ok(())
    }

    /// The current row still needs `rem > 0`.
    fn fill_row(&mut self, rem: Rational) -> Result<(), Halt> {
        for i in self.norms.candidates() {
            self.tick()?;
            let a = self.norms.take(i);
            self.norm_seq.push(a);
            let step = if a <= rem {
                let left = rem.checked_sub(a)?;
                if left.is_zero() {
                    self.open_row(Rational::ZERO)
                } else {
                    self.fill_row(left)
                }
            } else if self.eigs.remaining() > 0 {
                self.close_with_block(rem, a)
            } else {
                Ok(())
            };
            self.norm_seq.pop();
            self.norms.put_back(i);
            step?;
        }
        Ok(())
    }

    /// Column `a` overflows the row; pick the block's second column.
    fn close_with_block(&mut self, rem: Rational, a: Rational) -> Result<(), Halt> {
        for j in self.norms.candidates() {
            self.tick()?;
            let b = self.norms.take(j);
            self.norm_seq.push(b);
            let spec = BlockSpec::new(rem, a, b);
            let step = if block_exists(&spec) {
                spec.y().map_err(Halt::from).and_then(|y| self.open_row(y))
            } else {
                Ok(())
            };
            self.norm_seq.pop();
            self.norms.put_back(j);
            step?;
        }
        Ok(())
    }
}

fn sorted_by(values: &[Rational], decreasing: bool) -> Vec<Rational> {
    let mut v = values.to_vec();
    v.sort();
    if decreasing {
        v.reverse();
    }
    v
}

/// Orderings worth trying before the full search, in order:
/// norms decreasing with eigenvalues increasing, both decreasing, both
/// increasing. A fixed side keeps its given order.
fn heuristic_pairs(req: &SearchRequest) -> Vec<(Vec<Rational>, Vec<Rational>)> {
    let eig = |dec| {
        if req.fix_eigen_order {
            req.eigenvalues.clone()
        } else {
            sorted_by(&req.eigenvalues, dec)
        }
    };
    let norm = |dec| {
        if req.fix_norm_order {
            req.norms_sq.clone()
        } else {
            sorted_by(&req.norms_sq, dec)
        }
    };
    let mut out: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    for (e, n) in [(false, true), (true, true), (false, false)] {
        let pair = (eig(e), norm(n));
        if !out.contains(&pair) {
            out.push(pair);
        }
    }
    out
}

fn validate(req: &SearchRequest) -> Result<(), SearchError> {
    if req.eigenvalues.is_empty() || req.norms_sq.is_empty() {
        return Err(SearchError::InvalidRequest(
            "empty eigenvalue or norm list".into(),
        ));
    }
    if req.max_results == 0 {
        return Err(SearchError::InvalidRequest(
            "max_results must be positive".into(),
        ));
    }
    if let Some(v) = req
        .eigenvalues
        .iter()
        .chain(&req.norms_sq)
        .find(|v| !v.is_positive())
    {
        return Err(SearchError::InvalidRequest(format!("{v} is not positive")));
    }
    let eigenvalues = Rational::checked_sum(&req.eigenvalues)?;
    let norms = Rational::checked_sum(&req.norms_sq)?;
    if eigenvalues != norms {
        return Err(SearchError::TraceMismatch { eigenvalues, norms });
    }
    Ok(())
}

/// Ready `(eigenvalue order, norm order)` pairs, up to `max_results`.
///
/// Runs deterministically on one thread. When the budget runs out the pairs
/// found so far come back inside [`SearchError::BudgetExhausted`].
pub fn find_ready_orderings(req: &SearchRequest) -> Result<SearchResult, SearchError> {
    validate(req)?;
    let mut s = Search {
        eigs: Pool::new(&req.eigenvalues, req.fix_eigen_order),
        norms: Pool::new(&req.norms_sq, req.fix_norm_order),
        eig_seq: Vec::with_capacity(req.eigenvalues.len()),
        norm_seq: Vec::with_capacity(req.norms_sq.len()),
        found: BTreeSet::new(),
        max_results: req.max_results,
        budget: req.budget,
        nodes: 0,
    };
    let mut outcome = Ok(());
    for (e, n) in heuristic_pairs(req) {
        outcome = s.try_pair(e, n);
        if outcome.is_err() {
            break;
        }
    }
    if outcome.is_ok() {
        outcome = s.open_row(Rational::ZERO);
    }
    let mut result = SearchResult {
        orderings: s.found.into_iter().collect(),
        exhausted: false,
        nodes: s.nodes,
    };
    match outcome {
        Ok(()) => {
            result.exhausted = true;
            Ok(result)
        }
        Err(Halt::Full) => Ok(result),
        Err(Halt::Budget) => Err(SearchError::BudgetExhausted { partial: result }),
        Err(Halt::Scalar(e)) => Err(e.into()),
    }
}

/// Whether some pair of orderings is ready. `max_results` is ignored.
pub fn is_any_ordering_ready(req: &SearchRequest) -> Result<OrderingVerdict, SearchError> {
    let req = SearchRequest {
        max_results: 1,
        ..req.clone()
    };
    match find_ready_orderings(&req) {
        Ok(r) if r.orderings.is_empty() => Ok(OrderingVerdict::NotReady),
        Ok(_) => Ok(OrderingVerdict::Ready),
        Err(SearchError::BudgetExhausted { .. }) => Ok(OrderingVerdict::Indeterminate),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[&str]) -> Vec<Rational> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn req(norms: &[&str], eigs: &[&str]) -> SearchRequest {
        SearchRequest::new(qs(norms), qs(eigs))
    }

    #[test]
    fn thirteen_thirds_has_no_ready_ordering() {
        let r = find_ready_orderings(&req(&["4", "4", "4", "1"], &["13/3"; 3])).unwrap();
        assert!(r.orderings.is_empty());
        assert!(r.exhausted);
    }

    #[test]
    fn root_seven_example() {
        let r = find_ready_orderings(&req(&["7", "7", "6", "1", "1"], &["22/3"; 3])).unwrap();
        assert!(r.exhausted);
        assert!(r
            .orderings
            .iter()
            .any(|o| o.norms_sq == qs(&["7", "6", "1", "1", "7"])));
        for o in &r.orderings {
            let spec = FrameSpec::new(o.eigenvalues.clone(), o.norms_sq.clone()).unwrap();
            assert!(check_ready(&spec).ready);
        }
    }

    #[test]
    fn fixed_norms_single_eigen_order() {
        let mut q = req(&["3", "3", "2", "1"], &["4", "3", "2"]);
        q.fix_norm_order = true;
        let r = find_ready_orderings(&q).unwrap();
        let eig_orders: Vec<_> = r.orderings.iter().map(|o| o.eigenvalues.clone()).collect();
        // (2,4,3) closes row 1 with a block spilling exactly 4 into row 2;
        // (3,2,4) completes row 1 with one column and blocks row 2.
        assert_eq!(
            eig_orders,
            vec![
                qs(&["2", "4", "3"]),
                qs(&["3", "2", "4"]),
                qs(&["3", "4", "2"])
            ]
        );
        for o in &r.orderings {
            let spec = FrameSpec::new(o.eigenvalues.clone(), o.norms_sq.clone()).unwrap();
            crate::construct::pnstc(&spec).unwrap();
        }
    }

    #[test]
    fn combined_example_is_ready() {
        let q = req(
            &["210", "210", "180", "30", "30", "4", "4", "4", "1"],
            &["220", "220", "220", "6", "4", "3"],
        );
        assert_eq!(is_any_ordering_ready(&q).unwrap(), OrderingVerdict::Ready);
    }

    #[test]
    fn verdicts() {
        assert_eq!(
            is_any_ordering_ready(&req(&["1", "1"], &["1", "1"])).unwrap(),
            OrderingVerdict::Ready
        );
        assert_eq!(
            is_any_ordering_ready(&req(&["4", "4", "4", "1"], &["13/3"; 3])).unwrap(),
            OrderingVerdict::NotReady
        );
        let mut q = req(&["4", "4", "4", "1"], &["13/3"; 3]);
        q.budget = 1;
        assert_eq!(
            is_any_ordering_ready(&q).unwrap(),
            OrderingVerdict::Indeterminate
        );
        assert!(matches!(
            find_ready_orderings(&q),
            Err(SearchError::BudgetExhausted { partial }) if !partial.exhausted
        ));
    }

    #[test]
    fn bad_requests() {
        assert!(matches!(
            find_ready_orderings(&req(&["1", "2"], &["1", "1"])),
            Err(SearchError::TraceMismatch { .. })
        ));
        assert!(matches!(
            find_ready_orderings(&req(&[], &["1"])),
            Err(SearchError::InvalidRequest(_))
        ));
        let mut q = req(&["1"], &["1"]);
        q.max_results = 0;
        assert!(find_ready_orderings(&q).is_err());
    }

    #[test]
    fn max_results_limits_output() {
        let mut q = req(&["1", "1", "1", "1"], &["3/2", "5/2"]);
        let all = find_ready_orderings(&q).unwrap();
        assert!(all.orderings.len() >= 2);
        q.max_results = 1;
        let one = find_ready_orderings(&q).unwrap();
        assert_eq!(one.orderings.len(), 1);
        assert!(!one.exhausted);
    }
}
