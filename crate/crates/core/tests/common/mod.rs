//! Random instance generators shared by the integration tests.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use spectral_tetris::{FrameSpec, Rational};

/// `p/q` with `1 ≤ p, q ≤ max`.
pub fn small(rng: &mut impl Rng, max: i128) -> Rational {
    Rational::frac(rng.gen_range(1..=max), rng.gen_range(1..=max))
}

/// Eigenvalues that make `norms` ready in the given order, obtained by
/// running the cursor forward and choosing each row's length at random.
/// `None` when the random choices leave a row empty.
pub fn eigenvalues_for(
    rng: &mut impl Rng,
    norms: &[Rational],
    dim: usize,
) -> Option<Vec<Rational>> {
    let total = norms.len();
    let mut eigs = Vec::with_capacity(dim);
    let mut col = 0;
    let mut carry = Rational::ZERO;
    for _ in 0..dim - 1 {
        let mut lam = carry;
        carry = Rational::ZERO;
        let singles = rng.gen_range(0..=(total - col).min(3));
        for _ in 0..singles {
            lam = lam + norms[col];
            col += 1;
        }
        if col + 1 < total && rng.gen_bool(0.6) {
            let (a, b) = (norms[col], norms[col + 1]);
            // x < a keeps column `col` out of the row; x ≤ b lets the block exist.
            let mut x = a.min(b) * Rational::frac(rng.gen_range(1..=20), 20);
            if x >= a {
                x = a * Rational::frac(1, 2);
            }
            lam = lam + x;
            carry = a + b - x;
            col += 2;
        }
        if lam.is_zero() {
            return None;
        }
        eigs.push(lam);
    }
    let last = carry + norms[col..].iter().sum::<Rational>();
    if last.is_zero() {
        return None;
    }
    eigs.push(last);
    Some(eigs)
}

/// A ready spec with `N ≤ 6`, `M ≤ 12` and squared norms `p/q`, `p, q ≤ 20`.
pub fn ready_spec(rng: &mut impl Rng) -> FrameSpec {
    loop {
        let dim = rng.gen_range(1..=6);
        let count = rng.gen_range(dim..=12);
        let norms: Vec<Rational> = (0..count).map(|_| small(rng, 20)).collect();
        if let Some(eigs) = eigenvalues_for(rng, &norms, dim) {
            return FrameSpec::new(eigs, norms).unwrap();
        }
    }
}

/// A spec with matching traces that may or may not be ready.
pub fn any_spec(rng: &mut impl Rng) -> FrameSpec {
    match rng.gen_range(0..3) {
        0 => ready_spec(rng),
        1 => {
            let s = ready_spec(rng);
            let mut eigs = s.eigenvalues().to_vec();
            let mut norms = s.norms_sq().to_vec();
            eigs.shuffle(rng);
            norms.shuffle(rng);
            FrameSpec::new(eigs, norms).unwrap()
        }
        _ => loop {
            let dim = rng.gen_range(1..=6);
            let count = rng.gen_range(dim..=12);
            let norms: Vec<Rational> = (0..count).map(|_| small(rng, 20)).collect();
            let total: Rational = norms.iter().sum();
            let mut eigs: Vec<Rational> = (0..dim - 1).map(|_| small(rng, 20)).collect();
            let last = total - eigs.iter().sum::<Rational>();
            if last.is_positive() {
                eigs.push(last);
                return FrameSpec::new(eigs, norms).unwrap();
            }
        },
    }
}

/// A spectrum with integer trace `M ≤ 12`, for `M` unit vectors.
pub fn unit_spectrum(rng: &mut impl Rng) -> (Vec<Rational>, usize) {
    loop {
        let dim = rng.gen_range(1..=6);
        if rng.gen_bool(0.5) {
            let count = rng.gen_range(dim..=12);
            let ones = vec![Rational::ONE; count];
            if let Some(eigs) = eigenvalues_for(rng, &ones, dim) {
                return (eigs, count);
            }
        } else {
            let mut eigs: Vec<Rational> = (0..dim - 1)
                .map(|_| Rational::frac(rng.gen_range(1..=60), rng.gen_range(1..=20)))
                .collect();
            let partial: Rational = eigs.iter().sum();
            let count = partial.floor() + rng.gen_range(1..=3);
            let last = Rational::integer(count) - partial;
            if count <= 12 && last.is_positive() {
                eigs.push(last);
                return (eigs, count as usize);
            }
        }
    }
}

/// Distinct permutations of `items`, in lexicographic order.
pub fn distinct_permutations(items: &[Rational]) -> Vec<Vec<Rational>> {
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    // Standard next-permutation step.
    loop {
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

pub fn qs(v: &[&str]) -> Vec<Rational> {
    v.iter().map(|s| s.parse().unwrap()).collect()
}
