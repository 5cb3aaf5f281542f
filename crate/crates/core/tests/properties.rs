//! Randomized invariants of the constructors, the search and the verifier.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_tetris::formats::MatrixFile;
use spectral_tetris::verify::DEFAULT_FLOAT_TOL;
use spectral_tetris::{
    check_ready, find_ready_orderings, pnstc, stc, unit_tight, unit_tight_feasible, verify_matrix,
    FrameSpec, Rational, SearchRequest, VerifyMode,
};

use common::{distinct_permutations, ready_spec, small};

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn constructed_frames_verify_both_ways(seed in any::<u64>()) {
        let spec = ready_spec(&mut seeded(seed));
        let f = pnstc(&spec).unwrap();
        let exact = verify_matrix(&f, Some(&spec), VerifyMode::Exact).unwrap();
        let float = verify_matrix(&f, Some(&spec), VerifyMode::Float(DEFAULT_FLOAT_TOL)).unwrap();
        prop_assert_eq!(exact.matches_spec, Some(true));
        prop_assert!(float.orthogonal);
        prop_assert!(exact.max_per_column <= 2);
    }

    #[test]
    fn json_round_trip_keeps_report(seed in any::<u64>()) {
        let spec = ready_spec(&mut seeded(seed));
        let f = pnstc(&spec).unwrap();
        let file = MatrixFile::from_matrix(&f, Some(&spec), None);
        let json = file.to_json_string().unwrap();
        let back = MatrixFile::from_json_str(&json).unwrap();
        let g = back.to_matrix().unwrap();
        prop_assert_eq!(
            verify_matrix(&g, back.spec().unwrap().as_ref(), VerifyMode::Exact).unwrap(),
            verify_matrix(&f, Some(&spec), VerifyMode::Exact).unwrap()
        );
        prop_assert_eq!(back.to_json_string().unwrap(), json);
    }

    /// Every block entry in the log is covered exactly once.
    #[test]
    fn block_log_covers_entries(seed in any::<u64>()) {
        let spec = ready_spec(&mut seeded(seed));
        let f = pnstc(&spec).unwrap();
        let mut covered = std::collections::BTreeSet::new();
        for b in f.block_log() {
            for r in b.rows.0..=b.rows.1 {
                for c in b.cols.0..=b.cols.1 {
                    prop_assert!(covered.insert((r, c)), "({}, {}) logged twice", r, c);
                }
            }
        }
        for (r, c, _) in f.entries() {
            prop_assert!(covered.contains(&(r, c)));
        }
    }

    /// With every eigenvalue at least 2, the unit-norm loop and the general
    /// constructor with unit norms give the same matrix.
    #[test]
    fn unit_loop_matches_general(parts in prop::collection::vec((2i128..=40, 1i128..=20), 1..6), extra in 0i128..20) {
        let mut eigs: Vec<Rational> = parts
            .iter()
            .map(|&(p, q)| Rational::integer(2) + Rational::frac(p % q, q))
            .collect();
        let partial: Rational = eigs.iter().sum();
        let count = partial.floor() + 2 + extra % 3;
        let last = Rational::integer(count) - partial;
        prop_assume!(last >= Rational::TWO);
        eigs.push(last);
        let count = count as usize;
        let a = stc(&eigs, count).unwrap();
        let b = pnstc(&FrameSpec::unit(eigs, count).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ready_orderings_match_brute_force(seed in any::<u64>()) {
        use rand::Rng;
        let mut rng = seeded(seed);
        let dim = rng.gen_range(1..=3);
        let count = rng.gen_range(dim..=5);
        let norms: Vec<Rational> = (0..count).map(|_| small(&mut rng, 3)).collect();
        let total: Rational = norms.iter().sum();
        let mut eigs: Vec<Rational> = (0..dim - 1).map(|_| small(&mut rng, 4)).collect();
        let last = total - eigs.iter().sum::<Rational>();
        prop_assume!(last.is_positive());
        eigs.push(last);

        let mut expected = Vec::new();
        for e in distinct_permutations(&eigs) {
            for n in distinct_permutations(&norms) {
                let spec = FrameSpec::new(e.clone(), n.clone()).unwrap();
                if check_ready(&spec).ready {
                    expected.push((e.clone(), n));
                }
            }
        }
        let r = find_ready_orderings(&SearchRequest::new(norms, eigs)).unwrap();
        prop_assert!(r.exhausted);
        let got: Vec<_> = r.orderings.into_iter().map(|o| (o.eigenvalues, o.norms_sq)).collect();
        prop_assert_eq!(got, expected);
    }
}

#[test]
fn unit_tight_is_tight() {
    for n in 1..=12 {
        for m in n..=3 * n {
            if !unit_tight_feasible(m, n).unwrap().feasible {
                continue;
            }
            let f = unit_tight(m, n).unwrap();
            let spec = FrameSpec::tight(vec![Rational::ONE; m], n).unwrap();
            let r = verify_matrix(&f, Some(&spec), VerifyMode::Exact).unwrap();
            assert_eq!(r.matches_spec, Some(true), "M={m} N={n}");
        }
    }
}

#[test]
fn unit_tight_matches_direct_loop() {
    // The gcd decomposition agrees with running the loop on the full spectrum.
    for n in 1..=12usize {
        for m in n..=3 * n {
            if !unit_tight_feasible(m, n).unwrap().feasible {
                continue;
            }
            let lambda = Rational::new(m as i128, n as i128).unwrap();
            assert_eq!(
                unit_tight(m, n).unwrap(),
                stc(&vec![lambda; n], m).unwrap(),
                "M={m} N={n}"
            );
        }
    }
}
