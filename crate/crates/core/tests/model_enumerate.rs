use std::collections::BTreeSet;

use necklace_core::enumerate::{count_hamiltonian, enumerate_necklaces};
use necklace_core::{build_graph, canonicalize, quick_facts, validate, Necklace, Params};
use num_bigint::BigUint;
use proptest::prelude::*;

/// Plain backtracking count of Hamiltonian cycles, each counted once.
fn naive_count(params: Params, n: usize) -> u64 {
    fn go(params: Params, n: usize, path: &mut Vec<usize>, used: &mut [bool]) -> u64 {
        let last = *path.last().unwrap();
        if path.len() == n {
            return u64::from(params.allows(last, 0));
        }
        let mut total = 0;
        for d in [params.a(), params.b()] {
            for next in [last.checked_sub(d), Some(last + d)].into_iter().flatten() {
                if next < n && !used[next] {
                    used[next] = true;
                    path.push(next);
                    total += go(params, n, path, used);
                    path.pop();
                    used[next] = false;
                }
            }
        }
        total
    }
    if n < 3 {
        return 0;
    }
    let mut used = vec![false; n];
    used[0] = true;
    go(params, n, &mut vec![0], &mut used) / 2
}

fn pair() -> impl Strategy<Value = Params> {
    (1usize..=9, 2usize..=10).prop_filter_map("a < b", |(a, b)| Params::new(a, b).ok())
}

proptest! {
    #[test]
    fn neighbourhoods_are_symmetric(params in pair(), n in 1usize..40) {
        let g = build_graph(params, n).unwrap();
        for x in 0..n {
            for y in g.neighbors(x) {
                prop_assert!(g.neighbors(y).any(|z| z == x));
                let d = x.abs_diff(y);
                prop_assert!(d == params.a() || d == params.b());
            }
        }
    }

    #[test]
    fn canonical_form_is_constant_on_orbits(pick in 0usize..1000) {
        let cases = [(1, 4, 13), (2, 3, 16), (3, 5, 16), (1, 5, 18), (4, 7, 11)];
        let (a, b, n) = cases[pick % cases.len()];
        let params = Params::new(a, b).unwrap();
        let all = enumerate_necklaces(params, n, None).unwrap();
        let neck = &all[(pick / cases.len()) % all.len()];
        let canon = canonicalize(neck);
        prop_assert_eq!(&canonicalize(&canon), &canon);
        let beads = neck.beads();
        for r in 0..n {
            let rotated: Vec<usize> = (0..n).map(|i| beads[(i + r) % n]).collect();
            let mut reflected = rotated.clone();
            reflected.reverse();
            for seq in [rotated, reflected] {
                let other = Necklace::new(params, seq).unwrap();
                prop_assert_eq!(canonicalize(&other), canon.clone());
            }
        }
    }
}

#[test]
fn quick_facts_agree_with_naive_search() {
    for a in 1..=6 {
        for b in a + 1..=6 {
            let params = Params::new(a, b).unwrap();
            for n in 3..=14 {
                if let Some(c) = quick_facts(params, n) {
                    assert_eq!(c, BigUint::from(naive_count(params, n)), "({a},{b}) n={n}");
                }
            }
        }
    }
}

#[test]
fn dfs_agrees_with_naive_search() {
    for a in 1..=6 {
        for b in a + 1..=7 {
            let params = Params::new(a, b).unwrap();
            for n in 3..=15 {
                assert_eq!(
                    count_hamiltonian(params, n).unwrap(),
                    BigUint::from(naive_count(params, n)),
                    "({a},{b}) n={n}"
                );
            }
        }
    }
}

#[test]
fn enumerated_necklaces_are_valid_and_distinct() {
    for (a, b, n) in [(1, 3, 20), (1, 4, 19), (2, 3, 22), (2, 5, 21), (3, 4, 20), (1, 5, 21), (3, 7, 20)] {
        let params = Params::new(a, b).unwrap();
        let all = enumerate_necklaces(params, n, None).unwrap();
        let mut seen = BTreeSet::new();
        for neck in &all {
            validate(params, neck.beads()).unwrap();
            assert!(seen.insert(canonicalize(neck).into_beads()), "duplicate in ({a},{b}) n={n}");
        }
        assert_eq!(BigUint::from(all.len()), count_hamiltonian(params, n).unwrap());
    }
}

#[test]
fn fibonacci_for_one_three() {
    let (mut f0, mut f1) = (0u64, 1u64);
    for m in 1..=12 {
        if m >= 2 {
            let params = Params::new(1, 3).unwrap();
            assert_eq!(count_hamiltonian(params, 2 * m).unwrap(), BigUint::from(f1), "m={m}");
        }
        (f0, f1) = (f1, f0 + f1);
    }
}

#[test]
fn odd_pairs_vanish_on_odd_lengths() {
    for (a, b) in [(3, 5), (1, 3)] {
        let params = Params::new(a, b).unwrap();
        for n in (3..=15).step_by(2) {
            assert_eq!(count_hamiltonian(params, n).unwrap(), BigUint::from(0u32));
        }
    }
}
