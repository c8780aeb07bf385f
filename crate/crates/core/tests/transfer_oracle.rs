use std::collections::HashMap;

use necklace_core::blocks::{augment, compose, Block, BlockKind, RowPairing};
use necklace_core::enumerate::{count_2regular, count_hamiltonian};
use necklace_core::transfer::{
    build_d, build_d_prime, build_d_quotient, count_walks, NodeLabel, WalkCountTable, WeightedDigraph,
};
use necklace_core::{validate, Params};
use num_bigint::BigUint;
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn coprime_pairs(max_b: usize) -> Vec<Params> {
    (2..=max_b).flat_map(|b| (1..b).filter_map(move |a| Params::new(a, b).ok().filter(Params::is_coprime))).collect()
}

#[test]
fn hamiltonian_walks_match_dfs() {
    for params in coprime_pairs(5) {
        let b = params.b();
        let faithful = WalkCountTable::new(&build_d(params).unwrap(), 28);
        let quotient = WalkCountTable::new(&build_d_quotient(params).unwrap(), 28);
        for n in 2 * b + 1..=28 {
            let dfs = count_hamiltonian(params, n).unwrap();
            assert_eq!(faithful.end_total(n), dfs, "{params} n={n}");
            assert_eq!(quotient.end_total(n), dfs, "{params} n={n}");
        }
    }
}

#[test]
fn two_regular_walks_match_brute_force() {
    for params in coprime_pairs(4) {
        let b = params.b();
        let d_prime = WalkCountTable::new(&build_d_prime(params).unwrap(), 16);
        let d = WalkCountTable::new(&build_d(params).unwrap(), 16);
        for n in 2 * b + 1..=16 {
            let two_regular = count_2regular(params, n).unwrap();
            assert_eq!(d_prime.end_total(n), two_regular, "{params} n={n}");
            assert!(d.end_total(n) <= d_prime.end_total(n));
        }
    }
}

#[test]
fn hamiltonian_walks_never_exceed_two_regular_walks() {
    for params in coprime_pairs(5) {
        let d_prime = build_d_prime(params).unwrap();
        let d = build_d(params).unwrap();
        for n in 2 * params.b() + 1..=24 {
            assert!(count_walks(&d, n) <= count_walks(&d_prime, n), "{params} n={n}");
        }
    }
}

fn pairing_of_node(label: &NodeLabel) -> Option<&RowPairing> {
    match label {
        NodeLabel::Pair(_, l) => Some(l),
        _ => None,
    }
}

fn block_of_node(label: &NodeLabel) -> Option<&Block> {
    match label {
        NodeLabel::Pair(blk, _) | NodeLabel::End(blk) | NodeLabel::Block(blk) => Some(blk),
        _ => None,
    }
}

#[test]
fn every_created_vertex_is_well_formed() {
    for params in coprime_pairs(6) {
        let d = build_d(params).unwrap();
        for e in d.edges() {
            let Some(l) = pairing_of_node(&d.nodes()[e.from]) else { continue };
            let next = block_of_node(&d.nodes()[e.to]).unwrap();
            assert_ne!(next.kind(), BlockKind::Start);
            let aug = augment(next, l).unwrap();
            assert!(aug.is_well_formed(), "{params}: {}", next.export());
            match &d.nodes()[e.to] {
                NodeLabel::Pair(_, l2) => {
                    assert!(aug.acyclic());
                    assert_eq!(&aug.pairing_of().unwrap(), l2);
                }
                NodeLabel::End(_) => assert!(aug.cycle_plus_isolated()),
                other => panic!("unexpected vertex {other:?}"),
            }
        }
    }
}

/// Number of ways to finish from `v` with exactly `left` weight to go.
fn completions(d: &WeightedDigraph, v: usize, left: usize, memo: &mut HashMap<(usize, usize), BigUint>) -> BigUint {
    if let Some(c) = memo.get(&(v, left)) {
        return c.clone();
    }
    let mut total = BigUint::from(u32::from(left == 0 && d.nodes()[v].is_end()));
    for e in d.out_edges(v) {
        if e.weight <= left {
            total += completions(d, e.to, left - e.weight, memo) * e.multiplicity;
        }
    }
    memo.insert((v, left), total.clone());
    total
}

/// A uniformly random walk of weight `n` from the start vertex to an end vertex.
fn sample_walk(d: &WeightedDigraph, n: usize, rng: &mut StdRng) -> Vec<usize> {
    let mut memo = HashMap::new();
    let mut path = vec![WeightedDigraph::START];
    let mut left = n;
    loop {
        let v = *path.last().unwrap();
        if left == 0 && d.nodes()[v].is_end() {
            return path;
        }
        let options: Vec<_> = d
            .out_edges(v)
            .filter(|e| e.weight <= left)
            .map(|e| (e.to, e.weight, completions(d, e.to, left - e.weight, &mut memo)))
            .filter(|(_, _, c)| !c.is_zero())
            .collect();
        let weights: Vec<u64> = options.iter().map(|(_, _, c)| u64::try_from(c).unwrap()).collect();
        let mut pick = rng.gen_range(0..weights.iter().sum::<u64>());
        let k = weights
            .iter()
            .position(|&w| {
                if pick < w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .unwrap();
        path.push(options[k].0);
        left -= options[k].1;
    }
}

/// Traverses a 2-regular single-cycle edge list into a bead sequence.
fn cycle_beads(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut beads = vec![0];
    let mut prev = usize::MAX;
    while beads.len() < n {
        let cur = *beads.last().unwrap();
        let next = adj[cur].iter().copied().find(|&w| w != prev && (beads.len() < 2 || w != beads[0])).unwrap();
        prev = cur;
        beads.push(next);
    }
    beads
}

#[test]
fn sampled_walks_rebuild_hamiltonian_cycles() {
    let mut rng = StdRng::seed_from_u64(2024);
    for params in coprime_pairs(5) {
        let d = build_d(params).unwrap();
        for n in [2 * params.b() + 1, 19, 24, 27] {
            if count_walks(&d, n).is_zero() {
                continue;
            }
            for _ in 0..5 {
                let walk = sample_walk(&d, n, &mut rng);
                let blocks: Vec<Block> =
                    walk[1..].iter().map(|&v| block_of_node(&d.nodes()[v]).unwrap().clone()).collect();
                let g = compose(&blocks).unwrap();
                assert_eq!(g.len(), n);
                assert!(g.is_two_regular());
                assert_eq!(g.cycle_count().unwrap(), 1);
                let beads = cycle_beads(n, g.edges());
                validate(params, &beads).unwrap_or_else(|e| panic!("{params} n={n}: {e}"));
            }
        }
    }
}
