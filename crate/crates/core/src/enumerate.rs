//! Exhaustive search over `G_{a,b}(n)`.
//!
//! Every Hamiltonian cycle passes through `0`, and `0` has exactly two
//! neighbours, `a` and `b`. Anchoring each cycle as `0, a, ..., b` therefore
//! visits every necklace exactly once, already in canonical orientation.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{quick_facts, Necklace, Params};

/// Environment variable that overrides [`DEFAULT_NODE_BUDGET`].
pub const NODE_BUDGET_ENV: &str = "NECKLACE_NODE_BUDGET";
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// Search nodes are reported to the shared counter in batches of this size.
const FLUSH: u64 = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        let node_budget = std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().replace('_', "").parse().ok())
            .unwrap_or(DEFAULT_NODE_BUDGET);
        SearchConfig { node_budget, parallel: true }
    }
}

impl SearchConfig {
    pub fn with_budget(node_budget: u64) -> Self {
        SearchConfig { node_budget, ..Default::default() }
    }

    pub fn sequential(self) -> Self {
        SearchConfig { parallel: false, ..self }
    }
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    blown: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0), blown: AtomicBool::new(false) }
    }

    fn charge(&self, nodes: u64) -> bool {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            self.blown.store(true, Ordering::Relaxed);
        }
        !self.blown.load(Ordering::Relaxed)
    }

    fn exceeded(&self) -> bool {
        self.blown.load(Ordering::Relaxed)
    }
}

#[derive(Debug)]
struct Aborted;

/// Sorted neighbour lists for `G_{a,b}(n)`.
fn adjacency(params: Params, n: usize) -> Vec<Vec<usize>> {
    let (a, b) = (params.a(), params.b());
    (0..n)
        .map(|x| {
            [x.checked_sub(b), x.checked_sub(a), Some(x + a), Some(x + b)]
                .into_iter()
                .flatten()
                .filter(|&y| y < n)
                .collect::<Vec<_>>()
        })
        .map(|mut v| {
            v.sort_unstable();
            v
        })
        .collect()
}

/// Depth-first path extension from `0 -> a`, closing at `b`.
///
/// `avail[w]` for an unvisited `w` is the number of its neighbours that are
/// unvisited or equal to the current head. A non-target vertex needs two of
/// those, the target needs one (its other cycle neighbour is `0`).
#[derive(Clone)]
struct Walker<'g> {
    adj: &'g [Vec<usize>],
    target: usize,
    visited: Vec<bool>,
    avail: Vec<u8>,
    path: Vec<usize>,
    pending: u64,
}

enum Sink<'s> {
    Count(&'s mut u64),
    Collect { out: &'s mut Vec<Vec<usize>>, limit: Option<usize> },
}

impl Sink<'_> {
    /// Returns false once the consumer wants no more cycles.
    fn accept(&mut self, path: &[usize]) -> bool {
        match self {
            Sink::Count(c) => {
                **c += 1;
                true
            }
            Sink::Collect { out, limit } => {
                out.push(path.to_vec());
                limit.is_none_or(|l| out.len() < l)
            }
        }
    }
}

enum Flow {
    Continue,
    Stop,
}

impl<'g> Walker<'g> {
    fn new(adj: &'g [Vec<usize>], a: usize, b: usize) -> Self {
        let n = adj.len();
        let avail = adj.iter().map(|v| v.len() as u8).collect();
        let mut w = Walker { adj, target: b, visited: vec![false; n], avail, path: Vec::with_capacity(n), pending: 0 };
        w.visited[0] = true;
        w.path.push(0);
        // 0 is behind the head for good; its only other neighbour is the target.
        w.avail[b] -= 1;
        w.visited[a] = true;
        w.path.push(a);
        w
    }

    fn head(&self) -> usize {
        *self.path.last().expect("path is never empty")
    }

    /// Moves the head to `v`. Returns false (with state rolled back) when
    /// the move leaves some vertex without enough room.
    fn push(&mut self, v: usize) -> bool {
        let u = self.head();
        let mut ok = true;
        for &w in &self.adj[u] {
            if !self.visited[w] && w != v {
                self.avail[w] -= 1;
                let need = if w == self.target { 1 } else { 2 };
                if self.avail[w] < need {
                    ok = false;
                }
            }
        }
        if !ok {
            self.restore(u, v);
            return false;
        }
        self.visited[v] = true;
        self.path.push(v);
        true
    }

    fn restore(&mut self, u: usize, v: usize) {
        for &w in &self.adj[u] {
            if !self.visited[w] && w != v {
                self.avail[w] += 1;
            }
        }
    }

    fn pop(&mut self) {
        let v = self.path.pop().expect("pop past anchor");
        self.visited[v] = false;
        let u = self.head();
        self.restore(u, v);
    }

    /// Candidate successors of the head, honouring forced moves. `None` means
    /// the position is dead.
    fn successors(&self) -> Option<Forced> {
        let v = self.head();
        let mut forced = None;
        for &w in &self.adj[v] {
            if self.visited[w] || w == self.target {
                continue;
            }
            if self.avail[w] == 2 {
                if forced.is_some() {
                    return None;
                }
                forced = Some(w);
            }
        }
        if self.adj[v].contains(&self.target) && self.avail[self.target] == 1 {
            // The head is the target's last option, so the head must close.
            if forced.is_some() {
                return None;
            }
            return Some(Forced::Close);
        }
        Some(match forced {
            Some(w) => Forced::One(w),
            None => Forced::Any,
        })
    }

    fn run(&mut self, budget: &Budget, sink: &mut Sink<'_>) -> std::result::Result<Flow, Aborted> {
        self.pending += 1;
        if self.pending >= FLUSH {
            let p = std::mem::take(&mut self.pending);
            if !budget.charge(p) {
                return Err(Aborted);
            }
        }
        let n = self.adj.len();
        if self.path.len() == n - 1 {
            let v = self.head();
            if self.adj[v].contains(&self.target) {
                self.path.push(self.target);
                let go = sink.accept(&self.path);
                self.path.pop();
                if !go {
                    return Ok(Flow::Stop);
                }
            }
            return Ok(Flow::Continue);
        }
        let choices = match self.successors() {
            None | Some(Forced::Close) => return Ok(Flow::Continue),
            Some(c) => c,
        };
        let v = self.head();
        let adj = self.adj;
        for &w in &adj[v] {
            if self.visited[w] || w == self.target {
                continue;
            }
            if let Forced::One(f) = choices {
                if w != f {
                    continue;
                }
            }
            if self.push(w) {
                let flow = self.run(budget, sink);
                self.pop();
                if let Flow::Stop = flow? {
                    return Ok(Flow::Stop);
                }
            }
        }
        Ok(Flow::Continue)
    }

    fn flush(&mut self, budget: &Budget) -> std::result::Result<(), Aborted> {
        let p = std::mem::take(&mut self.pending);
        if budget.charge(p) {
            Ok(())
        } else {
            Err(Aborted)
        }
    }

    /// Live prefixes of a fixed length, in lexicographic order.
    fn prefixes(&mut self, depth: usize, out: &mut Vec<Vec<usize>>) {
        if self.path.len() >= depth || self.path.len() == self.adj.len() - 1 {
            out.push(self.path.clone());
            return;
        }
        let choices = match self.successors() {
            None | Some(Forced::Close) => return,
            Some(c) => c,
        };
        let v = self.head();
        let adj = self.adj;
        for &w in &adj[v] {
            if self.visited[w] || w == self.target {
                continue;
            }
            if let Forced::One(f) = choices {
                if w != f {
                    continue;
                }
            }
            if self.push(w) {
                self.prefixes(depth, out);
                self.pop();
            }
        }
    }

    fn replay(&mut self, prefix: &[usize]) -> bool {
        prefix[self.path.len()..].iter().all(|&v| self.push(v))
    }
}

#[derive(Clone, Copy)]
enum Forced {
    Any,
    One(usize),
    Close,
}

fn budget_error(budget: &Budget) -> Error {
    Error::BudgetExceeded { budget: budget.limit }
}

/// `N_{a,b}(n)`: Hamiltonian cycles of `G_{a,b}(n)`, each counted once.
pub fn count_hamiltonian(params: Params, n: usize) -> Result<BigUint> {
    count_hamiltonian_with(params, n, &SearchConfig::default())
}

pub fn count_hamiltonian_with(params: Params, n: usize, config: &SearchConfig) -> Result<BigUint> {
    if let Some(known) = quick_facts(params, n) {
        return Ok(known);
    }
    let adj = adjacency(params, n);
    let budget = Budget::new(config.node_budget);
    let mut root = Walker::new(&adj, params.a(), params.b());

    if !config.parallel || n < 16 {
        let mut count = 0u64;
        let res = root.run(&budget, &mut Sink::Count(&mut count)).and_then(|_| root.flush(&budget));
        return match res {
            Ok(()) => Ok(BigUint::from(count)),
            Err(Aborted) => Err(budget_error(&budget)),
        };
    }

    let mut prefixes = Vec::new();
    let depth = (n / 3).clamp(4, 14);
    root.prefixes(depth, &mut prefixes);
    let counts: Vec<std::result::Result<u64, Aborted>> = prefixes
        .par_iter()
        .map(|prefix| {
            if budget.exceeded() {
                return Err(Aborted);
            }
            let mut w = Walker::new(&adj, params.a(), params.b());
            if !w.replay(prefix) {
                return Ok(0);
            }
            let mut count = 0u64;
            w.run(&budget, &mut Sink::Count(&mut count))?;
            w.flush(&budget)?;
            Ok(count)
        })
        .collect();
    let mut total = BigUint::from(0u32);
    for c in counts {
        match c {
            Ok(c) => total += c,
            Err(Aborted) => return Err(budget_error(&budget)),
        }
    }
    Ok(total)
}

/// Canonical necklaces of length `n` in lexicographic order, at most `limit`.
pub fn enumerate_necklaces(params: Params, n: usize, limit: Option<usize>) -> Result<Vec<Necklace>> {
    enumerate_necklaces_with(params, n, limit, &SearchConfig::default())
}

pub fn enumerate_necklaces_with(
    params: Params,
    n: usize,
    limit: Option<usize>,
    config: &SearchConfig,
) -> Result<Vec<Necklace>> {
    if limit == Some(0) || quick_facts(params, n).is_some_and(|c| c == BigUint::from(0u32)) {
        return Ok(Vec::new());
    }
    let adj = adjacency(params, n);
    let budget = Budget::new(config.node_budget);
    let mut out = Vec::new();
    let mut root = Walker::new(&adj, params.a(), params.b());
    let res = root.run(&budget, &mut Sink::Collect { out: &mut out, limit }).and_then(|_| root.flush(&budget));
    if res.is_err() {
        return Err(budget_error(&budget));
    }
    Ok(out.into_iter().map(|beads| Necklace::from_trusted(params, beads)).collect())
}

/// Spanning subgraphs of `G_{a,b}(n)` in which every vertex has degree 2.
pub fn count_2regular(params: Params, n: usize) -> Result<BigUint> {
    count_2regular_with(params, n, &SearchConfig::default())
}

pub fn count_2regular_with(params: Params, n: usize, config: &SearchConfig) -> Result<BigUint> {
    let (a, b) = (params.a(), params.b());
    let mut deg = vec![0u8; n];
    let mut nodes = 0u64;
    let mut count = 0u64;

    // Vertices are settled in increasing order; `v` may only add edges to
    // `v+a` and `v+b`, so its degree is final once we move past it.
    #[allow(clippy::too_many_arguments)]
    fn go(
        v: usize,
        n: usize,
        a: usize,
        b: usize,
        deg: &mut [u8],
        nodes: &mut u64,
        count: &mut u64,
        limit: u64,
    ) -> std::result::Result<(), Aborted> {
        *nodes += 1;
        if *nodes > limit {
            return Err(Aborted);
        }
        if v == n {
            *count += 1;
            return Ok(());
        }
        let need = 2 - deg[v] as usize;
        let opts: Vec<usize> = [v + a, v + b].into_iter().filter(|&w| w < n && deg[w] < 2).collect();
        let pick = |chosen: &[usize], deg: &mut [u8], nodes: &mut u64, count: &mut u64| {
            for &w in chosen {
                deg[w] += 1;
            }
            deg[v] = 2;
            let r = go(v + 1, n, a, b, deg, nodes, count, limit);
            deg[v] = 2 - need as u8;
            for &w in chosen {
                deg[w] -= 1;
            }
            r
        };
        match need {
            0 => pick(&[], deg, nodes, count),
            1 => {
                for &w in &opts {
                    pick(&[w], deg, nodes, count)?;
                }
                Ok(())
            }
            _ => {
                if opts.len() == 2 {
                    pick(&opts, deg, nodes, count)
                } else {
                    Ok(())
                }
            }
        }
    }

    if n == 0 {
        return Ok(BigUint::from(0u32));
    }
    match go(0, n, a, b, &mut deg, &mut nodes, &mut count, config.node_budget) {
        Ok(()) => Ok(BigUint::from(count)),
        Err(Aborted) => Err(Error::BudgetExceeded { budget: config.node_budget }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate;

    fn p(a: usize, b: usize) -> Params {
        Params::new(a, b).unwrap()
    }

    fn count(a: usize, b: usize, n: usize) -> u64 {
        let c = count_hamiltonian(p(a, b), n).unwrap();
        u64::try_from(c).unwrap()
    }

    #[test]
    fn table_spot_values() {
        assert_eq!(count(2, 3, 22), 15);
        assert_eq!(count(4, 7, 22), 3);
        assert_eq!(count(2, 3, 9), 0);
        assert_eq!(count(1, 4, 13), 6);
    }

    #[test]
    fn four_seven_has_one_necklace_of_length_eleven() {
        let all = enumerate_necklaces(p(4, 7), 11, None).unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].beads(), &[0, 4, 8, 1, 5, 9, 2, 6, 10, 3, 7]);
    }

    #[test]
    fn one_two_has_a_single_necklace() {
        assert_eq!(enumerate_necklaces(p(1, 2), 7, None).unwrap().len(), 1);
        for n in 3..30 {
            assert_eq!(count(1, 2, n), 1, "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_sorted_canonical_and_valid() {
        let list = enumerate_necklaces(p(1, 4), 10, None).unwrap();
        assert_eq!(list.len(), 3);
        for neck in &list {
            assert_eq!(validate(p(1, 4), neck.beads()), Ok(()));
            assert_eq!(&neck.canonical(), neck);
        }
        assert!(list.windows(2).all(|w| w[0].beads() < w[1].beads()));
        let first_two = enumerate_necklaces(p(1, 4), 10, Some(2)).unwrap();
        assert_eq!(first_two[..], list[..2]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        for (a, b, n) in [(1, 3, 24), (2, 3, 30), (1, 5, 26), (2, 5, 28)] {
            let par = count_hamiltonian_with(p(a, b), n, &SearchConfig::with_budget(u64::MAX)).unwrap();
            let seq = count_hamiltonian_with(p(a, b), n, &SearchConfig::with_budget(u64::MAX).sequential()).unwrap();
            let listed = enumerate_necklaces(p(a, b), n, None).unwrap().len();
            assert_eq!(par, seq);
            assert_eq!(par, BigUint::from(listed));
        }
    }

    #[test]
    fn budget_is_enforced() {
        let err = count_hamiltonian_with(p(1, 5), 30, &SearchConfig::with_budget(100)).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 100 });
        let err = count_hamiltonian_with(p(1, 5), 30, &SearchConfig::with_budget(100).sequential()).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { budget: 100 });
    }

    #[test]
    fn two_regular_small_values() {
        let c = |a, b, n| u64::try_from(count_2regular(p(a, b), n).unwrap()).unwrap();
        assert_eq!(c(2, 3, 5), 1);
        assert_eq!(c(2, 3, 10), 2);
        assert_eq!(c(2, 3, 7), 0);
        assert_eq!(c(2, 3, 8), 0);
        assert_eq!(c(1, 2, 6), 2);
        assert_eq!(c(1, 3, 8), 4);
    }

    #[test]
    fn fibonacci_for_one_three() {
        let (mut f0, mut f1) = (1u64, 1u64);
        for m in 2..=12 {
            assert_eq!(count(1, 3, 2 * m), f1, "m = {m}");
            (f0, f1) = (f1, f0 + f1);
        }
    }
}
