//! Transfer digraphs and walk counting.
//!
//! Walks from `Start` to an end vertex with weight sum `n` correspond one to one
//! with 2-regular spanning subgraphs of `G_{a,b}(n)` (in `D'`) or with its
//! Hamiltonian cycles (in `D`), for every `n > 2b`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::Serialize;

use crate::blocks::{augment, enumerate_blocks, is_compatible, Block, BlockKind, BlockSet, RowPairing, Universe};
use crate::enumerate::count_hamiltonian;
use crate::error::{Error, Result};
use crate::model::{quick_facts, Params};

/// `build_d` refuses larger `b` unless [`DigraphOptions::allow_large`] is set.
pub const DEFAULT_MAX_B: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DigraphKind {
    /// `D'`: walks count 2-regular spanning subgraphs.
    TwoRegular,
    /// `D`: walks count Hamiltonian cycles.
    Hamiltonian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DigraphOptions {
    pub allow_large: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeLabel {
    Start,
    /// A block vertex of `D'`.
    Block(Block),
    /// A start or mid block with the pairing carried into it.
    Pair(Block, RowPairing),
    /// An end block of `D`.
    End(Block),
    /// Every `(B, L)` whose `B` has these right-column degrees; they share all
    /// out-edges.
    Class {
        right_degrees: Vec<u8>,
        pairing: RowPairing,
    },
    /// All end blocks with right column length `s`.
    EndClass {
        s: usize,
    },
}

impl NodeLabel {
    pub fn is_end(&self) -> bool {
        match self {
            NodeLabel::Block(b) => b.kind() == BlockKind::End,
            NodeLabel::End(_) | NodeLabel::EndClass { .. } => true,
            _ => false,
        }
    }

    fn kind_name(&self) -> String {
        match self {
            NodeLabel::Start => "start-vertex".into(),
            NodeLabel::Block(b) => format!("{}-block", b.kind()),
            NodeLabel::Pair(b, _) => format!("{}-pair", b.kind()),
            NodeLabel::End(_) => "end".into(),
            NodeLabel::Class { .. } => "class".into(),
            NodeLabel::EndClass { .. } => "end-class".into(),
        }
    }

    fn describe(&self) -> String {
        let edges = |b: &Block| b.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect::<Vec<_>>().join(",");
        match self {
            NodeLabel::Start => "S".into(),
            NodeLabel::Block(b) | NodeLabel::End(b) => format!("s={} [{}]", b.right_len(), edges(b)),
            NodeLabel::Pair(b, l) => format!("s={} [{}] L={l}", b.right_len(), edges(b)),
            NodeLabel::Class { right_degrees, pairing } => {
                let d: String = right_degrees.iter().map(|d| char::from(b'0' + d)).collect();
                format!("deg={d} L={pairing}")
            }
            NodeLabel::EndClass { s } => format!("s={s}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub weight: usize,
    /// Parallel edges folded into one.
    pub multiplicity: u64,
}

/// A weighted digraph with a distinguished start vertex (node 0).
#[derive(Debug, Clone)]
pub struct WeightedDigraph {
    params: Params,
    kind: DigraphKind,
    nodes: Vec<NodeLabel>,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
}

impl WeightedDigraph {
    fn new(params: Params, kind: DigraphKind) -> Self {
        WeightedDigraph { params, kind, nodes: vec![NodeLabel::Start], edges: Vec::new(), out: vec![Vec::new()] }
    }

    fn add_node(&mut self, label: NodeLabel) -> usize {
        self.nodes.push(label);
        self.out.push(Vec::new());
        self.nodes.len() - 1
    }

    fn add_edge(&mut self, from: usize, to: usize, weight: usize, multiplicity: u64) {
        self.out[from].push(self.edges.len());
        self.edges.push(Edge { from, to, weight, multiplicity });
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn kind(&self) -> DigraphKind {
        self.kind
    }

    pub const START: usize = 0;

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = &Edge> {
        self.out[v].iter().map(|&e| &self.edges[e])
    }

    pub fn find_node(&self, label: &NodeLabel) -> Option<usize> {
        self.nodes.iter().position(|x| x == label)
    }

    pub fn edge_between(&self, from: usize, to: usize) -> Option<&Edge> {
        self.out_edges(from).find(|e| e.to == to)
    }

    /// `vertex <id> <kind> <description>` and `edge <from> <to> <weight>` lines.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (id, label) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "vertex {id} {} {}", label.kind_name(), label.describe());
        }
        for e in &self.edges {
            for _ in 0..e.multiplicity {
                let _ = writeln!(out, "edge {} {} {}", e.from, e.to, e.weight);
            }
        }
        out
    }
}

/// Node ids for lazily discovered vertices; new keys are queued for expansion.
struct Interner<K> {
    ids: HashMap<K, usize>,
    queue: VecDeque<K>,
}

impl<K: Clone + Eq + std::hash::Hash> Interner<K> {
    fn new() -> Self {
        Interner { ids: HashMap::new(), queue: VecDeque::new() }
    }

    fn intern(&mut self, d: &mut WeightedDigraph, key: K, label: impl FnOnce(&K) -> NodeLabel) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        let id = d.add_node(label(&key));
        self.queue.push_back(key.clone());
        self.ids.insert(key, id);
        id
    }
}

/// Base-3 code of a degree vector.
fn degree_key(degrees: impl IntoIterator<Item = u8>) -> u64 {
    degrees.into_iter().fold(0u64, |k, d| k * 3 + d as u64)
}

/// Blocks that may follow a block, indexed by their left-column degrees.
struct Successors<'a> {
    mid: HashMap<u64, Vec<&'a Block>>,
    end: HashMap<u64, Vec<&'a Block>>,
}

impl<'a> Successors<'a> {
    fn new(set: &'a BlockSet) -> Self {
        let mut mid: HashMap<u64, Vec<&Block>> = HashMap::new();
        let mut end: HashMap<u64, Vec<&Block>> = HashMap::new();
        for blk in &set.mid {
            mid.entry(degree_key(blk.left_degrees())).or_default().push(blk);
        }
        for blk in &set.end {
            end.entry(degree_key(blk.left_degrees())).or_default().push(blk);
        }
        Successors { mid, end }
    }

    /// Compatible followers of a block with these right-column degrees.
    fn after(&self, right_degrees: &[u8]) -> (&[&'a Block], &[&'a Block]) {
        let key = degree_key(right_degrees.iter().map(|d| 2 - d));
        let mid = self.mid.get(&key).map_or(&[][..], Vec::as_slice);
        let end = self.end.get(&key).map_or(&[][..], Vec::as_slice);
        (mid, end)
    }
}

fn check_params(params: Params, options: DigraphOptions) -> Result<()> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {}", params.gcd())));
    }
    if params.b() > DEFAULT_MAX_B && !options.allow_large {
        return Err(Error::TooLarge { b: params.b(), limit: DEFAULT_MAX_B });
    }
    Ok(())
}

/// `D'`: start, mid and end blocks as vertices, every compatible pair as an
/// edge weighted by the right column length of its target.
///
/// Blocks tagged `start` are entered only from `Start`; every later position is
/// filled by a mid or end block. End blocks with a full right column keep their
/// out-edges, since a 2-regular subgraph may close a cycle before the last
/// column.
pub fn build_d_prime(params: Params) -> Result<WeightedDigraph> {
    build_d_prime_with(params, DigraphOptions::default())
}

pub fn build_d_prime_with(params: Params, options: DigraphOptions) -> Result<WeightedDigraph> {
    check_params(params, options)?;
    let set = enumerate_blocks(params)?;
    let b = params.b();
    let succ = Successors::new(&set);
    let mut d = WeightedDigraph::new(params, DigraphKind::TwoRegular);
    let mut ids: HashMap<Block, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for blk in &set.start {
        let id = d.add_node(NodeLabel::Block(blk.clone()));
        ids.insert(blk.clone(), id);
        d.add_edge(WeightedDigraph::START, id, 2 * b, 1);
        queue.push_back(blk.clone());
    }
    while let Some(blk) = queue.pop_front() {
        if blk.right_len() != b {
            continue;
        }
        let from = ids[&blk];
        let (mids, ends) = succ.after(&blk.right_degrees());
        for &next in mids.iter().chain(ends) {
            debug_assert!(is_compatible(&blk, next));
            let to = *ids.entry(next.clone()).or_insert_with(|| {
                queue.push_back(next.clone());
                d.nodes.push(NodeLabel::Block(next.clone()));
                d.out.push(Vec::new());
                d.nodes.len() - 1
            });
            d.add_edge(from, to, next.right_len(), 1);
        }
    }
    Ok(d)
}

/// What appending `next` to a chain with pairing `pairing` does.
enum Step {
    /// Still acyclic; the pairing carried forward.
    Open(RowPairing),
    /// Closes one cycle through every vertex.
    Closed,
    Dead,
}

fn step(next: &Block, pairing: &RowPairing) -> Step {
    let aug = augment(next, pairing).expect("mid or end block");
    match next.kind() {
        BlockKind::Mid => {
            if aug.acyclic() {
                Step::Open(aug.pairing_of().expect("acyclic chains end in the last column"))
            } else {
                Step::Dead
            }
        }
        BlockKind::End => {
            if aug.cycle_plus_isolated() {
                Step::Closed
            } else {
                Step::Dead
            }
        }
        BlockKind::Start => Step::Dead,
    }
}

/// Start blocks that open an acyclic chain, with their pairings.
fn openings(set: &BlockSet) -> Vec<(&Block, RowPairing)> {
    set.start
        .iter()
        .filter_map(|blk| {
            let g = blk.to_graph();
            if g.is_acyclic() {
                Some((blk, g.pairing().expect("start blocks hold only right-ending paths")))
            } else {
                None
            }
        })
        .collect()
}

/// `D`, built as the closure of `Start` under its three edge rules.
pub fn build_d(params: Params) -> Result<WeightedDigraph> {
    build_d_with(params, DigraphOptions::default())
}

pub fn build_d_with(params: Params, options: DigraphOptions) -> Result<WeightedDigraph> {
    check_params(params, options)?;
    let set = enumerate_blocks(params)?;
    let b = params.b();
    let succ = Successors::new(&set);
    let mut d = WeightedDigraph::new(params, DigraphKind::Hamiltonian);
    let mut pairs: Interner<(Block, RowPairing)> = Interner::new();
    let mut end_ids: HashMap<Block, usize> = HashMap::new();
    let label = |k: &(Block, RowPairing)| NodeLabel::Pair(k.0.clone(), k.1.clone());

    for (blk, l) in openings(&set) {
        let id = pairs.intern(&mut d, (blk.clone(), l), label);
        d.add_edge(WeightedDigraph::START, id, 2 * b, 1);
    }
    while let Some((blk, l)) = pairs.queue.pop_front() {
        let from = pairs.ids[&(blk.clone(), l.clone())];
        let (mids, ends) = succ.after(&blk.right_degrees());
        for &next in mids {
            if let Step::Open(l2) = step(next, &l) {
                let to = pairs.intern(&mut d, (next.clone(), l2), label);
                d.add_edge(from, to, b, 1);
            }
        }
        for &next in ends {
            if let Step::Closed = step(next, &l) {
                let to = *end_ids.entry(next.clone()).or_insert_with(|| d.add_node(NodeLabel::End(next.clone())));
                d.add_edge(from, to, next.right_len(), 1);
            }
        }
    }
    Ok(d)
}

/// `D` with each `(B, L)` merged into the class of `B`'s right-column degrees
/// and `L`, and end blocks merged by right column length. Parallel edges are
/// folded into multiplicities, so walk counts are unchanged.
pub fn build_d_quotient(params: Params) -> Result<WeightedDigraph> {
    build_d_quotient_with(params, DigraphOptions::default())
}

pub fn build_d_quotient_with(params: Params, options: DigraphOptions) -> Result<WeightedDigraph> {
    check_params(params, options)?;
    let set = enumerate_blocks(params)?;
    let b = params.b();
    let succ = Successors::new(&set);
    let mut d = WeightedDigraph::new(params, DigraphKind::Hamiltonian);
    let end_ids: Vec<usize> = (1..=b).map(|s| d.add_node(NodeLabel::EndClass { s })).collect();
    let mut classes: Interner<(Vec<u8>, RowPairing)> = Interner::new();
    let label = |k: &(Vec<u8>, RowPairing)| NodeLabel::Class { right_degrees: k.0.clone(), pairing: k.1.clone() };

    let mut tally: BTreeMap<usize, u64> = BTreeMap::new();
    for (blk, l) in openings(&set) {
        let id = classes.intern(&mut d, (blk.right_degrees(), l), label);
        *tally.entry(id).or_default() += 1;
    }
    for (to, m) in std::mem::take(&mut tally) {
        d.add_edge(WeightedDigraph::START, to, 2 * b, m);
    }
    while let Some((deg, l)) = classes.queue.pop_front() {
        let from = classes.ids[&(deg.clone(), l.clone())];
        let (mids, ends) = succ.after(&deg);
        for &next in mids {
            if let Step::Open(l2) = step(next, &l) {
                let to = classes.intern(&mut d, (next.right_degrees(), l2), label);
                *tally.entry(to).or_default() += 1;
            }
        }
        for (to, m) in std::mem::take(&mut tally) {
            d.add_edge(from, to, b, m);
        }
        let mut by_len = vec![0u64; b + 1];
        for &next in ends {
            if let Step::Closed = step(next, &l) {
                by_len[next.right_len()] += 1;
            }
        }
        for (s, &m) in by_len.iter().enumerate().skip(1) {
            if m > 0 {
                d.add_edge(from, end_ids[s - 1], s, m);
            }
        }
    }
    Ok(d)
}

/// Walk counts from `Start` by accumulated weight.
#[derive(Debug, Clone)]
pub struct WalkCountTable {
    n_max: usize,
    /// `layers[w]` holds the nonzero counts of walks with weight sum `w`.
    layers: Vec<BTreeMap<usize, BigUint>>,
    ends: Vec<bool>,
}

impl WalkCountTable {
    pub fn new(d: &WeightedDigraph, n_max: usize) -> Self {
        let mut layers: Vec<BTreeMap<usize, BigUint>> = vec![BTreeMap::new(); n_max + 1];
        layers[0].insert(WeightedDigraph::START, BigUint::from(1u32));
        for w in 0..=n_max {
            let layer = std::mem::take(&mut layers[w]);
            for (&v, count) in &layer {
                for e in d.out_edges(v) {
                    let w2 = w + e.weight;
                    if w2 <= n_max {
                        *layers[w2].entry(e.to).or_default() += count * e.multiplicity;
                    }
                }
            }
            layers[w] = layer;
        }
        let ends = d.nodes.iter().map(NodeLabel::is_end).collect();
        WalkCountTable { n_max, layers, ends }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn get(&self, v: usize, w: usize) -> BigUint {
        self.layers.get(w).and_then(|l| l.get(&v)).cloned().unwrap_or_default()
    }

    /// Walks of weight `w` ending at any end vertex.
    pub fn end_total(&self, w: usize) -> BigUint {
        self.layers.get(w).map(|l| l.iter().filter(|(v, _)| self.ends[**v]).map(|(_, c)| c).sum()).unwrap_or_default()
    }
}

/// Weight-`n` walks from `Start` to an end vertex.
pub fn count_walks(d: &WeightedDigraph, n: usize) -> BigUint {
    WalkCountTable::new(d, n).end_total(n)
}

/// Hamiltonian cycles of `G_{a,b}(n)` for `b < n <= 2b`, where the graph has
/// only two columns: 2-regular subgraphs of the two-column universe that are
/// one cycle.
pub fn count_two_column(params: Params, n: usize) -> Result<BigUint> {
    let b = params.b();
    if n <= b || n > 2 * b {
        return Err(Error::Precondition(format!("two-column count needs {b} < n <= {}", 2 * b)));
    }
    let uni = Universe::new(params, n - b)?;
    Ok(BigUint::from(uni.hamiltonian_subsets()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Auto,
    Dfs,
    Transfer,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Method::Auto),
            "dfs" => Ok(Method::Dfs),
            "transfer" => Ok(Method::Transfer),
            _ => Err(Error::InvalidParams(format!("unknown method {s:?}"))),
        }
    }
}

/// The route a count actually took.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    QuickFacts,
    Dfs,
    TwoColumn,
    Transfer,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::QuickFacts => "closed form",
            Route::Dfs => "dfs",
            Route::TwoColumn => "transfer (two-column)",
            Route::Transfer => "transfer",
        }
    }
}

fn auto_uses_transfer(params: Params) -> bool {
    params.is_coprime() && params.b() <= DEFAULT_MAX_B
}

/// `N_{a,b}(n)` by the chosen method, and the route it took.
pub fn count_with(params: Params, n: usize, method: Method) -> Result<(BigUint, Route)> {
    if let Some(c) = quick_facts(params, n) {
        return Ok((c, Route::QuickFacts));
    }
    let b = params.b();
    let transfer = match method {
        Method::Dfs => false,
        Method::Transfer => true,
        Method::Auto => auto_uses_transfer(params) && n > 2 * b,
    };
    if !transfer {
        return Ok((count_hamiltonian(params, n)?, Route::Dfs));
    }
    if n <= 2 * b {
        return Ok((count_two_column(params, n)?, Route::TwoColumn));
    }
    let d = build_d_quotient_with(params, DigraphOptions { allow_large: method == Method::Transfer })?;
    Ok((count_walks(&d, n), Route::Transfer))
}

/// `N_{a,b}(n)`: closed form, then DFS for `n <= 2b`, then walks in `D`.
pub fn count_necklaces(params: Params, n: usize) -> Result<BigUint> {
    if let Some(c) = quick_facts(params, n) {
        return Ok(c);
    }
    if n <= 2 * params.b() || !auto_uses_transfer(params) {
        return count_hamiltonian(params, n);
    }
    let d = build_d_quotient(params)?;
    Ok(count_walks(&d, n))
}

/// `N_{a,b}(n)` for `n = a+b ..= n_max`, from one walk table.
pub fn sequence(params: Params, n_max: usize) -> Result<Vec<BigUint>> {
    sequence_with(params, n_max, Method::Auto)
}

pub fn sequence_with(params: Params, n_max: usize, method: Method) -> Result<Vec<BigUint>> {
    let (a, b) = (params.a(), params.b());
    if n_max < a + b {
        return Ok(Vec::new());
    }
    let use_transfer = match method {
        Method::Dfs => false,
        Method::Transfer => true,
        Method::Auto => auto_uses_transfer(params),
    };
    let table = if use_transfer && params.is_coprime() && n_max > 2 * b {
        let options = DigraphOptions { allow_large: method == Method::Transfer };
        Some(WalkCountTable::new(&build_d_quotient_with(params, options)?, n_max))
    } else {
        None
    };
    (a + b..=n_max)
        .map(|n| {
            if let Some(c) = quick_facts(params, n) {
                return Ok(c);
            }
            match &table {
                Some(t) if n > 2 * b => Ok(t.end_total(n)),
                _ if use_transfer => count_two_column(params, n),
                _ => count_hamiltonian(params, n),
            }
        })
        .collect()
}

/// Plain `u64` totals of a count sequence, for display and tests.
pub fn as_u64(seq: &[BigUint]) -> Option<Vec<u64>> {
    seq.iter().map(|c| u64::try_from(c).ok()).collect()
}
