//! Two-column blocks.
//!
//! A 2-regular spanning subgraph of `G_{a,b}(n)`, `n > 2b`, splits uniquely
//! into a chain of blocks, one per pair of adjacent columns: the first keeps
//! everything induced by columns 0 and 1, each later one drops the edges inside
//! its left column. Blocks are stored as bitsets over a fixed, sorted edge
//! universe.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Params;

/// Edge universes wider than this do not fit a `u64` mask.
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BlockKind {
    Start,
    Mid,
    End,
}

impl BlockKind {
    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Start => "start",
            BlockKind::Mid => "mid",
            BlockKind::End => "end",
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The graph `G_{a,b}(b+s)` viewed as two columns: left rows `0..b` are
/// vertices `0..b`, right rows `0..s` are vertices `b..b+s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    params: Params,
    s: usize,
    edges: Vec<(usize, usize)>,
    /// `incident[v]` is the mask of universe edges touching `v`.
    incident: Vec<u64>,
    left_internal: u64,
}

impl Universe {
    pub fn new(params: Params, s: usize) -> Result<Self> {
        let (a, b) = (params.a(), params.b());
        if s == 0 || s > b {
            return Err(Error::Precondition(format!("right column length {s} outside 1..={b}")));
        }
        let mut edges = Vec::new();
        for i in 0..b {
            if i + a < b {
                edges.push((i, i + a));
            }
            if i < s {
                edges.push((i, b + i));
            }
            if i + a >= b && i + a - b < s {
                edges.push((i, i + a));
            }
        }
        for i in 0..s {
            if i + a < s {
                edges.push((b + i, b + i + a));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        if edges.len() > MAX_UNIVERSE {
            return Err(Error::TooLarge { b, limit: MAX_UNIVERSE });
        }
        let mut incident = vec![0u64; b + s];
        let mut left_internal = 0u64;
        for (k, &(u, v)) in edges.iter().enumerate() {
            incident[u] |= 1 << k;
            incident[v] |= 1 << k;
            if v < b {
                left_internal |= 1 << k;
            }
        }
        Ok(Universe { params, s, edges, incident, left_internal })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn right_len(&self) -> usize {
        self.s
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn index_of(&self, u: usize, v: usize) -> Option<usize> {
        let e = (u.min(v), u.max(v));
        self.edges.binary_search(&e).ok()
    }

    fn full_mask(&self) -> u64 {
        if self.edges.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.edges.len()) - 1
        }
    }

    /// Edge sets through which a single cycle visits every vertex.
    pub fn hamiltonian_subsets(&self) -> u64 {
        let b = self.params.b();
        let demand = vec![Demand::Two; self.incident.len()];
        subsets(self, self.full_mask(), &demand)
            .into_iter()
            .filter(|&m| {
                let edges = self.edges.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &e)| e);
                ColumnGraph::new(b, self.incident.len(), edges).is_cycle_plus_isolated()
            })
            .count() as u64
    }

    #[inline]
    fn degree(&self, mask: u64, v: usize) -> usize {
        (mask & self.incident[v]).count_ones() as usize
    }
}

/// A block: a subgraph of a two-column universe with a kind tag.
///
/// The same edge set can qualify for two kinds (a start block with no
/// left-column edges is also a mid or an end block); each stored value
/// carries exactly one tag.
#[derive(Clone)]
pub struct Block {
    universe: Arc<Universe>,
    mask: u64,
    kind: BlockKind,
}

impl PartialEq for Block {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
            && self.kind == other.kind
            && self.universe.s == other.universe.s
            && self.universe.params == other.universe.params
    }
}

impl Eq for Block {}

impl std::hash::Hash for Block {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mask.hash(state);
        self.kind.hash(state);
        self.universe.s.hash(state);
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.kind, self.universe.s, self.mask).cmp(&(other.kind, other.universe.s, other.mask))
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Block({} s={} {:?})", self.kind, self.right_len(), self.edges())
    }
}

impl Block {
    /// Builds a block from explicit edges (vertex numbering as in [`Universe`])
    /// and checks it against the definition of `kind`.
    pub fn from_edges(params: Params, s: usize, edges: &[(usize, usize)], kind: BlockKind) -> Result<Self> {
        let universe = Arc::new(Universe::new(params, s)?);
        let mut mask = 0u64;
        for &(u, v) in edges {
            let k =
                universe.index_of(u, v).ok_or_else(|| Error::MalformedGraph(format!("{u}-{v} is not a block edge")))?;
            mask |= 1 << k;
        }
        let block = Block { universe, mask, kind };
        if !block.satisfies(kind) {
            return Err(Error::MalformedGraph(format!("edges do not form a {kind} block")));
        }
        Ok(block)
    }

    pub(crate) fn from_mask(universe: Arc<Universe>, mask: u64, kind: BlockKind) -> Self {
        Block { universe, mask, kind }
    }

    pub fn params(&self) -> Params {
        self.universe.params
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn right_len(&self) -> usize {
        self.universe.s
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.universe.edges.iter().enumerate().filter(|(k, _)| self.mask >> k & 1 == 1).map(|(_, &e)| e).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.universe.degree(self.mask, v)
    }

    pub fn left_degrees(&self) -> Vec<u8> {
        (0..self.params().b()).map(|i| self.degree(i) as u8).collect()
    }

    pub fn right_degrees(&self) -> Vec<u8> {
        let b = self.params().b();
        (0..self.right_len()).map(|i| self.degree(b + i) as u8).collect()
    }

    pub fn has_left_internal(&self) -> bool {
        self.mask & self.universe.left_internal != 0
    }

    /// Whether the edge set meets the definition of `kind`.
    pub fn satisfies(&self, kind: BlockKind) -> bool {
        let b = self.params().b();
        let s = self.right_len();
        if (0..b + s).any(|v| self.degree(v) > 2) {
            return false;
        }
        match kind {
            BlockKind::Start => s == b && (0..b).all(|i| self.degree(i) == 2),
            BlockKind::Mid => s == b && !self.has_left_internal() && (0..s).any(|i| self.degree(b + i) <= 1),
            BlockKind::End => !self.has_left_internal() && (0..s).all(|i| self.degree(b + i) == 2),
        }
    }

    pub fn to_graph(&self) -> ColumnGraph {
        let b = self.params().b();
        ColumnGraph::new(b, b + self.right_len(), self.edges())
    }

    /// Line-oriented dump: a `block <kind> <s>` header, then one `u-v` per edge.
    pub fn export(&self) -> String {
        let mut out = format!("block {} {}\n", self.kind, self.right_len());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u}-{v}\n"));
        }
        out
    }
}

/// All blocks of a parameter pair, by kind.
#[derive(Debug, Clone)]
pub struct BlockSet {
    pub params: Params,
    pub start: Vec<Block>,
    pub mid: Vec<Block>,
    /// End blocks for every right length `1..=b`, ordered by `s`.
    pub end: Vec<Block>,
}

impl BlockSet {
    pub fn end_with_len(&self, s: usize) -> impl Iterator<Item = &Block> {
        self.end.iter().filter(move |blk| blk.right_len() == s)
    }

    pub fn all(&self) -> impl Iterator<Item = &Block> {
        self.start.iter().chain(&self.mid).chain(&self.end)
    }

    pub fn count(&self, kind: BlockKind) -> usize {
        match kind {
            BlockKind::Start => self.start.len(),
            BlockKind::Mid => self.mid.len(),
            BlockKind::End => self.end.len(),
        }
    }

    pub fn export(&self) -> String {
        self.all().map(Block::export).collect()
    }
}

/// Final-degree demands for the backtracking enumerator.
#[derive(Clone, Copy)]
enum Demand {
    Any,
    Two,
}

/// Edge subsets of `universe` (restricted to `allowed`) with all degrees at
/// most 2 and the demanded vertices at exactly 2.
fn subsets(universe: &Universe, allowed: u64, demand: &[Demand]) -> Vec<u64> {
    let m = universe.edges.len();
    let v_count = universe.incident.len();
    // Edge index after which a vertex's degree is final.
    let mut last = vec![None; v_count];
    for (k, &(u, v)) in universe.edges.iter().enumerate() {
        if allowed >> k & 1 == 1 {
            last[u] = Some(k);
            last[v] = Some(k);
        }
    }
    let mut closes: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (v, l) in last.iter().enumerate() {
        if let Some(k) = l {
            closes[*k].push(v);
        }
    }
    if demand.iter().enumerate().any(|(v, d)| matches!(d, Demand::Two) && last[v].is_none()) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut deg = vec![0u8; v_count];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        mask: u64,
        universe: &Universe,
        allowed: u64,
        demand: &[Demand],
        closes: &[Vec<usize>],
        deg: &mut [u8],
        out: &mut Vec<u64>,
    ) {
        if k == universe.edges.len() {
            out.push(mask);
            return;
        }
        let ok_after = |deg: &[u8]| closes[k].iter().all(|&v| !matches!(demand[v], Demand::Two) || deg[v] == 2);
        if allowed >> k & 1 == 0 {
            go(k + 1, mask, universe, allowed, demand, closes, deg, out);
            return;
        }
        let (u, v) = universe.edges[k];
        if ok_after(deg) {
            go(k + 1, mask, universe, allowed, demand, closes, deg, out);
        }
        if deg[u] < 2 && deg[v] < 2 {
            deg[u] += 1;
            deg[v] += 1;
            if ok_after(deg) {
                go(k + 1, mask | 1 << k, universe, allowed, demand, closes, deg, out);
            }
            deg[u] -= 1;
            deg[v] -= 1;
        }
    }

    go(0, 0, universe, allowed, demand, &closes, &mut deg, &mut out);
    out.sort_unstable();
    out
}

/// Every start, mid and end block for `(a, b)`.
pub fn enumerate_blocks(params: Params) -> Result<BlockSet> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {}", params.gcd())));
    }
    let b = params.b();
    let full = Arc::new(Universe::new(params, b)?);
    let all_edges = full.full_mask();

    let mut demand = vec![Demand::Any; 2 * b];
    demand[..b].fill(Demand::Two);
    let start = subsets(&full, all_edges, &demand)
        .into_iter()
        .map(|m| Block::from_mask(full.clone(), m, BlockKind::Start))
        .collect();

    let no_left = all_edges & !full.left_internal;
    let mid = subsets(&full, no_left, &vec![Demand::Any; 2 * b])
        .into_iter()
        .map(|m| Block::from_mask(full.clone(), m, BlockKind::Mid))
        .filter(|blk| blk.satisfies(BlockKind::Mid) && blk.degree(0) <= 1)
        .collect();

    let mut end = Vec::new();
    for s in 1..=b {
        let uni = if s == b { full.clone() } else { Arc::new(Universe::new(params, s)?) };
        let all = uni.full_mask();
        let mut demand = vec![Demand::Any; b + s];
        demand[b..].fill(Demand::Two);
        end.extend(
            subsets(&uni, all & !uni.left_internal, &demand)
                .into_iter()
                .map(|m| Block::from_mask(uni.clone(), m, BlockKind::End))
                .filter(|blk| blk.degree(0) <= 1),
        );
    }
    Ok(BlockSet { params, start, mid, end })
}

/// `(b, b2)` is compatible when `b` has a full right column and every vertex
/// of the shared middle column ends up with degree exactly 2.
pub fn is_compatible(first: &Block, second: &Block) -> bool {
    let b = first.params().b();
    if first.params() != second.params() || first.right_len() != b {
        return false;
    }
    (0..b).all(|i| first.degree(b + i) + second.degree(i) == 2)
}

/// A partial matching on the rows `0..b`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RowPairing {
    pairs: Vec<(u8, u8)>,
}

impl RowPairing {
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out: Vec<(u8, u8)> = Vec::new();
        let mut used = BTreeSet::new();
        for (i, j) in pairs {
            if i == j || i > u8::MAX as usize || j > u8::MAX as usize {
                return Err(Error::MalformedGraph(format!("bad row pair {{{i},{j}}}")));
            }
            if !used.insert(i) || !used.insert(j) {
                return Err(Error::MalformedGraph(format!("row pairs overlap at {{{i},{j}}}")));
            }
            out.push((i.min(j) as u8, i.max(j) as u8));
        }
        out.sort_unstable();
        Ok(RowPairing { pairs: out })
    }

    pub fn empty() -> Self {
        RowPairing::default()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|&(i, j)| (i as usize, j as usize))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for RowPairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, j)) in self.pairs().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{i},{j}}}")?;
        }
        f.write_str("}")
    }
}

/// An undirected graph on `0..n` in the column layout (vertex `j*b + i` is
/// row `i` of column `j`). Edges need not be differences of `a` or `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnGraph {
    b: usize,
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Component shape in a graph of maximum degree 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Piece {
    Isolated(usize),
    Path(usize, usize),
    Cycle,
}

impl ColumnGraph {
    pub fn new(b: usize, n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut edges: Vec<_> = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        edges.sort_unstable();
        edges.dedup();
        ColumnGraph { b, n, edges }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// First vertex of the rightmost column.
    pub fn rightmost_start(&self) -> usize {
        (self.n - 1) / self.b * self.b
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency().iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Connected components, or an error if some vertex has degree above 2.
    pub fn pieces(&self) -> Result<Vec<Piece>> {
        let adj = self.adjacency();
        if let Some(v) = (0..self.n).find(|&v| adj[v].len() > 2) {
            return Err(Error::MalformedGraph(format!("vertex {v} has degree {}", adj[v].len())));
        }
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        // Paths first, walked from an endpoint.
        for v in 0..self.n {
            if seen[v] || adj[v].len() > 1 {
                continue;
            }
            if adj[v].is_empty() {
                seen[v] = true;
                out.push(Piece::Isolated(v));
                continue;
            }
            let (mut prev, mut cur) = (v, adj[v][0]);
            seen[v] = true;
            loop {
                seen[cur] = true;
                match adj[cur].iter().find(|&&w| w != prev) {
                    Some(&w) if adj[cur].len() == 2 => {
                        prev = cur;
                        cur = w;
                    }
                    _ => break,
                }
            }
            out.push(Piece::Path(v.min(cur), v.max(cur)));
        }
        for v in 0..self.n {
            if seen[v] {
                continue;
            }
            let mut stack = vec![v];
            seen[v] = true;
            while let Some(x) = stack.pop() {
                for &w in &adj[x] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            out.push(Piece::Cycle);
        }
        Ok(out)
    }

    pub fn cycle_count(&self) -> Result<usize> {
        Ok(self.pieces()?.iter().filter(|p| matches!(p, Piece::Cycle)).count())
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_count() == Ok(0)
    }

    /// One cycle plus isolated vertices.
    pub fn is_cycle_plus_isolated(&self) -> bool {
        match self.pieces() {
            Ok(pieces) => {
                pieces.iter().filter(|p| matches!(p, Piece::Cycle)).count() == 1
                    && pieces.iter().all(|p| !matches!(p, Piece::Path(..)))
            }
            Err(_) => false,
        }
    }

    /// Rows joined by maximal paths, which must end in the rightmost column.
    pub fn pairing(&self) -> Result<RowPairing> {
        let right = self.rightmost_start();
        let mut pairs = Vec::new();
        for piece in self.pieces()? {
            if let Piece::Path(u, v) = piece {
                if u < right || v < right {
                    return Err(Error::MalformedGraph(format!("path {u}..{v} ends outside the rightmost column")));
                }
                pairs.push((u - right, v - right));
            }
        }
        RowPairing::new(pairs)
    }

    /// Every vertex has degree exactly 2.
    pub fn is_two_regular(&self) -> bool {
        self.adjacency().iter().all(|a| a.len() == 2)
    }
}

/// `L(H)`, the rows of the rightmost column joined by maximal paths of `H`.
pub fn pairing_of(h: &ColumnGraph) -> Result<RowPairing> {
    h.pairing()
}

/// A mid or end block together with virtual left-column edges, one per pair.
#[derive(Debug, Clone)]
pub struct AugmentedBlock {
    pub block: Block,
    pub pairing: RowPairing,
    pub graph: ColumnGraph,
}

impl AugmentedBlock {
    pub fn acyclic(&self) -> bool {
        self.graph.max_degree() <= 2 && self.graph.is_acyclic()
    }

    pub fn cycle_plus_isolated(&self) -> bool {
        self.graph.is_cycle_plus_isolated()
    }

    pub fn pairing_of(&self) -> Result<RowPairing> {
        self.graph.pairing()
    }

    /// Every vertex of degree at most 2 and left-column degrees in `{0, 2}`.
    pub fn is_well_formed(&self) -> bool {
        let b = self.block.params().b();
        let adj = self.graph.adjacency();
        adj.iter().all(|x| x.len() <= 2) && adj[..b].iter().all(|x| x.len() != 1)
    }
}

/// `B^L`.
pub fn augment(block: &Block, pairing: &RowPairing) -> Result<AugmentedBlock> {
    if block.kind() == BlockKind::Start {
        return Err(Error::Precondition("only mid and end blocks are augmented".into()));
    }
    let b = block.params().b();
    let mut edges = block.edges();
    edges.extend(pairing.pairs());
    let graph = ColumnGraph::new(b, b + block.right_len(), edges);
    Ok(AugmentedBlock { block: block.clone(), pairing: pairing.clone(), graph })
}

/// `G(B_1, ..., B_m)`: consecutive blocks share a column.
pub fn compose(blocks: &[Block]) -> Result<ColumnGraph> {
    let Some(first) = blocks.first() else {
        return Err(Error::Precondition("empty block sequence".into()));
    };
    let params = first.params();
    let b = params.b();
    if blocks.iter().any(|blk| blk.params() != params) {
        return Err(Error::Precondition("blocks use different parameters".into()));
    }
    if blocks[..blocks.len() - 1].iter().any(|blk| blk.right_len() != b) {
        return Err(Error::Precondition("only the last block may have a short right column".into()));
    }
    let n = blocks.len() * b + blocks.last().expect("non-empty").right_len();
    let edges = blocks
        .iter()
        .enumerate()
        .flat_map(|(j, blk)| blk.edges().into_iter().map(move |(u, v)| (u + j * b, v + j * b)));
    Ok(ColumnGraph::new(b, n, edges))
}

/// Splits a 2-regular spanning subgraph of `G_{a,b}(n)`, `n > 2b`, into its
/// block sequence.
pub fn decompose(params: Params, n: usize, edges: &[(usize, usize)]) -> Result<Vec<Block>> {
    let b = params.b();
    if n <= 2 * b {
        return Err(Error::Precondition(format!("decomposition needs n > 2b = {}", 2 * b)));
    }
    let h = ColumnGraph::new(b, n, edges.iter().copied());
    if h.edges.iter().any(|&(u, v)| v >= n || !params.allows(u, v)) {
        return Err(Error::MalformedGraph("edge outside G_{a,b}(n)".into()));
    }
    if !h.is_two_regular() {
        return Err(Error::MalformedGraph("graph is not 2-regular".into()));
    }
    let q = (n - 1) / b;
    let full = Arc::new(Universe::new(params, b)?);
    let last = Arc::new(Universe::new(params, (n - 1) % b + 1)?);
    let mut out = Vec::with_capacity(q);
    for j in 1..=q {
        let uni = if j == q { last.clone() } else { full.clone() };
        let lo = (j - 1) * b;
        let mut mask = 0u64;
        for &(u, v) in &h.edges {
            if u < lo || v >= lo + b + uni.s {
                continue;
            }
            let (lu, lv) = (u - lo, v - lo);
            if j > 1 && lv < b {
                continue;
            }
            let k = uni.index_of(lu, lv).expect("edge lies in the two-column universe");
            mask |= 1 << k;
        }
        let kind = if j == 1 {
            BlockKind::Start
        } else if j == q {
            BlockKind::End
        } else {
            let blk = Block::from_mask(uni.clone(), mask, BlockKind::Mid);
            if blk.satisfies(BlockKind::Mid) {
                BlockKind::Mid
            } else {
                BlockKind::End
            }
        };
        out.push(Block::from_mask(uni, mask, kind));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: usize, b: usize) -> Params {
        Params::new(a, b).unwrap()
    }

    fn blk(params: Params, s: usize, edges: &[(usize, usize)], kind: BlockKind) -> Block {
        Block::from_edges(params, s, edges, kind).unwrap()
    }

    /// Blocks for (2,3): left vertices 0..2, right vertices 3..5.
    fn two_three_blocks() -> [Block; 4] {
        let q = p(2, 3);
        [
            blk(q, 3, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 5)], BlockKind::Start),
            blk(q, 3, &[(1, 3), (3, 5), (2, 4)], BlockKind::Mid),
            blk(q, 3, &[(1, 3), (2, 5)], BlockKind::Mid),
            blk(q, 2, &[(2, 4), (1, 4), (1, 3), (0, 3)], BlockKind::End),
        ]
    }

    /// Rows for (1,4): `l(i)` is left row i, `r(i)` right row i, b = 4.
    fn l(i: usize) -> usize {
        i
    }
    fn r(i: usize) -> usize {
        4 + i
    }

    fn one_four_blocks() -> Vec<Block> {
        let q = p(1, 4);
        let all: Vec<_> = (0..4).map(|i| (l(i), r(i))).collect();
        let mut b1 = vec![(l(0), l(1)), (l(2), l(3))];
        b1.extend(&all);
        let b2 = vec![(l(0), r(0)), (l(0), l(1)), (l(1), l(2)), (l(2), l(3)), (l(3), r(3)), (r(1), r(2))];
        let b3 = vec![(l(0), r(0)), (l(3), r(3))];
        let mut b5 = all.clone();
        b5.push((r(1), r(2)));
        let b6 = vec![(l(3), r(3)), (r(3), r(2)), (r(2), l(2)), (l(1), r(1)), (r(1), r(0)), (r(0), l(0))];
        let b7 = vec![(l(3), r(3)), (r(3), r(2)), (r(2), r(1)), (r(1), r(0)), (r(0), l(0))];
        let b8 = vec![(3, 4), (0, 4)];
        vec![
            blk(q, 4, &b1, BlockKind::Start),
            blk(q, 4, &b2, BlockKind::Start),
            blk(q, 4, &b3, BlockKind::Mid),
            blk(q, 4, &all, BlockKind::Mid),
            blk(q, 4, &b5, BlockKind::Mid),
            blk(q, 4, &b6, BlockKind::End),
            blk(q, 4, &b7, BlockKind::End),
            blk(q, 1, &b8, BlockKind::End),
        ]
    }

    fn pairing(pairs: &[(usize, usize)]) -> RowPairing {
        RowPairing::new(pairs.iter().copied()).unwrap()
    }

    #[test]
    fn universe_shape() {
        let u = Universe::new(p(2, 3), 3).unwrap();
        assert_eq!(u.edges(), &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (2, 5), (3, 5)]);
        let u = Universe::new(p(1, 4), 1).unwrap();
        assert_eq!(u.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
    }

    #[test]
    fn two_three_blocks_are_enumerated() {
        let set = enumerate_blocks(p(2, 3)).unwrap();
        let [b1, b2, b3, b4] = two_three_blocks();
        assert!(set.start.contains(&b1));
        assert!(set.mid.contains(&b2));
        assert!(set.mid.contains(&b3));
        assert!(set.end.contains(&b4));
    }

    #[test]
    fn one_four_blocks_are_enumerated() {
        let set = enumerate_blocks(p(1, 4)).unwrap();
        for block in one_four_blocks() {
            let list = match block.kind() {
                BlockKind::Start => &set.start,
                BlockKind::Mid => &set.mid,
                BlockKind::End => &set.end,
            };
            assert!(list.contains(&block), "{block:?}");
        }
    }

    #[test]
    fn two_three_compatibility() {
        let blocks = two_three_blocks();
        let names = ["B1", "B2", "B3", "B4"];
        let mut found = Vec::new();
        for (i, x) in blocks.iter().enumerate() {
            for (j, y) in blocks.iter().enumerate() {
                if is_compatible(x, y) {
                    found.push((names[i], names[j]));
                }
            }
        }
        assert_eq!(found, vec![("B1", "B2"), ("B1", "B3"), ("B2", "B2"), ("B2", "B3"), ("B3", "B4")]);
    }

    #[test]
    fn short_end_blocks_are_never_first() {
        let set = enumerate_blocks(p(2, 5)).unwrap();
        for e in set.end.iter().filter(|e| e.right_len() < 5) {
            assert!(set.all().all(|other| !is_compatible(e, other)));
        }
    }

    #[test]
    fn one_four_pairings() {
        let f = one_four_blocks();
        assert_eq!(pairing_of(&f[0].to_graph()).unwrap(), pairing(&[(0, 1), (2, 3)]));
        assert_eq!(pairing_of(&f[1].to_graph()).unwrap(), pairing(&[(0, 3), (1, 2)]));
        let g14 = compose(&[f[0].clone(), f[3].clone()]).unwrap();
        assert_eq!(pairing_of(&g14).unwrap(), pairing(&[(0, 1), (2, 3)]));
        let g24 = compose(&[f[1].clone(), f[3].clone()]).unwrap();
        assert_eq!(pairing_of(&g24).unwrap(), pairing(&[(0, 3), (1, 2)]));
    }

    #[test]
    fn pairing_rejects_paths_leaving_the_last_column() {
        let g = ColumnGraph::new(3, 6, [(0, 3), (3, 5)]);
        assert!(matches!(pairing_of(&g), Err(Error::MalformedGraph(_))));
        let g = ColumnGraph::new(3, 6, [(3, 4)]);
        assert_eq!(pairing_of(&g).unwrap(), pairing(&[(0, 1)]));
    }

    #[test]
    fn one_four_augmentations() {
        let f = one_four_blocks();
        let l1 = pairing(&[(0, 1), (2, 3)]);
        let l2 = pairing(&[(0, 3), (1, 2)]);
        let a = augment(&f[4], &l1).unwrap();
        assert!(a.acyclic());
        let path = a.graph.pieces().unwrap();
        assert_eq!(path, vec![Piece::Path(4, 7)]);
        let c = augment(&f[5], &l1).unwrap();
        assert_eq!(c.graph.cycle_count().unwrap(), 2);
        assert!(!c.cycle_plus_isolated());
        let d = augment(&f[5], &l2).unwrap();
        assert!(d.cycle_plus_isolated());
        assert_eq!(d.graph.edges().len(), 8);
    }

    #[test]
    fn decompositions_of_known_necklaces() {
        let q = p(2, 3);
        let cycle_a = [0, 3, 1, 4, 6, 8, 11, 13, 10, 12, 9, 7, 5, 2];
        let edges: Vec<_> = (0..14).map(|i| (cycle_a[i], cycle_a[(i + 1) % 14])).collect();
        let blocks = decompose(q, 14, &edges).unwrap();
        assert_eq!(blocks, two_three_blocks().to_vec());
        assert_eq!(compose(&blocks).unwrap(), ColumnGraph::new(3, 14, edges));

        let mut edges_b = Vec::new();
        for seq in [&[7, 5, 2][..], &[0, 3, 1, 4, 6], &[7, 9], &[11, 14, 16, 13, 15, 12, 10, 8]] {
            edges_b.extend(seq.windows(2).map(|w| (w[0], w[1])));
        }
        edges_b.extend([(0, 2), (6, 8), (9, 11)]);
        let blocks = decompose(q, 17, &edges_b).unwrap();
        let [b1, b2, b3, b4] = two_three_blocks();
        assert_eq!(blocks, vec![b1, b2.clone(), b2, b3, b4]);
        assert!(compose(&blocks).unwrap().is_cycle_plus_isolated());
    }

    #[test]
    fn decompose_rejects_non_regular() {
        let err = decompose(p(2, 3), 14, &[(0, 3)]).unwrap_err();
        assert!(matches!(err, Error::MalformedGraph(_)));
    }

    /// Filter-based recount: every subset of the universe, classified.
    fn brute(params: Params) -> (usize, usize, usize) {
        let b = params.b();
        let (mut st, mut mid, mut end) = (0, 0, 0);
        for s in 1..=b {
            let uni = Arc::new(Universe::new(params, s).unwrap());
            for mask in 0..1u64 << uni.edges.len() {
                let x = Block::from_mask(uni.clone(), mask, BlockKind::Start);
                st += x.satisfies(BlockKind::Start) as usize;
                mid += x.satisfies(BlockKind::Mid) as usize;
                end += x.satisfies(BlockKind::End) as usize;
            }
        }
        (st, mid, end)
    }

    #[test]
    fn block_counts_match_filter_enumeration() {
        for (a, b) in [(1, 2), (2, 3), (1, 3), (1, 4), (3, 4), (2, 5), (3, 5)] {
            let set = enumerate_blocks(p(a, b)).unwrap();
            let counts = (set.start.len(), set.mid.len(), set.end.len());
            assert_eq!(counts, brute(p(a, b)), "({a},{b})");
            for kind in [BlockKind::Start, BlockKind::Mid, BlockKind::End] {
                let list = match kind {
                    BlockKind::Start => &set.start,
                    BlockKind::Mid => &set.mid,
                    BlockKind::End => &set.end,
                };
                assert!(list.iter().all(|x| x.satisfies(kind)));
            }
        }
        let set = enumerate_blocks(p(2, 3)).unwrap();
        assert_eq!((set.start.len(), set.mid.len(), set.end.len()), (2, 54, 4));
    }

    #[test]
    fn export_format() {
        let [_, b2, _, _] = two_three_blocks();
        assert_eq!(b2.export(), "block mid 3\n1-3\n2-4\n3-5\n");
    }
}
