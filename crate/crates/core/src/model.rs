//! The graph `G_{a,b}(n)` and the necklaces living on it.
//!
//! Vertices are the integers `0..n`; `x` and `y` are adjacent exactly when
//! `|x - y|` is `a` or `b`. Necklaces are the Hamiltonian cycles of this graph,
//! identified up to rotation and reflection.
//!
//! Vertices are laid out in columns of length `b`: vertex `j*b + i` sits in
//! row `i` of column `j`. With `n - 1 = q*b + r` there are `q + 1` columns and
//! the last one holds `r + 1` vertices. Every edge stays inside one column or
//! joins two adjacent columns.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ValidationError};

/// The difference pair `(a, b)` with `1 <= a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(usize, usize)", into = "(usize, usize)")]
pub struct Params {
    a: usize,
    b: usize,
}

impl Params {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidParams("a must be positive".into()));
        }
        if a >= b {
            return Err(Error::InvalidParams(format!("need a < b, got a = {a}, b = {b}")));
        }
        Ok(Params { a, b })
    }

    #[inline]
    pub fn a(&self) -> usize {
        self.a
    }

    #[inline]
    pub fn b(&self) -> usize {
        self.b
    }

    pub fn gcd(&self) -> usize {
        self.a.gcd(&self.b)
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd() == 1
    }

    /// Both differences odd: the graph is bipartite by parity.
    pub fn both_odd(&self) -> bool {
        self.a % 2 == 1 && self.b % 2 == 1
    }

    /// `2a <= b`, the regime covered by the explicit constructions.
    pub fn is_wide(&self) -> bool {
        2 * self.a <= self.b
    }

    /// `|x - y|` is one of the two allowed differences.
    #[inline]
    pub fn allows(&self, x: usize, y: usize) -> bool {
        let d = x.abs_diff(y);
        d == self.a || d == self.b
    }
}

impl TryFrom<(usize, usize)> for Params {
    type Error = Error;

    fn try_from((a, b): (usize, usize)) -> Result<Self> {
        Params::new(a, b)
    }
}

impl From<Params> for (usize, usize) {
    fn from(p: Params) -> Self {
        (p.a, p.b)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// `G_{a,b}(n)` with constant-time neighbour queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridGraph {
    params: Params,
    n: usize,
}

impl GridGraph {
    pub fn new(params: Params, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("graph needs at least one vertex".into()));
        }
        Ok(GridGraph { params, n })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Neighbours of `x` in ascending order.
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> {
        let (a, b, n) = (self.params.a, self.params.b, self.n);
        let below_b = x.checked_sub(b);
        let below_a = x.checked_sub(a);
        let above_a = Some(x + a).filter(|&y| y < n);
        let above_b = Some(x + b).filter(|&y| y < n);
        [below_b, below_a, above_a, above_b].into_iter().flatten()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors(x).count()
    }

    pub fn is_edge(&self, x: usize, y: usize) -> bool {
        x < self.n && y < self.n && self.params.allows(x, y)
    }

    /// All edges `(x, y)` with `x < y`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> =
            (0..self.n).flat_map(|x| self.neighbors(x).filter(move |&y| y > x).map(move |y| (x, y))).collect();
        out.sort_unstable();
        out
    }

    /// `(q, r)` with `n - 1 = q*b + r`, `0 <= r < b`.
    pub fn column_split(&self) -> (usize, usize) {
        ((self.n - 1) / self.params.b, (self.n - 1) % self.params.b)
    }

    pub fn column_count(&self) -> usize {
        self.column_split().0 + 1
    }

    pub fn last_column_len(&self) -> usize {
        self.column_split().1 + 1
    }

    #[inline]
    pub fn row_col(&self, x: usize) -> (usize, usize) {
        (x % self.params.b, x / self.params.b)
    }

    #[inline]
    pub fn vertex_at(&self, row: usize, col: usize) -> usize {
        col * self.params.b + row
    }
}

pub fn build_graph(params: Params, n: usize) -> Result<GridGraph> {
    GridGraph::new(params, n)
}

/// Checks that `beads` is a permutation of `0..n` whose cyclic neighbours all
/// differ by `a` or `b`. Reports the first violation found.
pub fn validate(params: Params, beads: &[usize]) -> std::result::Result<(), ValidationError> {
    let n = beads.len();
    if n < 3 {
        return Err(ValidationError::TooShort { len: n });
    }
    let mut seen = vec![false; n];
    for (position, &bead) in beads.iter().enumerate() {
        if bead >= n {
            return Err(ValidationError::OutOfRange { position, bead, len: n });
        }
        if std::mem::replace(&mut seen[bead], true) {
            return Err(ValidationError::Repeated { position, bead });
        }
    }
    for position in 0..n {
        let left = beads[position];
        let right = beads[(position + 1) % n];
        if !params.allows(left, right) {
            return Err(ValidationError::BadDifference { position, left, right, difference: left.abs_diff(right) });
        }
    }
    Ok(())
}

/// A validated `(a,b)`-necklace, stored as a cyclic bead sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Necklace {
    params: Params,
    beads: Vec<usize>,
}

impl Necklace {
    pub fn new(params: Params, beads: Vec<usize>) -> Result<Self> {
        validate(params, &beads)?;
        Ok(Necklace { params, beads })
    }

    /// Skips validation; callers must uphold the invariants.
    pub(crate) fn from_trusted(params: Params, beads: Vec<usize>) -> Self {
        debug_assert_eq!(validate(params, &beads), Ok(()));
        Necklace { params, beads }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn beads(&self) -> &[usize] {
        &self.beads
    }

    pub fn into_beads(self) -> Vec<usize> {
        self.beads
    }

    pub fn len(&self) -> usize {
        self.beads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beads.is_empty()
    }

    /// The two cyclic neighbours of `bead`.
    pub fn neighbors_of(&self, bead: usize) -> Option<(usize, usize)> {
        let n = self.beads.len();
        let pos = self.position_of(bead)?;
        Some((self.beads[(pos + n - 1) % n], self.beads[(pos + 1) % n]))
    }

    pub fn are_adjacent(&self, x: usize, y: usize) -> bool {
        matches!(self.neighbors_of(x), Some((l, r)) if l == y || r == y)
    }

    fn position_of(&self, bead: usize) -> Option<usize> {
        self.beads.iter().position(|&x| x == bead)
    }

    /// Undirected edge list, each edge as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.beads.len();
        let mut out: Vec<_> = (0..n)
            .map(|i| {
                let (x, y) = (self.beads[i], self.beads[(i + 1) % n]);
                (x.min(y), x.max(y))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Adds `k` to every bead. The result is a necklace on `k..k+n`, so it is
    /// returned as a plain sequence.
    pub fn shifted(&self, k: usize) -> Vec<usize> {
        self.beads.iter().map(|&x| x + k).collect()
    }

    pub fn canonical(&self) -> Necklace {
        canonicalize(self)
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for bead in &self.beads {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{bead}")?;
        }
        Ok(())
    }
}

/// Rotates so bead 0 comes first and orients toward the smaller of its two
/// neighbours. Two necklaces are equal up to rotation and reflection exactly
/// when their canonical forms are identical.
pub fn canonicalize(necklace: &Necklace) -> Necklace {
    let beads = &necklace.beads;
    let n = beads.len();
    let zero = necklace.position_of(0).expect("validated necklace contains bead 0");
    let next = beads[(zero + 1) % n];
    let prev = beads[(zero + n - 1) % n];
    let out: Vec<usize> = if next <= prev {
        (0..n).map(|k| beads[(zero + k) % n]).collect()
    } else {
        (0..n).map(|k| beads[(zero + n - k) % n]).collect()
    };
    Necklace { params: necklace.params, beads: out }
}

/// Exact counts that follow from parity and size alone, or `None` when the
/// count needs real work.
pub fn quick_facts(params: Params, n: usize) -> Option<BigUint> {
    if !params.is_coprime() {
        return Some(BigUint::from(0u32));
    }
    if params.both_odd() && n % 2 == 1 {
        return Some(BigUint::from(0u32));
    }
    let base = params.a + params.b;
    if n < base {
        return Some(BigUint::from(0u32));
    }
    if n == base {
        return Some(BigUint::from(1u32));
    }
    None
}

/// Human-readable reason behind a decisive [`quick_facts`] answer.
pub fn quick_fact_reason(params: Params, n: usize) -> Option<String> {
    if !params.is_coprime() {
        Some(format!("gcd(a,b)={}", params.gcd()))
    } else if params.both_odd() && n % 2 == 1 {
        Some("a and b odd, n odd".into())
    } else if n < params.a + params.b {
        Some(format!("n < a+b = {}", params.a + params.b))
    } else if n == params.a + params.b {
        Some("unique necklace of length a+b".into())
    } else {
        None
    }
}
