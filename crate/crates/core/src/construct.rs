//! Explicit necklace constructions.
//!
//! For `a = 1` a boustrophedon walk over the column grid ("snake") covers every
//! admissible length `n >= 2b`. For `a >= 2` two seed necklaces, of lengths
//! `a+b` and `3a+b`, are glued together repeatedly.

use num_bigint::BigUint;
use serde::Serialize;

use crate::enumerate::enumerate_necklaces;
use crate::error::{Error, Result};
use crate::model::{quick_facts, Necklace, Params};

/// The unique necklace of length `a + b`.
///
/// Beads below `a` continue to `x+a` or `x+b`, beads in `a..b` to `x±a`, and
/// beads from `b` upward to `x-a` or `x-b`; starting at `0` toward `a` and
/// always taking the unused option traces the whole cycle.
pub fn base_necklace(params: Params) -> Result<Necklace> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {} so no necklace exists", params.gcd())));
    }
    let (a, b) = (params.a(), params.b());
    let n = a + b;
    let options = |x: usize| -> [usize; 2] {
        if x < a {
            [x + a, x + b]
        } else if x < b {
            [x + a, x - a]
        } else {
            [x - a, x - b]
        }
    };
    let mut beads = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut x = 0;
    for _ in 0..n {
        beads.push(x);
        seen[x] = true;
        match options(x).into_iter().find(|&y| !seen[y]) {
            Some(y) => x = y,
            None => break,
        }
    }
    Necklace::new(params, beads)
}

/// The four shapes of snake cycle, selected by the parities of `b` and
/// `n mod b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SnakePattern {
    /// `b` even, `n` even.
    A,
    /// `b` even, `n` odd.
    B,
    /// `b` odd, `n mod b` even.
    C,
    /// `b` odd, `n mod b` odd.
    D,
}

pub fn snake_pattern(b: usize, n: usize) -> Result<SnakePattern> {
    if b < 2 {
        return Err(Error::InvalidParams(format!("need b >= 2, got {b}")));
    }
    if n < 2 * b {
        return Err(Error::Precondition(format!("snake needs n >= 2b = {}, got {n}", 2 * b)));
    }
    if b % 2 == 1 && n % 2 == 1 {
        return Err(Error::Precondition(format!("b = {b} is odd, so n must be even")));
    }
    Ok(match (b.is_multiple_of(2), (n % b).is_multiple_of(2)) {
        (true, true) => SnakePattern::A,
        (true, false) => SnakePattern::B,
        (false, true) => SnakePattern::C,
        (false, false) => SnakePattern::D,
    })
}

/// A `(1,b)`-necklace of length `n`, for `n >= 2b` (and `n` even if `b` is odd).
pub fn snake(b: usize, n: usize) -> Result<Necklace> {
    let pattern = snake_pattern(b, n)?;
    let params = Params::new(1, b)?;
    let (q, r) = (n / b, n % b);
    let at = |row: usize, col: usize| col * b + row;
    let mut cells: Vec<usize> = Vec::with_capacity(n);

    // Rows of the partial column `q` are absorbed by replacing a vertical
    // step `(i, q-1) -> (i+1, q-1)` with `(i, q-1), (i, q), (i+1, q), (i+1, q-1)`.
    let detour_rows: Vec<usize> = match pattern {
        SnakePattern::A => (0..r).step_by(2).collect(),
        SnakePattern::B | SnakePattern::D => (1..r).step_by(2).collect(),
        SnakePattern::C => Vec::new(),
    };

    match pattern {
        SnakePattern::A => {
            for col in 0..q {
                cells.push(at(0, col));
            }
            for row in 1..b {
                if row % 2 == 1 {
                    for col in (1..q).rev() {
                        cells.push(at(row, col));
                    }
                } else {
                    for col in 1..q {
                        cells.push(at(row, col));
                    }
                }
            }
            for row in (1..b).rev() {
                cells.push(at(row, 0));
            }
        }
        SnakePattern::B => {
            for col in (0..q).rev() {
                cells.push(at(0, col));
            }
            for row in 1..b {
                if row % 2 == 1 {
                    for col in 0..q {
                        cells.push(at(row, col));
                    }
                } else {
                    for col in (0..q).rev() {
                        cells.push(at(row, col));
                    }
                }
            }
            cells.push(at(0, q));
        }
        SnakePattern::C if r == 0 => {
            for row in 0..b {
                cells.push(at(row, 0));
            }
            for col in 1..q {
                if col % 2 == 1 {
                    for row in (1..b).rev() {
                        cells.push(at(row, col));
                    }
                } else {
                    for row in 1..b {
                        cells.push(at(row, col));
                    }
                }
            }
            for col in (1..q).rev() {
                cells.push(at(0, col));
            }
        }
        SnakePattern::C => {
            for row in (0..r).rev() {
                cells.push(at(row, q - 1));
            }
            for (k, col) in (0..q - 1).rev().enumerate() {
                if k % 2 == 0 {
                    for row in 0..r {
                        cells.push(at(row, col));
                    }
                } else {
                    for row in (0..r).rev() {
                        cells.push(at(row, col));
                    }
                }
            }
            for (k, row) in (r..b).enumerate() {
                if k % 2 == 0 {
                    for col in 0..q {
                        cells.push(at(row, col));
                    }
                } else {
                    for col in (0..q).rev() {
                        cells.push(at(row, col));
                    }
                }
            }
            for row in 0..r {
                cells.push(at(row, q));
            }
        }
        SnakePattern::D => {
            for col in (0..q).rev() {
                cells.push(at(0, col));
            }
            for col in 0..q {
                if col % 2 == 0 {
                    for row in 1..b {
                        cells.push(at(row, col));
                    }
                } else {
                    for row in (1..b).rev() {
                        cells.push(at(row, col));
                    }
                }
            }
            cells.push(at(0, q));
        }
    }

    let mut beads = Vec::with_capacity(n);
    for (i, &v) in cells.iter().enumerate() {
        beads.push(v);
        let next = cells[(i + 1) % cells.len()];
        if v / b == q - 1 && next == v + 1 && detour_rows.contains(&(v % b)) {
            beads.push(v + b);
            beads.push(next + b);
        }
    }
    Necklace::new(params, beads)
}

/// Residues, multipliers and segments behind [`stitch_3a_plus_b`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StitchState {
    /// `t_i ≡ -b·i (mod a)`, reduced into `0..a`.
    pub residues: Vec<usize>,
    /// `k_i` with `b <= t_i + k_i·a < b + a`.
    pub multipliers: Vec<usize>,
    pub segments: Vec<Vec<usize>>,
}

pub fn stitch_state(params: Params) -> Result<StitchState> {
    let (a, b) = (params.a(), params.b());
    if !params.is_coprime() || a < 2 || 2 * a > b {
        return Err(Error::Precondition(format!("stitching needs gcd(a,b) = 1, a >= 2 and 2a <= b; got {params}")));
    }
    let residues: Vec<usize> = (0..a).map(|i| (a - (b * i) % a) % a).collect();
    let multipliers: Vec<usize> = residues.iter().map(|&t| (b + a - 1 - t) / a).collect();
    let segments = residues
        .iter()
        .zip(&multipliers)
        .map(|(&t, &k)| {
            let mut s = vec![t + b, t, t + a, t + a + b, t + 2 * a + b];
            s.extend((2..k).map(|j| t + j * a));
            s
        })
        .collect();
    Ok(StitchState { residues, multipliers, segments })
}

/// A necklace of length `3a + b`, threading the residue classes mod `a`.
pub fn stitch_3a_plus_b(params: Params) -> Result<Necklace> {
    let state = stitch_state(params)?;
    Necklace::new(params, state.segments.concat())
}

/// Glues `x` (length `m`) onto `y` (length `n`) at an explicit link `x_bead,
/// x_next` of `x`: the beads of `x` are shifted by `n`, then `n + x_bead` is
/// joined to `n - b + x_bead` and `n + x_next` to `n - b + x_next`.
pub fn glue_at(x: &Necklace, y: &Necklace, x_bead: usize, x_next: usize) -> Result<Necklace> {
    let params = x.params();
    if y.params() != params {
        return Err(Error::Precondition("necklaces use different parameters".into()));
    }
    let (m, n, b) = (x.len(), y.len(), params.b());
    if !x.are_adjacent(x_bead, x_next) || x_bead >= b || x_next >= b {
        return Err(Error::NoGluingLink);
    }
    let (y_bead, y_next) = (n - b + x_bead, n - b + x_next);
    if !y.are_adjacent(y_bead, y_next) {
        return Err(Error::NoGluingLink);
    }
    let mut beads = Vec::with_capacity(m + n);
    beads.extend(cut_open(y.beads(), y_next, y_bead));
    beads.extend(cut_open(x.beads(), x_bead, x_next).map(|v| v + n));
    Necklace::new(params, beads)
}

/// Walks the cycle from `from` to `to`, where the two are adjacent, going the
/// long way round.
fn cut_open(beads: &[usize], from: usize, to: usize) -> impl Iterator<Item = usize> + '_ {
    let len = beads.len();
    let start = beads.iter().position(|&v| v == from).expect("bead present");
    let forward = beads[(start + 1) % len] != to;
    (0..len).map(move |k| if forward { beads[(start + k) % len] } else { beads[(start + len - k) % len] })
}

/// The link of `x` used by [`glue`], if any.
pub fn find_glue_link(x: &Necklace, y: &Necklace) -> Option<(usize, usize)> {
    let (a, b, n) = (x.params().a(), x.params().b(), y.len());
    if n < b {
        return None;
    }
    let fits = |u: usize, v: usize| u < b && v < b && x.are_adjacent(u, v) && y.are_adjacent(n - b + u, n - b + v);
    if a >= 2 {
        let q = b / a;
        if let Some(i) = (0..q).find(|&i| fits((q - i) * a, (q - i - 1) * a)) {
            return Some(((q - i) * a, (q - i - 1) * a));
        }
    }
    (0..b.saturating_sub(a)).rev().map(|u| (u + a, u)).find(|&(u, v)| fits(u, v))
}

/// Glues two necklaces of lengths `m` and `n` into one of length `m + n`.
///
/// For `a >= 2` a suitable link always exists. For `a = 1` one is searched
/// for, and [`Error::NoGluingLink`] is returned when there is none.
pub fn glue(x: &Necklace, y: &Necklace) -> Result<Necklace> {
    if x.params() != y.params() {
        return Err(Error::Precondition("necklaces use different parameters".into()));
    }
    let (u, v) = find_glue_link(x, y).ok_or(Error::NoGluingLink)?;
    glue_at(x, y, u, v)
}

/// Lengths above which necklaces are known to exist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExistenceThreshold {
    /// Every admissible `n` at or above this length has a necklace.
    pub min_length: usize,
    /// Only even lengths qualify (`a` and `b` both odd).
    pub even_only: bool,
    /// For `ab` odd, the bound on `m` in `n = 2m`.
    pub half_length: Option<usize>,
    /// The constructions back the bound (`gcd(a,b) = 1` and `2a <= b`).
    pub guaranteed: bool,
}

pub fn existence_threshold(params: Params) -> Result<ExistenceThreshold> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {}", params.gcd())));
    }
    let (a, b) = (params.a(), params.b());
    let guaranteed = params.is_wide();
    Ok(if params.both_odd() {
        ExistenceThreshold {
            min_length: (a + b - 2) * (3 * a + b - 2) / 2,
            even_only: true,
            half_length: Some(((a + b) / 2 - 1) * ((3 * a + b) / 2 - 1)),
            guaranteed,
        }
    } else {
        ExistenceThreshold {
            min_length: (a + b - 1) * (3 * a + b - 1),
            even_only: false,
            half_length: None,
            guaranteed,
        }
    })
}

/// Non-negative `(x, y)` with `n = x(a+b) + y(3a+b)` and `y` minimal.
pub fn representation(params: Params, n: usize) -> Option<(usize, usize)> {
    let (small, large) = (params.a() + params.b(), 3 * params.a() + params.b());
    (0..=n / large).find(|&y| (n - y * large).is_multiple_of(small)).map(|y| ((n - y * large) / small, y))
}

/// Some necklace of length `n` from the explicit constructions, or `None`
/// when they do not reach `n`.
///
/// When `2a > b` only the base necklace is available as a seed, so only
/// multiples of `a + b` are reached.
pub fn construct_any(params: Params, n: usize) -> Result<Option<Necklace>> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {}", params.gcd())));
    }
    let (a, b) = (params.a(), params.b());
    if n == a + b {
        return base_necklace(params).map(Some);
    }
    if a == 1 {
        if n >= 2 * b && (b.is_multiple_of(2) || n.is_multiple_of(2)) {
            return snake(b, n).map(Some);
        }
        return Ok(None);
    }
    let (x, y) = if params.is_wide() {
        match representation(params, n) {
            Some(xy) => xy,
            None => return Ok(None),
        }
    } else if n.is_multiple_of(a + b) {
        (n / (a + b), 0)
    } else {
        return Ok(None);
    };
    if x + y == 0 {
        return Ok(None);
    }
    let base = base_necklace(params)?;
    let stitched = if y > 0 { Some(stitch_3a_plus_b(params)?) } else { None };
    let mut pieces = std::iter::repeat_n(&base, x).chain(std::iter::repeat_n(stitched.iter(), y).flatten());
    let first = pieces.next().expect("at least one piece").clone();
    pieces.try_fold(first, |acc, piece| glue(&acc, piece)).map(Some)
}

/// How [`construct_or_search`] settled a length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Construction {
    /// Built by [`construct_any`].
    Built(Necklace),
    /// Found by exhaustive search.
    Found(Necklace),
    /// No necklace of this length exists.
    NoneExists,
}

/// [`construct_any`] where it applies, otherwise the first necklace found by
/// exhaustive search.
pub fn construct_or_search(params: Params, n: usize) -> Result<Construction> {
    if quick_facts(params, n).is_some_and(|c| c == BigUint::from(0u32)) {
        return Ok(Construction::NoneExists);
    }
    if let Some(neck) = construct_any(params, n)? {
        return Ok(Construction::Built(neck));
    }
    let found = enumerate_necklaces(params, n, Some(1))?;
    Ok(found.into_iter().next().map_or(Construction::NoneExists, Construction::Found))
}

/// Lower bound on `N_{a,b}(k(a+b))` from repeatedly gluing shifted copies of
/// the base necklace.
pub fn expest_lower_bound(params: Params, k: usize) -> Result<BigUint> {
    if !params.is_coprime() {
        return Err(Error::Precondition(format!("gcd(a,b) = {}", params.gcd())));
    }
    if k == 0 {
        return Err(Error::Precondition("k must be positive".into()));
    }
    let d = BigUint::from(params.b() - params.a());
    Ok(if k == 1 {
        BigUint::from(1u32)
    } else if 2 * params.a() >= params.b() {
        d.pow((k - 1) as u32)
    } else {
        let e = BigUint::from(params.b() - params.a() - 1);
        d * e.pow((k - 2) as u32)
    })
}
