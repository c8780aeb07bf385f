//! Minimal linear recurrences of integer sequences, found by Berlekamp–Massey
//! over the rationals and checked exactly.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// `f(n) = c_1 f(n-1) + ... + c_d f(n-d)`, holding for every index `n >= valid_from`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRecurrence {
    coefficients: Vec<BigRational>,
    valid_from: usize,
}

impl LinearRecurrence {
    /// A recurrence from its coefficients. Trailing zeros are dropped.
    pub fn new(coefficients: Vec<BigRational>, valid_from: usize) -> Self {
        let mut coefficients = coefficients;
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        let valid_from = valid_from.max(coefficients.len());
        LinearRecurrence { coefficients, valid_from }
    }

    pub fn from_integers<I, T>(coefficients: I, valid_from: usize) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coefficients = coefficients.into_iter().map(|c| BigRational::from_integer(c.into())).collect();
        LinearRecurrence::new(coefficients, valid_from)
    }

    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    /// The coefficients as integers, when they all are.
    pub fn integer_coefficients(&self) -> Option<Vec<BigInt>> {
        self.coefficients.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    pub fn valid_from(&self) -> usize {
        self.valid_from
    }

    /// The same relation with its validity start moved by `offset`, for sequences
    /// whose first term is `f(offset)`.
    pub fn shifted(mut self, offset: usize) -> Self {
        self.valid_from += offset;
        self
    }

    /// Right-hand side at index `n` of `seq`, or `None` if it reaches before the start.
    fn predict(&self, seq: &[BigInt], n: usize) -> Option<BigRational> {
        if n < self.order() {
            return None;
        }
        let mut acc = BigRational::zero();
        for (i, c) in self.coefficients.iter().enumerate() {
            acc += c * BigRational::from_integer(seq[n - 1 - i].clone());
        }
        Some(acc)
    }
}

impl fmt::Display for LinearRecurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f(n) =")?;
        let mut first = true;
        for (i, c) in self.coefficients.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, " -")?;
                }
            } else {
                write!(f, " {sign}")?;
            }
            first = false;
            let mag = c.abs();
            if mag.is_one() {
                write!(f, " f(n-{})", i + 1)?;
            } else {
                write!(f, " {mag} f(n-{})", i + 1)?;
            }
        }
        if first {
            write!(f, " 0")?;
        }
        write!(f, ", order {}, valid n ≥ {}", self.order(), self.valid_from)
    }
}

/// Shortest linear recurrence generating `seq`, by Berlekamp–Massey.
///
/// Returns the coefficients `c_1..c_L` (trailing zeros kept) and the linear complexity `L`.
fn berlekamp_massey(seq: &[BigRational]) -> (Vec<BigRational>, usize) {
    // Connection polynomial C(x) = 1 + C_1 x + ... with s_n + sum C_i s_{n-i} = 0.
    let mut c = vec![BigRational::one()];
    let mut prev = vec![BigRational::one()];
    let mut len = 0usize;
    let mut gap = 1usize;
    let mut prev_disc = BigRational::one();

    for n in 0..seq.len() {
        let mut disc = seq[n].clone();
        for i in 1..=len.min(c.len() - 1) {
            disc += &c[i] * &seq[n - i];
        }
        if disc.is_zero() {
            gap += 1;
            continue;
        }
        let scale = &disc / &prev_disc;
        let saved = c.clone();
        if c.len() < prev.len() + gap {
            c.resize(prev.len() + gap, BigRational::zero());
        }
        for (i, p) in prev.iter().enumerate() {
            c[i + gap] -= &scale * p;
        }
        if 2 * len <= n {
            len = n + 1 - len;
            prev = saved;
            prev_disc = disc;
            gap = 1;
        } else {
            gap += 1;
        }
    }

    c.resize(len + 1, BigRational::zero());
    let coefficients = c[1..].iter().map(|x| -x).collect();
    (coefficients, len)
}

fn to_rationals(seq: &[BigInt]) -> Vec<BigRational> {
    seq.iter().cloned().map(BigRational::from_integer).collect()
}

/// Linear complexity of `seq`: the smallest `L` such that some relation of order at
/// most `L` generates every term from index `L` on.
pub fn linear_complexity(seq: &[BigInt]) -> usize {
    berlekamp_massey(&to_rationals(seq)).1
}

/// The minimal-order recurrence generating `seq`, when the data determine it.
///
/// Returns `None` for fewer than two terms or unless `2L < seq.len()` for the linear
/// complexity `L`: any `2L` terms fit some relation of order `L`, so at least one
/// further term has to confirm it. A reported relation holds on every index from
/// `valid_from`.
pub fn detect_minimal(seq: &[BigInt]) -> Option<LinearRecurrence> {
    if seq.len() < 2 {
        return None;
    }
    let (coefficients, len) = berlekamp_massey(&to_rationals(seq));
    if 2 * len >= seq.len() {
        return None;
    }
    let rec = LinearRecurrence::new(coefficients, len);
    verify(&rec, seq, rec.valid_from()).holds.then_some(rec)
}

/// Outcome of checking a recurrence against a sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub holds: bool,
    /// First index where the relation fails.
    pub first_failure: Option<usize>,
    /// Number of indices actually checked.
    pub checked: usize,
}

/// Checks `rec` at every index `n >= from_index` of `seq` whose right-hand side is
/// defined. Indices reaching before the start of `seq` are skipped.
pub fn verify(rec: &LinearRecurrence, seq: &[BigInt], from_index: usize) -> Verification {
    let mut checked = 0;
    for n in from_index.max(rec.order())..seq.len() {
        let rhs = rec.predict(seq, n).expect("index is past the order");
        checked += 1;
        if rhs != BigRational::from_integer(seq[n].clone()) {
            return Verification { holds: false, first_failure: Some(n), checked };
        }
    }
    Verification { holds: true, first_failure: None, checked }
}

/// Appends `count` terms to `seed` using `rec`, returning only the new terms.
pub fn extend(rec: &LinearRecurrence, seed: &[BigInt], count: usize) -> Result<Vec<BigInt>> {
    if seed.len() < rec.order() {
        return Err(Error::Precondition(format!(
            "a seed of {} terms cannot start a recurrence of order {}",
            seed.len(),
            rec.order()
        )));
    }
    let mut all = seed.to_vec();
    for index in 0..count {
        let n = all.len();
        let next = rec.predict(&all, n).unwrap_or_else(BigRational::zero);
        if !next.is_integer() {
            return Err(Error::NonIntegerTerm { index });
        }
        all.push(next.to_integer());
    }
    Ok(all.split_off(seed.len()))
}

/// Signed copies of nonnegative counts.
pub fn signed(seq: &[BigUint]) -> Vec<BigInt> {
    seq.iter().cloned().map(BigInt::from).collect()
}

/// `terms` (the values `f(first_n), f(first_n+1), ...`) indexed by `n`, with zeros below `first_n`.
pub fn indexed_by_n(first_n: usize, terms: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); first_n];
    out.extend_from_slice(terms);
    out
}
