//! Recomputes reference cells and compares them with the embedded tables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{quick_facts, Params};
use crate::reference::{tables, Cell};
use crate::transfer::{sequence_with, Method};

/// Which reference cells to recompute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    /// `b <= 5`, `n <= 30`, by both DFS and the transfer method.
    Fast,
    /// Every tabulated cell up to `n = 40`, by the automatic method.
    Full,
}

impl Scope {
    pub fn methods(self) -> &'static [Method] {
        match self {
            Scope::Fast => &[Method::Dfs, Method::Transfer],
            Scope::Full => &[Method::Auto],
        }
    }

    pub fn includes(self, cell: &Cell) -> bool {
        match self {
            Scope::Fast => cell.b <= 5 && cell.n <= 30,
            Scope::Full => cell.n <= 40,
        }
    }

    /// Reference cells in scope, in `(a, b, n)` order.
    pub fn cells(self) -> Vec<Cell> {
        tables().cells().filter(|c| self.includes(c)).collect()
    }
}

impl std::str::FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Scope::Fast),
            "full" => Ok(Scope::Full),
            _ => Err(Error::InvalidParams(format!("unknown scope {s:?}"))),
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::Dfs => "dfs",
        Method::Transfer => "transfer",
    }
}

/// One recomputed cell.
#[derive(Debug, Clone)]
pub struct CellCheck {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub expected: BigUint,
    pub computed: Vec<(Method, std::result::Result<BigUint, Error>)>,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.computed.iter().all(|(_, got)| got.as_ref().is_ok_and(|c| *c == self.expected))
    }
}

impl fmt::Display for CellCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}) n={}: expected {}", self.a, self.b, self.n, self.expected)?;
        for (m, got) in &self.computed {
            match got {
                Ok(c) => write!(f, ", {} {}", method_name(*m), c)?,
                Err(e) => write!(f, ", {} failed ({e})", method_name(*m))?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub cells: Vec<CellCheck>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.cells.iter().all(CellCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CellCheck> {
        self.cells.iter().filter(|c| !c.passed())
    }

    /// True if some failure was a resource abort rather than a wrong value.
    pub fn aborted(&self) -> bool {
        self.cells
            .iter()
            .flat_map(|c| &c.computed)
            .any(|(_, got)| matches!(got, Err(Error::BudgetExceeded { .. } | Error::TooLarge { .. })))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cell in self.failures() {
            writeln!(f, "MISMATCH {cell}")?;
        }
        let failed = self.failures().count();
        write!(f, "{} cells checked, {} matched, {} mismatched", self.cells.len(), self.cells.len() - failed, failed)
    }
}

fn column_values(a: usize, b: usize, n_max: usize, method: Method) -> Result<Vec<BigUint>> {
    let params = Params::new(a, b)?;
    sequence_with(params, n_max, method)
}

/// Recomputes `cells` with each of `methods`. Each column is computed once per method;
/// columns run in parallel. Output follows `(a, b, n)` order.
pub fn check_cells(cells: &[Cell], methods: &[Method]) -> Report {
    let mut columns: BTreeMap<(usize, usize), Vec<&Cell>> = BTreeMap::new();
    for cell in cells {
        columns.entry((cell.a, cell.b)).or_default().push(cell);
    }
    let columns: Vec<_> = columns.into_iter().collect();

    let mut checks: Vec<CellCheck> = columns
        .par_iter()
        .flat_map_iter(|&((a, b), ref col)| {
            let n_max = col.iter().map(|c| c.n).max().unwrap_or(0);
            let values: Vec<_> = methods.iter().map(|&m| (m, column_values(a, b, n_max, m))).collect();
            col.iter()
                .map(|cell| {
                    let computed = values.iter().map(|(m, seq)| (*m, value_at(a, b, cell.n, seq))).collect();
                    CellCheck { a, b, n: cell.n, expected: BigUint::from(cell.count), computed }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    checks.sort_by_key(|c| (c.a, c.b, c.n));
    Report { cells: checks }
}

fn value_at(a: usize, b: usize, n: usize, seq: &Result<Vec<BigUint>>) -> std::result::Result<BigUint, Error> {
    let seq = seq.as_ref().map_err(Clone::clone)?;
    if n < a + b {
        let params = Params::new(a, b)?;
        return quick_facts(params, n).ok_or_else(|| Error::Precondition(format!("no value for n = {n}")));
    }
    seq.get(n - a - b).cloned().ok_or_else(|| Error::Precondition(format!("no value for n = {n}")))
}

/// Recomputes every reference cell in `scope`.
pub fn verify_tables(scope: Scope) -> Report {
    check_cells(&scope.cells(), scope.methods())
}

/// Recomputes one cell, whether or not it is tabulated. `expected` is the reference
/// value when there is one.
pub fn check_cell(a: usize, b: usize, n: usize, method: Method) -> Result<(BigUint, Option<BigUint>)> {
    let params = Params::new(a, b)?;
    let (count, _) = crate::transfer::count_with(params, n, method)?;
    Ok((count, tables().get(a, b, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scopes_select_cells() {
        let fast = Scope::Fast.cells();
        assert!(fast.iter().all(|c| c.b <= 5 && c.n <= 30));
        let pairs: std::collections::BTreeSet<_> = fast.iter().map(|c| (c.a, c.b)).collect();
        assert_eq!(pairs.len(), 8);
        assert!(Scope::Full.cells().len() > fast.len());
        assert_eq!("full".parse::<Scope>().unwrap(), Scope::Full);
        assert!("slow".parse::<Scope>().is_err());
    }

    #[test]
    fn small_columns_match() {
        let cells: Vec<_> = tables().cells().filter(|c| c.b <= 4 && c.n <= 22).collect();
        let report = check_cells(&cells, &[Method::Dfs, Method::Transfer]);
        assert!(report.passed(), "{report}");
        assert_eq!(report.cells.len(), cells.len());
        assert!(report.cells.windows(2).all(|w| (w[0].a, w[0].b, w[0].n) < (w[1].a, w[1].b, w[1].n)));
    }

    #[test]
    fn mismatch_is_reported_per_cell() {
        let bad = [Cell { a: 2, b: 3, n: 22, count: 16 }, Cell { a: 2, b: 3, n: 21, count: 11 }];
        let report = check_cells(&bad, &[Method::Auto]);
        assert!(!report.passed());
        let text = report.to_string();
        assert!(text.contains("MISMATCH (2,3) n=22: expected 16, auto 15"), "{text}");
        assert!(text.ends_with("2 cells checked, 1 matched, 1 mismatched"));
    }

    #[test]
    fn single_cells() {
        assert_eq!(check_cell(3, 8, 33, Method::Auto).unwrap(), (113u32.into(), Some(113u32.into())));
        assert_eq!(check_cell(2, 3, 41, Method::Auto).unwrap().1, None);
    }
}
