//! Published necklace counts shipped with the crate as `a,b,n,count` CSV files.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::error::{Error, Result};

const PRIMARY: &str = include_str!("../data/primary.csv");
const SECONDARY: &str = include_str!("../data/secondary.csv");
const INITIAL_VALUES: &str = include_str!("../data/initial_values.csv");

/// Which embedded file a cell came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    /// Columns for `n = 5..=40`.
    Primary,
    /// Columns for `n = 10..=40`.
    Secondary,
    /// Small initial values of the short recurrences.
    InitialValues,
}

/// One reference value `N_{a,b}(n) = count`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Deserialize)]
pub struct Cell {
    pub a: usize,
    pub b: usize,
    pub n: usize,
    pub count: u64,
}

#[derive(Debug)]
pub struct ReferenceTables {
    cells: BTreeMap<(usize, usize, usize), (u64, Source)>,
}

/// Parses `a,b,n,count` CSV text.
pub fn parse_cells(text: &str) -> Result<Vec<Cell>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    reader.deserialize().map(|row| row.map_err(|e| Error::Reference(e.to_string()))).collect()
}

impl ReferenceTables {
    fn load() -> Result<Self> {
        let mut cells = BTreeMap::new();
        for (text, source) in
            [(PRIMARY, Source::Primary), (SECONDARY, Source::Secondary), (INITIAL_VALUES, Source::InitialValues)]
        {
            for cell in parse_cells(text)? {
                let key = (cell.a, cell.b, cell.n);
                if let Some(&(old, _)) = cells.get(&key) {
                    if old != cell.count {
                        return Err(Error::Reference(format!(
                            "conflicting values {old} and {} for N_{{{},{}}}({})",
                            cell.count, cell.a, cell.b, cell.n
                        )));
                    }
                    continue;
                }
                cells.insert(key, (cell.count, source));
            }
        }
        Ok(ReferenceTables { cells })
    }

    /// Reference value of `N_{a,b}(n)`, if tabulated.
    pub fn get(&self, a: usize, b: usize, n: usize) -> Option<BigUint> {
        self.cells.get(&(a, b, n)).map(|&(c, _)| BigUint::from(c))
    }

    pub fn source(&self, a: usize, b: usize, n: usize) -> Option<Source> {
        self.cells.get(&(a, b, n)).map(|&(_, s)| s)
    }

    /// All cells in `(a, b, n)` order.
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().map(|(&(a, b, n), &(count, _))| Cell { a, b, n, count })
    }

    /// Cells from one source, in `(a, b, n)` order.
    pub fn cells_from(&self, source: Source) -> impl Iterator<Item = Cell> + '_ {
        self.cells.iter().filter(move |(_, &(_, s))| s == source).map(|(&(a, b, n), &(count, _))| Cell {
            a,
            b,
            n,
            count,
        })
    }

    /// Distinct `(a, b)` pairs present.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.cells.keys().map(|&(a, b, _)| (a, b)).collect();
        out.dedup();
        out
    }

    /// Tabulated column for `(a,b)` as `(n, count)` pairs in increasing `n`.
    pub fn column(&self, a: usize, b: usize) -> Vec<(usize, u64)> {
        self.cells.range((a, b, 0)..=(a, b, usize::MAX)).map(|(&(_, _, n), &(c, _))| (n, c)).collect()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The embedded tables, parsed once.
pub fn tables() -> &'static ReferenceTables {
    static TABLES: OnceLock<ReferenceTables> = OnceLock::new();
    TABLES.get_or_init(|| ReferenceTables::load().expect("embedded reference data is well formed"))
}

/// Shorthand for `tables().get(a, b, n)`.
pub fn lookup(a: usize, b: usize, n: usize) -> Option<BigUint> {
    tables().get(a, b, n)
}
