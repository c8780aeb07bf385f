//! Construction, enumeration and exact counting of `(a,b)`-difference necklaces:
//! circular arrangements of `0..n` in which neighbouring beads differ by `a` or `b`.

pub mod blocks;
pub mod construct;
pub mod enumerate;
pub mod error;
pub mod model;
pub mod recurrence;
pub mod reference;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result, ValidationError};
pub use model::{build_graph, canonicalize, quick_facts, validate, GridGraph, Necklace, Params};
