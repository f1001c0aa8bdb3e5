//! Driver for the zero-free region computation: configuration, result tables
//! in CSV/JSON/pretty form, the embedded reference tables, and comparison.

pub mod compare;
pub mod config;
pub mod reference;
pub mod run;
pub mod table;

pub use compare::{compare, CompareReport};
pub use config::{OutputFormat, Pin, RunConfig};
pub use reference::ReferenceTable;
pub use run::{check, run, RunOutcome};
pub use table::{CaseBlock, ResultSet, TableRow};
