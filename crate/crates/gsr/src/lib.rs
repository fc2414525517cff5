//! Structure files, analysis reports, the on-disk results store and the
//! `gsr` command-line interface, built on [`gsr_core`].

pub mod cli;
pub mod format;
pub mod report;
pub mod store;

pub use format::{parse_addition, parse_structure, serialize_structure, ParseError};
pub use report::{analyze, AnalysisReport, ModuleBounds};
pub use store::{Index, IndexEntry, Store, StoreError};
