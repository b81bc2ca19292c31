//! Standard-library companion of the numerical core: seeded random
//! ensembles, the named verification suites with their report formats, field
//! serialization, and the command-line surface.

pub mod ensemble;
pub mod field_io;
pub mod report;
pub mod suites;

pub use report::{SuiteConfig, SuiteReport};
