//! Rendering and document layer behind the `schwinger` binary.
//!
//! Everything the binary prints is produced here so the integration tests
//! can exercise the exact output surface: the JSON document types are the
//! stable wire formats, and the table/CSV writers are deterministic
//! functions of the underlying exact data.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{BasisSpec, CommandOutput, RenderOptions};
pub use format::OutputFormat;
