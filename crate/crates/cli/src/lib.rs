//! Description format, validation pipeline and report rendering for the `weakfan` tool.

pub mod description;
pub mod pipeline;
pub mod render;

pub use description::{parse, resolve, DegenerationDescription, DescriptionError, Resolved};
pub use pipeline::{run_pipeline, PipelineReport, Stages};
