//! Generators, witness search, pipelines and traces.

pub mod gen;
pub mod pipeline;
pub mod search;

pub use gen::{gen_instance, Instance, Pipeline};
pub use pipeline::{color_of, gen_prefix, run_pipeline, verify_trace, Outcome, PipelineConfig, Trace, VerifyReport};
pub use search::{find_homogeneous, find_large_homogeneous, SearchOutcome, SearchStats};
