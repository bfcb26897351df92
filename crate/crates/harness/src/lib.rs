//! Scenario loading, benchmarking, CSV export and SVG rendering for the
//! planners in `rrf-core`.

pub mod bench;
pub mod cli;
pub mod maps;
pub mod render;
pub mod scenario;
