//! Standard-library side of `tendonplan`: the JSON wear store, the benchmark
//! harness that replays the planner comparisons, and the command line.

pub mod bench;
pub mod cli;
mod error;
pub mod store;

pub use error::AppError;
pub use tendonplan_core as core;
