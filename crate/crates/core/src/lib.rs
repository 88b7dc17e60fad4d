//! Resilient multi-criteria path planning for a two-section tendon-driven
//! continuum robot.
//!
//! Every reachable pose of one robot section is a node of a 61-point diamond
//! lattice ([`env`]). Candidate paths are scored by a weighted sum of four
//! damage/length criteria ([`fitness`]) whose weights come from an analytic
//! hierarchy process ([`ahp`]). Two planners search that cost: a genetic
//! algorithm ([`ga`]) and A* ([`astar`]), each with a distance-only
//! "classical" mode. [`planner`] ties them together per robot section,
//! optionally widening the goal to its nearest alternatives.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, timing and the
//! command line live in the `tendonplan` companion crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod ahp;
pub mod astar;
pub mod env;
mod error;
pub mod fitness;
pub mod ga;
pub mod planner;
pub mod wear;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;

pub use ahp::{CriteriaWeights, PairwiseMatrix};
pub use env::{GlobalEnv, Node, NodeId, Section, SectionEnv};
pub use fitness::{CostModel, FitnessBreakdown, Path};
pub use planner::{Algorithm, SectionPlan};
pub use wear::WearState;
