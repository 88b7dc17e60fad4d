use core::fmt;

use crate::env::NodeId;

/// Everything that can go wrong inside the planning core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    UnknownNode(NodeId),
    NotAdjacent(NodeId, NodeId),
    EmptyPath,
    PathStartMismatch {
        expected: NodeId,
        found: NodeId,
    },
    GroupOutOfRange(u8),
    InvalidWeights,
    InvalidMatrix(&'static str),
    NoConvergence {
        iterations: usize,
    },
    EmptyPopulation,
    InvalidConfig(&'static str),
    /// The goal cannot be reached within `max_len` edges.
    GoalOutOfReach {
        distance: usize,
        max_len: usize,
    },
    Unreachable {
        start: NodeId,
        goal: NodeId,
    },
    UnknownMotor(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnknownNode(id) => write!(f, "unknown node id {id}"),
            Error::NotAdjacent(a, b) => write!(f, "nodes {a} and {b} are not adjacent"),
            Error::EmptyPath => f.write_str("path has no nodes"),
            Error::PathStartMismatch { expected, found } => {
                write!(f, "path starts at {found}, expected {expected}")
            }
            Error::GroupOutOfRange(g) => write!(f, "criteria group {g} is outside 1..=15"),
            Error::InvalidWeights => f.write_str("weights must be finite and non-negative"),
            Error::InvalidMatrix(why) => write!(f, "invalid pairwise matrix: {why}"),
            Error::NoConvergence { iterations } => {
                write!(
                    f,
                    "power iteration did not converge after {iterations} iterations"
                )
            }
            Error::EmptyPopulation => f.write_str("population is empty"),
            Error::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            Error::GoalOutOfReach { distance, max_len } => write!(
                f,
                "goal is {distance} edges away but chromosomes are capped at {max_len}"
            ),
            Error::Unreachable { start, goal } => {
                write!(f, "goal {goal} is unreachable from {start}")
            }
            Error::UnknownMotor(m) => write!(f, "unknown motor {m}"),
        }
    }
}

impl core::error::Error for Error {}
