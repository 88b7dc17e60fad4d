//! A* over one section's lattice.
//!
//! The improved mode searches the weighted multi-criteria edge cost of a
//! [`CostModel`]; the classical mode searches Euclidean length alone. Both use
//! the straight-line distance to the goal, scaled by the distance weight, as
//! heuristic. Every move costs at least its own distance term, so the
//! heuristic is admissible and consistent and the first time the goal leaves
//! the open list its cost is optimal.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::ahp::CriteriaWeights;
use crate::env::NodeId;
use crate::fitness::{CostModel, FitnessBreakdown, Path, D_REF};
use crate::{Error, Result};

/// Improved planners optimise the weighted criteria; classical ones only distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Mode {
    Improved,
    Classical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AstarOutcome {
    pub path: Path,
    /// Sum of edge costs under the objective that was searched.
    pub search_cost: f64,
    /// The path priced with the caller's weights, accuracy against the searched goal.
    pub breakdown: FitnessBreakdown,
    /// Nodes moved to the closed list, counting re-expansions.
    pub expanded: usize,
}

/// `w_distance * euclidean(n, goal) / D_REF`.
pub fn heuristic(model: &CostModel<'_>, n: NodeId, goal: NodeId) -> Result<f64> {
    Ok(model.weights().distance() * model.env().distance(n, goal)? / D_REF)
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: f64,
    g: f64,
    node: NodeId,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenEntry {}

impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OpenEntry {
    // Reversed so the max-heap pops the smallest (f, g, id).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.g.total_cmp(&self.g))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Plans `start -> goal` in the section of `model`.
pub fn run_astar(
    model: &CostModel<'_>,
    start: NodeId,
    goal: NodeId,
    mode: Mode,
) -> Result<AstarOutcome> {
    let env = model.env();
    env.node(start)?;
    env.node(goal)?;
    let search = match mode {
        Mode::Improved => *model,
        Mode::Classical => model.reweighted(CriteriaWeights::distance_only()),
    };

    let n = env.len();
    let mut g = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<NodeId>> = vec![None; n];
    let mut closed = vec![false; n];
    let mut open = BinaryHeap::new();
    let mut expanded = 0;

    g[start] = 0.0;
    open.push(OpenEntry {
        f: heuristic(&search, start, goal)?,
        g: 0.0,
        node: start,
    });

    while let Some(OpenEntry { g: g_cur, node, .. }) = open.pop() {
        if closed[node] || g_cur > g[node] {
            continue;
        }
        if node == goal {
            let path = Path::from_trusted(model.section(), reconstruct(&parent, goal));
            let breakdown = model.evaluate(&path, goal)?;
            return Ok(AstarOutcome {
                path,
                search_cost: g_cur,
                breakdown,
                expanded,
            });
        }
        closed[node] = true;
        expanded += 1;

        for &m in env.neighbors(node) {
            let tentative = g_cur + search.edge_cost(node, m)?;
            if tentative < g[m] {
                g[m] = tentative;
                parent[m] = Some(node);
                // A closed node reached more cheaply goes back on the open list.
                closed[m] = false;
                open.push(OpenEntry {
                    f: tentative + heuristic(&search, m, goal)?,
                    g: tentative,
                    node: m,
                });
            }
        }
    }

    Err(Error::Unreachable { start, goal })
}

fn reconstruct(parent: &[Option<NodeId>], goal: NodeId) -> Vec<NodeId> {
    let mut nodes = vec![goal];
    let mut cur = goal;
    while let Some(p) = parent[cur] {
        nodes.push(p);
        cur = p;
    }
    nodes.reverse();
    nodes
}
