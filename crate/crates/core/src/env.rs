//! The discrete workspace of one robot section.
//!
//! The stepper motors only stop on multiples of [`STEP_SPACING`] motor steps,
//! so the poses one section can hold form a lattice. We use the taxicab ball
//! `|i| + |j| <= 5`, which holds exactly 61 points. Nodes are numbered
//! row-major, top row first (`j` descending, then `i` ascending), and move only
//! along the X or Y axis to one of their 4-neighbours.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub type NodeId = usize;

/// Motor steps between two adjacent nodes.
pub const STEP_SPACING: i64 = 70;
/// Lattice radius in the taxicab metric.
pub const RADIUS: i32 = 5;
/// Nodes in one section environment.
pub const NODE_COUNT: usize = 61;
/// Poses of the whole two-section robot.
pub const COMPOSITE_COUNT: usize = NODE_COUNT * NODE_COUNT;

/// Which of the two identical robot sections a path belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Section {
    Lower,
    Upper,
}

impl Section {
    pub const ALL: [Section; 2] = [Section::Lower, Section::Upper];

    pub fn index(self) -> usize {
        match self {
            Section::Lower => 0,
            Section::Upper => 1,
        }
    }

    pub fn from_index(index: usize) -> Option<Section> {
        match index {
            0 => Some(Section::Lower),
            1 => Some(Section::Upper),
            _ => None,
        }
    }
}

/// Lattice axis a single move travels along.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Node {
    pub id: NodeId,
    /// Lattice coordinate `(i, j)`.
    pub coord: (i32, i32),
}

impl Node {
    /// Motor-step position, `70 * (i, j)`.
    pub fn steps(&self) -> (i64, i64) {
        (
            STEP_SPACING * i64::from(self.coord.0),
            STEP_SPACING * i64::from(self.coord.1),
        )
    }
}

/// Squared Euclidean distance in motor steps. Exact, so it is what orderings use.
pub fn squared_distance(a: &Node, b: &Node) -> i64 {
    let (ax, ay) = a.steps();
    let (bx, by) = b.steps();
    (ax - bx).pow(2) + (ay - by).pow(2)
}

/// Euclidean distance between two nodes in motor steps.
pub fn euclidean(a: &Node, b: &Node) -> f64 {
    libm::sqrt(squared_distance(a, b) as f64)
}

/// The 61-node lattice of one section with its adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionEnv {
    nodes: Vec<Node>,
    adjacency: Vec<Vec<NodeId>>,
}

impl Default for SectionEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl SectionEnv {
    /// Builds the canonical diamond lattice.
    pub fn new() -> Self {
        let mut nodes = Vec::with_capacity(NODE_COUNT);
        for j in (-RADIUS..=RADIUS).rev() {
            let half = RADIUS - j.abs();
            for i in -half..=half {
                nodes.push(Node {
                    id: nodes.len(),
                    coord: (i, j),
                });
            }
        }

        let adjacency = nodes
            .iter()
            .map(|n| {
                let (i, j) = n.coord;
                let mut adj: Vec<NodeId> = [(i + 1, j), (i - 1, j), (i, j + 1), (i, j - 1)]
                    .into_iter()
                    .filter_map(lookup)
                    .collect();
                adj.sort_unstable();
                adj
            })
            .collect();

        SectionEnv { nodes, adjacency }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id).ok_or(Error::UnknownNode(id))
    }

    pub fn contains(&self, id: NodeId) -> bool {
        id < self.nodes.len()
    }

    /// Id of the node at lattice coordinate `(i, j)`, if it is on the lattice.
    pub fn id_at(&self, coord: (i32, i32)) -> Option<NodeId> {
        lookup(coord)
    }

    /// Sorted neighbour ids. Panics on an unknown id; use [`SectionEnv::node`] to validate first.
    pub fn neighbors(&self, id: NodeId) -> &[NodeId] {
        &self.adjacency[id]
    }

    pub fn is_adjacent(&self, a: NodeId, b: NodeId) -> bool {
        self.adjacency
            .get(a)
            .is_some_and(|adj| adj.binary_search(&b).is_ok())
    }

    /// Axis of the move `a -> b`, or an error when the nodes are not neighbours.
    pub fn move_axis(&self, a: NodeId, b: NodeId) -> Result<Axis> {
        self.node(a)?;
        self.node(b)?;
        if !self.is_adjacent(a, b) {
            return Err(Error::NotAdjacent(a, b));
        }
        if self.nodes[a].coord.0 != self.nodes[b].coord.0 {
            Ok(Axis::X)
        } else {
            Ok(Axis::Y)
        }
    }

    /// Euclidean distance between two node ids in motor steps.
    pub fn distance(&self, a: NodeId, b: NodeId) -> Result<f64> {
        Ok(euclidean(self.node(a)?, self.node(b)?))
    }

    /// Number of edges on a shortest path, i.e. the taxicab distance.
    pub fn hop_distance(&self, a: NodeId, b: NodeId) -> Result<usize> {
        let (ai, aj) = self.node(a)?.coord;
        let (bi, bj) = self.node(b)?.coord;
        Ok((ai.abs_diff(bi) + aj.abs_diff(bj)) as usize)
    }

    /// A fewest-edges path `from -> to` found by breadth-first search over the
    /// sorted adjacency lists, so the result is deterministic.
    pub fn shortest_hops(&self, from: NodeId, to: NodeId) -> Result<Vec<NodeId>> {
        self.node(from)?;
        self.node(to)?;
        let mut parent = vec![usize::MAX; self.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(n) = queue.pop_front() {
            if n == to {
                break;
            }
            for &m in self.neighbors(n) {
                if parent[m] == usize::MAX {
                    parent[m] = n;
                    queue.push_back(m);
                }
            }
        }
        if parent[to] == usize::MAX {
            return Err(Error::Unreachable {
                start: from,
                goal: to,
            });
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }

    /// The `k` nodes nearest to `goal` (excluding it), ordered by distance and
    /// then by id.
    pub fn alternative_goals(&self, goal: NodeId, k: usize) -> Result<Vec<NodeId>> {
        let target = *self.node(goal)?;
        let mut others: Vec<(i64, NodeId)> = self
            .nodes
            .iter()
            .filter(|n| n.id != goal)
            .map(|n| (squared_distance(n, &target), n.id))
            .collect();
        others.sort_unstable();
        Ok(others.into_iter().take(k).map(|(_, id)| id).collect())
    }
}

fn lookup((i, j): (i32, i32)) -> Option<NodeId> {
    if i.abs() + j.abs() > RADIUS {
        return None;
    }
    // Rows above `j` hold sum over r in (j, RADIUS] of 2 * (RADIUS - |r|) + 1 nodes.
    let before: i32 = ((j + 1)..=RADIUS).map(|r| 2 * (RADIUS - r.abs()) + 1).sum();
    let half = RADIUS - j.abs();
    Some((before + i + half) as usize)
}

/// Both robot sections. They are identical lattices planned independently.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GlobalEnv {
    pub lower: SectionEnv,
    pub upper: SectionEnv,
}

impl GlobalEnv {
    pub fn new() -> Self {
        let lower = SectionEnv::new();
        GlobalEnv {
            upper: lower.clone(),
            lower,
        }
    }

    pub fn section(&self, section: Section) -> &SectionEnv {
        match section {
            Section::Lower => &self.lower,
            Section::Upper => &self.upper,
        }
    }

    /// Count of joint (lower, upper) poses.
    pub fn composite_count(&self) -> usize {
        self.lower.len() * self.upper.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> SectionEnv {
        SectionEnv::new()
    }

    /// Neighbour count by scanning every lattice point, independent of the
    /// adjacency lists.
    fn brute_neighbors(env: &SectionEnv, id: NodeId) -> usize {
        let (i, j) = env.nodes()[id].coord;
        env.nodes()
            .iter()
            .filter(|n| (n.coord.0 - i).abs() + (n.coord.1 - j).abs() == 1)
            .count()
    }

    #[test]
    fn has_61_nodes() {
        assert_eq!(env().len(), 61);
        assert_eq!(GlobalEnv::new().composite_count(), 3721);
    }

    #[test]
    fn ids_follow_row_major_order() {
        let e = env();
        assert_eq!(e.nodes()[0].coord, (0, 5));
        assert_eq!(e.nodes()[30].coord, (0, 0));
        assert_eq!(e.nodes()[60].coord, (0, -5));
        for (idx, n) in e.nodes().iter().enumerate() {
            assert_eq!(n.id, idx);
            assert_eq!(e.id_at(n.coord), Some(idx));
        }
        assert_eq!(e.id_at((5, 1)), None);
    }

    #[test]
    fn center_has_four_neighbors() {
        let e = env();
        let c = e.id_at((0, 0)).unwrap();
        assert_eq!(e.neighbors(c).len(), 4);
        assert_eq!(brute_neighbors(&e, c), 4);
    }

    #[test]
    fn corner_tip_has_single_neighbor() {
        let e = env();
        let tip = e.id_at((5, 0)).unwrap();
        assert_eq!(brute_neighbors(&e, tip), 1);
        assert_eq!(e.neighbors(tip), &[e.id_at((4, 0)).unwrap()]);
    }

    #[test]
    fn adjacency_matches_brute_force() {
        let e = env();
        for n in e.nodes() {
            assert_eq!(e.neighbors(n.id).len(), brute_neighbors(&e, n.id));
            for &m in e.neighbors(n.id) {
                assert!(e.is_adjacent(m, n.id));
                assert_eq!(e.distance(n.id, m).unwrap(), 70.0);
            }
        }
    }

    #[test]
    fn connected() {
        let e = env();
        for n in e.nodes() {
            let p = e.shortest_hops(30, n.id).unwrap();
            assert_eq!(p.len() - 1, e.hop_distance(30, n.id).unwrap());
        }
    }

    #[test]
    fn euclidean_examples() {
        let e = env();
        let o = e.id_at((0, 0)).unwrap();
        assert_eq!(e.distance(o, o).unwrap(), 0.0);
        assert_eq!(e.distance(o, e.id_at((1, 0)).unwrap()).unwrap(), 70.0);
        let d = e.distance(o, e.id_at((1, 1)).unwrap()).unwrap();
        assert!((d - 70.0 * core::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((d - 98.99).abs() < 0.01);
    }

    #[test]
    fn steps_are_seventy_times_coord() {
        for n in env().nodes() {
            assert_eq!(n.steps(), (70 * n.coord.0 as i64, 70 * n.coord.1 as i64));
        }
    }

    #[test]
    fn alternatives_of_center_are_lowest_id_axis_neighbors() {
        let e = env();
        let alts = e.alternative_goals(30, 3).unwrap();
        assert_eq!(alts, vec![20, 29, 31]);
        for a in alts {
            assert_eq!(e.distance(30, a).unwrap(), 70.0);
        }
    }

    #[test]
    fn alternatives_degenerate_and_errors() {
        let e = env();
        assert!(e.alternative_goals(7, 0).unwrap().is_empty());
        assert_eq!(e.alternative_goals(61, 3), Err(Error::UnknownNode(61)));
    }

    #[test]
    fn alternatives_of_tip_match_full_scan() {
        let e = env();
        let tip = e.id_at((5, 0)).unwrap();
        // (4,0) at 70, then (4,1) and (4,-1) at 70*sqrt(2); (4,1) is the lower id.
        let expected = vec![
            e.id_at((4, 0)).unwrap(),
            e.id_at((4, 1)).unwrap(),
            e.id_at((4, -1)).unwrap(),
        ];
        assert_eq!(e.alternative_goals(tip, 3).unwrap(), expected);
    }

    #[test]
    fn move_axis_and_errors() {
        let e = env();
        assert_eq!(e.move_axis(30, 31).unwrap(), Axis::X);
        assert_eq!(e.move_axis(30, 20).unwrap(), Axis::Y);
        assert_eq!(e.move_axis(30, 32), Err(Error::NotAdjacent(30, 32)));
    }
}
