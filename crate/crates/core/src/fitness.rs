//! Path costs.
//!
//! Each criterion is normalised by a fixed reference so the four can be
//! mixed in one weighted sum, lower being better:
//!
//! | criterion  | per move                                   | reference        |
//! |------------|--------------------------------------------|------------------|
//! | distance   | Euclidean length in motor steps            | [`D_REF`] = 700  |
//! | motor      | 70 steps times `1 + accumulated / S_REF`   | [`S_REF`] = 80k  |
//! | mechanical | stored segment use count + 1               | [`U_REF`] = 100  |
//! | accuracy   | endpoint to intended goal, once per path   | [`D_REF`]        |
//!
//! The first three are sums over moves, so [`CostModel::edge_cost`] plus the
//! accuracy term reproduces [`CostModel::evaluate`] exactly. A* relies on that.

use alloc::vec::Vec;
use core::ops::Add;

use crate::ahp::CriteriaWeights;
use crate::env::{NodeId, Section, SectionEnv, STEP_SPACING};
use crate::wear::{motor_for, WearState};
use crate::{Error, Result};

/// Lattice diameter in motor steps: 10 moves of 70.
pub const D_REF: f64 = 700.0;
/// One hundred revolutions at 800 steps each.
pub const S_REF: f64 = 80_000.0;
pub const U_REF: f64 = 100.0;

/// A connected walk over one section's lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Path {
    section: Section,
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(env: &SectionEnv, section: Section, nodes: Vec<NodeId>) -> Result<Self> {
        let first = *nodes.first().ok_or(Error::EmptyPath)?;
        env.node(first)?;
        for w in nodes.windows(2) {
            env.move_axis(w[0], w[1])?;
        }
        Ok(Path { section, nodes })
    }

    /// Like [`Path::new`] but also checks the walk begins at `start`.
    pub fn from_start(
        env: &SectionEnv,
        section: Section,
        start: NodeId,
        nodes: Vec<NodeId>,
    ) -> Result<Self> {
        let p = Self::new(env, section, nodes)?;
        if p.start() != start {
            return Err(Error::PathStartMismatch {
                expected: start,
                found: p.start(),
            });
        }
        Ok(p)
    }

    /// Skips validation. Callers guarantee connectivity.
    pub(crate) fn from_trusted(section: Section, nodes: Vec<NodeId>) -> Self {
        debug_assert!(!nodes.is_empty());
        Path { section, nodes }
    }

    pub fn section(&self) -> Section {
        self.section
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<NodeId> {
        self.nodes
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        self.nodes[self.nodes.len() - 1]
    }

    /// Number of moves.
    pub fn edge_count(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes.windows(2).map(|w| (w[0], w[1]))
    }
}

/// Normalised criterion values of one path and their weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitnessBreakdown {
    pub distance: f64,
    pub motor: f64,
    pub mechanical: f64,
    pub accuracy: f64,
    pub total: f64,
}

impl Add for FitnessBreakdown {
    type Output = FitnessBreakdown;

    fn add(self, o: FitnessBreakdown) -> FitnessBreakdown {
        FitnessBreakdown {
            distance: self.distance + o.distance,
            motor: self.motor + o.motor,
            mechanical: self.mechanical + o.mechanical,
            accuracy: self.accuracy + o.accuracy,
            total: self.total + o.total,
        }
    }
}

/// Summed Euclidean length over [`D_REF`].
pub fn f_distance(env: &SectionEnv, path: &Path) -> Result<f64> {
    let mut sum = 0.0;
    for (a, b) in path.edges() {
        sum += env.distance(a, b)?;
    }
    Ok(sum / D_REF)
}

/// Steps each motor makes along `path`, each scaled by how worn that motor already is.
pub fn f_motor(env: &SectionEnv, path: &Path, wear: &WearState) -> Result<f64> {
    let mut sum = 0.0;
    for (a, b) in path.edges() {
        sum += motor_term(env, path.section(), wear, a, b)?;
    }
    Ok(sum)
}

/// Historical use of every segment travelled, plus the pass being planned.
pub fn f_mech(path: &Path, wear: &WearState) -> f64 {
    path.edges()
        .map(|(a, b)| mech_term(path.section(), wear, a, b))
        .sum()
}

/// How far the endpoint lands from where the robot was meant to go.
pub fn f_accuracy(env: &SectionEnv, path: &Path, intended_goal: NodeId) -> Result<f64> {
    Ok(env.distance(path.end(), intended_goal)? / D_REF)
}

fn motor_term(
    env: &SectionEnv,
    section: Section,
    wear: &WearState,
    a: NodeId,
    b: NodeId,
) -> Result<f64> {
    let motor = motor_for(section, env.move_axis(a, b)?);
    let factor = 1.0 + wear.motor_steps(motor) as f64 / S_REF;
    Ok(factor * STEP_SPACING as f64 / S_REF)
}

fn mech_term(section: Section, wear: &WearState, a: NodeId, b: NodeId) -> f64 {
    (wear.segment_use(section, a, b) + 1) as f64 / U_REF
}

/// Everything needed to price a path in one section: the lattice, the
/// criterion weights and the current wear.
#[derive(Debug, Clone, Copy)]
pub struct CostModel<'a> {
    env: &'a SectionEnv,
    section: Section,
    weights: CriteriaWeights,
    wear: &'a WearState,
}

impl<'a> CostModel<'a> {
    pub fn new(
        env: &'a SectionEnv,
        section: Section,
        weights: CriteriaWeights,
        wear: &'a WearState,
    ) -> Self {
        CostModel {
            env,
            section,
            weights,
            wear,
        }
    }

    pub fn env(&self) -> &'a SectionEnv {
        self.env
    }

    pub fn section(&self) -> Section {
        self.section
    }

    pub fn weights(&self) -> &CriteriaWeights {
        &self.weights
    }

    pub fn wear(&self) -> &'a WearState {
        self.wear
    }

    /// The same model with different weights.
    pub fn reweighted(&self, weights: CriteriaWeights) -> Self {
        CostModel { weights, ..*self }
    }

    /// Weighted cost of the move `a -> b`, all criteria except accuracy.
    pub fn edge_cost(&self, a: NodeId, b: NodeId) -> Result<f64> {
        let w = &self.weights;
        let d = self.env.distance(a, b)? / D_REF;
        let m = motor_term(self.env, self.section, self.wear, a, b)?;
        let u = mech_term(self.section, self.wear, a, b);
        Ok(w.distance() * d + w.motor() * m + w.mechanical() * u)
    }

    /// Weighted accuracy penalty for ending at `end` instead of `intended_goal`.
    pub fn accuracy_cost(&self, end: NodeId, intended_goal: NodeId) -> Result<f64> {
        Ok(self.weights.accuracy() * self.env.distance(end, intended_goal)? / D_REF)
    }

    /// Full breakdown of `path` against `intended_goal`.
    pub fn evaluate(&self, path: &Path, intended_goal: NodeId) -> Result<FitnessBreakdown> {
        let distance = f_distance(self.env, path)?;
        let motor = f_motor(self.env, path, self.wear)?;
        let mechanical = f_mech(path, self.wear);
        let accuracy = f_accuracy(self.env, path, intended_goal)?;
        let w = &self.weights;
        let total = w.distance() * distance
            + w.motor() * motor
            + w.mechanical() * mechanical
            + w.accuracy() * accuracy;
        Ok(FitnessBreakdown {
            distance,
            motor,
            mechanical,
            accuracy,
            total,
        })
    }
}
