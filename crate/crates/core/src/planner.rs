//! One entry point over the four planners, per section and for the whole robot.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::ahp::CriteriaWeights;
use crate::astar::{run_astar, Mode};
use crate::env::{GlobalEnv, NodeId, Section};
use crate::fitness::{CostModel, FitnessBreakdown, Path};
use crate::ga::{run_ga, GaConfig};
use crate::wear::WearState;
use crate::{Error, Result};

/// Alternatives considered next to the intended goal.
pub const ALTERNATIVE_GOALS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Algorithm {
    #[cfg_attr(feature = "serde", serde(rename = "astar"))]
    Astar,
    #[cfg_attr(feature = "serde", serde(rename = "ga"))]
    Ga,
    #[cfg_attr(feature = "serde", serde(rename = "astar-classical"))]
    AstarClassical,
    #[cfg_attr(feature = "serde", serde(rename = "ga-classical"))]
    GaClassical,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Astar,
        Algorithm::Ga,
        Algorithm::AstarClassical,
        Algorithm::GaClassical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Astar => "astar",
            Algorithm::Ga => "ga",
            Algorithm::AstarClassical => "astar-classical",
            Algorithm::GaClassical => "ga-classical",
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            Algorithm::Astar | Algorithm::Ga => Mode::Improved,
            Algorithm::AstarClassical | Algorithm::GaClassical => Mode::Classical,
        }
    }

    pub fn is_ga(self) -> bool {
        matches!(self, Algorithm::Ga | Algorithm::GaClassical)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or(Error::InvalidConfig("unknown algorithm"))
    }
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent seed number `stream` derived from `base`. Stream 0 is `base` itself.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    if stream == 0 {
        base
    } else {
        mix(base ^ mix(stream))
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectionPlan {
    pub path: Path,
    /// The goal the returned path actually ends at.
    pub chosen_goal: NodeId,
    /// Priced with the request's weights, accuracy against the intended goal.
    pub breakdown: FitnessBreakdown,
}

/// Plans one section. With `alternatives`, the planner also runs towards the
/// goal's nearest neighbours and keeps the cheapest result including the
/// penalty for missing the intended goal. Classical planners compare
/// candidates by unweighted distance plus endpoint error.
pub fn plan_section(
    model: &CostModel<'_>,
    start: NodeId,
    goal: NodeId,
    algorithm: Algorithm,
    alternatives: bool,
    ga: &GaConfig,
) -> Result<SectionPlan> {
    let env = model.env();
    env.node(start)?;
    let mut candidates = Vec::with_capacity(ALTERNATIVE_GOALS + 1);
    candidates.push(goal);
    if alternatives {
        candidates.extend(env.alternative_goals(goal, ALTERNATIVE_GOALS)?);
    }

    let mut best: Option<(f64, SectionPlan)> = None;
    for (k, &target) in candidates.iter().enumerate() {
        let path = match algorithm {
            Algorithm::Astar | Algorithm::AstarClassical => {
                run_astar(model, start, target, algorithm.mode())?.path
            }
            Algorithm::Ga | Algorithm::GaClassical => {
                // The intended goal keeps the caller's seed so that enabling
                // alternatives only ever adds candidates.
                let seed = match k {
                    0 => ga.rng_seed,
                    _ => derive_seed(ga.rng_seed, 16 + k as u64),
                };
                let cfg = ga.with_seed(seed);
                run_ga(model, start, target, &cfg, algorithm.mode())?.path
            }
        };
        let breakdown = model.evaluate(&path, goal)?;
        let score = match algorithm.mode() {
            Mode::Improved => breakdown.total,
            Mode::Classical => breakdown.distance + breakdown.accuracy,
        };
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((
                score,
                SectionPlan {
                    path,
                    chosen_goal: target,
                    breakdown,
                },
            ));
        }
    }
    best.map(|(_, p)| p)
        .ok_or(Error::Unreachable { start, goal })
}

/// Both sections of one planning request.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RobotPlan {
    pub lower: SectionPlan,
    pub upper: SectionPlan,
    /// Sum of both sections' breakdowns.
    pub breakdown: FitnessBreakdown,
}

/// Plans the lower then the upper section independently with the same
/// weights and wear. The upper section's GA seed is derived from `ga.rng_seed`.
#[allow(clippy::too_many_arguments)]
pub fn plan_robot(
    env: &GlobalEnv,
    wear: &WearState,
    weights: CriteriaWeights,
    lower: (NodeId, NodeId),
    upper: (NodeId, NodeId),
    algorithm: Algorithm,
    alternatives: bool,
    ga: &GaConfig,
) -> Result<RobotPlan> {
    let plan = |section: Section, (start, goal): (NodeId, NodeId)| {
        let model = CostModel::new(env.section(section), section, weights, wear);
        let cfg = ga.with_seed(derive_seed(ga.rng_seed, section.index() as u64));
        plan_section(&model, start, goal, algorithm, alternatives, &cfg)
    };
    let lower = plan(Section::Lower, lower)?;
    let upper = plan(Section::Upper, upper)?;
    let breakdown = lower.breakdown + upper.breakdown;
    Ok(RobotPlan {
        lower,
        upper,
        breakdown,
    })
}
