//! Comparative benchmark of the four planners over the criteria groups.
//!
//! For every group and repetition each planner plans both sections, once per
//! goal mode. Totals are compared per repetition against improved A* and
//! against the best of the four; wall-clock time is measured per call.
//! Single- and multiple-goal runs, and all four planners, are interleaved
//! inside each repetition so background load affects them alike.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::Write;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use tendonplan_core::env::{GlobalEnv, NodeId};
use tendonplan_core::ga::GaConfig;
use tendonplan_core::planner::{derive_seed, plan_robot, RobotPlan};
use tendonplan_core::{Algorithm, CriteriaWeights, WearState};

use crate::AppError;

/// Totals closer than this count as equal.
pub const EQUAL_TOL: f64 = 1e-9;

/// Start/goal pairs used by the criteria analysis: lower 50 -> 3, upper 47 -> 14.
pub const DEFAULT_LOWER: (NodeId, NodeId) = (50, 3);
pub const DEFAULT_UPPER: (NodeId, NodeId) = (47, 14);

/// CSV header of [`emit_csv`].
pub const CSV_HEADER: [&str; 8] = [
    "group",
    "algo",
    "mode",
    "runs",
    "mean_time_us",
    "best_pct",
    "equal_pct",
    "distinct_paths",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GoalMode {
    /// Plan to the intended goal only.
    Single,
    /// Also plan to the goal's three nearest neighbours and keep the cheapest.
    Multiple,
}

impl GoalMode {
    pub fn name(self) -> &'static str {
        match self {
            GoalMode::Single => "single",
            GoalMode::Multiple => "multiple",
        }
    }

    pub fn alternatives(self) -> bool {
        self == GoalMode::Multiple
    }
}

/// Weights of a request: a criteria group or an explicit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Group(u8),
    Explicit(CriteriaWeights),
}

impl WeightSpec {
    /// `raw_equal` swaps group 15's normalised 0.25s for plain ones.
    pub fn resolve(self, raw_equal: bool) -> Result<CriteriaWeights, AppError> {
        Ok(match self {
            WeightSpec::Group(15) if raw_equal => CriteriaWeights::raw_equal(),
            WeightSpec::Group(g) => CriteriaWeights::group(g)?,
            WeightSpec::Explicit(w) => w,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanRequest {
    pub lower: (NodeId, NodeId),
    pub upper: (NodeId, NodeId),
    pub weights: CriteriaWeights,
    pub algorithm: Algorithm,
    pub use_alternatives: bool,
    /// GA parameters; `rng_seed` seeds the run.
    pub ga: GaConfig,
}

impl PlanRequest {
    pub fn new(weights: CriteriaWeights, algorithm: Algorithm) -> Self {
        PlanRequest {
            lower: DEFAULT_LOWER,
            upper: DEFAULT_UPPER,
            weights,
            algorithm,
            use_alternatives: false,
            ga: GaConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanResult {
    pub plan: RobotPlan,
    pub elapsed: Duration,
}

/// Plans both sections and measures the wall time it took.
pub fn plan(env: &GlobalEnv, wear: &WearState, req: &PlanRequest) -> Result<PlanResult, AppError> {
    let t0 = Instant::now();
    let plan = plan_robot(
        env,
        wear,
        req.weights,
        req.lower,
        req.upper,
        req.algorithm,
        req.use_alternatives,
        &req.ga,
    )?;
    Ok(PlanResult {
        plan,
        elapsed: t0.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub groups: Vec<u8>,
    pub lower: (NodeId, NodeId),
    pub upper: (NodeId, NodeId),
    pub runs: usize,
    pub modes: Vec<GoalMode>,
    /// GA parameters; repetition `r` uses `derive_seed(rng_seed, r + 1)`.
    pub ga: GaConfig,
    pub raw_equal_weights: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            groups: (1..=15).collect(),
            lower: DEFAULT_LOWER,
            upper: DEFAULT_UPPER,
            runs: 100,
            modes: vec![GoalMode::Single],
            ga: GaConfig::default(),
            raw_equal_weights: false,
        }
    }
}

/// Statistics of one planner in one group and goal mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub group: u8,
    pub algo: Algorithm,
    pub mode: GoalMode,
    pub runs: usize,
    pub mean_time_us: f64,
    pub mean_total: f64,
    /// Runs in which this planner matched the lowest total of all four.
    pub best_pct: f64,
    /// Runs in which improved A* was strictly cheaper than this planner.
    pub astar_better_pct: f64,
    /// Runs in which this planner tied improved A*.
    pub equal_pct: f64,
    /// Runs in which this planner beat improved A*.
    pub astar_worse_pct: f64,
    /// Distinct (lower, upper) path pairs over the runs.
    pub distinct_paths: usize,
}

/// Distinct path pairs over the groups, taking each group's first repetition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistinctAcrossGroups {
    pub algo: Algorithm,
    pub mode: GoalMode,
    pub distinct_paths: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub runs: usize,
    pub lower: (NodeId, NodeId),
    pub upper: (NodeId, NodeId),
    pub ga: GaConfig,
    pub rows: Vec<BenchRow>,
    pub distinct_across_groups: Vec<DistinctAcrossGroups>,
}

impl BenchReport {
    pub fn row(&self, group: u8, algo: Algorithm, mode: GoalMode) -> Option<&BenchRow> {
        self.rows
            .iter()
            .find(|r| r.group == group && r.algo == algo && r.mode == mode)
    }

    pub fn distinct(&self, algo: Algorithm, mode: GoalMode) -> Option<usize> {
        self.distinct_across_groups
            .iter()
            .find(|d| d.algo == algo && d.mode == mode)
            .map(|d| d.distinct_paths)
    }
}

/// One planner call inside a repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub group: u8,
    pub run: usize,
    pub mode: GoalMode,
    pub algo: Algorithm,
    pub total: f64,
    pub elapsed: Duration,
    pub paths: (Vec<NodeId>, Vec<NodeId>),
}

/// Every planner call of a benchmark, in execution order. `observe` sees each
/// sample as it is produced.
pub fn collect_samples(
    env: &GlobalEnv,
    wear: &WearState,
    cfg: &BenchConfig,
    mut observe: impl FnMut(&Sample),
) -> Result<Vec<Sample>, AppError> {
    if cfg.runs == 0 {
        return Err(AppError::Usage("runs must be at least 1".into()));
    }
    let mut samples = Vec::with_capacity(cfg.groups.len() * cfg.runs * cfg.modes.len() * 4);
    for &group in &cfg.groups {
        let weights = WeightSpec::Group(group).resolve(cfg.raw_equal_weights)?;
        for run in 0..cfg.runs {
            let ga = cfg
                .ga
                .with_seed(derive_seed(cfg.ga.rng_seed, run as u64 + 1));
            for &mode in &cfg.modes {
                for algo in Algorithm::ALL {
                    let req = PlanRequest {
                        lower: cfg.lower,
                        upper: cfg.upper,
                        weights,
                        algorithm: algo,
                        use_alternatives: mode.alternatives(),
                        ga,
                    };
                    let res = plan(env, wear, &req)?;
                    let sample = Sample {
                        group,
                        run,
                        mode,
                        algo,
                        total: res.plan.breakdown.total,
                        elapsed: res.elapsed,
                        paths: (
                            res.plan.lower.path.into_nodes(),
                            res.plan.upper.path.into_nodes(),
                        ),
                    };
                    observe(&sample);
                    samples.push(sample);
                }
            }
        }
    }
    Ok(samples)
}

fn pct(count: usize, runs: usize) -> f64 {
    100.0 * count as f64 / runs as f64
}

/// Aggregates samples into a report.
pub fn summarize(cfg: &BenchConfig, samples: &[Sample]) -> BenchReport {
    // (group, mode, run) -> algo -> sample
    let mut by_run: BTreeMap<(u8, GoalMode, usize), BTreeMap<Algorithm, &Sample>> = BTreeMap::new();
    for s in samples {
        by_run
            .entry((s.group, s.mode, s.run))
            .or_default()
            .insert(s.algo, s);
    }

    let mut rows = Vec::new();
    for &group in &cfg.groups {
        for &mode in &cfg.modes {
            for algo in Algorithm::ALL {
                let mut time = Duration::ZERO;
                let mut total = 0.0;
                let (mut best, mut better, mut equal, mut worse) = (0, 0, 0, 0);
                let mut distinct = BTreeSet::new();
                let mut runs = 0;
                for run in 0..cfg.runs {
                    let Some(cell) = by_run.get(&(group, mode, run)) else {
                        continue;
                    };
                    let Some(s) = cell.get(&algo) else { continue };
                    runs += 1;
                    time += s.elapsed;
                    total += s.total;
                    distinct.insert(&s.paths);
                    let min = cell.values().map(|x| x.total).fold(f64::INFINITY, f64::min);
                    if s.total <= min + EQUAL_TOL {
                        best += 1;
                    }
                    if let Some(a) = cell.get(&Algorithm::Astar) {
                        if (a.total - s.total).abs() <= EQUAL_TOL {
                            equal += 1;
                        } else if a.total < s.total {
                            better += 1;
                        } else {
                            worse += 1;
                        }
                    }
                }
                if runs == 0 {
                    continue;
                }
                rows.push(BenchRow {
                    group,
                    algo,
                    mode,
                    runs,
                    mean_time_us: time.as_secs_f64() * 1e6 / runs as f64,
                    mean_total: total / runs as f64,
                    best_pct: pct(best, runs),
                    astar_better_pct: pct(better, runs),
                    equal_pct: pct(equal, runs),
                    astar_worse_pct: pct(worse, runs),
                    distinct_paths: distinct.len(),
                });
            }
        }
    }

    let mut distinct_across_groups = Vec::new();
    for &mode in &cfg.modes {
        for algo in Algorithm::ALL {
            let paths: BTreeSet<_> = samples
                .iter()
                .filter(|s| s.mode == mode && s.algo == algo && s.run == 0)
                .map(|s| &s.paths)
                .collect();
            distinct_across_groups.push(DistinctAcrossGroups {
                algo,
                mode,
                distinct_paths: paths.len(),
            });
        }
    }

    BenchReport {
        runs: cfg.runs,
        lower: cfg.lower,
        upper: cfg.upper,
        ga: cfg.ga,
        rows,
        distinct_across_groups,
    }
}

/// Runs every planner `cfg.runs` times per group and goal mode. The wear
/// snapshot is shared by all runs and never modified.
pub fn run_bench(
    env: &GlobalEnv,
    wear: &WearState,
    cfg: &BenchConfig,
) -> Result<BenchReport, AppError> {
    let samples = collect_samples(env, wear, cfg, |_| {})?;
    Ok(summarize(cfg, &samples))
}

/// One row per group x algorithm x mode with the columns of [`CSV_HEADER`].
pub fn emit_csv<W: Write>(report: &BenchReport, out: W) -> Result<(), AppError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.group.to_string(),
            r.algo.name().to_string(),
            r.mode.name().to_string(),
            r.runs.to_string(),
            format!("{:.3}", r.mean_time_us),
            format!("{:.2}", r.best_pct),
            format!("{:.2}", r.equal_pct),
            r.distinct_paths.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn emit_json<W: Write>(report: &BenchReport, mut out: W) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut out, report)?;
    writeln!(out).map_err(serde_json::Error::io)?;
    Ok(())
}

/// Human-readable summary, one line per group and mode.
pub fn render_summary(report: &BenchReport) -> String {
    let mut s = String::new();
    let modes: BTreeSet<GoalMode> = report.rows.iter().map(|r| r.mode).collect();
    for mode in modes {
        let _ = writeln!(s, "{} goal point, {} runs", mode.name(), report.runs);
        let groups: BTreeSet<u8> = report.rows.iter().map(|r| r.group).collect();
        for g in groups {
            let _ = write!(s, "  group {g:>2}:");
            for algo in Algorithm::ALL {
                if let Some(r) = report.row(g, algo, mode) {
                    let _ = write!(
                        s,
                        "  {}={:.1}us best {:.0}%",
                        algo, r.mean_time_us, r.best_pct
                    );
                }
            }
            let _ = writeln!(s);
        }
    }
    s
}
