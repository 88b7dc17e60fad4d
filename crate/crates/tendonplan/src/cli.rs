//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tendonplan_core::ahp::{PairwiseMatrix, CRITERIA, DEFAULT_SCALE};
use tendonplan_core::env::{GlobalEnv, NodeId, Section, SectionEnv, COMPOSITE_COUNT, NODE_COUNT};
use tendonplan_core::ga::GaConfig;
use tendonplan_core::planner::RobotPlan;
use tendonplan_core::{Algorithm, CriteriaWeights, Path};

use crate::bench::{self, BenchConfig, GoalMode, PlanRequest, WeightSpec};
use crate::{store, AppError};

#[derive(Debug, Parser)]
#[command(
    name = "tendonplan",
    version,
    about = "Resilient multi-criteria path planning for a two-section continuum robot"
)]
pub struct Cli {
    /// Wear store; a missing file means a pristine robot.
    #[arg(long, global = true, default_value = "wear.json")]
    pub wear_file: PathBuf,

    /// Seed for the genetic algorithm.
    #[arg(long, global = true, env = "TENDONPLAN_SEED")]
    pub seed: Option<u64>,

    /// Write output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe the section lattice.
    Env {
        /// Print the node table as CSV: id,i,j,x_steps,y_steps,neighbors.
        #[arg(long)]
        dump: bool,
    },
    /// Print AHP criterion weights and consistency as JSON.
    Weights(WeightArgs),
    /// Inspect or update the wear store.
    Wear {
        #[command(subcommand)]
        action: WearAction,
    },
    /// Plan both robot sections.
    Plan(PlanArgs),
    /// Compare all four planners over the criteria groups.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Criteria group 1..=15.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=15), conflicts_with = "priorities", required_unless_present = "priorities")]
    pub group: Option<u8>,

    /// Prioritised criteria, comma separated from d (distance), m (motor),
    /// w (mechanical wear), a (accuracy), or "none".
    #[arg(long, value_parser = parse_priorities)]
    pub priorities: Option<[bool; CRITERIA]>,

    /// Importance of a prioritised criterion over a non-prioritised one.
    #[arg(long, default_value_t = DEFAULT_SCALE)]
    pub scale: f64,

    /// Use (1, 1, 1, 1) for group 15 instead of normalised weights.
    #[arg(long)]
    pub raw_equal_weights: bool,
}

#[derive(Debug, Subcommand)]
pub enum WearAction {
    /// Print the current store in canonical form.
    Show,
    /// Record an executed path and save the store.
    Apply {
        #[arg(long, value_parser = parse_section)]
        section: Section,
        /// Comma-separated node ids.
        #[arg(long, value_parser = parse_node_list)]
        path: NodeList,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeList(pub Vec<NodeId>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Ga,
    Astar,
    GaClassical,
    AstarClassical,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Ga => Algorithm::Ga,
            AlgoArg::Astar => Algorithm::Astar,
            AlgoArg::GaClassical => Algorithm::GaClassical,
            AlgoArg::AstarClassical => Algorithm::AstarClassical,
        }
    }
}

#[derive(Debug, Args)]
pub struct GaArgs {
    #[arg(long, default_value_t = 50)]
    pub population: usize,
    #[arg(long, default_value_t = 3)]
    pub generations: usize,
    #[arg(long, default_value_t = 0.1)]
    pub mutation_rate: f64,
    /// Longest chromosome in moves.
    #[arg(long, default_value_t = 40)]
    pub max_len: usize,
}

impl GaArgs {
    fn config(&self, seed: u64) -> GaConfig {
        GaConfig {
            population_size: self.population,
            generations: self.generations,
            mutation_rate: self.mutation_rate,
            max_len: self.max_len,
            rng_seed: seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,

    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=15), conflicts_with = "priorities", required_unless_present = "priorities")]
    pub group: Option<u8>,

    #[arg(long, value_parser = parse_priorities)]
    pub priorities: Option<[bool; CRITERIA]>,

    /// Lower section as start:goal.
    #[arg(long, value_parser = parse_start_goal)]
    pub lower: (NodeId, NodeId),

    /// Upper section as start:goal.
    #[arg(long, value_parser = parse_start_goal)]
    pub upper: (NodeId, NodeId),

    /// Also try the goal's three nearest neighbours.
    #[arg(long)]
    pub alternatives: bool,

    #[arg(long)]
    pub raw_equal_weights: bool,

    /// Include the wall-clock planning time in the output.
    #[arg(long)]
    pub timing: bool,

    #[command(flatten)]
    pub ga: GaArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Summary,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,

    /// Groups as a comma list and/or ranges, e.g. "1-4,15".
    #[arg(long, default_value = "1-15", value_parser = parse_groups)]
    pub groups: Groups,

    /// Benchmark the multiple-goal-point mode instead of the single one.
    #[arg(long, conflicts_with = "both_modes")]
    pub alternatives: bool,

    /// Benchmark both goal modes.
    #[arg(long)]
    pub both_modes: bool,

    #[arg(long, value_parser = parse_start_goal, default_value = "50:3")]
    pub lower: (NodeId, NodeId),

    #[arg(long, value_parser = parse_start_goal, default_value = "47:14")]
    pub upper: (NodeId, NodeId),

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long)]
    pub raw_equal_weights: bool,

    #[command(flatten)]
    pub ga: GaArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Groups(pub Vec<u8>);

fn parse_node(s: &str) -> Result<NodeId, String> {
    let id: NodeId = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a node id"))?;
    if id >= NODE_COUNT {
        return Err(format!("node id {id} is out of range 0..{NODE_COUNT}"));
    }
    Ok(id)
}

fn parse_start_goal(s: &str) -> Result<(NodeId, NodeId), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected start:goal, got '{s}'"))?;
    Ok((parse_node(a)?, parse_node(b)?))
}

fn parse_node_list(s: &str) -> Result<NodeList, String> {
    s.split(',')
        .map(parse_node)
        .collect::<Result<Vec<_>, _>>()
        .map(NodeList)
}

fn parse_section(s: &str) -> Result<Section, String> {
    match s {
        "lower" | "0" => Ok(Section::Lower),
        "upper" | "1" => Ok(Section::Upper),
        _ => Err(format!("unknown section '{s}', expected lower or upper")),
    }
}

fn parse_priorities(s: &str) -> Result<[bool; CRITERIA], String> {
    let mut flags = [false; CRITERIA];
    if s.trim() == "none" || s.trim().is_empty() {
        return Ok(flags);
    }
    for part in s.split(',') {
        let idx = match part.trim() {
            "d" | "distance" => 0,
            "m" | "motor" => 1,
            "w" | "mechanical" => 2,
            "a" | "accuracy" => 3,
            other => {
                return Err(format!(
                    "unknown criterion '{other}', expected d, m, w or a"
                ))
            }
        };
        flags[idx] = true;
    }
    Ok(flags)
}

fn parse_groups(s: &str) -> Result<Groups, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        let bound = |x: &str| {
            x.parse::<u8>()
                .ok()
                .filter(|g| (1..=15).contains(g))
                .ok_or_else(|| format!("group '{x}' is outside 1..=15"))
        };
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b) = (bound(a)?, bound(b)?);
                if a > b {
                    return Err(format!("empty group range '{part}'"));
                }
                out.extend(a..=b);
            }
            None => out.push(bound(part)?),
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(Groups(out))
}

fn weight_spec(
    group: Option<u8>,
    priorities: Option<[bool; CRITERIA]>,
    scale: f64,
) -> Result<WeightSpec, AppError> {
    match (group, priorities) {
        (Some(g), _) => Ok(WeightSpec::Group(g)),
        (None, Some(p)) => Ok(WeightSpec::Explicit(CriteriaWeights::from_priorities(
            p, scale,
        )?)),
        (None, None) => Err(AppError::Usage(
            "either --group or --priorities is required".into(),
        )),
    }
}

#[derive(Serialize)]
struct WeightsOut {
    group: Option<u8>,
    distance: f64,
    motor: f64,
    mechanical: f64,
    accuracy: f64,
    lambda_max: f64,
    ci: f64,
    cr: Option<f64>,
}

#[derive(Serialize)]
struct PlanOut<'a> {
    algo: Algorithm,
    weights: [f64; CRITERIA],
    alternatives: bool,
    seed: u64,
    #[serde(flatten)]
    plan: &'a RobotPlan,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_us: Option<f64>,
}

fn open_output(path: Option<&FsPath>) -> Result<Box<dyn Write>, AppError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| {
            AppError::Io {
                path: p.to_path_buf(),
                source,
            }
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn io_err(path: Option<&FsPath>) -> impl Fn(io::Error) -> AppError + '_ {
    move |source| AppError::Io {
        path: path.map_or_else(|| PathBuf::from("<stdout>"), FsPath::to_path_buf),
        source,
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), AppError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out).map_err(serde_json::Error::io)?;
    Ok(())
}

pub fn env_csv(env: &SectionEnv) -> String {
    let mut s = String::from("id,i,j,x_steps,y_steps,neighbors\n");
    for n in env.nodes() {
        let (x, y) = n.steps();
        let adj: Vec<String> = env.neighbors(n.id).iter().map(|m| m.to_string()).collect();
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            n.id,
            n.coord.0,
            n.coord.1,
            x,
            y,
            adj.join(";")
        ));
    }
    s
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> Result<(), AppError> {
    let out_path = cli.output.as_deref();
    let seed = cli.seed.unwrap_or(0);
    match cli.command {
        Command::Env { dump } => {
            let env = GlobalEnv::new();
            let mut out = open_output(out_path)?;
            if dump {
                out.write_all(env_csv(&env.lower).as_bytes())
                    .map_err(io_err(out_path))?;
            } else {
                #[derive(Serialize)]
                struct EnvOut {
                    nodes_per_section: usize,
                    composite_states: usize,
                    step_spacing: i64,
                }
                write_json(
                    &mut out,
                    &EnvOut {
                        nodes_per_section: env.lower.len(),
                        composite_states: COMPOSITE_COUNT,
                        step_spacing: tendonplan_core::env::STEP_SPACING,
                    },
                )?;
            }
            out.flush().map_err(io_err(out_path))?;
        }
        Command::Weights(args) => {
            let spec = weight_spec(args.group, args.priorities, args.scale)?;
            let weights = spec.resolve(args.raw_equal_weights)?;
            let flags = match spec {
                WeightSpec::Group(g) => tendonplan_core::ahp::group_priorities(g)?,
                WeightSpec::Explicit(_) => args.priorities.unwrap_or_default(),
            };
            let c = PairwiseMatrix::from_priorities(&flags, args.scale)?.consistency()?;
            let w = weights.as_array();
            let mut out = open_output(out_path)?;
            write_json(
                &mut out,
                &WeightsOut {
                    group: weights.group_index(),
                    distance: w[0],
                    motor: w[1],
                    mechanical: w[2],
                    accuracy: w[3],
                    lambda_max: c.lambda_max,
                    ci: c.ci,
                    cr: c.cr,
                },
            )?;
            out.flush().map_err(io_err(out_path))?;
        }
        Command::Wear { action } => {
            let state = store::load(&cli.wear_file)?;
            let state = match action {
                WearAction::Show => state,
                WearAction::Apply { section, path } => {
                    let env = GlobalEnv::new();
                    let env = env.section(section);
                    let path = Path::new(env, section, path.0)?;
                    let next = state.apply_path(env, &path)?;
                    store::save(&cli.wear_file, &next)?;
                    next
                }
            };
            let mut out = open_output(out_path)?;
            out.write_all(store::to_json(&state).as_bytes())
                .map_err(io_err(out_path))?;
            out.flush().map_err(io_err(out_path))?;
        }
        Command::Plan(args) => {
            let wear = store::load(&cli.wear_file)?;
            let weights = weight_spec(args.group, args.priorities, DEFAULT_SCALE)?
                .resolve(args.raw_equal_weights)?;
            let ga = args.ga.config(seed);
            ga.validate()?;
            let req = PlanRequest {
                lower: args.lower,
                upper: args.upper,
                weights,
                algorithm: args.algo.into(),
                use_alternatives: args.alternatives,
                ga,
            };
            let res = bench::plan(&GlobalEnv::new(), &wear, &req)?;
            let mut out = open_output(out_path)?;
            write_json(
                &mut out,
                &PlanOut {
                    algo: req.algorithm,
                    weights: weights.as_array(),
                    alternatives: req.use_alternatives,
                    seed,
                    plan: &res.plan,
                    elapsed_us: args.timing.then_some(res.elapsed.as_secs_f64() * 1e6),
                },
            )?;
            out.flush().map_err(io_err(out_path))?;
        }
        Command::Bench(args) => {
            let wear = store::load(&cli.wear_file)?;
            let ga = args.ga.config(seed);
            ga.validate()?;
            let modes = if args.both_modes {
                vec![GoalMode::Single, GoalMode::Multiple]
            } else if args.alternatives {
                vec![GoalMode::Multiple]
            } else {
                vec![GoalMode::Single]
            };
            let cfg = BenchConfig {
                groups: args.groups.0,
                lower: args.lower,
                upper: args.upper,
                runs: args.runs as usize,
                modes,
                ga,
                raw_equal_weights: args.raw_equal_weights,
            };
            let report = bench::run_bench(&GlobalEnv::new(), &wear, &cfg)?;
            let mut out = open_output(out_path)?;
            match args.format {
                Format::Csv => bench::emit_csv(&report, &mut out)?,
                Format::Json => bench::emit_json(&report, &mut out)?,
                Format::Summary => out
                    .write_all(bench::render_summary(&report).as_bytes())
                    .map_err(io_err(out_path))?,
            }
            out.flush().map_err(io_err(out_path))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("tendonplan").chain(args.iter().copied()))
    }

    #[test]
    fn plan_with_default_start_goals() {
        let cli = parse(&[
            "plan", "--algo", "astar", "--group", "1", "--lower", "50:3", "--upper", "47:14",
        ])
        .unwrap();
        match cli.command {
            Command::Plan(p) => {
                assert_eq!(p.algo, AlgoArg::Astar);
                assert_eq!(p.group, Some(1));
                assert_eq!(p.lower, (50, 3));
                assert_eq!(p.upper, (47, 14));
                assert!(!p.alternatives);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn group_out_of_range() {
        assert!(parse(&["weights", "--group", "16"]).is_err());
        assert!(parse(&["weights", "--group", "0"]).is_err());
    }

    #[test]
    fn group_and_priorities_exclusive() {
        assert!(parse(&["weights", "--group", "1", "--priorities", "d"]).is_err());
        assert!(parse(&["weights"]).is_err());
        let cli = parse(&["weights", "--priorities", "d,a"]).unwrap();
        match cli.command {
            Command::Weights(w) => assert_eq!(w.priorities, Some([true, false, false, true])),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bench_alternatives() {
        let cli = parse(&["bench", "--runs", "100", "--alternatives"]).unwrap();
        match cli.command {
            Command::Bench(b) => {
                assert!(b.alternatives);
                assert_eq!(b.runs, 100);
                assert_eq!(b.groups.0, (1..=15).collect::<Vec<_>>());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn node_ids_are_range_checked() {
        assert!(parse(&[
            "plan", "--algo", "ga", "--group", "1", "--lower", "61:3", "--upper", "47:14"
        ])
        .is_err());
        assert!(parse(&[
            "plan", "--algo", "ga", "--group", "1", "--lower", "3", "--upper", "47:14"
        ])
        .is_err());
        assert!(parse(&["wear", "apply", "--section", "lower", "--path", "30,x"]).is_err());
        assert!(parse(&["frobnicate"]).is_err());
    }

    #[test]
    fn group_lists() {
        assert_eq!(parse_groups("1-4,15,2").unwrap().0, vec![1, 2, 3, 4, 15]);
        assert!(parse_groups("0-3").is_err());
        assert!(parse_groups("5-2").is_err());
    }

    #[test]
    fn env_table() {
        let csv = env_csv(&SectionEnv::new());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 62);
        assert_eq!(lines[0], "id,i,j,x_steps,y_steps,neighbors");
        assert_eq!(lines[1], "0,0,5,0,350,2");
        assert_eq!(lines[31], "30,0,0,0,0,20;29;31;40");
    }
}
