//! Genetic algorithm planner.
//!
//! A chromosome is a path from the start to the goal; its genes are node ids.
//! The initial population comes from random walks that pick each next node
//! uniformly among the neighbours of the previous one, with loops erased as
//! they close. Each generation then spins a cost-minimising roulette wheel
//! for parents, splices them at a shared node, mutates single genes and keeps
//! the best chromosome of the previous generation.
//!
//! Because every chromosome ends at the goal, crossover and mutation are
//! written to preserve that: crossover only cuts at nodes both parents visit,
//! and a mutated gene is reconnected to the rest of the chromosome by the
//! fewest-moves route.

use alloc::vec;
use alloc::vec::Vec;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ahp::CriteriaWeights;
use crate::astar::Mode;
use crate::env::{NodeId, SectionEnv};
use crate::fitness::{CostModel, FitnessBreakdown, Path};
use crate::{Error, Result};

/// Offset that keeps a zero-cost chromosome from taking the whole wheel.
pub const ROULETTE_EPSILON: f64 = 1e-9;

const WALK_ATTEMPTS: usize = 64;
const WALK_STEP_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GaConfig {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    /// Longest chromosome, in moves.
    pub max_len: usize,
    pub rng_seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 50,
            generations: 3,
            mutation_rate: 0.1,
            max_len: 40,
            rng_seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig("population size must be at least 2"));
        }
        if self.generations < 1 {
            return Err(Error::InvalidConfig("at least one generation is required"));
        }
        if !(0.0..=1.0).contains(&self.mutation_rate) {
            return Err(Error::InvalidConfig("mutation rate must lie in [0, 1]"));
        }
        Ok(())
    }

    pub fn with_seed(self, rng_seed: u64) -> Self {
        GaConfig { rng_seed, ..self }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chromosome {
    pub path: Path,
    pub fitness: FitnessBreakdown,
}

impl Chromosome {
    pub fn evaluate(path: Path, model: &CostModel<'_>, goal: NodeId) -> Result<Self> {
        let fitness = model.evaluate(&path, goal)?;
        Ok(Chromosome { path, fitness })
    }

    pub fn total(&self) -> f64 {
        self.fitness.total
    }
}

/// A random walk `start -> goal` with loops erased, at most `max_len` moves.
pub fn random_path<R: Rng + ?Sized>(
    env: &SectionEnv,
    start: NodeId,
    goal: NodeId,
    max_len: usize,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    let distance = env.hop_distance(start, goal)?;
    if distance > max_len {
        return Err(Error::GoalOutOfReach { distance, max_len });
    }
    let mut position = vec![None; env.len()];
    for _ in 0..WALK_ATTEMPTS {
        let mut nodes = vec![start];
        position.iter_mut().for_each(|p| *p = None);
        position[start] = Some(0);
        let mut steps = 0;
        while nodes[nodes.len() - 1] != goal && steps < WALK_STEP_CAP {
            let next = *env
                .neighbors(nodes[nodes.len() - 1])
                .choose(rng)
                .ok_or(Error::Unreachable { start, goal })?;
            match position[next] {
                Some(k) => {
                    for &n in &nodes[k + 1..] {
                        position[n] = None;
                    }
                    nodes.truncate(k + 1);
                }
                None => {
                    position[next] = Some(nodes.len());
                    nodes.push(next);
                }
            }
            steps += 1;
        }
        if nodes[nodes.len() - 1] == goal && nodes.len() - 1 <= max_len {
            return Ok(nodes);
        }
    }
    // Only reachable when max_len barely covers the distance.
    env.shortest_hops(start, goal)
}

/// `population_size` random start-to-goal chromosomes, not yet evaluated.
pub fn init_population<R: Rng + ?Sized>(
    model: &CostModel<'_>,
    start: NodeId,
    goal: NodeId,
    cfg: &GaConfig,
    rng: &mut R,
) -> Result<Vec<Path>> {
    (0..cfg.population_size)
        .map(|_| {
            random_path(model.env(), start, goal, cfg.max_len, rng)
                .map(|nodes| Path::from_trusted(model.section(), nodes))
        })
        .collect()
}

/// Fitness-proportionate selection for a cost being minimised: a chromosome
/// is drawn with probability proportional to `1 / (total + epsilon)`.
pub struct Roulette {
    wheel: WeightedIndex<f64>,
}

impl Roulette {
    pub fn new(population: &[Chromosome]) -> Result<Self> {
        if population.is_empty() {
            return Err(Error::EmptyPopulation);
        }
        let wheel = WeightedIndex::new(
            population
                .iter()
                .map(|c| 1.0 / (c.total().max(0.0) + ROULETTE_EPSILON)),
        )
        .map_err(|_| Error::InvalidConfig("roulette weights are not usable"))?;
        Ok(Roulette { wheel })
    }

    /// Index of the selected chromosome.
    pub fn spin<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.wheel.sample(rng)
    }
}

pub fn select_parent<'p, R: Rng + ?Sized>(
    population: &'p [Chromosome],
    rng: &mut R,
) -> Result<&'p Chromosome> {
    Ok(&population[Roulette::new(population)?.spin(rng)])
}

/// Single-point crossover at a node both parents visit. The cut `(i, j)` is
/// drawn uniformly from all pairs with `p1[i] == p2[j]`, and the parents'
/// tails after the cut are exchanged. An offspring longer than `max_len`
/// moves is replaced by its own parent.
pub fn crossover<R: Rng + ?Sized>(
    p1: &Path,
    p2: &Path,
    max_len: usize,
    rng: &mut R,
) -> (Path, Path) {
    let a = p1.nodes();
    let b = p2.nodes();
    let junctions: Vec<(usize, usize)> = a
        .iter()
        .enumerate()
        .flat_map(|(i, x)| {
            b.iter()
                .enumerate()
                .filter(move |(_, y)| *y == x)
                .map(move |(j, _)| (i, j))
        })
        .collect();
    let Some(&(i, j)) = junctions.choose(rng) else {
        return (p1.clone(), p2.clone());
    };

    let splice = |head: &[NodeId], tail: &[NodeId], parent: &Path| {
        if head.len() + tail.len() > max_len + 1 {
            return parent.clone();
        }
        let mut nodes = Vec::with_capacity(head.len() + tail.len());
        nodes.extend_from_slice(head);
        nodes.extend_from_slice(tail);
        Path::from_trusted(parent.section(), nodes)
    };
    (
        splice(&a[..=i], &b[j + 1..], p1),
        splice(&b[..=j], &a[i + 1..], p2),
    )
}

/// With probability `rate`, replaces one gene by a random neighbour of the
/// gene before it and reconnects to the gene after it by the shortest route.
/// Two-node chromosomes get a detour inserted instead. The first and last
/// genes never change. If the result would exceed `max_len` moves the
/// chromosome is returned unchanged.
pub fn mutate<R: Rng + ?Sized>(
    path: &Path,
    env: &SectionEnv,
    rate: f64,
    max_len: usize,
    rng: &mut R,
) -> Result<Path> {
    let nodes = path.nodes();
    if nodes.len() < 2 || !rng.gen_bool(rate) {
        return Ok(path.clone());
    }
    let (gene, resume) = if nodes.len() == 2 {
        (1, 1)
    } else {
        let g = rng.gen_range(1..nodes.len() - 1);
        (g, g + 1)
    };
    let replacement = *env
        .neighbors(nodes[gene - 1])
        .choose(rng)
        .ok_or(Error::UnknownNode(nodes[gene - 1]))?;
    let bridge = env.shortest_hops(replacement, nodes[resume])?;

    let len = gene + bridge.len() + nodes.len() - resume - 1;
    if len > max_len + 1 {
        return Ok(path.clone());
    }
    let mut out = Vec::with_capacity(len);
    out.extend_from_slice(&nodes[..gene]);
    out.extend_from_slice(&bridge);
    out.extend_from_slice(&nodes[resume + 1..]);
    Ok(Path::from_trusted(path.section(), out))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaOutcome {
    pub path: Path,
    /// The returned path priced with the caller's weights.
    pub breakdown: FitnessBreakdown,
    /// Best total under the objective the GA optimised, after initialisation
    /// and after each generation.
    pub history: Vec<f64>,
}

fn best_index(population: &[Chromosome]) -> usize {
    population
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.total().total_cmp(&b.total()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn worst_index(population: &[Chromosome]) -> usize {
    population
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total().total_cmp(&b.total()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Runs the GA for `start -> goal`. The classical mode optimises distance
/// alone; either way the returned breakdown uses the model's own weights.
pub fn run_ga(
    model: &CostModel<'_>,
    start: NodeId,
    goal: NodeId,
    cfg: &GaConfig,
    mode: Mode,
) -> Result<GaOutcome> {
    cfg.validate()?;
    let env = model.env();
    env.node(start)?;
    env.node(goal)?;
    let objective = match mode {
        Mode::Improved => *model,
        Mode::Classical => model.reweighted(CriteriaWeights::distance_only()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);

    let mut population = init_population(model, start, goal, cfg, &mut rng)?
        .into_iter()
        .map(|p| Chromosome::evaluate(p, &objective, goal))
        .collect::<Result<Vec<_>>>()?;
    let mut history = Vec::with_capacity(cfg.generations + 1);
    history.push(population[best_index(&population)].total());

    for _ in 0..cfg.generations {
        let elite = population[best_index(&population)].clone();
        let roulette = Roulette::new(&population)?;
        let mut offspring = Vec::with_capacity(cfg.population_size);
        while offspring.len() < cfg.population_size {
            let p1 = &population[roulette.spin(&mut rng)];
            let p2 = &population[roulette.spin(&mut rng)];
            let (c1, c2) = crossover(&p1.path, &p2.path, cfg.max_len, &mut rng);
            for child in [c1, c2] {
                if offspring.len() == cfg.population_size {
                    break;
                }
                let child = mutate(&child, env, cfg.mutation_rate, cfg.max_len, &mut rng)?;
                offspring.push(Chromosome::evaluate(child, &objective, goal)?);
            }
        }
        let worst = worst_index(&offspring);
        offspring[worst] = elite;
        population = offspring;
        history.push(population[best_index(&population)].total());
    }

    let best = population.swap_remove(best_index(&population));
    let breakdown = model.evaluate(&best.path, goal)?;
    Ok(GaOutcome {
        path: best.path,
        breakdown,
        history,
    })
}
