//! The plant propagation loop.
//!
//! Each generation ranks the population, optionally carries the elite over,
//! picks up to `npop` parents by binary tournament and lets each parent
//! send out runners. Fit parents send many short runners, unfit parents a
//! few long ones. Parents are copied into the next generation together with
//! their runners; nothing else survives.
//!
//! Randomness comes from one master seed. Selection in generation `g` draws
//! from its own ChaCha stream, and the runners of the `i`-th selected parent
//! draw from the stream keyed by `(g, i)`, so the outcome does not depend
//! on how evaluations are scheduled.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::evaluate_batch;
use crate::fitness::{self, FitnessAssignment, FitnessScheme};
use crate::point::{CandidatePoint, Domain, Genotype, Objective, Population};

/// Stream slot reserved for parent selection within a generation.
const SELECTION_SLOT: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Number of generations.
    pub ngen: usize,
    /// Parents propagated per generation.
    pub npop: usize,
    /// Maximum runners per parent.
    pub nrmax: usize,
    pub elitism: bool,
    pub fitness_scheme: FitnessScheme,
    pub seed: u64,
    /// Keep a full snapshot of every generation in the [`RunRecord`].
    pub record_population: bool,
    /// Evaluate runners on the rayon pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            ngen: 100,
            npop: 5,
            nrmax: 5,
            elitism: false,
            fitness_scheme: FitnessScheme::Single,
            seed: 0,
            record_population: true,
            parallel: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.npop == 0 {
            return Err(Error::InvalidConfig("npop must be at least 1".into()));
        }
        if self.nrmax == 0 {
            return Err(Error::InvalidConfig("nrmax must be at least 1".into()));
        }
        Ok(())
    }
}

/// One member of a recorded generation.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotPoint<G> {
    pub genotype: G,
    pub objectives: Vec<f64>,
    pub constraint: f64,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<G> {
    pub generation: usize,
    pub points: Vec<SnapshotPoint<G>>,
}

/// History of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord<G> {
    /// Representation counts of generations `0..=ngen`.
    pub compositions: Vec<BTreeMap<&'static str, usize>>,
    /// Full populations of generations `0..=ngen`; empty unless
    /// `record_population` was set.
    pub snapshots: Vec<Snapshot<G>>,
    /// Index of the best point, or the non-dominated set, of the final population.
    pub best: Vec<usize>,
}

impl<G> RunRecord<G> {
    /// First generation from which every later population uses a single
    /// representation, if the final one does.
    pub fn homogeneous_since(&self) -> Option<usize> {
        let last = self.compositions.iter().rposition(|c| c.len() != 1);
        match last {
            None if self.compositions.is_empty() => None,
            None => Some(0),
            Some(g) if g + 1 < self.compositions.len() => Some(g + 1),
            Some(_) => None,
        }
    }

    /// The single representation of the final population, if it is homogeneous.
    pub fn final_representation(&self) -> Option<&'static str> {
        let last = self.compositions.last()?;
        (last.len() == 1).then(|| *last.keys().next().unwrap())
    }
}

/// Result of [`solve`].
#[derive(Debug, Clone)]
pub struct Solution<G> {
    /// Best point (single objective) or non-dominated set of `population`.
    pub best: Vec<usize>,
    pub population: Population<G>,
    pub fitness: FitnessAssignment,
    pub record: RunRecord<G>,
}

/// Binary tournament: two indices drawn uniformly with replacement, the
/// fitter one wins and the first draw wins ties.
pub fn select<R: Rng + ?Sized>(fitness: &FitnessAssignment, rng: &mut R) -> Result<usize> {
    if fitness.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    let n = fitness.len();
    let first = rng.gen_range(0..n);
    let second = rng.gen_range(0..n);
    Ok(if fitness.get(second) > fitness.get(first) { second } else { first })
}

/// `max(1, ceil(fitness * nrmax * u))`, clipped to `nrmax`, for a given
/// `u ∈ (0, 1]`.
pub fn runner_count_for(fitness: f64, nrmax: usize, u: f64) -> usize {
    let n = (fitness * nrmax as f64 * u).ceil();
    (n as usize).clamp(1, nrmax.max(1))
}

/// Number of runners for a parent of the given fitness, drawing `u`
/// uniformly from `(0, 1]`.
pub fn runner_count<R: Rng + ?Sized>(fitness: f64, nrmax: usize, rng: &mut R) -> usize {
    let u = 1.0 - rng.gen::<f64>();
    runner_count_for(fitness, nrmax, u)
}

/// The fittest point(s): the feasible point with the lowest objective for
/// one objective, the feasible non-dominated set otherwise. Without any
/// feasible point, the least violating point.
pub fn elite_set<G: Genotype>(population: &Population<G>) -> Vec<usize> {
    let feasible: Vec<usize> = (0..population.len()).filter(|&i| population[i].is_feasible()).collect();
    if feasible.is_empty() {
        let least = (0..population.len())
            .min_by(|&a, &b| population[a].constraint().total_cmp(&population[b].constraint()))
            .expect("population is never empty");
        return vec![least];
    }
    if population.arity() == 1 {
        let best = feasible
            .iter()
            .copied()
            .min_by(|&a, &b| population[a].objectives()[0].total_cmp(&population[b].objectives()[0]))
            .expect("non-empty");
        vec![best]
    } else {
        let objectives: Vec<Vec<f64>> = feasible.iter().map(|&i| population[i].objectives().to_vec()).collect();
        fitness::pareto_filter(&objectives).into_iter().map(|k| feasible[k]).collect()
    }
}

fn stream(seed: u64, generation: usize, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((generation as u64) << 32) | slot);
    rng
}

fn rank<G: Genotype>(population: &Population<G>, scheme: FitnessScheme) -> Result<FitnessAssignment> {
    fitness::assign(scheme, &population.objectives(), &population.constraints())
}

fn composition<G: Genotype>(population: &Population<G>) -> BTreeMap<&'static str, usize> {
    let mut counts = BTreeMap::new();
    for p in population.iter() {
        *counts.entry(p.tag()).or_insert(0) += 1;
    }
    counts
}

fn snapshot<G: Genotype>(generation: usize, population: &Population<G>, fitness: &FitnessAssignment) -> Snapshot<G> {
    Snapshot {
        generation,
        points: population
            .iter()
            .zip(fitness.values())
            .map(|(p, &f)| SnapshotPoint {
                genotype: p.genotype().clone(),
                objectives: p.objectives().to_vec(),
                constraint: p.constraint(),
                fitness: f,
            })
            .collect(),
    }
}

/// Runs `config.ngen` generations of plant propagation from `initial`.
pub fn solve<G, O>(
    objective: &O,
    initial: Population<G>,
    domain: &Domain<G>,
    config: &SolverConfig,
) -> Result<Solution<G>>
where
    G: Genotype,
    O: Objective<G> + ?Sized,
{
    config.validate()?;
    let arity = initial.arity();
    config.fitness_scheme.check_arity(arity)?;
    if let Some(index) = initial.iter().position(|p| !domain.contains(p.genotype())) {
        return Err(Error::OutsideDomain { index });
    }

    let mut record = RunRecord { compositions: Vec::new(), snapshots: Vec::new(), best: Vec::new() };
    let mut population = initial;

    for generation in 0..config.ngen {
        let fitness = rank(&population, config.fitness_scheme)?;
        record.compositions.push(composition(&population));
        if config.record_population {
            record.snapshots.push(snapshot(generation, &population, &fitness));
        }

        let mut next: Vec<CandidatePoint<G>> = if config.elitism {
            elite_set(&population).into_iter().map(|i| population[i].clone()).collect()
        } else {
            Vec::new()
        };

        let mut selection_rng = stream(config.seed, generation, SELECTION_SLOT);
        let parents = (0..config.npop.min(population.len()))
            .map(|_| select(&fitness, &mut selection_rng))
            .collect::<Result<Vec<_>>>()?;

        let mut runner_counts = Vec::with_capacity(parents.len());
        let mut runners = Vec::new();
        for (slot, &parent) in parents.iter().enumerate() {
            let mut rng = stream(config.seed, generation, slot as u64);
            let f = fitness.get(parent);
            let count = runner_count(f, config.nrmax, &mut rng);
            let genotype = population[parent].genotype();
            runners.extend((0..count).map(|_| genotype.neighbour(f, domain, &mut rng)));
            runner_counts.push(count);
        }

        let mut evaluated = evaluate_batch(runners, objective, generation + 1, config.parallel)?.into_iter();
        for (&parent, &count) in parents.iter().zip(&runner_counts) {
            next.push(population[parent].clone());
            for runner in evaluated.by_ref().take(count) {
                if runner.objectives().len() != arity {
                    return Err(Error::ArityMismatch { expected: arity, found: runner.objectives().len() });
                }
                next.push(runner);
            }
        }

        population = Population::new(next)?;
    }

    let fitness = rank(&population, config.fitness_scheme)?;
    record.compositions.push(composition(&population));
    if config.record_population {
        record.snapshots.push(snapshot(config.ngen, &population, &fitness));
    }
    let best = elite_set(&population);
    record.best = best.clone();

    Ok(Solution { best, population, fitness, record })
}
