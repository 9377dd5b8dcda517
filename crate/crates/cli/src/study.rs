//! Repeat studies on the batch reactor.
//!
//! Every repeat starts from the same two-point population (one flat profile
//! per representation) and differs only in its seed, `seed + run`. Repeats
//! are independent and run concurrently when the `parallel` feature is on;
//! files are written once, after all repeats finish, in run order.

use std::path::PathBuf;

use fresa::eval::map_indices;
use fresa::profile::{initial_profiles, profile_domain};
use fresa::reactor::Problem;
use fresa::{solve, Genotype, Population, Solution, TemperatureProfile};

use crate::config::ExperimentSpec;
use crate::error::{CliError, Result};
use crate::output;

pub const MIXED: &str = "mixed";

/// A member of a final non-dominated set, in physical units.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub genotype: TemperatureProfile,
    pub c_b: f64,
    pub c_c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub run: usize,
    /// Tag shared by the whole final population, or [`MIXED`].
    pub final_representation: String,
    /// First generation of permanent homogeneity; `None` iff mixed.
    pub homogeneous_generation: Option<usize>,
    /// `[C_B(1)]` of the best point for one objective, `[max C_B(1), min C_C(1)]`
    /// over the final front for two.
    pub best_objectives: Vec<f64>,
    /// Final non-dominated set (two objectives only).
    pub front: Vec<FrontPoint>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: RunSummary,
    pub solution: Solution<TemperatureProfile>,
}

#[derive(Debug, Clone)]
pub struct StudyReport {
    pub runs: Vec<RunOutcome>,
    /// Files written, in the order they were produced.
    pub files: Vec<PathBuf>,
}

impl StudyReport {
    pub fn summaries(&self) -> Vec<RunSummary> {
        self.runs.iter().map(|r| r.summary.clone()).collect()
    }
}

fn summarise(run: usize, problem: Problem, solution: &Solution<TemperatureProfile>) -> RunSummary {
    let record = &solution.record;
    let homogeneous_generation = record.homogeneous_since();
    let final_representation = match (homogeneous_generation, record.final_representation()) {
        (Some(_), Some(tag)) => tag.to_owned(),
        _ => MIXED.to_owned(),
    };
    let population = &solution.population;
    let (best_objectives, front) = match problem {
        Problem::Single => (vec![-population[solution.best[0]].objectives()[0]], Vec::new()),
        Problem::Multi => {
            let front: Vec<FrontPoint> = solution
                .best
                .iter()
                .map(|&i| FrontPoint {
                    genotype: population[i].genotype().clone(),
                    c_b: -population[i].objectives()[0],
                    c_c: population[i].objectives()[1],
                })
                .collect();
            let max_c_b = front.iter().map(|p| p.c_b).fold(f64::NEG_INFINITY, f64::max);
            let min_c_c = front.iter().map(|p| p.c_c).fold(f64::INFINITY, f64::min);
            (vec![max_c_b, min_c_c], front)
        }
    };
    RunSummary { run, final_representation, homogeneous_generation, best_objectives, front }
}

/// Runs every repeat of `spec` without writing anything.
pub fn run_repeats(spec: &ExperimentSpec) -> Result<Vec<RunOutcome>> {
    spec.validate()?;
    let objective = spec.objective();
    let domain = profile_domain(spec.limits);
    let initial = Population::evaluate(initial_profiles(), &objective)?;

    map_indices(spec.repeats, spec.parallel, |run| {
        let solution = solve(&objective, initial.clone(), &domain, &spec.solver_config(run))?;
        let summary = summarise(run, spec.problem, &solution);
        Ok(RunOutcome { summary, solution })
    })
    .into_iter()
    .collect()
}

fn prepare_output_dir(spec: &ExperimentSpec) -> Result<()> {
    std::fs::create_dir_all(&spec.output_dir).map_err(|e| CliError::io(&spec.output_dir, e))
}

fn write_population(spec: &ExperimentSpec, runs: &[RunOutcome], files: &mut Vec<PathBuf>) -> Result<()> {
    if !spec.population_output {
        return Ok(());
    }
    let path = spec.output_dir.join(output::POPULATION_FILE);
    let records: Vec<_> = runs.iter().map(|r| (r.summary.run, &r.solution.record)).collect();
    output::emit_population_csv(&records, &path)?;
    files.push(path);
    Ok(())
}

/// Single-objective repeat study: writes `summary.csv` and, when population
/// output is on, `population.csv`.
pub fn run_single_study(spec: &ExperimentSpec) -> Result<StudyReport> {
    if spec.problem != Problem::Single {
        return Err(CliError::usage("run_single_study needs problem = single"));
    }
    let runs = run_repeats(spec)?;
    prepare_output_dir(spec)?;
    let mut files = Vec::new();
    let summaries: Vec<RunSummary> = runs.iter().map(|r| r.summary.clone()).collect();
    let path = spec.output_dir.join(output::SUMMARY_FILE);
    output::write_single_summary(&summaries, &path)?;
    files.push(path);
    write_population(spec, &runs, &mut files)?;
    Ok(StudyReport { runs, files })
}

/// Multi-objective study: writes `pareto.csv`, `summary.csv` and, when
/// population output is on, `population.csv`.
pub fn run_multi_study(spec: &ExperimentSpec) -> Result<StudyReport> {
    if spec.problem != Problem::Multi {
        return Err(CliError::usage("run_multi_study needs problem = multi"));
    }
    let runs = run_repeats(spec)?;
    prepare_output_dir(spec)?;
    let mut files = Vec::new();
    let summaries: Vec<RunSummary> = runs.iter().map(|r| r.summary.clone()).collect();
    let path = spec.output_dir.join(output::PARETO_FILE);
    output::write_pareto_csv(&summaries, &path)?;
    files.push(path);
    let path = spec.output_dir.join(output::SUMMARY_FILE);
    output::write_multi_summary(&summaries, &path)?;
    files.push(path);
    write_population(spec, &runs, &mut files)?;
    Ok(StudyReport { runs, files })
}

pub fn run_study(spec: &ExperimentSpec) -> Result<StudyReport> {
    match spec.problem {
        Problem::Single => run_single_study(spec),
        Problem::Multi => run_multi_study(spec),
    }
}

/// Whether the final population of a run consists of `tag` only.
pub fn ends_with_only(summary: &RunSummary, tag: &str) -> bool {
    summary.final_representation == tag
}

/// Tags present in a front.
pub fn front_tags(summary: &RunSummary) -> Vec<&'static str> {
    let mut tags: Vec<&'static str> = summary.front.iter().map(|p| p.genotype.tag()).collect();
    tags.sort_unstable();
    tags.dedup();
    tags
}
