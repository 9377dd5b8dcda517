//! Plant propagation search over populations that mix solution
//! representations.
//!
//! The solver ([`solve`]) knows nothing about how a point is encoded; any
//! type implementing [`Genotype`] can take part, and different encodings
//! compete under one fitness ranking. The crate ships the batch reactor
//! case study: two temperature profile encodings ([`profile`]) and an
//! A → B → C kinetics model ([`reactor`]) with single- and two-objective
//! formulations.
//!
//! ```
//! use fresa::{profile, reactor::{BatchReactor, Problem, ReactorObjective}, Population, SolverConfig};
//!
//! let objective = ReactorObjective { reactor: BatchReactor::default().with_step(0.01), problem: Problem::Single };
//! let p0 = Population::evaluate(profile::initial_profiles(), &objective).unwrap();
//! let domain = profile::profile_domain(objective.reactor.limits);
//! let config = SolverConfig { ngen: 5, ..SolverConfig::default() };
//! let solution = fresa::solve(&objective, p0, &domain, &config).unwrap();
//! let best = &solution.population[solution.best[0]];
//! assert!(-best.objectives()[0] > 0.5);
//! ```

pub mod error;
pub mod eval;
pub mod fitness;
pub mod point;
pub mod profile;
pub mod reactor;
pub mod solver;

pub use error::{Error, Result};
pub use fitness::{FitnessAssignment, FitnessScheme};
pub use point::{CandidatePoint, Domain, Evaluation, Genotype, Objective, Population};
pub use profile::{ProfileLimits, TemperatureProfile};
pub use solver::{solve, RunRecord, Solution, SolverConfig};

/// Formats a real with 10 significant digits in scientific notation, the
/// format used by every CSV and genotype string the crate writes.
pub fn format_real(x: f64) -> String {
    format!("{x:.9e}")
}
