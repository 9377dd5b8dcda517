//! Experiment settings.
//!
//! Settings come from an optional flat `key = value` file and from command
//! line flags; flags win. Keys are the long flag names without the leading
//! dashes (`ngen`, `population-output`, ...). Blank lines and lines starting
//! with `#` are ignored.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use fresa::reactor::{BatchReactor, Problem, ReactorObjective};
use fresa::{FitnessScheme, ProfileLimits, SolverConfig};

use crate::error::{CliError, Result};

/// Every recognised key.
pub const KEYS: &[&str] = &[
    "problem",
    "fitness",
    "ngen",
    "npop",
    "nrmax",
    "elite",
    "repeats",
    "seed",
    "step",
    "outdir",
    "population-output",
    "parallel",
    "tmin",
    "tmax",
    "dtmax",
    "ca0",
    "cb0",
    "cc0",
];

/// Raw key/value settings before validation.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::usage(format!("config line {}: expected key=value, got `{line}`", number + 1))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(CliError::usage(format!("config line {}: unknown key `{key}`", number + 1)));
            }
            map.insert(key.to_owned(), value.trim().to_owned());
        }
        Ok(Self(map))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key), "unknown key {key}");
        self.0.insert(key.to_owned(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.get(key)
            .map(|raw| raw.parse::<T>().map_err(|_| CliError::usage(format!("invalid value `{raw}` for `{key}`"))))
            .transpose()
    }
}

fn parse_bool(raw: &str) -> std::result::Result<bool, ()> {
    match raw {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(()),
    }
}

/// A fully validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub problem: Problem,
    pub fitness: FitnessScheme,
    pub ngen: usize,
    pub npop: usize,
    pub nrmax: usize,
    pub elitism: bool,
    pub repeats: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub step: f64,
    pub limits: ProfileLimits,
    pub initial_concentrations: [f64; 3],
    pub population_output: bool,
    pub parallel: bool,
}

impl ExperimentSpec {
    /// Defaults for a problem: 100 generations, 5 runners at most, no
    /// elitism, 5 parents per generation for one objective and 20 with
    /// Hadamard ranking for two.
    pub fn defaults(problem: Problem) -> Self {
        let reactor = BatchReactor::default();
        let (fitness, npop) = match problem {
            Problem::Single => (FitnessScheme::Single, 5),
            Problem::Multi => (FitnessScheme::Hadamard, 20),
        };
        Self {
            problem,
            fitness,
            ngen: 100,
            npop,
            nrmax: 5,
            elitism: false,
            repeats: 1,
            seed: 1,
            output_dir: PathBuf::from("results"),
            step: reactor.step,
            limits: reactor.limits,
            initial_concentrations: reactor.initial,
            population_output: true,
            parallel: true,
        }
    }

    pub fn from_settings(settings: &Settings) -> Result<Self> {
        let problem = match settings.get("problem") {
            Some(raw) => raw.parse::<Problem>().map_err(CliError::usage)?,
            None => Problem::Single,
        };
        let mut spec = Self::defaults(problem);

        if let Some(raw) = settings.get("fitness") {
            spec.fitness = raw.parse().map_err(CliError::usage)?;
        }
        macro_rules! take {
            ($key:literal => $field:expr) => {
                if let Some(v) = settings.parsed($key)? {
                    $field = v;
                }
            };
        }
        take!("ngen" => spec.ngen);
        take!("npop" => spec.npop);
        take!("nrmax" => spec.nrmax);
        take!("repeats" => spec.repeats);
        take!("seed" => spec.seed);
        take!("step" => spec.step);
        take!("outdir" => spec.output_dir);
        take!("tmin" => spec.limits.t_min);
        take!("tmax" => spec.limits.t_max);
        take!("dtmax" => spec.limits.delta_t_max);
        take!("ca0" => spec.initial_concentrations[0]);
        take!("cb0" => spec.initial_concentrations[1]);
        take!("cc0" => spec.initial_concentrations[2]);
        for (key, field) in [
            ("elite", &mut spec.elitism),
            ("population-output", &mut spec.population_output),
            ("parallel", &mut spec.parallel),
        ] {
            if let Some(raw) = settings.get(key) {
                *field = parse_bool(raw)
                    .map_err(|_| CliError::usage(format!("`{key}` must be true or false, got `{raw}`")))?;
            }
        }

        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(CliError::usage(msg));
        match (self.problem, self.fitness.is_multi_objective()) {
            (Problem::Single, true) => return fail("the single-objective problem needs --fitness single"),
            (Problem::Multi, false) => {
                return fail("the multi-objective problem needs nondominated, hadamard or borda fitness")
            }
            _ => {}
        }
        if self.npop == 0 || self.nrmax == 0 || self.repeats == 0 {
            return fail("npop, nrmax and repeats must be at least 1");
        }
        if !(self.step > 0.0 && self.step <= 1.0) {
            return fail("step must lie in (0, 1]");
        }
        let n = (1.0 / self.step).round();
        if ((1.0 / self.step) - n).abs() > 1e-9 * n {
            return fail("1/step must be a whole number");
        }
        let l = &self.limits;
        if !(l.t_min > 0.0 && l.t_min < l.t_max && l.delta_t_max > 0.0) {
            return fail("temperature limits need 0 < tmin < tmax and dtmax > 0");
        }
        if self.initial_concentrations.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
            return fail("initial concentrations must be finite and non-negative");
        }
        Ok(())
    }

    pub fn reactor(&self) -> BatchReactor {
        BatchReactor { limits: self.limits, initial: self.initial_concentrations, step: self.step }
    }

    pub fn objective(&self) -> ReactorObjective {
        ReactorObjective { reactor: self.reactor(), problem: self.problem }
    }

    /// Solver configuration for repeat `run` (seeded with `seed + run`).
    pub fn solver_config(&self, run: usize) -> SolverConfig {
        SolverConfig {
            ngen: self.ngen,
            npop: self.npop,
            nrmax: self.nrmax,
            elitism: self.elitism,
            fitness_scheme: self.fitness,
            seed: self.seed.wrapping_add(run as u64),
            record_population: self.population_output,
            parallel: self.parallel,
        }
    }
}
