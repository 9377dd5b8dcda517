use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use fresa_cli::config::{ExperimentSpec, Settings};
use fresa_cli::output::print_summary;
use fresa_cli::{run_study, CliError};

/// Plant propagation studies on the batch reactor temperature profile problem.
///
/// Every option may also be given in a key=value file passed with --config;
/// options on the command line take precedence.
#[derive(Debug, Parser)]
#[command(name = "fresa", version)]
struct Args {
    /// single (maximise C_B(1)) or multi (maximise C_B(1), minimise C_C(1))
    #[arg(long, value_name = "single|multi")]
    problem: Option<String>,
    #[arg(long, value_name = "single|nondominated|hadamard|borda")]
    fitness: Option<String>,
    /// Number of generations
    #[arg(long, value_name = "N")]
    ngen: Option<String>,
    /// Parents propagated per generation
    #[arg(long, value_name = "N")]
    npop: Option<String>,
    /// Maximum runners per parent
    #[arg(long, value_name = "N")]
    nrmax: Option<String>,
    /// Carry the best point (or non-dominated set) into the next generation
    #[arg(long, value_name = "true|false")]
    elite: Option<String>,
    #[arg(long, value_name = "N")]
    repeats: Option<String>,
    /// Base seed; repeat r uses seed + r
    #[arg(long, value_name = "S")]
    seed: Option<String>,
    /// RK4 step (1/step must be whole)
    #[arg(long, value_name = "H")]
    step: Option<String>,
    #[arg(long, value_name = "PATH")]
    outdir: Option<String>,
    /// Write every generation to population.csv
    #[arg(long = "population-output", value_name = "true|false")]
    population_output: Option<String>,
    /// Evaluate points and repeats on all cores
    #[arg(long, value_name = "true|false")]
    parallel: Option<String>,
    /// Lowest temperature (K)
    #[arg(long, value_name = "K")]
    tmin: Option<String>,
    /// Highest temperature (K)
    #[arg(long, value_name = "K")]
    tmax: Option<String>,
    /// Largest temperature change per piecewise-linear segment (K)
    #[arg(long, value_name = "K")]
    dtmax: Option<String>,
    #[arg(long, value_name = "C")]
    ca0: Option<String>,
    #[arg(long, value_name = "C")]
    cb0: Option<String>,
    #[arg(long, value_name = "C")]
    cc0: Option<String>,
    /// key=value settings file
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

impl Args {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut settings = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = [
            ("problem", &self.problem),
            ("fitness", &self.fitness),
            ("ngen", &self.ngen),
            ("npop", &self.npop),
            ("nrmax", &self.nrmax),
            ("elite", &self.elite),
            ("repeats", &self.repeats),
            ("seed", &self.seed),
            ("step", &self.step),
            ("outdir", &self.outdir),
            ("population-output", &self.population_output),
            ("parallel", &self.parallel),
            ("tmin", &self.tmin),
            ("tmax", &self.tmax),
            ("dtmax", &self.dtmax),
            ("ca0", &self.ca0),
            ("cb0", &self.cb0),
            ("cc0", &self.cc0),
        ];
        for (key, value) in flags {
            if let Some(value) = value {
                settings.set(key, value.clone());
            }
        }
        Ok(settings)
    }
}

fn run(args: &Args) -> Result<(), CliError> {
    let spec = ExperimentSpec::from_settings(&args.settings()?)?;
    let report = run_study(&spec)?;
    let mut stdout = std::io::stdout().lock();
    print_summary(&mut stdout, &report.summaries(), spec.fitness.is_multi_objective())
        .map_err(|e| CliError::io("<stdout>", e))?;
    for file in &report.files {
        eprintln!("wrote {}", file.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
