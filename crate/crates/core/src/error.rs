use thiserror::Error;

/// Failures raised by the solver, the ranking functions, the profile
/// decoders and the reactor model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty population")]
    EmptyPopulation,

    #[error("objective arity mismatch: expected {expected} values, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("fitness scheme `{scheme}` cannot rank {arity}-objective points")]
    SchemeArity { scheme: &'static str, arity: usize },

    #[error("fitness vector has {fitness} entries for a population of {population}")]
    FitnessLength { fitness: usize, population: usize },

    #[error("initial point {index} lies outside the search domain")]
    OutsideDomain { index: usize },

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("time {0} lies outside [0, 1]")]
    TimeOutOfRange(f64),

    #[error("unknown representation `{0}`")]
    UnknownRepresentation(String),

    #[error("malformed genotype `{0}`")]
    MalformedGenotype(String),

    #[error("temperature must be positive, got {0} K")]
    NonPositiveTemperature(f64),

    #[error("integration step {0} does not divide [0, 1] into whole steps")]
    InvalidStep(f64),

    #[error("integration diverged at t = {t}")]
    Diverged { t: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
