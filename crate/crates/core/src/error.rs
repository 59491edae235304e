use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-positive density {name} = {value:e}")]
    NonPositiveDensity { name: &'static str, value: f64 },

    #[error("non-positive mass {name} = {value:e}")]
    NonPositiveMass { name: &'static str, value: f64 },

    #[error("negative ion temperature T_i = {0:e}")]
    NegativeTemperature(f64),

    #[error("invalid charge state {name} = {value}")]
    InvalidChargeState { name: &'static str, value: u32 },

    #[error("quasineutrality violated: |Z_i n_i0 - n_e0 - eps Z_d n_d0| / (Z_i n_i0) = {residual:e}")]
    QuasineutralityViolated { residual: f64 },

    #[error("missing parameter {0}")]
    MissingParameter(&'static str),

    #[error("wavenumber must be positive and finite, got {0:e}")]
    InvalidWavenumber(f64),

    #[error("bad grid: {0}")]
    BadGrid(String),

    #[error("ion resonance: omega^2 matches the ion acoustic-quantum branch (relative gap {gap:e})")]
    IonResonance { gap: f64 },

    #[error("zero frequency: dust response undefined at omega = 0")]
    ZeroFrequency,

    #[error("cold ions: Boltzmann ion response needs T_i > 0")]
    ColdIons,

    #[error("mode {mode} outside retained band 0..{n_modes}")]
    ModeOutOfRange { mode: i64, n_modes: usize },

    #[error("time step too large: dt * max omega = {ratio:.4} exceeds {limit}")]
    StepTooLarge { ratio: f64, limit: f64 },

    #[error("no signal: amplitude below detection floor")]
    NoSignal,

    #[error("series too short: {periods:.3} periods, need at least {required}")]
    TooShort { periods: f64, required: f64 },

    #[error("underdetermined fit: {samples} samples for {parameters} free parameters")]
    Underdetermined { samples: usize, parameters: usize },

    #[error("degenerate data: {0}")]
    DegenerateData(&'static str),

    #[error("no convergence: none of {starts} starts converged within {max_iterations} iterations")]
    NoConvergence { starts: usize, max_iterations: usize },

    #[error("line {line}: {message}")]
    InvalidCsv { line: u64, message: String },

    #[error("invalid sample at index {index}: {reason}")]
    InvalidSample { index: usize, reason: &'static str },
}
