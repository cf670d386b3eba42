use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("config error at {field}: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("newton did not converge after {iterations} iterations (last v = {last}, residual = {residual:e})")]
    NoConvergence {
        iterations: usize,
        last: Complex64,
        residual: f64,
    },

    #[error("near a fold: |dx/dv| = {jacobian:e} at v = {v}")]
    NearFold { v: Complex64, jacobian: f64 },

    #[error("continuation step collapsed to {step:e} at x = {x}")]
    StepCollapse { step: f64, x: f64 },

    #[error("quadrature failed, error estimate {estimate:e} exceeds {requested:e}")]
    QuadratureFailure { estimate: f64, requested: f64 },

    #[error("no real root in scanned bracket [{lo}, {hi}]")]
    NoRealRoot { lo: f64, hi: f64 },

    #[error("fold points merged: separation {separation:e}")]
    FoldsMerged { separation: f64 },

    #[error("|a - a0| = {offset} outside the near-critical window {window}")]
    WindowViolation { offset: f64, window: f64 },

    #[error("curve tracer stalled at {at}")]
    TracerStall { at: Complex64 },

    #[error("integrator tolerance exceeded: {0}")]
    IntegratorTolerance(String),

    #[error("no root of {what} in [{lo}, {hi}]")]
    NoRoot { what: String, lo: f64, hi: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("{what} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("exponent {exponent} exceeds cap {cap}")]
    ExponentCap { exponent: f64, cap: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit code, unique per error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Io(_) => 3,
            Error::NoConvergence { .. } => 10,
            Error::NearFold { .. } => 11,
            Error::StepCollapse { .. } => 12,
            Error::QuadratureFailure { .. } => 13,
            Error::NoRealRoot { .. } => 14,
            Error::FoldsMerged { .. } => 15,
            Error::WindowViolation { .. } => 16,
            Error::TracerStall { .. } => 17,
            Error::IntegratorTolerance(_) => 18,
            Error::NoRoot { .. } => 19,
            Error::Domain(_) => 20,
            Error::RegimeViolation(_) => 21,
            Error::SolverFailure(_) => 22,
            Error::OutOfRange { .. } => 23,
            Error::ExponentCap { .. } => 24,
            Error::InvalidParams(_) => 25,
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            Error::Config { .. } => "ConfigError",
            Error::Io(_) => "IoError",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NearFold { .. } => "NearFold",
            Error::StepCollapse { .. } => "StepCollapse",
            Error::QuadratureFailure { .. } => "QuadratureFailure",
            Error::NoRealRoot { .. } => "NoRealRoot",
            Error::FoldsMerged { .. } => "FoldsMerged",
            Error::WindowViolation { .. } => "WindowViolation",
            Error::TracerStall { .. } => "TracerStall",
            Error::IntegratorTolerance(_) => "IntegratorTolerance",
            Error::NoRoot { .. } => "NoRoot",
            Error::Domain(_) => "DomainError",
            Error::RegimeViolation(_) => "RegimeViolation",
            Error::SolverFailure(_) => "SolverFailure",
            Error::OutOfRange { .. } => "OutOfRange",
            Error::ExponentCap { .. } => "ExponentCap",
            Error::InvalidParams(_) => "InvalidParams",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

/// Every documented exit code with its class name, success excluded.
pub const EXIT_CODES: &[(&str, i32)] = &[
    ("ConfigError", 2),
    ("IoError", 3),
    ("NoConvergence", 10),
    ("NearFold", 11),
    ("StepCollapse", 12),
    ("QuadratureFailure", 13),
    ("NoRealRoot", 14),
    ("FoldsMerged", 15),
    ("WindowViolation", 16),
    ("TracerStall", 17),
    ("IntegratorTolerance", 18),
    ("NoRoot", 19),
    ("DomainError", 20),
    ("RegimeViolation", 21),
    ("SolverFailure", 22),
    ("OutOfRange", 23),
    ("ExponentCap", 24),
    ("InvalidParams", 25),
];
