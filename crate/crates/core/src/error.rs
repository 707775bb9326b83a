use thiserror::Error;

/// Errors raised by the grid, model, Riemann, reconstruction and scheme layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inadmissible state in cell {cell}: {detail}")]
    Inadmissible { cell: usize, detail: String },

    #[error("inadmissible Riemann data: {0}")]
    InadmissibleData(String),

    #[error("Riemann data generate vacuum (critical velocity exceeded by {margin:e})")]
    Vacuum { margin: f64 },

    #[error("exact Riemann solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("singular linear system: {0}")]
    Singular(String),

    #[error("stale interface ledger: valid from step {valid_from}, consumed at step {step}")]
    StaleLedger { valid_from: usize, step: usize },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("maximum wave speed is zero, time step undefined")]
    ZeroWaveSpeed,

    #[error("interface {interface}: {source}")]
    AtInterface {
        interface: usize,
        #[source]
        source: Box<SolverError>,
    },

    #[error("step {step} (t = {time}): {source}")]
    AtStep {
        step: usize,
        time: f64,
        #[source]
        source: Box<SolverError>,
    },
}

impl SolverError {
    /// True for failures caused by the numerical solution itself (negative
    /// density or pressure, vacuum, non-finite values), as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            SolverError::Inadmissible { .. }
            | SolverError::InadmissibleData(_)
            | SolverError::Vacuum { .. }
            | SolverError::NoConvergence { .. }
            | SolverError::NonFinite(_)
            | SolverError::ZeroWaveSpeed => true,
            SolverError::AtInterface { source, .. } | SolverError::AtStep { source, .. } => {
                source.is_numerical()
            }
            _ => false,
        }
    }

    /// Strips the interface and step context wrappers.
    pub fn root(&self) -> &SolverError {
        match self {
            SolverError::AtInterface { source, .. } | SolverError::AtStep { source, .. } => {
                source.root()
            }
            other => other,
        }
    }

    pub(crate) fn at_interface(self, interface: usize) -> Self {
        SolverError::AtInterface {
            interface,
            source: Box::new(self),
        }
    }

    pub(crate) fn at_step(self, step: usize, time: f64) -> Self {
        SolverError::AtStep {
            step,
            time,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
