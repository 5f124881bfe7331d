use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A physical input left its admissible range (nonpositive density, ...).
    #[error("{what} must be {requirement}, got {value}")]
    Domain {
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("Riemann problem generates vacuum (critical velocity {critical} <= {du})")]
    Vacuum { critical: f64, du: f64 },

    #[error("CFL number {cfl} exceeds the limit {limit}")]
    CflViolation { cfl: f64, limit: f64 },

    #[error("positivity lost in cell {cell} at t = {time}")]
    PositivityLoss { cell: usize, time: f64 },

    #[error("speed c = {speed} is not a break surface: |det| = {det:e} > {bound:e}")]
    NoBreakSurface { speed: f64, det: f64, bound: f64 },

    #[error("profile is not smooth: {0}")]
    NotSmooth(String),
}

pub(crate) fn ensure_positive(what: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain {
            what,
            requirement: "positive and finite",
            value,
        })
    }
}
