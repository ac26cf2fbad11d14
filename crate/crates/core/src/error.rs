use thiserror::Error;

/// Contract violations raised by the kernel.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace} instead of 1")]
    NotNormalized { trace: f64 },

    #[error("minimum eigenvalue {min_eigenvalue:e} is below the positivity floor")]
    NotPositive { min_eigenvalue: f64 },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("parameter `{name}` = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("auxiliary qubit state is not diagonal (|off-diagonal| = {off_diagonal:e})")]
    NotThermalForm { off_diagonal: f64 },

    #[error("populations ({excited}, {ground}) admit no finite inverse temperature")]
    DegeneratePopulation { excited: f64, ground: f64 },

    #[error("populations ({excited}, {ground}) correspond to infinite temperature")]
    InfiniteTemperature { excited: f64, ground: f64 },

    #[error("populations ({excited}, {ground}) are inverted (negative temperature)")]
    NegativeTemperature { excited: f64, ground: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
