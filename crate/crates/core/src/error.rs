use thiserror::Error;

/// Errors produced by the analytic model and the Fock-space oracle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Sideband index outside the modulator cutoff.
    #[error("sideband index {index} outside [-{cutoff}, {cutoff}]")]
    IndexOutOfRange { index: i32, cutoff: i32 },

    /// An operation hit a point where a cat-state norm vanishes.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A truncated-basis state would lose more probability mass than allowed.
    #[error("Fock cutoff {cutoff} too small: tail mass {tail:.3e} exceeds {tolerance:.3e}")]
    TailBound {
        cutoff: usize,
        tail: f64,
        tolerance: f64,
    },

    /// Conditional fidelity requested for a zero-probability outcome.
    #[error("fidelity undefined: success probability is zero")]
    UndefinedFidelity,

    /// The oracle cannot handle the requested instance size.
    #[error("oracle infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
