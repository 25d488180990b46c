use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on the input parameters was violated.
    #[error("invalid parameter: {0}")]
    Domain(String),

    /// A state vector that must be normalized was not.
    #[error("state not normalized: |‖ψ‖ − 1| = {0:.3e}")]
    NotNormalized(f64),

    /// A fiber did not carry exactly one eigenvalue in the droplet window,
    /// or carried spurious eigenvalues in the forbidden gap above it.
    #[error("fiber {gamma}: {in_window} eigenvalue(s) in [{lo:.6}, {hi:.6}], {in_gap} in the gap above")]
    BandViolation {
        gamma: usize,
        in_window: usize,
        in_gap: usize,
        lo: f64,
        hi: f64,
    },

    /// The shifted fiber operator was singular to working tolerance.
    #[error("shifted fiber operator singular at E = {energy}")]
    NotInvertible { energy: f64 },

    /// A numerical invariant failed (lost hermiticity, negative density
    /// eigenvalue below tolerance, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
