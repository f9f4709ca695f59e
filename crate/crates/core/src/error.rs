use thiserror::Error;

/// Errors raised by the kerrmetro library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configuration file or key could not be used.
    #[error("config error: {0}")]
    Config(String),

    /// A required configuration key is absent.
    #[error("missing required key `{0}`")]
    MissingKey(String),

    /// The Fock-space cutoff is too small for the requested state or evolution.
    #[error("cutoff {cutoff} too small: population {population:.3e} beyond tolerance {tail_tol:.1e} (try cutoff >= {suggested})")]
    Cutoff {
        cutoff: usize,
        population: f64,
        tail_tol: f64,
        suggested: usize,
    },

    /// Trace or step convergence of the density-matrix integrator failed.
    #[error("integrator failure: {0}")]
    Integrator(String),

    /// A phase-space series needed more terms than allowed.
    #[error("series truncation: needed {needed} terms, limit is {limit}")]
    Truncation { needed: usize, limit: usize },

    /// Not enough finite points to fit a power law.
    #[error("fit impossible: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}
