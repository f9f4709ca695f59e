//! Nonlinear (Kerr/Duffing) nanomechanical interferometer.
//!
//! Two mechanical modes with Kerr rates γ and β are fed from a beamsplitter
//! pulse, evolve under `H = ħγ(a†a)² + ħβ(b†b)²` with zero-temperature
//! damping, and are recombined. The crate provides
//!
//! * [`model`]: device parameters and the reduced model,
//! * [`kerr`]: closed-form moments of one damped Kerr mode,
//! * [`interferometer`]: output quadrature statistics,
//! * [`estimation`]: precision of estimating γt and scaling fits,
//! * [`oracle`]: a truncated Fock-space master-equation reference,
//! * [`config`]: `key = value` parameter files.

pub mod config;
pub mod error;
pub mod estimation;
pub mod interferometer;
pub mod kerr;
pub mod model;
pub mod oracle;

pub use config::Config;
pub use error::{Error, Result};
pub use estimation::{
    fit_scaling_exponent, locate_fringe_boundaries, precision_at, precision_general,
    precision_no_damping, precision_strong_damping, stats_for, FiniteDifference, FringeBoundary,
    Precision, PrecisionPoint, Regime, ScalingFit,
};
pub use interferometer::{output_stats, QuadValues, Quadrature, QuadratureStats};
pub use kerr::{first_moment, mode_moments, q_value, KerrPoint, ModeMoments};
pub use model::{
    classify_regime, derive_model_params, ModelParams, PhysicalParams, RegimeReport,
    RegimeThresholds,
};
pub use oracle::{DensityMatrix, OracleConfig, OraclePath};
pub use num_complex::Complex64;
