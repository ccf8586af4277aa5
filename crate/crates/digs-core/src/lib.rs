//! Weak-probe optical response of the five-level DIGS (Dressed Interacting
//! Ground States) atomic system.
//!
//! The crate computes the reduced susceptibility chi-tilde of a weak probe on
//! the a-b transition, either from a full steady-state density-matrix solve
//! ([`liouvillian`]) or from the closed-form resonant expressions
//! ([`analytic`]), applies Gaussian inhomogeneous averaging ([`doppler`]),
//! and derives spectra, absorption zeros, and optical quantities
//! ([`spectra`]).
//!
//! All rates and frequencies are dimensionless multiples of the bare a-b
//! line width `gamma_ab`; [`model::MediumParams`] is the only dimensional
//! type.

pub mod analytic;
pub mod doppler;
pub mod liouvillian;
pub mod model;
pub mod presets;
pub mod spectra;

pub use model::{AtomParams, BackendTag, MediumParams, RelaxationModel, Spectrum};

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The vectorized steady-state system is rank deficient (a zero
    /// population decay rate slipped through validation).
    #[error("steady-state linear system is singular (residual {residual:e})")]
    SingularSystem { residual: f64 },

    /// A closed-form denominator vanished.
    #[error("degenerate relaxation rates: {0}")]
    DegenerateRelaxation(String),

    /// The RF dressing is undefined at omega_b = delta_b = 0.
    #[error("degenerate dressing: omega_b = delta_b = 0 collapses the dressed doublet")]
    DegenerateDressing,

    /// Closed-form expressions called outside their delta_mu = delta_c = 0
    /// domain.
    #[error("outside analytic domain: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid doppler spec: {0}")]
    InvalidDoppler(String),
}

pub type Result<T> = std::result::Result<T, Error>;
