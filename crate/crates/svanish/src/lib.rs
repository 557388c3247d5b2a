//! Scattering suppression for radially layered spheres with a perfectly
//! conducting core.
//!
//! The crate solves time-harmonic Maxwell scattering for a sphere coated by
//! concentric isotropic layers, extracts the low-frequency expansion
//! coefficients of the modal scattering coefficients, searches for layer
//! materials that make those coefficients vanish (an "S-vanishing" structure,
//! which scatters anomalously weakly at low frequency), assembles far-field
//! amplitudes and cross sections, and exports the anisotropic material
//! tensors of the equivalent transformation-optics cloak.
//!
//! Module layout:
//!
//! * [`specfun`] — spherical Bessel/Hankel functions, Riccati combinations,
//!   double factorials, small-argument series.
//! * [`lseries`] — truncated Laurent-series arithmetic with validity
//!   bookkeeping.
//! * [`multilayer`] — layered structures and their TE/TM transfer-matrix
//!   scattering solution at finite frequency.
//! * [`lowfreq`] — low-frequency coefficient tables extracted by running the
//!   transfer composition over Laurent series.
//! * [`designer`] — projected pseudoinverse Gauss–Newton search for
//!   S-vanishing layer materials.
//! * [`farfield`] — vector spherical harmonics, plane-wave multipole
//!   coefficients, scattering amplitudes and cross sections.
//! * [`cloakmap`] — the blow-up diffeomorphism and material-tensor
//!   push-forward.
//! * [`io`] — versioned JSON/CSV serialization.
//! * [`verify`] — the executable acceptance suite backing `svanish verify`.

pub mod cloakmap;
pub mod designer;
pub mod farfield;
pub mod io;
pub mod lowfreq;
pub mod lseries;
pub mod multilayer;
pub mod specfun;
pub mod verify;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A size or order exceeds a hard implementation cap.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// Laurent division hit a denominator whose leading coefficient is zero
    /// or indistinguishable from rounding dust.
    #[error("singular series division: relative leading magnitude {magnitude:.3e}")]
    SingularDivision { magnitude: f64 },
    /// Series arithmetic could not deliver a coefficient that the caller
    /// needs; indicates a truncation-bookkeeping bug, never silent loss.
    #[error("series validity shortfall: needed exponent {needed}, valid through {got}")]
    ValidityShortfall { needed: i64, got: i64 },
    /// A numeric solve failed (singular system, non-finite values, ...).
    #[error("solver error: {0}")]
    Solver(String),
    /// An input document violates its schema.
    #[error("schema error: {0}")]
    Schema(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
