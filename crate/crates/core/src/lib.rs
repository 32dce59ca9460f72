//! Coefficient-space laboratory for the quadratic Schrodinger equation
//! `i du/dt + Laplacian u = kappa * conj(u)^2` on the one-dimensional torus.
//!
//! Everything lives on truncated Fourier coefficients: weighted sequence
//! norms, the exact free flow, the closed-form first Picard iterate, a
//! contraction solver for the Duhamel integral equation, discretized
//! Bourgain-type space-time norms, and a harness of lattice-sum and
//! bilinear-estimate verifiers with certified truncation tails.

pub mod error;
pub mod estimate;
pub mod field;
pub mod grid;
pub mod oscillatory;
pub mod picard;
pub mod propagator;
pub mod spectral;
pub mod util;
pub mod window;
pub mod xsb;

pub use error::Error;
pub use field::SpaceTimeField;
pub use grid::TimeGrid;
pub use spectral::FourierState;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
