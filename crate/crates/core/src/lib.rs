//! Freezing of the Gaussian beta ensemble onto Hermite zeros.
//!
//! [`hermite`] computes the zeros and [`spectral`] the limit precision matrix.
//! [`sampler`] draws exact ensemble samples from the tridiagonal model, and
//! [`bounds`] evaluates the explicit l2 tail bound with the sup-norm baseline.
//! [`experiment`] ties them together into Monte Carlo tail estimates, CLT
//! covariance checks and parameter sweeps.

pub mod bounds;
pub mod error;
pub mod experiment;
pub mod hermite;
pub mod linalg;
pub mod sampler;
pub mod special;
pub mod spectral;
pub mod stats;
pub mod streams;
