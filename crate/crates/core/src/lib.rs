//! Bound-state spectra of a non-relativistic particle threaded by an
//! Aharonov-Bohm flux line, for four solvable radial potentials:
//!
//! * modified Coulomb, `V = a - b/r`
//! * modified harmonic oscillator, `V = a + b r^2`
//! * Kratzer-Fues, `V = -b/r + c/r^2`
//! * Mie-type, `V = a - b/r + c/r^2`
//!
//! Energies and radial wavefunctions come in closed form from the parametric
//! Nikiforov-Uvarov method ([`nu`], [`potentials`]); every closed form is
//! cross-checked against an independent finite-difference eigensolver
//! ([`oracle`]). The flux enters as the dimensionless ratio
//! `alpha = Phi/Phi_0` shifting `l -> l - alpha`, which makes each energy a
//! periodic function of the flux.
//!
//! Spectrum cells and verification slices are embarrassingly parallel; with
//! the default `parallel` feature they fan out over rayon, and without it the
//! same code paths run sequentially.

pub mod error;
pub mod nu;
pub mod oracle;
pub mod parallel;
pub mod potentials;
pub mod special;

pub use error::{Error, Result};
pub use potentials::{PhysicalScale, PotentialSpec, QuantumState};
