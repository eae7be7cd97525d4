//! Decides membership of an energy in the spectrum of a (possibly singular)
//! quasi-periodic Jacobi operator
//!
//! ```text
//! [H_x psi]_n = conj(c(T^{n-1}x)) psi_{n-1} + c(T^n x) psi_{n+1} + v(T^n x) psi_n
//! ```
//!
//! by certifying or refuting a dominated splitting of the associated transfer
//! cocycle, and cross-validates the dynamical classification against direct
//! finite-truncation eigenvalue computations.
//!
//! The crate is organised around the pipeline:
//!
//! * [`model`] — sampling functions as trigonometric polynomials on the
//!   d-torus, the translation dynamics, and exact `∫ log|c|` integrals.
//! * [`cocycle`] — the four cocycle matrix families, overflow-safe iteration,
//!   Lyapunov exponents and the conjugacy/determinant identities.
//! * [`weyl`] — Weyl m-functions by half-line truncation and by the Riccati
//!   recursion, the invariant projective sections they induce, and the
//!   Green's-function diagonal.
//! * [`domination`] — the uniform-contraction certificate for a dominated
//!   splitting, with a singular-value cross-check.
//! * [`spectrum`] — energy-window scans, the truncation-eigenvalue spectrum
//!   estimate, and the consistency reports between the two.
//!
//! Grid and energy sweeps are data-parallel; with the default `parallel`
//! feature they run on rayon, without it on plain iterators. Reductions are
//! index-ordered in both modes, so outputs are byte-identical across worker
//! counts.

pub mod cocycle;
pub mod domination;
pub mod error;
pub mod linalg;
pub mod mat2;
pub mod model;
pub mod parallel;
mod polyroots;
pub mod proj;
pub mod rng;
pub mod spectrum;
pub mod weyl;

pub use error::Error;

/// Convenient alias used throughout the crate.
pub type Complex = num_complex::Complex64;
