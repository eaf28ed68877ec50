//! Relational quantum dynamics of two harmonic oscillators under a single
//! Hamiltonian constraint `H1 + H2 - M = 0`.
//!
//! The physical Hilbert space is finite dimensional (`N = M = 2j + 1`). On it
//! the crate builds the Pegg–Barnett exponential phase operator, the ladder
//! operators it induces, and the gauge-invariant relational observables
//! `q1(t)`, `p1(t)`. Their spectra are the zeros of the Hermite polynomial
//! `H_N`, which [`hermite`] computes to double precision together with the
//! associated Christoffel weights.
//!
//! Module map:
//!
//! - [`hermite`]: Hermite polynomials, scaled Hermite functions, roots and weights.
//! - [`hilbert`]: model parameters, energy basis, wavefunctions, kinematical projector.
//! - [`phase_ops`]: phase operator, ladder operators, relational observables.
//! - [`spectral`]: eigenstates of `q1(t)`, propagator, basis change, zero identities.
//! - [`classical`]: gauge orbits, internal time, reduced variables, Poisson brackets.
//! - [`limits`]: Mehler kernel, closed-form oscillator propagator, two-point function.
//! - [`cli`]: the `relq` command-line front end.

pub mod classical;
pub mod cli;
pub mod error;
pub mod hermite;
pub mod hilbert;
pub mod limits;
pub mod linalg;
pub mod phase_ops;
pub mod spectral;

pub use error::{Error, Result};
pub use hermite::HermiteRootSet;
pub use hilbert::{ModelSpec, StateVector};
pub use linalg::Operator;
