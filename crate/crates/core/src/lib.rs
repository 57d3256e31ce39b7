//! Existence certificates and constructive computation of p:q spin-orbit
//! resonances in the dissipative restricted spin-orbit model
//!
//! ```text
//! x'' + eta (x' - nu) + eps f_x(x, t) = 0,
//! f(x, t) = -cos(2x - 2 f_e(t)) / (2 rho_e(t)^3)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! - [`kepler`]: eccentric/true anomaly and orbital radius, for real and
//!   complex eccentricity.
//! - [`potential`]: the Newtonian potential, its Fourier coefficients
//!   `alpha_j(e)` (two quadrature routes plus Taylor polynomials) and
//!   certified lower bounds on `|alpha_2|`, `|alpha_3|`.
//! - [`catalog`]: body records, oblateness and the dissipation drift `nu_e`.
//! - [`certification`]: the four inequality conditions and the admissible
//!   dissipation ceiling, one report row per body.
//! - [`solver`]: range equation by contraction in a truncated Fourier basis,
//!   bifurcation equation by bisection, resonant orbit reconstruction.
//! - [`dynamics`]: direct RK4 integration used as an independent check.
//! - [`cli`]: the `spinorbit` command-line frontend.

pub mod catalog;
pub mod certification;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod kepler;
pub mod potential;
pub mod report;
pub mod solver;

mod numeric;

pub use catalog::{Body, ResonanceParams};
pub use certification::{certify, CertificationReport};
pub use error::{Error, Result};
pub use solver::{solve_bifurcation, PeriodicFunction, ResonantOrbit, SolverConfig};
