//! Constructive solution of the resonance problem.
//!
//! Writing a `p:q` resonance as `x(q t) = p t + xi + u(t)` with `u` periodic
//! and zero-mean turns the equation of motion into
//!
//! ```text
//! u'' + eta_hat (u' - nu_hat) + eps_hat f_x(xi + p t + u(t), q t) = 0.
//! ```
//!
//! The range equation `u = eps_hat G Phi_hat_xi(u)` is solved by iterating
//! the contraction in a truncated Fourier basis with pseudo-spectral
//! evaluation of the nonlinearity ([`RangeSolver`]). The remaining scalar
//! bifurcation equation `phi_u(xi) = eta_hat nu_hat / eps_hat` is solved by
//! bisection in `xi` ([`solve_bifurcation`]).

mod bifurcation;
mod periodic;
mod range;

pub use bifurcation::{solve_bifurcation, OrbitExport, OrbitSample, ResonantOrbit};
pub use periodic::{apply_linear, green_apply, ModeCoefficient, PeriodicFunction};
pub use range::{
    phi_hat, phi_mean, solve_range, PhiHat, RangeSolution, RangeSolver, ALIASING_THRESHOLD,
};

use crate::catalog::ResonanceParams;
use crate::error::{Error, Result};

/// Discretisation and tolerances of the solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Fourier truncation order `N`.
    pub modes: usize,
    /// Collocation nodes; `0` selects `4 N`.
    pub collocation: usize,
    /// Sup-norm increment at which the contraction stops.
    pub tol_fixed_point: f64,
    /// Residual `|phi_u(xi) - target|` at which bisection stops.
    pub tol_bifurcation: f64,
    pub max_iterations: usize,
    /// Points of the sign-change scan over `[0, pi)`; `0` disables it.
    pub scan_points: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            modes: 64,
            collocation: 0,
            tol_fixed_point: 1e-12,
            tol_bifurcation: 1e-10,
            max_iterations: 500,
            scan_points: 64,
        }
    }
}

impl SolverConfig {
    /// 64 modes for `q = 1`, 128 otherwise.
    pub fn for_params(params: &ResonanceParams) -> Self {
        Self {
            modes: if params.q() == 1 { 64 } else { 128 },
            ..Self::default()
        }
    }

    pub fn collocation_nodes(&self) -> usize {
        if self.collocation == 0 {
            4 * self.modes
        } else {
            self.collocation
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::InvalidInput(
                "at least one Fourier mode is required".into(),
            ));
        }
        if self.collocation_nodes() <= 2 * self.modes {
            return Err(Error::InvalidInput(format!(
                "{} collocation nodes cannot resolve {} modes",
                self.collocation_nodes(),
                self.modes
            )));
        }
        if !(self.tol_fixed_point > 0.0 && self.tol_bifurcation > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidInput(
                "max_iterations must be positive".into(),
            ));
        }
        Ok(())
    }
}
