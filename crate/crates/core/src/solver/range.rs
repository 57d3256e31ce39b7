use crate::catalog::ResonanceParams;
use crate::certification::green_eta_hat_cap;
use crate::error::{Error, Result};
use crate::kepler;
use crate::potential::{fx_from, fx_sup_bound, fxx_sup_bound};

use super::periodic::{green_apply, PeriodicFunction, Spectral};
use super::SolverConfig;

/// Largest tolerated ratio of spectral energy in the top third of the
/// computed spectrum to the total.
pub const ALIASING_THRESHOLD: f64 = 1e-8;

/// Converged solution of the range equation at fixed phase `xi`.
#[derive(Debug, Clone)]
pub struct RangeSolution {
    pub xi: f64,
    pub u: PeriodicFunction,
    /// `max |u|` on the collocation grid.
    pub sup_norm: f64,
    pub iterations: usize,
    /// Sup-norm increments `|v_{n+1} - v_n|` of the contraction.
    pub increments: Vec<f64>,
    /// `|u - eps_hat G Phi_hat(u)|` at the returned iterate.
    pub fixed_point_residual: f64,
    /// `phi_u(xi)`, the mean of `f_x(xi + p t + u(t), q t)`.
    pub phi: f64,
}

/// Zero-mean part of `-f_x(xi + p t + u(t), q t)` together with the removed
/// mean, which equals `-phi_u(xi)`.
#[derive(Debug, Clone)]
pub struct PhiHat {
    pub function: PeriodicFunction,
    pub removed_mean: f64,
}

/// Collocation grid with the orbital quantities at `q t_m` cached.
#[derive(Clone)]
pub struct RangeSolver {
    params: ResonanceParams,
    config: SolverConfig,
    spectral: Spectral,
    /// `p t_m`
    phase: Vec<f64>,
    /// `f_e(q t_m)`
    true_anomaly: Vec<f64>,
    /// `rho_e(q t_m)`
    radius: Vec<f64>,
}

impl std::fmt::Debug for RangeSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RangeSolver")
            .field("params", &self.params)
            .field("config", &self.config)
            .finish()
    }
}

impl RangeSolver {
    /// Builds the grid and checks the Green and contraction conditions.
    pub fn new(params: ResonanceParams, config: SolverConfig) -> Result<Self> {
        let solver = Self::unchecked(params, config)?;
        solver.check_preconditions()?;
        Ok(solver)
    }

    fn unchecked(params: ResonanceParams, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let m = config.collocation_nodes();
        let spectral = Spectral::new(m, config.modes)?;
        let (p, q) = (params.p() as f64, params.q() as f64);
        let mut phase = Vec::with_capacity(m);
        let mut true_anomaly = Vec::with_capacity(m);
        let mut radius = Vec::with_capacity(m);
        for i in 0..m {
            let t = spectral.node(i);
            let a = kepler::anomalies(params.e(), q * t, kepler::DEFAULT_TOLERANCE)?;
            phase.push(p * t);
            true_anomaly.push(a.f);
            radius.push(a.rho);
        }
        Ok(Self {
            params,
            config,
            spectral,
            phase,
            true_anomaly,
            radius,
        })
    }

    pub fn params(&self) -> &ResonanceParams {
        &self.params
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// `5 eps_hat / (1 - e)^3`, the a-priori Lipschitz bound
    /// `(5/2) eps_hat sup |f_xx|` of the range map.
    pub fn contraction_bound(&self) -> f64 {
        2.5 * self.params.eps_hat() * fxx_sup_bound(self.params.e())
    }

    /// Radius `R = (5/2) eps_hat sup |f_x|` of the invariant ball.
    pub fn ball_radius(&self) -> f64 {
        2.5 * self.params.eps_hat() * fx_sup_bound(self.params.e())
    }

    fn check_preconditions(&self) -> Result<()> {
        let cap = green_eta_hat_cap();
        if self.params.eta_hat() > cap * (1.0 + 1e-12) {
            return Err(Error::Precondition(format!(
                "eta_hat = {} exceeds the Green operator cap {cap}",
                self.params.eta_hat()
            )));
        }
        let lip = self.contraction_bound();
        if lip >= 1.0 {
            return Err(Error::Precondition(format!(
                "range condition fails: (5/2) eps_hat sup|f_xx| = {lip} >= 1"
            )));
        }
        Ok(())
    }

    /// Samples `f_x(xi + p t_m + v_m, q t_m)`.
    fn forcing(&self, xi: f64, v: &[f64]) -> Vec<f64> {
        (0..self.spectral.nodes())
            .map(|i| {
                fx_from(
                    self.radius[i],
                    self.true_anomaly[i],
                    xi + self.phase[i] + v[i],
                )
            })
            .collect()
    }

    /// `Phi_hat_xi(u)` from the samples of `u`.
    fn phi_hat_from_samples(&self, xi: f64, v: &[f64]) -> Result<PhiHat> {
        let fx = self.forcing(xi, v);
        let spectrum = self.spectral.spectrum(&fx);
        check_aliasing(&spectrum, self.config.modes)?;
        let mean_fx = spectrum[0].re;
        let positive: Vec<_> = spectrum[1..=self.config.modes].iter().map(|c| -c).collect();
        Ok(PhiHat {
            function: PeriodicFunction::from_coefficients(0.0, &positive),
            removed_mean: -mean_fx,
        })
    }

    /// `Phi_hat_xi(u) = -f_x(xi + p t + u(t), q t) + phi_u(xi)`.
    pub fn phi_hat(&self, xi: f64, u: &PeriodicFunction) -> Result<PhiHat> {
        let v = self.spectral.synthesise(&u.resized(self.config.modes));
        self.phi_hat_from_samples(xi, &v)
    }

    /// One application of `v -> eps_hat G Phi_hat_xi(v)`, returning the new
    /// iterate and `phi_v(xi)`.
    fn step(&self, xi: f64, v_samples: &[f64]) -> Result<(PeriodicFunction, f64)> {
        let PhiHat {
            function,
            removed_mean,
        } = self.phi_hat_from_samples(xi, v_samples)?;
        let next = green_apply(&function, self.params.eta_hat())?.scale(self.params.eps_hat());
        Ok((next, -removed_mean))
    }

    /// Solves the range equation at `xi` starting from `v = 0`.
    pub fn solve(&self, xi: f64) -> Result<RangeSolution> {
        self.solve_from(xi, None)
    }

    /// Solves the range equation at `xi` starting from `initial`.
    pub fn solve_from(&self, xi: f64, initial: Option<&PeriodicFunction>) -> Result<RangeSolution> {
        let n = self.config.modes;
        let mut v = initial
            .map(|u| u.resized(n).zero_mean())
            .unwrap_or_else(|| PeriodicFunction::zero(n));
        let mut v_samples = self.spectral.synthesise(&v);
        let mut increments = Vec::new();

        for iteration in 1..=self.config.max_iterations {
            let (next, _) = self.step(xi, &v_samples)?;
            let next_samples = self.spectral.synthesise(&next);
            let increment = sup_diff(&next_samples, &v_samples);
            increments.push(increment);
            v = next;
            v_samples = next_samples;
            if increment <= self.config.tol_fixed_point {
                let (check, phi) = self.step(xi, &v_samples)?;
                let residual = sup_diff(&self.spectral.synthesise(&check), &v_samples);
                let sup_norm = v_samples.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                return Ok(RangeSolution {
                    xi,
                    u: v,
                    sup_norm,
                    iterations: iteration,
                    increments,
                    fixed_point_residual: residual,
                    phi,
                });
            }
        }
        Err(Error::NoConvergence {
            what: "range equation",
            iterations: self.config.max_iterations,
            residual: increments.last().copied().unwrap_or(f64::NAN),
        })
    }

    /// `phi_u(xi)` at the solution of the range equation.
    pub fn phi_mean(&self, xi: f64) -> Result<f64> {
        Ok(self.solve(xi)?.phi)
    }
}

fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn check_aliasing(spectrum: &[num_complex::Complex64], modes: usize) -> Result<()> {
    let top = spectrum.len() * 2 / 3;
    let total: f64 = spectrum[1..].iter().map(|c| c.norm_sqr()).sum();
    if total < 1e-300 {
        return Ok(());
    }
    let tail: f64 = spectrum[top.max(1)..].iter().map(|c| c.norm_sqr()).sum();
    let ratio = tail / total;
    if ratio > ALIASING_THRESHOLD && tail > 1e-30 {
        return Err(Error::Aliasing { modes, ratio });
    }
    Ok(())
}

/// `Phi_hat_xi(u)` on a grid of `n_coll` nodes.
pub fn phi_hat(
    xi: f64,
    u: &PeriodicFunction,
    params: &ResonanceParams,
    n_coll: usize,
) -> Result<PhiHat> {
    let config = SolverConfig {
        modes: u.order(),
        collocation: n_coll,
        ..SolverConfig::for_params(params)
    };
    RangeSolver::unchecked(*params, config)?.phi_hat(xi, u)
}

/// Solves `u = eps_hat G Phi_hat_xi(u)` with `modes` Fourier modes.
pub fn solve_range(
    xi: f64,
    params: &ResonanceParams,
    modes: usize,
    tol: f64,
) -> Result<RangeSolution> {
    let config = SolverConfig {
        modes,
        tol_fixed_point: tol,
        ..SolverConfig::for_params(params)
    };
    RangeSolver::new(*params, config)?.solve(xi)
}

/// `phi_u(xi)` after solving the range equation.
pub fn phi_mean(xi: f64, params: &ResonanceParams, modes: usize, tol: f64) -> Result<f64> {
    Ok(solve_range(xi, params, modes, tol)?.phi)
}
