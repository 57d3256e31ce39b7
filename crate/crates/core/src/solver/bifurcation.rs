use std::f64::consts::{FRAC_PI_4, PI};

use serde::Serialize;

use crate::catalog::ResonanceParams;
use crate::certification::{a_pq, Resonance};
use crate::error::{Error, Result};

use super::periodic::{ModeCoefficient, PeriodicFunction};
use super::range::{RangeSolution, RangeSolver};
use super::SolverConfig;

/// Maximum bisection steps; the bracket width then falls below `2^-60`.
const MAX_BISECTIONS: usize = 60;

/// A `p:q` resonant solution `x(s) = (p/q) s + xi* + u(s/q)`.
#[derive(Debug, Clone)]
pub struct ResonantOrbit {
    pub params: ResonanceParams,
    pub xi_star: f64,
    pub u: PeriodicFunction,
    /// `|phi_u(xi*) - eta_hat nu_hat / eps_hat|`.
    pub bifurcation_residual: f64,
    pub fixed_point_residual: f64,
    /// `max |u|` on the collocation grid.
    pub sup_norm: f64,
    /// Approximate roots of the bifurcation equation found by scanning
    /// `[0, pi)`; empty when the scan is disabled.
    pub sign_changes: Vec<f64>,
}

impl ResonantOrbit {
    /// Rotation angle at mean anomaly `s`.
    pub fn angle(&self, s: f64) -> f64 {
        let q = self.params.q() as f64;
        self.params.p() as f64 / q * s + self.xi_star + self.u.eval(s / q)
    }

    /// Angular velocity at mean anomaly `s`.
    pub fn angular_velocity(&self, s: f64) -> f64 {
        let q = self.params.q() as f64;
        self.params.p() as f64 / q + self.u.eval_derivative(s / q, 1) / q
    }

    /// `(1/2 pi) int_0^{2 pi} (x(q t) - p t) dt`, evaluated by the trapezoid
    /// rule on `n` points. Equals `xi*` because `u` has zero mean.
    pub fn phase_average(&self, n: usize) -> f64 {
        let q = self.params.q() as f64;
        let p = self.params.p() as f64;
        let sum: f64 = (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                self.angle(q * t) - p * t
            })
            .sum();
        sum / n as f64
    }

    /// Export with `x` sampled at the given mean anomalies.
    pub fn export(&self, times: &[f64]) -> OrbitExport {
        OrbitExport {
            p: self.params.p(),
            q: self.params.q(),
            e: self.params.e(),
            eps: self.params.eps(),
            eta: self.params.eta(),
            nu: self.params.nu(),
            xi_star: self.xi_star,
            xi_average: self.phase_average(4 * self.u.order().max(16)),
            bifurcation_residual: self.bifurcation_residual,
            fixed_point_residual: self.fixed_point_residual,
            sup_norm: self.sup_norm,
            sign_changes: self.sign_changes.clone(),
            modes: self.u.modes(),
            samples: times
                .iter()
                .map(|&t| OrbitSample {
                    t,
                    x: self.angle(t),
                    v: self.angular_velocity(t),
                })
                .collect(),
            orbit_residual: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitSample {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

/// JSON form of a resonant orbit.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitExport {
    pub p: i64,
    pub q: i64,
    pub e: f64,
    pub eps: f64,
    pub eta: f64,
    pub nu: f64,
    pub xi_star: f64,
    pub xi_average: f64,
    pub bifurcation_residual: f64,
    pub fixed_point_residual: f64,
    pub sup_norm: f64,
    pub sign_changes: Vec<f64>,
    pub modes: Vec<ModeCoefficient>,
    pub samples: Vec<OrbitSample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit_residual: Option<f64>,
}

/// Finds `xi*` with `phi_u(xi*) = eta_hat nu_hat / eps_hat` and assembles
/// the resonant orbit.
///
/// The search starts from the bracket `[-pi/4, pi/4]` between the extrema
/// of the leading-order bifurcation function `-2 alpha_q sin(2 xi)`, which
/// contains the branch through `xi = 0` of the conservative problem; the
/// bracket `[pi/4, 3 pi/4]` is tried next.
pub fn solve_bifurcation(params: &ResonanceParams, config: &SolverConfig) -> Result<ResonantOrbit> {
    let res = Resonance::from_pq(params.p(), params.q())?;
    let solver = RangeSolver::new(*params, *config)?;
    let target = if params.eps_hat() == 0.0 && params.eta_hat() * params.nu_hat() != 0.0 {
        return Err(Error::Precondition(
            "eps = 0 with nonzero eta * nu_hat leaves the bifurcation equation without solutions"
                .into(),
        ));
    } else {
        params.bifurcation_target()
    };
    let half_width = a_pq(params.e(), params.eps(), res.p(), res.q())?;
    if half_width <= 0.0 {
        return Err(Error::Precondition(format!(
            "non-empty condition fails: a_pq = {half_width} is not positive"
        )));
    }
    if target.abs() > half_width * (1.0 + 1e-9) {
        return Err(Error::Precondition(format!(
            "bifurcation condition fails: |eta_hat nu_hat / eps_hat| = {} exceeds a_pq = {half_width}",
            target.abs()
        )));
    }

    let g = |sol: &RangeSolution| sol.phi - target;
    let mut root = None;
    for (lo, hi) in [(-FRAC_PI_4, FRAC_PI_4), (FRAC_PI_4, 3.0 * FRAC_PI_4)] {
        let a = solver.solve(lo)?;
        let b = solver.solve(hi)?;
        if g(&a) == 0.0 {
            root = Some(a);
        } else if g(&b) == 0.0 {
            root = Some(b);
        } else if g(&a).signum() != g(&b).signum() {
            root = Some(bisect(&solver, a, b, target, config.tol_bifurcation)?);
        }
        if root.is_some() {
            break;
        }
    }
    let sol = root.ok_or_else(|| {
        Error::Bifurcation(format!(
            "no sign change of phi_u - {target:e} found on the seed brackets"
        ))
    })?;

    let sign_changes = scan(&solver, target, config.scan_points)?;
    Ok(ResonantOrbit {
        params: *params,
        xi_star: sol.xi,
        bifurcation_residual: (sol.phi - target).abs(),
        fixed_point_residual: sol.fixed_point_residual,
        sup_norm: sol.sup_norm,
        u: sol.u,
        sign_changes,
    })
}

fn bisect(
    solver: &RangeSolver,
    mut lo: RangeSolution,
    mut hi: RangeSolution,
    target: f64,
    tol: f64,
) -> Result<RangeSolution> {
    let lo_sign = (lo.phi - target).signum();
    for _ in 0..MAX_BISECTIONS {
        let best = if (lo.phi - target).abs() <= (hi.phi - target).abs() {
            &lo
        } else {
            &hi
        };
        if (best.phi - target).abs() <= tol {
            return Ok(best.clone());
        }
        let mid = solver.solve(0.5 * (lo.xi + hi.xi))?;
        let r = mid.phi - target;
        if r == 0.0 {
            return Ok(mid);
        }
        if r.signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let best = if (lo.phi - target).abs() <= (hi.phi - target).abs() {
        lo
    } else {
        hi
    };
    if (best.phi - target).abs() <= tol {
        Ok(best)
    } else {
        Err(Error::Bifurcation(format!(
            "bisection stagnated at xi = {} with residual {:e}",
            best.xi,
            (best.phi - target).abs()
        )))
    }
}

/// Linear-interpolation estimates of the roots of `phi_u - target` from a
/// uniform scan of `[0, pi)` (`phi_u` is pi-periodic in `xi`).
fn scan(solver: &RangeSolver, target: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Ok(Vec::new());
    }
    let step = PI / points as f64;
    let values = (0..points)
        .map(|i| Ok(solver.solve(i as f64 * step)?.phi - target))
        .collect::<Result<Vec<f64>>>()?;
    let mut roots = Vec::new();
    for i in 0..points {
        let (a, b) = (values[i], values[(i + 1) % points]);
        let xa = i as f64 * step;
        if a == 0.0 {
            roots.push(xa);
        } else if a * b < 0.0 {
            roots.push(xa + step * a / (a - b));
        }
    }
    Ok(roots)
}
