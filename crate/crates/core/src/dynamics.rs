//! Direct integration of `x'' + eta (x' - nu) + eps f_x(x, t) = 0`, used as
//! an independent check of the constructed resonant orbits.
//!
//! Angles live on the real line (no reduction modulo 2 pi), so windings are
//! visible in the trajectory.

use std::f64::consts::TAU;
use std::io::Write;

use serde::Serialize;

use crate::catalog::ResonanceParams;
use crate::error::{Error, Result};
use crate::potential::potential_fx;
use crate::solver::ResonantOrbit;

/// Default RK4 step, `2 pi / 4096`.
pub const DEFAULT_STEP: f64 = TAU / 4096.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinState {
    /// Mean anomaly.
    pub t: f64,
    /// Rotation angle.
    pub x: f64,
    /// `dx/dt`.
    pub v: f64,
}

impl SpinState {
    pub fn new(t: f64, x: f64, v: f64) -> Self {
        Self { t, x, v }
    }

    fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.v.is_finite()
    }
}

/// `(dx/dt, dv/dt)` at `state`.
pub fn rhs(state: &SpinState, params: &ResonanceParams) -> Result<(f64, f64)> {
    let forcing = if params.eps() == 0.0 {
        0.0
    } else {
        params.eps() * potential_fx(params.e(), state.x, state.t)?
    };
    Ok((state.v, -params.eta() * (state.v - params.nu()) - forcing))
}

/// Fixed-step classical RK4 trajectory.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<SpinState>,
    pub step: f64,
}

impl Trajectory {
    pub fn start(&self) -> f64 {
        self.states[0].t
    }

    pub fn end(&self) -> f64 {
        self.states[self.states.len() - 1].t
    }

    /// Writes `t,x,v` rows with a header.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for s in &self.states {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Integrates from `initial` to `t_end` with steps no longer than `step`; the
/// step is shortened uniformly so that `t_end` is hit exactly.
pub fn integrate(
    initial: SpinState,
    t_end: f64,
    params: &ResonanceParams,
    step: f64,
) -> Result<Trajectory> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step {step} must be positive")));
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite(initial.t));
    }
    let span = t_end - initial.t;
    if !(span >= 0.0 && span.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "t_end = {t_end} must not precede t0 = {}",
            initial.t
        )));
    }
    let n = ((span / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = span / n as f64;

    let mut states = Vec::with_capacity(n + 1);
    states.push(initial);
    let mut s = initial;
    for i in 1..=n {
        let (k1x, k1v) = rhs(&s, params)?;
        let mid1 = SpinState::new(s.t + 0.5 * h, s.x + 0.5 * h * k1x, s.v + 0.5 * h * k1v);
        let (k2x, k2v) = rhs(&mid1, params)?;
        let mid2 = SpinState::new(s.t + 0.5 * h, s.x + 0.5 * h * k2x, s.v + 0.5 * h * k2v);
        let (k3x, k3v) = rhs(&mid2, params)?;
        let end = SpinState::new(s.t + h, s.x + h * k3x, s.v + h * k3v);
        let (k4x, k4v) = rhs(&end, params)?;
        s = SpinState::new(
            initial.t + i as f64 * h,
            s.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            s.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
        );
        if !s.is_finite() {
            return Err(Error::NonFinite(s.t));
        }
        states.push(s);
    }
    Ok(Trajectory { states, step: h })
}

/// Something that provides the rotation angle at sampled mean anomalies.
pub trait AngleHistory {
    /// Pairs `(x(t), x(t + shift))` for every sample `t` whose shifted
    /// partner is available; `tol` is the time-matching tolerance.
    fn shifted_pairs(&self, shift: f64, tol: f64) -> Result<Vec<(f64, f64)>>;
}

impl AngleHistory for Trajectory {
    fn shifted_pairs(&self, shift: f64, tol: f64) -> Result<Vec<(f64, f64)>> {
        if self.end() - self.start() < shift * (1.0 - 1e-12) {
            return Err(Error::InvalidInput(format!(
                "trajectory spans {} but the resonance period is {shift}",
                self.end() - self.start()
            )));
        }
        let offset = (shift / self.step).round() as usize;
        let mismatch = (offset as f64 * self.step - shift).abs();
        if mismatch > tol.max(1e-9 * shift) {
            return Err(Error::InvalidInput(format!(
                "step {} does not divide the resonance period {shift}",
                self.step
            )));
        }
        Ok(self
            .states
            .iter()
            .zip(self.states.iter().skip(offset))
            .map(|(a, b)| (a.x, b.x))
            .collect())
    }
}

impl AngleHistory for ResonantOrbit {
    fn shifted_pairs(&self, shift: f64, _tol: f64) -> Result<Vec<(f64, f64)>> {
        let n = 256;
        Ok((0..n)
            .map(|i| {
                let t = shift * i as f64 / n as f64;
                (self.angle(t), self.angle(t + shift))
            })
            .collect())
    }
}

/// `sup_t |x(t + 2 pi q) - x(t) - 2 pi p|` over the available samples.
pub fn check_resonance<H: AngleHistory + ?Sized>(
    history: &H,
    p: i64,
    q: i64,
    tol: f64,
) -> Result<f64> {
    if p < 1 || q < 1 {
        return Err(Error::InvalidInput(format!(
            "p = {p}, q = {q} must be positive"
        )));
    }
    let shift = TAU * q as f64;
    let winding = TAU * p as f64;
    let pairs = history.shifted_pairs(shift, tol)?;
    if pairs.is_empty() {
        return Err(Error::InvalidInput(
            "no samples span a resonance period".into(),
        ));
    }
    Ok(pairs
        .iter()
        .fold(0.0f64, |m, (a, b)| m.max((b - a - winding).abs())))
}

/// Initial condition `(0, x(0), x'(0))` of a resonant orbit.
pub fn orbit_initial_state(orbit: &ResonantOrbit) -> SpinState {
    SpinState::new(0.0, orbit.angle(0.0), orbit.angular_velocity(0.0))
}

/// Sup over `n_samples` uniform nodes of
/// `|u'' + eta_hat (u' - nu_hat) + eps_hat f_x(xi* + p t + u(t), q t)|`.
pub fn orbit_residual(orbit: &ResonantOrbit, n_samples: usize) -> Result<f64> {
    let prm = &orbit.params;
    let (p, q) = (prm.p() as f64, prm.q() as f64);
    let du = orbit.u.derivative();
    let ddu = du.derivative();
    let mut worst = 0.0f64;
    for i in 0..n_samples.max(1) {
        let t = TAU * i as f64 / n_samples.max(1) as f64;
        let u = orbit.u.eval(t);
        let forcing = if prm.eps_hat() == 0.0 {
            0.0
        } else {
            prm.eps_hat() * potential_fx(prm.e(), orbit.xi_star + p * t + u, q * t)?
        };
        let r = ddu.eval(t) + prm.eta_hat() * (du.eval(t) - prm.nu_hat()) + forcing;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Sup distance between an integrated trajectory and the orbit's `x(t)`.
pub fn trajectory_deviation(trajectory: &Trajectory, orbit: &ResonantOrbit) -> f64 {
    trajectory
        .states
        .iter()
        .fold(0.0f64, |m, s| m.max((s.x - orbit.angle(s.t)).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(eta: f64, nu: f64) -> ResonanceParams {
        ResonanceParams::new(1, 1, 0.05, 0.0, eta, nu).unwrap()
    }

    #[test]
    fn rhs_linear_cases() {
        let s = SpinState::new(0.7, 0.3, 1.0);
        assert_eq!(rhs(&s, &free(0.0, 1.0)).unwrap(), (1.0, 0.0));
        assert_eq!(rhs(&s, &free(0.008, 1.0)).unwrap().1, 0.0);
    }

    #[test]
    fn rhs_matches_composed_formula() {
        let prm = ResonanceParams::new(1, 1, 0.0549, 8.6e-4, 0.001, 1.0183).unwrap();
        let s = SpinState::new(0.7, 0.3, 1.0);
        let (e, t, x) = (0.0549f64, 0.7f64, 0.3f64);
        // bisection for u, principal half-angle for the true anomaly
        let (mut lo, mut hi) = (t - 0.1, t + 0.1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid - e * mid.sin() > t {
                hi = mid
            } else {
                lo = mid
            }
        }
        let u = 0.5 * (lo + hi);
        let f = 2.0 * (((1.0 + e) / (1.0 - e)).sqrt() * (u / 2.0).tan()).atan();
        let expected = -0.001 * (1.0 - 1.0183)
            - 8.6e-4 * (2.0 * x - 2.0 * f).sin() / (1.0 - e * u.cos()).powi(3);
        assert!((rhs(&s, &prm).unwrap().1 - expected).abs() < 1e-16);
    }

    #[test]
    fn free_rotor_is_exact() {
        let tr = integrate(
            SpinState::new(0.0, 0.0, 1.0),
            TAU,
            &free(0.0, 1.0),
            DEFAULT_STEP,
        )
        .unwrap();
        assert!((tr.end() - TAU).abs() < 1e-14);
        for s in &tr.states {
            assert!((s.x - s.t).abs() < 1e-10);
        }
    }

    #[test]
    fn linear_damping_closed_form() {
        let (eta, nu, v0) = (0.008, 1.02, 0.9);
        let tr = integrate(
            SpinState::new(0.0, 0.0, v0),
            TAU,
            &free(eta, nu),
            DEFAULT_STEP,
        )
        .unwrap();
        for s in &tr.states {
            let exact = nu + (v0 - nu) * (-eta * s.t).exp();
            assert!((s.v - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn resonance_residual_of_exact_rotation() {
        let prm = ResonanceParams::new(3, 2, 0.2, 0.0, 0.0, 1.5).unwrap();
        let tr = integrate(
            SpinState::new(0.0, 0.4, 1.5),
            2.0 * TAU * 2.0,
            &prm,
            DEFAULT_STEP,
        )
        .unwrap();
        assert!(check_resonance(&tr, 3, 2, 1e-9).unwrap() <= 1e-10);
        let short = integrate(SpinState::new(0.0, 0.4, 1.5), TAU, &prm, DEFAULT_STEP).unwrap();
        assert!(check_resonance(&short, 3, 2, 1e-9).is_err());
    }

    #[test]
    fn trajectory_csv_has_header() {
        let tr = integrate(SpinState::new(0.0, 0.0, 1.0), 0.01, &free(0.0, 1.0), 0.005).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("t,x,v\n"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn rejects_bad_steps() {
        let s = SpinState::new(0.0, 0.0, 1.0);
        assert!(integrate(s, 1.0, &free(0.0, 1.0), 0.0).is_err());
        assert!(integrate(
            SpinState::new(0.0, f64::NAN, 1.0),
            1.0,
            &free(0.0, 1.0),
            0.1
        )
        .is_err());
    }
}
