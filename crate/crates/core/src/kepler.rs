//! Kepler equation `t = u - e sin u` for real and complex eccentricity.
//!
//! Real eccentricities `0 <= e < 1` are solved by a safeguarded Newton
//! iteration. Complex eccentricities inside the disk `|e| < b / cosh b` are
//! solved by iterating `v <- e sin(v + t)`, which is a contraction with
//! constant at most `b` on the strip `|Im v| <= b`; the solution then
//! satisfies `|u - t| <= b` and `|1 - e cos u| >= 1 - b`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Iteration cap shared by both solvers.
pub const MAX_ITERATIONS: usize = 200;

/// Default absolute residual tolerance for `|u - e sin u - t|`.
pub const DEFAULT_TOLERANCE: f64 = 1e-13;

/// `max_y y / cosh y`, the radius of holomorphy of `e -> u_e(t)`.
pub const R_STAR: f64 = 0.662_743_419_349_181_6;

/// The maximiser of `y / cosh y`.
pub const Y_STAR: f64 = 1.199_678_640_257_734;

/// Radius `b / cosh b` of the complex eccentricity disk associated with `b`.
pub fn disk_radius(b: f64) -> f64 {
    b / b.cosh()
}

/// Orbital eccentricity, possibly complex.
///
/// Physical use requires a real value in `[0, 1)`. Complex values are only
/// meaningful together with a strip half-width `b`, which fixes the disk
/// `|e| < b / cosh b` on which the solution is holomorphic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eccentricity {
    value: Complex64,
    strip: Option<f64>,
}

impl Eccentricity {
    pub fn real(e: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&e) {
            return Err(Error::EccentricityDomain(
                e,
                "real eccentricity must lie in [0, 1)".into(),
            ));
        }
        Ok(Self {
            value: Complex64::new(e, 0.0),
            strip: None,
        })
    }

    /// Complex eccentricity checked against the disk `|e| < b / cosh b`.
    pub fn complex(e: Complex64, b: f64) -> Result<Self> {
        if !(b > 0.0 && b < 1.0) {
            return Err(Error::InvalidInput(format!(
                "strip half-width b = {b} must lie in (0, 1)"
            )));
        }
        let radius = disk_radius(b);
        if e.norm() >= radius {
            return Err(Error::EccentricityDomain(
                e.norm(),
                format!("|e| must be below b / cosh b = {radius} for b = {b}"),
            ));
        }
        Ok(Self {
            value: e,
            strip: Some(b),
        })
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn strip(&self) -> Option<f64> {
        self.strip
    }

    pub fn is_real(&self) -> bool {
        self.strip.is_none()
    }
}

/// Eccentric anomaly, normalized radius and true anomaly at mean anomaly `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyTriple {
    pub u: f64,
    pub rho: f64,
    pub f: f64,
}

/// Eccentric anomaly and radius for complex eccentricity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexAnomaly {
    pub u: Complex64,
    pub rho: Complex64,
}

/// Solves the Kepler equation, dispatching on real or complex eccentricity.
pub fn eccentric_anomaly(e: Eccentricity, t: f64, tol: f64) -> Result<Complex64> {
    if e.is_real() {
        solve_real(e.value.re, t, tol).map(|u| Complex64::new(u, 0.0))
    } else {
        solve_complex(e, t, tol)
    }
}

/// Real eccentric anomaly for `0 <= e < 1`.
pub fn solve_real(e: f64, t: f64, tol: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::EccentricityDomain(
            e,
            "real eccentricity must lie in [0, 1)".into(),
        ));
    }
    check_tol(tol)?;
    if !t.is_finite() {
        return Err(Error::InvalidInput(format!(
            "mean anomaly {t} is not finite"
        )));
    }

    // u(t + 2 pi k) = u(t) + 2 pi k; solve on [-pi, pi].
    let turns = (t / TAU).round();
    let r = t - turns * TAU;
    let shift = turns * TAU;

    if e == 0.0 {
        return Ok(t);
    }

    let g = |u: f64| u - e * u.sin() - r;

    // g is increasing and |u - r| <= e.
    let (mut lo, mut hi) = (r - e, r + e);
    let mut u = r + e * r.sin();
    let mut residual = g(u);

    for _ in 0..MAX_ITERATIONS {
        if residual.abs() <= tol {
            return Ok(u + shift);
        }
        if residual > 0.0 {
            hi = hi.min(u);
        } else {
            lo = lo.max(u);
        }
        let slope = 1.0 - e * u.cos();
        let newton = u - residual / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let next_residual = g(next);
        if next == u || (hi - lo) <= f64::EPSILON * r.abs().max(1.0) {
            // Bracket exhausted at machine resolution.
            let best = if next_residual.abs() < residual.abs() {
                next
            } else {
                u
            };
            let best_res = g(best);
            if best_res.abs() <= tol {
                return Ok(best + shift);
            }
            return Err(Error::NoConvergence {
                what: "Kepler equation (real)",
                iterations: MAX_ITERATIONS,
                residual: best_res.abs(),
            });
        }
        u = next;
        residual = next_residual;
    }
    if residual.abs() <= tol {
        return Ok(u + shift);
    }
    Err(Error::NoConvergence {
        what: "Kepler equation (real)",
        iterations: MAX_ITERATIONS,
        residual: residual.abs(),
    })
}

fn solve_complex(e: Eccentricity, t: f64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    let ecc = e.value;
    let b = e.strip.expect("complex eccentricity carries a strip");
    let tc = Complex64::new(t, 0.0);

    let mut v = Complex64::new(0.0, 0.0);
    for _ in 0..MAX_ITERATIONS {
        let next = ecc * (v + tc).sin();
        let step = (next - v).norm();
        v = next;
        // |u - e sin u - t| at u = v + t equals |v - e sin(v + t)|.
        let residual = (v - ecc * (v + tc).sin()).norm();
        if residual <= tol && step.is_finite() {
            if v.norm() > b * (1.0 + 1e-12) {
                return Err(Error::EccentricityDomain(
                    ecc.norm(),
                    format!("fixed point left the strip |u - t| <= {b}"),
                ));
            }
            return Ok(v + tc);
        }
    }
    Err(Error::NoConvergence {
        what: "Kepler equation (complex)",
        iterations: MAX_ITERATIONS,
        residual: (v - ecc * (v + tc).sin()).norm(),
    })
}

/// True anomaly from the eccentric anomaly, continuous in `u` with
/// `f(0) = 0` and `f - u` 2 pi-periodic and odd.
pub fn true_anomaly(e: f64, u: f64) -> f64 {
    // f - u = 2 atan(beta sin u / (1 - beta cos u)), beta = e / (1 + sqrt(1 - e^2));
    // the denominator stays positive, so atan2 never changes branch.
    let beta = e / (1.0 + (1.0 - e * e).sqrt());
    u + 2.0 * (beta * u.sin()).atan2(1.0 - beta * u.cos())
}

/// Eccentric anomaly, radius `1 - e cos u` and unwrapped true anomaly.
pub fn anomalies(e: f64, t: f64, tol: f64) -> Result<AnomalyTriple> {
    let u = solve_real(e, t, tol)?;
    let rho = 1.0 - e * u.cos();
    if rho.abs() <= tol {
        return Err(Error::DegenerateRadius(rho.abs()));
    }
    Ok(AnomalyTriple {
        u,
        rho,
        f: true_anomaly(e, u),
    })
}

/// Eccentric anomaly and radius for complex eccentricity.
pub fn anomalies_complex(e: Eccentricity, t: f64, tol: f64) -> Result<ComplexAnomaly> {
    let u = eccentric_anomaly(e, t, tol)?;
    let rho = 1.0 - e.value * u.cos();
    if rho.norm() <= tol {
        return Err(Error::DegenerateRadius(rho.norm()));
    }
    Ok(ComplexAnomaly { u, rho })
}

/// `G_e(t) = -exp(2 i f_e(t)) / (2 rho_e(t)^3)`, valid for complex `e` in the
/// holomorphy disk, using `exp(2 i f) = ((1 + i w) / (1 - i w))^2` with
/// `w = sqrt((1 + e)/(1 - e)) tan(u / 2)`.
pub fn potential_generator(e: Eccentricity, t: f64, tol: f64) -> Result<Complex64> {
    let ComplexAnomaly { u, rho } = anomalies_complex(e, t, tol)?;
    let ecc = e.value;
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let ratio = ((one + ecc) / (one - ecc)).sqrt();
    // tan(u/2) = sin u / (1 + cos u); use the half-angle form that stays
    // bounded near u = pi through the reciprocal representation.
    let half = u * 0.5;
    let (s, c) = (half.sin(), half.cos());
    // (1 + i w)/(1 - i w) with w = ratio * s / c  ==  (c + i ratio s)/(c - i ratio s)
    let rotation = (c + i * ratio * s) / (c - i * ratio * s);
    Ok(-(rotation * rotation) / (2.0 * rho * rho * rho))
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tolerance {tol} must be positive"
        )))
    }
}

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = x - TAU * (x / TAU).round();
    if r <= -PI {
        r + TAU
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Bisection on g(u) = u - e sin u - t over [t - e, t + e].
    fn bisect_oracle(e: f64, t: f64) -> f64 {
        let g = |u: f64| u - e * u.sin() - t;
        let (mut lo, mut hi) = (t - e - 1e-3, t + e + 1e-3);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn circular_orbit_is_identity() {
        assert_eq!(solve_real(0.0, 1.3, 1e-13).unwrap(), 1.3);
    }

    #[test]
    fn aphelion_is_exact_for_every_e() {
        for e in [0.1, 0.5, 0.9] {
            let u = solve_real(e, PI, 1e-13).unwrap();
            assert!((u - PI).abs() < 1e-15, "e = {e}: {u}");
        }
    }

    #[test]
    fn moon_eccentricity_matches_bisection_oracle() {
        let u = solve_real(0.0549, 1.0, 1e-14).unwrap();
        let oracle = bisect_oracle(0.0549, 1.0);
        assert!((u - oracle).abs() < 1e-14, "{u} vs {oracle}");
        // Independent fixed-point route.
        let mut v = 1.0;
        for _ in 0..100 {
            v = 1.0 + 0.0549 * f64::sin(v);
        }
        assert!((u - v).abs() < 1e-14);
    }

    #[test]
    fn triples_at_trivial_points() {
        let a = anomalies(0.0, 2.0, 1e-13).unwrap();
        assert_eq!((a.u, a.rho, a.f), (2.0, 1.0, 2.0));
        let p = anomalies(0.2056, 0.0, 1e-13).unwrap();
        assert_eq!(p.u, 0.0);
        assert!((p.rho - 0.7944).abs() < 1e-15);
        assert_eq!(p.f, 0.0);
    }

    #[test]
    fn mercury_quarter_orbit_against_oracle() {
        let e = 0.2056;
        let t = PI / 2.0;
        let a = anomalies(e, t, 1e-14).unwrap();
        let u = bisect_oracle(e, t);
        let rho = 1.0 - e * u.cos();
        // principal-branch half-angle formula is valid for |u| < pi
        let f = 2.0 * (((1.0 + e) / (1.0 - e)).sqrt() * (u / 2.0).tan()).atan();
        assert!((a.u - u).abs() < 1e-14);
        assert!((a.rho - rho).abs() < 1e-14);
        assert!((a.f - f).abs() < 1e-13);
    }

    #[test]
    fn true_anomaly_is_continuous_across_aphelion() {
        let e = 0.3;
        let before = anomalies(e, PI - 1e-9, 1e-13).unwrap().f;
        let after = anomalies(e, PI + 1e-9, 1e-13).unwrap().f;
        assert!((after - before).abs() < 1e-6);
        let full = anomalies(e, TAU, 1e-13).unwrap().f;
        assert!((full - TAU).abs() < 1e-12);
    }

    #[test]
    fn rejects_unbound_orbits() {
        assert!(matches!(
            solve_real(1.0, 0.3, 1e-13),
            Err(Error::EccentricityDomain(..))
        ));
        assert!(Eccentricity::real(-0.1).is_err());
        assert!(Eccentricity::complex(Complex64::new(0.5, 0.0), 0.462678).is_err());
    }

    #[test]
    fn complex_solver_agrees_with_real_solver_on_real_axis() {
        let b = 0.768368;
        let e = Eccentricity::complex(Complex64::new(0.2056, 0.0), b).unwrap();
        for k in 0..16 {
            let t = k as f64 * 0.4 - 3.0;
            let uc = eccentric_anomaly(e, t, 1e-14).unwrap();
            let ur = solve_real(0.2056, t, 1e-14).unwrap();
            assert!((uc.re - ur).abs() < 1e-13 && uc.im.abs() < 1e-15);
        }
    }

    #[test]
    fn generator_matches_real_formula() {
        let e = 0.2056;
        let ec = Eccentricity::complex(Complex64::new(e, 0.0), 0.768368).unwrap();
        for k in 0..12 {
            let t = k as f64 * 0.55;
            let a = anomalies(e, t, 1e-14).unwrap();
            let expected = -Complex64::from_polar(1.0, 2.0 * a.f) / (2.0 * a.rho.powi(3));
            let g = potential_generator(ec, t, 1e-14).unwrap();
            assert!((g - expected).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn holomorphy_radius_constants() {
        let y: f64 = Y_STAR;
        // derivative of y / cosh y vanishes at y_star: 1 = y tanh y
        assert!((y * y.tanh() - 1.0).abs() < 1e-12);
        assert!((disk_radius(Y_STAR) - R_STAR).abs() < 1e-15);
    }
}
