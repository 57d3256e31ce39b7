//! Existence conditions for 1:1 and 3:2 resonances and the admissible
//! dissipation ceiling.
//!
//! For a body with eccentricity `e`, oblateness `eps` and drift `nu` the
//! resonance exists when
//!
//! 1. `q eta <= (pi/5)(10/pi^2 - 1)` (Green operator norm at most 5/4),
//! 2. `eps < (1-e)^3/5` for 1:1, `eps < (1-e)^3/20` for 3:2 (range
//!    equation is a contraction),
//! 3. `eps < 2(1-e)^6 |alpha_2|/5` for 1:1, `eps < (1-e)^6 |alpha_3|/10`
//!    for 3:2 (the bifurcation function covers a nonempty interval),
//! 4. `eta` below the bifurcation ceiling [`eta_max`].
//!
//! `|alpha_q|` is always replaced by its certified lower bound, so every
//! margin is pessimistic.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::catalog::Body;
use crate::error::{Error, Result};
use crate::potential::alpha_lower_bound;

/// The two resonances covered by the existence argument.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resonance {
    OneOne,
    ThreeTwo,
}

impl Resonance {
    pub fn from_pq(p: i64, q: i64) -> Result<Self> {
        match (p, q) {
            (1, 1) => Ok(Self::OneOne),
            (3, 2) => Ok(Self::ThreeTwo),
            _ => Err(Error::UnsupportedResonance { p, q }),
        }
    }

    pub fn p(self) -> i64 {
        match self {
            Self::OneOne => 1,
            Self::ThreeTwo => 3,
        }
    }

    pub fn q(self) -> i64 {
        match self {
            Self::OneOne => 1,
            Self::ThreeTwo => 2,
        }
    }

    /// Index `j = 2p/q` of the Fourier coefficient driving the resonance.
    pub fn alpha_index(self) -> i64 {
        match self {
            Self::OneOne => 2,
            Self::ThreeTwo => 3,
        }
    }
}

/// `(pi/5)(10/pi^2 - 1)`, the largest `eta_hat` with Green bound 5/4.
pub fn green_eta_hat_cap() -> f64 {
    PI / 5.0 * (10.0 / (PI * PI) - 1.0)
}

/// Largest `eta` allowed by the Green condition for resonance denominator `q`.
pub fn green_eta_cap(q: i64) -> f64 {
    green_eta_hat_cap() / q as f64
}

/// `M_1 = 5 / (1 - e)^6`, bound on the first-order correction of the
/// bifurcation function.
pub fn m1(e: f64) -> f64 {
    5.0 / (1.0 - e).powi(6)
}

/// Operator-norm bound of the Green operator `(d^2/dt^2 + eta_hat d/dt)^{-1}`
/// on zero-mean continuous functions:
/// `(1 + eta_hat (pi/2) / (1 - eta_hat pi/2)) pi^2/8`.
pub fn green_norm_bound(eta_hat: f64) -> Result<f64> {
    if eta_hat.is_nan() || eta_hat < 0.0 {
        return Err(Error::InvalidInput(format!(
            "eta_hat = {eta_hat} must be nonnegative"
        )));
    }
    if eta_hat >= 2.0 / PI {
        return Err(Error::InvalidInput(format!(
            "eta_hat = {eta_hat} must be below 2/pi"
        )));
    }
    let half = eta_hat * PI / 2.0;
    Ok((1.0 + half / (1.0 - half)) * PI * PI / 8.0)
}

/// RHS minus LHS of the range condition.
pub fn range_margin(e: f64, eps: f64, p: i64, q: i64) -> Result<f64> {
    let rhs = match Resonance::from_pq(p, q)? {
        Resonance::OneOne => (1.0 - e).powi(3) / 5.0,
        Resonance::ThreeTwo => (1.0 - e).powi(3) / 20.0,
    };
    Ok(rhs - eps)
}

/// RHS minus LHS of the non-empty condition, with the certified lower bound
/// in place of `|alpha_q|`.
pub fn nonempty_margin(e: f64, eps: f64, p: i64, q: i64) -> Result<f64> {
    let res = Resonance::from_pq(p, q)?;
    let alpha = alpha_lower_bound(res.alpha_index(), e)?;
    let rhs = match res {
        Resonance::OneOne => 2.0 * (1.0 - e).powi(6) / 5.0 * alpha,
        Resonance::ThreeTwo => (1.0 - e).powi(6) / 10.0 * alpha,
    };
    Ok(rhs - eps)
}

/// Ceiling on `eta` from the bifurcation condition.
///
/// Returns `+inf` when `q nu = p` (the bifurcation target vanishes for every
/// `eta`) and `0` when the bracket is negative or `eps = 0`.
pub fn eta_max(e: f64, eps: f64, nu: f64, p: i64, q: i64) -> Result<f64> {
    let res = Resonance::from_pq(p, q)?;
    let alpha = alpha_lower_bound(res.alpha_index(), e)?;
    let qf = q as f64;
    let detuning = (qf * nu - p as f64).abs();
    // From |eta_hat nu_hat / eps_hat| <= a_pq = 2|alpha_q| - q^2 eps M_1.
    let bracket = 2.0 * alpha - qf * qf * eps * m1(e);
    if eps == 0.0 || bracket <= 0.0 {
        return Ok(0.0);
    }
    if detuning == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(qf * eps / detuning * bracket)
}

/// Half-width `a_pq = 2 alpha_lower - eps_hat M_1` of the interval covered by
/// the bifurcation function.
pub fn a_pq(e: f64, eps: f64, p: i64, q: i64) -> Result<f64> {
    let res = Resonance::from_pq(p, q)?;
    let qf = q as f64;
    Ok(2.0 * alpha_lower_bound(res.alpha_index(), e)? - qf * qf * eps * m1(e))
}

fn serialize_unbounded<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

/// One row of the certification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub body_name: String,
    pub p: i64,
    pub q: i64,
    /// Certified lower bound on `|alpha_q(e)|`.
    pub alpha_lower: f64,
    pub range_margin: f64,
    pub nonempty_margin: f64,
    /// Bifurcation ceiling on `eta`; `null` in JSON when unbounded.
    #[serde(serialize_with = "serialize_unbounded")]
    pub eta_bif_max: f64,
    pub eta_green_max: f64,
    pub eta_admissible: f64,
    pub certified: bool,
}

impl CertificationReport {
    /// First failing condition, if any.
    pub fn failure(&self) -> Option<&'static str> {
        if self.alpha_lower <= 0.0 {
            Some("alpha lower bound not positive")
        } else if self.range_margin <= 0.0 {
            Some("range condition")
        } else if self.nonempty_margin <= 0.0 {
            Some("non-empty condition")
        } else if self.eta_admissible <= 0.0 {
            Some("bifurcation condition")
        } else {
            None
        }
    }

    /// Which condition limits a requested `eta`, if it exceeds the ceiling.
    pub fn eta_violation(&self, eta: f64) -> Option<&'static str> {
        if eta <= self.eta_admissible {
            None
        } else if eta > self.eta_bif_max {
            Some("bifurcation condition")
        } else {
            Some("Green operator condition")
        }
    }
}

/// Evaluates all conditions for one body.
pub fn certify(body: &Body) -> Result<CertificationReport> {
    body.validate()?;
    let res = Resonance::from_pq(body.p, body.q)?;
    let (e, p, q) = (body.e, body.p, body.q);
    let eps = body.oblateness()?;
    let nu = body.nu()?;

    let alpha_lower = alpha_lower_bound(res.alpha_index(), e)?;
    let range = range_margin(e, eps, p, q)?;
    let nonempty = nonempty_margin(e, eps, p, q)?;
    let eta_bif_max = eta_max(e, eps, nu, p, q)?;
    let eta_green_max = green_eta_cap(q);
    let eta_admissible = eta_bif_max.min(eta_green_max);
    let certified = alpha_lower > 0.0 && range > 0.0 && nonempty > 0.0 && eta_admissible > 0.0;

    Ok(CertificationReport {
        body_name: body.name.clone(),
        p,
        q,
        alpha_lower,
        range_margin: range,
        nonempty_margin: nonempty,
        eta_bif_max,
        eta_green_max,
        eta_admissible,
        certified,
    })
}

/// Certifies bodies in parallel; output order follows input order.
pub fn certify_all(bodies: &[Body]) -> Vec<Result<CertificationReport>> {
    bodies.par_iter().map(certify).collect()
}
