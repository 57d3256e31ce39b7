use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};

/// Real 2 pi-periodic trigonometric polynomial
/// `c_0 + sum_{1 <= |k| <= N} c_k exp(i k t)` with `c_{-k} = conj(c_k)`.
///
/// Elements of the zero-average space have `c_0 = 0`; [`PeriodicFunction::mean`]
/// is kept explicit so that operators can reject inputs outside that space.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicFunction {
    /// `coeffs[0]` is the (real) mean, `coeffs[k]` is `c_k` for `k = 1..=N`.
    coeffs: Vec<Complex64>,
}

/// Coefficient list entry for export.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeCoefficient {
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

impl PeriodicFunction {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    /// Builds from the mean and the positive-frequency coefficients
    /// `c_1..c_N`.
    pub fn from_coefficients(mean: f64, positive: &[Complex64]) -> Self {
        let mut coeffs = Vec::with_capacity(positive.len() + 1);
        coeffs.push(Complex64::new(mean, 0.0));
        coeffs.extend_from_slice(positive);
        Self { coeffs }
    }

    /// Interpolates uniform samples `g(2 pi m / M)` and keeps modes up to
    /// `order`; requires `M > 2 order`.
    pub fn from_samples(samples: &[f64], order: usize) -> Result<Self> {
        Spectral::new(samples.len(), order)?.analyse(samples)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `c_k` for any integer `k` (zero beyond the truncation order).
    pub fn coefficient(&self, k: i64) -> Complex64 {
        let idx = k.unsigned_abs() as usize;
        match self.coeffs.get(idx) {
            None => Complex64::new(0.0, 0.0),
            Some(c) if k < 0 => c.conj(),
            Some(c) => *c,
        }
    }

    pub fn positive_coefficients(&self) -> &[Complex64] {
        &self.coeffs[1..]
    }

    pub fn modes(&self) -> Vec<ModeCoefficient> {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| ModeCoefficient {
                k,
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    /// Same function with the mean removed.
    pub fn zero_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = Complex64::new(0.0, 0.0);
        out
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_derivative(t, 0)
    }

    /// `d^order/dt^order` evaluated at `t` by direct summation.
    pub fn eval_derivative(&self, t: f64, order: u32) -> f64 {
        let mut acc = if order == 0 { self.mean() } else { 0.0 };
        let step = Complex64::from_polar(1.0, t);
        let mut rot = step;
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            let factor = Complex64::new(0.0, k as f64).powu(order);
            acc += 2.0 * (factor * c * rot).re;
            rot *= step;
            // re-anchor the recurrence periodically to limit drift
            if k % 64 == 0 {
                rot = Complex64::from_polar(1.0, (k + 1) as f64 * t);
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = std::iter::once(Complex64::new(0.0, 0.0))
            .chain(
                self.coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| c * Complex64::new(0.0, k as f64)),
            )
            .collect();
        Self { coeffs }
    }

    /// Values on the uniform grid of `m > 2N` points.
    pub fn samples(&self, m: usize) -> Result<Vec<f64>> {
        Ok(Spectral::new(m, self.order())?.synthesise(self))
    }

    /// Maximum of `|u|` over a uniform grid of `m` points.
    pub fn sup_norm_on(&self, m: usize) -> Result<f64> {
        Ok(self.samples(m)?.iter().fold(0.0f64, |a, v| a.max(v.abs())))
    }

    /// `sum |c_k|` over all `k`, an upper bound of the sup norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.mean().abs() + 2.0 * self.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self - other`, padding the shorter one with zeros.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().max(other.order());
        let coeffs = (0..=n as i64)
            .map(|k| self.coefficient(k) - other.coefficient(k))
            .collect();
        Self { coeffs }
    }

    /// Copy truncated or zero-padded to `order`.
    pub fn resized(&self, order: usize) -> Self {
        let coeffs = (0..=order as i64).map(|k| self.coefficient(k)).collect();
        Self { coeffs }
    }
}

/// Applies the Green operator of `L u = u'' + eta_hat u'` on zero-mean
/// functions: `u_k = g_k / (-k^2 + i eta_hat k)`.
pub fn green_apply(g: &PeriodicFunction, eta_hat: f64) -> Result<PeriodicFunction> {
    if !(eta_hat >= 0.0 && eta_hat.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "eta_hat = {eta_hat} must be nonnegative"
        )));
    }
    let scale = g.coefficient_norm().max(f64::MIN_POSITIVE);
    if g.mean().abs() > 1e-13 * scale.max(1.0) {
        return Err(Error::NonzeroMean(g.mean()));
    }
    let coeffs = std::iter::once(Complex64::new(0.0, 0.0))
        .chain(g.coeffs.iter().enumerate().skip(1).map(|(k, c)| {
            let kf = k as f64;
            c / Complex64::new(-kf * kf, eta_hat * kf)
        }))
        .collect();
    Ok(PeriodicFunction { coeffs })
}

/// Applies `L u = u'' + eta_hat u'`.
pub fn apply_linear(u: &PeriodicFunction, eta_hat: f64) -> PeriodicFunction {
    let coeffs = std::iter::once(Complex64::new(0.0, 0.0))
        .chain(u.coeffs.iter().enumerate().skip(1).map(|(k, c)| {
            let kf = k as f64;
            c * Complex64::new(-kf * kf, eta_hat * kf)
        }))
        .collect();
    PeriodicFunction { coeffs }
}

/// Cached FFT plans for a uniform grid of `M` nodes and truncation `N`.
#[derive(Clone)]
pub(crate) struct Spectral {
    m: usize,
    order: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Spectral {
    pub(crate) fn new(m: usize, order: usize) -> Result<Self> {
        if m <= 2 * order {
            return Err(Error::InvalidInput(format!(
                "{m} collocation nodes cannot resolve {order} modes (need at least {})",
                2 * order + 1
            )));
        }
        let mut planner = FftPlanner::new();
        Ok(Self {
            m,
            order,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
        })
    }

    pub(crate) fn nodes(&self) -> usize {
        self.m
    }

    pub(crate) fn node(&self, i: usize) -> f64 {
        TAU * i as f64 / self.m as f64
    }

    /// Full spectrum `c_0..c_{M/2 - 1}` of real samples.
    pub(crate) fn spectrum(&self, samples: &[f64]) -> Vec<Complex64> {
        debug_assert_eq!(samples.len(), self.m);
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let inv = 1.0 / self.m as f64;
        buf.truncate(self.m.div_ceil(2));
        buf.iter_mut().for_each(|c| *c *= inv);
        buf
    }

    pub(crate) fn analyse(&self, samples: &[f64]) -> Result<PeriodicFunction> {
        if samples.len() != self.m {
            return Err(Error::InvalidInput(format!(
                "expected {} samples, got {}",
                self.m,
                samples.len()
            )));
        }
        let mut spec = self.spectrum(samples);
        spec.truncate(self.order + 1);
        spec[0].im = 0.0;
        Ok(PeriodicFunction { coeffs: spec })
    }

    pub(crate) fn synthesise(&self, u: &PeriodicFunction) -> Vec<f64> {
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        buf[0] = Complex64::new(u.mean(), 0.0);
        for (k, c) in u.coeffs.iter().enumerate().skip(1).take(self.order) {
            buf[k] = *c;
            buf[self.m - k] = c.conj();
        }
        self.inverse.process(&mut buf);
        buf.into_iter().map(|c| c.re).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cos_t(order: usize) -> PeriodicFunction {
        let mut c = vec![Complex64::new(0.0, 0.0); order];
        c[0] = Complex64::new(0.5, 0.0);
        PeriodicFunction::from_coefficients(0.0, &c)
    }

    #[test]
    fn green_of_cos_is_minus_cos() {
        let u = green_apply(&cos_t(4), 0.0).unwrap();
        for t in [0.0, 0.4, 2.0] {
            assert!((u.eval(t) + t.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn green_of_sin2t() {
        let mut c = vec![Complex64::new(0.0, 0.0); 4];
        c[1] = Complex64::new(0.0, -0.5); // sin 2t
        let g = PeriodicFunction::from_coefficients(0.0, &c);
        let u = green_apply(&g, 0.0).unwrap();
        for t in [0.1, 1.3, 5.0] {
            assert!((u.eval(t) + (2.0 * t).sin() / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn green_with_dissipation_inverts_linear_part() {
        let g = cos_t(4);
        let u = green_apply(&g, 0.008).unwrap();
        let expected = Complex64::new(0.5, 0.0) / Complex64::new(-1.0, 0.008);
        assert!((u.coefficient(1) - expected).norm() < 1e-16);
        let back = apply_linear(&u, 0.008);
        assert!(back.sub(&g).coefficient_norm() < 1e-15);
    }

    #[test]
    fn green_rejects_nonzero_mean() {
        let g = PeriodicFunction::from_coefficients(0.3, &[Complex64::new(0.5, 0.0)]);
        assert!(matches!(green_apply(&g, 0.0), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn samples_round_trip() {
        let f = PeriodicFunction::from_coefficients(
            0.2,
            &[
                Complex64::new(0.1, -0.3),
                Complex64::new(0.0, 0.05),
                Complex64::new(-0.02, 0.01),
            ],
        );
        let s = f.samples(16).unwrap();
        for (i, v) in s.iter().enumerate() {
            let t = TAU * i as f64 / 16.0;
            assert!((v - f.eval(t)).abs() < 1e-15);
        }
        let g = PeriodicFunction::from_samples(&s, 3).unwrap();
        assert!(g.sub(&f).coefficient_norm() < 1e-15);
        assert!(PeriodicFunction::from_samples(&s, 8).is_err());
    }

    #[test]
    fn derivative_matches_eval_derivative() {
        let f = PeriodicFunction::from_coefficients(
            0.0,
            &[Complex64::new(0.1, -0.3), Complex64::new(0.2, 0.05)],
        );
        let d = f.derivative();
        for t in [0.3, 2.2] {
            assert!((d.eval(t) - f.eval_derivative(t, 1)).abs() < 1e-15);
            assert!((d.derivative().eval(t) - f.eval_derivative(t, 2)).abs() < 1e-14);
        }
    }
}
