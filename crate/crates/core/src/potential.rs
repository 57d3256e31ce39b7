//! Newtonian potential `f(x, t) = -cos(2x - 2 f_e(t)) / (2 rho_e(t)^3)`, its
//! Fourier coefficients `alpha_j(e)` and certified lower bounds on
//! `|alpha_2|` and `|alpha_3|`.
//!
//! The coefficients are defined by `f(x, t) = sum_{j != 0} alpha_j cos(2x - j t)`
//! and are computed by two independent quadratures:
//!
//! - [`fourier_coefficient`]: a real integrand in the eccentric anomaly `u`,
//!   periodic trapezoid rule;
//! - [`fourier_coefficient_complex`]: the Fourier transform in `t` of
//!   `G_e(t) = -exp(2 i f_e(t)) / (2 rho_e(t)^3)`.
//!
//! Taylor polynomials of `alpha_2` (order 4) and `alpha_3` (order 21) are
//! stored as exact rationals; [`remainder_bound`] bounds the truncation
//! error through Cauchy estimates on the complex disk `|e| < b / cosh b`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kepler::{self, disk_radius, Eccentricity};
use crate::numeric::{uniform_nodes, CompensatedSum};

/// Default number of quadrature nodes.
pub const DEFAULT_QUADRATURE_NODES: usize = 2048;

/// Largest allowed gap between the `n` and `n / 2` node quadratures.
pub const QUADRATURE_CONSISTENCY: f64 = 1e-10;

/// Strip half-width used for the `alpha_2` remainder.
pub const ALPHA2_STRIP: f64 = 0.462678;
/// Strip half-width used for the `alpha_3` remainder.
pub const ALPHA3_STRIP: f64 = 0.768368;

/// `d/dx f(x, t) = sin(2x - 2 f_e(t)) / rho_e(t)^3`.
pub fn potential_fx(e: f64, x: f64, t: f64) -> Result<f64> {
    let a = kepler::anomalies(e, t, kepler::DEFAULT_TOLERANCE)?;
    Ok(fx_from(a.rho, a.f, x))
}

/// `d^2/dx^2 f(x, t) = 2 cos(2x - 2 f_e(t)) / rho_e(t)^3`.
pub fn potential_fxx(e: f64, x: f64, t: f64) -> Result<f64> {
    let a = kepler::anomalies(e, t, kepler::DEFAULT_TOLERANCE)?;
    Ok(2.0 * (2.0 * x - 2.0 * a.f).cos() / a.rho.powi(3))
}

/// Upper bound `1 / (1 - e)^3` on `sup |f_x|` over the torus.
pub fn fx_sup_bound(e: f64) -> f64 {
    (1.0 - e).powi(-3)
}

/// Upper bound `2 / (1 - e)^3` on `sup |f_xx|` over the torus.
pub fn fxx_sup_bound(e: f64) -> f64 {
    2.0 * (1.0 - e).powi(-3)
}

#[inline]
pub(crate) fn fx_from(rho: f64, f: f64, x: f64) -> f64 {
    (2.0 * x - 2.0 * f).sin() / (rho * rho * rho)
}

fn check_real_e(e: f64) -> Result<()> {
    if (0.0..1.0).contains(&e) {
        Ok(())
    } else {
        Err(Error::EccentricityDomain(
            e,
            "real eccentricity must lie in [0, 1)".into(),
        ))
    }
}

fn check_nodes(n: usize) -> Result<()> {
    if n >= 64 && n.is_multiple_of(2) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "quadrature nodes {n} must be even and at least 64"
        )))
    }
}

/// Integrand of the eccentric-anomaly representation of `alpha_j`, without
/// the `-1/(4 pi)` prefactor.
fn gricia_integrand(e: f64, j: i64, u: f64) -> f64 {
    let k = ((1.0 + e) / (1.0 - e)).sqrt();
    let (sh, ch) = (0.5 * u).sin_cos();
    let rho = 1.0 - e * u.cos();
    let phase = j as f64 * (u - e * u.sin());
    let (sj, cj) = phase.sin_cos();

    let num_w = k * sh;
    let bracket = if num_w.abs() <= ch.abs() {
        let w = num_w / ch;
        let w2 = w * w;
        ((w2 * w2 - 6.0 * w2 + 1.0) * cj - 4.0 * w * (w2 - 1.0) * sj) / ((w2 + 1.0) * (w2 + 1.0))
    } else {
        // Divide through by w^4 with s = 1 / w; finite at u = pi.
        let s = ch / num_w;
        let s2 = s * s;
        ((1.0 - 6.0 * s2 + s2 * s2) * cj - 4.0 * s * (1.0 - s2) * sj) / ((1.0 + s2) * (1.0 + s2))
    };
    bracket / (rho * rho)
}

/// `alpha_j(e)` by the `n_quad`-point periodic trapezoid rule in the
/// eccentric anomaly. Also checks that the `n_quad / 2` rule agrees to
/// [`QUADRATURE_CONSISTENCY`].
pub fn fourier_coefficient(e: f64, j: i64, n_quad: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::ZeroFourierIndex);
    }
    check_real_e(e)?;
    check_nodes(n_quad)?;

    let mut all = CompensatedSum::default();
    let mut even = CompensatedSum::default();
    for (m, u) in uniform_nodes(n_quad).enumerate() {
        let v = gricia_integrand(e, j, u);
        all.add(v);
        if m % 2 == 0 {
            even.add(v);
        }
    }
    // -(1/4pi) * (2pi/n) * sum
    let fine = -all.value() / (2.0 * n_quad as f64);
    let coarse = -even.value() / n_quad as f64;
    let difference = (fine - coarse).abs();
    if difference > QUADRATURE_CONSISTENCY {
        return Err(Error::QuadratureUnresolved {
            nodes: n_quad,
            difference,
        });
    }
    Ok(fine)
}

/// `alpha_j(e)` as the `j`-th Fourier coefficient of `G_e(t)`, sampled at
/// `n_quad` mean anomalies. The imaginary part vanishes up to rounding.
pub fn fourier_coefficient_complex(e: f64, j: i64, n_quad: usize) -> Result<Complex64> {
    if j == 0 {
        return Err(Error::ZeroFourierIndex);
    }
    check_real_e(e)?;
    check_nodes(n_quad)?;
    let mut re = CompensatedSum::default();
    let mut im = CompensatedSum::default();
    for t in uniform_nodes(n_quad) {
        let a = kepler::anomalies(e, t, kepler::DEFAULT_TOLERANCE)?;
        let g = -Complex64::from_polar(1.0, 2.0 * a.f - j as f64 * t) / (2.0 * a.rho.powi(3));
        re.add(g.re);
        im.add(g.im);
    }
    Ok(Complex64::new(re.value(), im.value()) / n_quad as f64)
}

/// Bound on `sup_t |G_e(t)|` valid for `|e| < b / cosh b`, evaluated with
/// the supplied `|1 - e|`.
pub fn generator_sup_bound(one_minus_e_abs: f64, b: f64) -> f64 {
    let inner = one_minus_e_abs * (1.0 + b.cosh()) + 1.0 - b;
    2.0 / (1.0 - b).powi(5) * inner * inner
}

/// Truncated Taylor expansion of `alpha_j` in powers of `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaSeries {
    pub j: i64,
    pub order: usize,
    /// `(numerator, denominator)` of the coefficient of `e^k`, `k = 0..=order`.
    pub coefficients: &'static [(i64, i64)],
}

const ALPHA2_COEFFICIENTS: [(i64, i64); 5] = [(-1, 2), (0, 1), (5, 4), (0, 1), (-13, 32)];

const ALPHA3_COEFFICIENTS: [(i64, i64); 22] = [
    (0, 1),
    (-7, 4),
    (0, 1),
    (123, 32),
    (0, 1),
    (-489, 256),
    (0, 1),
    (1763, 4096),
    (0, 1),
    (-13527, 327680),
    (0, 1),
    (180369, 13107200),
    (0, 1),
    (5986093, 734003200),
    (0, 1),
    (24606987, 3355443200),
    (0, 1),
    (33790034193, 5261334937600),
    (0, 1),
    (1193558821627, 210453397504000),
    (0, 1),
    (467145991400853, 92599494901760000),
];

impl AlphaSeries {
    pub fn for_index(j: i64) -> Result<Self> {
        match j {
            2 => Ok(Self {
                j,
                order: 4,
                coefficients: &ALPHA2_COEFFICIENTS,
            }),
            3 => Ok(Self {
                j,
                order: 21,
                coefficients: &ALPHA3_COEFFICIENTS,
            }),
            _ => Err(Error::InvalidInput(format!(
                "Taylor series is only tabulated for j = 2 and j = 3, got j = {j}"
            ))),
        }
    }

    /// Canonical strip half-width `b` paired with this series.
    pub fn strip(&self) -> f64 {
        if self.j == 2 {
            ALPHA2_STRIP
        } else {
            ALPHA3_STRIP
        }
    }

    /// Exact rational value of the polynomial at the binary value of `e`.
    pub fn evaluate_exact(&self, e: f64) -> Result<BigRational> {
        let x = BigRational::from_float(e)
            .ok_or_else(|| Error::InvalidInput(format!("eccentricity {e} is not finite")))?;
        let mut acc = BigRational::zero();
        for &(num, den) in self.coefficients.iter().rev() {
            acc = acc * &x + BigRational::new(BigInt::from(num), BigInt::from(den));
        }
        Ok(acc)
    }

    /// Polynomial value rounded once to `f64`.
    pub fn evaluate(&self, e: f64) -> Result<f64> {
        let exact = self.evaluate_exact(e)?;
        exact
            .to_f64()
            .ok_or_else(|| Error::InvalidInput("series value not representable".into()))
    }
}

/// Taylor polynomial of `alpha_j` for `j` in `{2, 3}`.
pub fn alpha_series(j: i64, e: f64) -> Result<f64> {
    if e.is_nan() || e < 0.0 {
        return Err(Error::EccentricityDomain(
            e,
            "series requires e >= 0".into(),
        ));
    }
    AlphaSeries::for_index(j)?.evaluate(e)
}

/// Parameters of the Cauchy remainder estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderParams {
    pub b: f64,
    pub h: usize,
    pub e: f64,
}

impl RemainderParams {
    pub fn new(b: f64, h: usize, e: f64) -> Result<Self> {
        let p = Self { b, h, e };
        p.validate()?;
        Ok(p)
    }

    /// Canonical `(h, b)` for `alpha_j`.
    pub fn canonical(j: i64, e: f64) -> Result<Self> {
        let series = AlphaSeries::for_index(j)?;
        Self::new(series.strip(), series.order, e)
    }

    fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(Error::InvalidInput(format!(
                "b = {} must lie in (0, 1)",
                self.b
            )));
        }
        let radius = disk_radius(self.b);
        if !(self.e >= 0.0 && self.e < radius) {
            return Err(Error::EccentricityDomain(
                self.e,
                format!("remainder estimate needs 0 <= e < b / cosh b = {radius}"),
            ));
        }
        Ok(())
    }
}

/// `R^(h)(e; b)`, an upper bound on `|alpha_j(e) - sum_{k <= h} alpha_j^(k) e^k|`.
pub fn remainder_bound(p: RemainderParams) -> Result<f64> {
    p.validate()?;
    let radius = disk_radius(p.b);
    let inner = (1.0 + radius - p.e) * (1.0 + p.b.cosh()) + 1.0 - p.b;
    let prefactor = 2.0 / (1.0 - p.b).powi(5) * inner * inner;
    let ratio = p.e / (radius - p.e);
    Ok(prefactor * ratio.powi(p.h as i32 + 1))
}

/// `|series| - remainder` with the canonical `(h, b)` of `alpha_j`; a
/// non-positive value means no lower bound is certified.
pub fn alpha_lower_bound(j: i64, e: f64) -> Result<f64> {
    let params = RemainderParams::canonical(j, e)?;
    let series = alpha_series(j, e)?;
    Ok(series.abs() - remainder_bound(params)?)
}

/// Convenience wrapper for the complex-eccentricity generator bound.
pub fn generator_sup_bound_at(e: Eccentricity, b: f64) -> f64 {
    generator_sup_bound((Complex64::new(1.0, 0.0) - e.value()).norm(), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_orbit_has_only_alpha2() {
        let a2 = fourier_coefficient(0.0, 2, 2048).unwrap();
        assert!((a2 + 0.5).abs() < 1e-15);
        for j in [-3, -2, -1, 1, 3, 4, 5] {
            assert!(
                fourier_coefficient(0.0, j, 2048).unwrap().abs() < 1e-12,
                "j = {j}"
            );
        }
    }

    #[test]
    fn zero_index_is_rejected() {
        assert!(matches!(
            fourier_coefficient(0.1, 0, 2048),
            Err(Error::ZeroFourierIndex)
        ));
        assert!(matches!(
            fourier_coefficient_complex(0.1, 0, 2048),
            Err(Error::ZeroFourierIndex)
        ));
    }

    #[test]
    fn too_few_nodes_are_flagged() {
        assert!(matches!(
            fourier_coefficient(0.1, 2, 32),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            fourier_coefficient(0.1, 2, 65),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            fourier_coefficient(0.9, 3, 64),
            Err(Error::QuadratureUnresolved { .. })
        ));
    }

    #[test]
    fn series_values() {
        assert_eq!(alpha_series(2, 0.0).unwrap(), -0.5);
        assert_eq!(alpha_series(3, 0.0).unwrap(), 0.0);
        // -1/2 + 5/4 * 0.01 - 13/32 * 1e-4 computed in exact rationals
        let exact = -0.5 + 0.0125 - 0.000040625;
        assert!((alpha_series(2, 0.1).unwrap() - exact).abs() < 1e-16);
        assert!(alpha_series(4, 0.1).is_err());
        assert!(alpha_series(2, -0.1).is_err());
    }

    #[test]
    fn series_storage_matches_tabulated_orders() {
        let s2 = AlphaSeries::for_index(2).unwrap();
        let s3 = AlphaSeries::for_index(3).unwrap();
        assert_eq!(s2.coefficients.len(), s2.order + 1);
        assert_eq!(s3.coefficients.len(), s3.order + 1);
        assert!(s3.coefficients.iter().step_by(2).all(|&(n, _)| n == 0));
        assert_eq!(s3.coefficients.iter().filter(|c| c.0 != 0).count(), 11);
    }

    #[test]
    fn quadrature_matches_series_at_e_01() {
        let q = fourier_coefficient(0.1, 2, 2048).unwrap();
        let s = alpha_series(2, 0.1).unwrap();
        let r = remainder_bound(RemainderParams::new(ALPHA2_STRIP, 4, 0.1).unwrap()).unwrap();
        assert!((q - s).abs() <= r);
        assert!((q + 0.48754).abs() < 1e-5);
    }

    #[test]
    fn remainder_is_zero_at_origin_and_increasing() {
        assert_eq!(
            remainder_bound(RemainderParams::new(0.5, 7, 0.0).unwrap()).unwrap(),
            0.0
        );
        let r1 = remainder_bound(RemainderParams::new(ALPHA2_STRIP, 4, 0.01).unwrap()).unwrap();
        let r2 = remainder_bound(RemainderParams::new(ALPHA2_STRIP, 4, 0.02).unwrap()).unwrap();
        assert!(r2 > r1 && r1 > 0.0);
        assert!(RemainderParams::new(ALPHA2_STRIP, 4, 0.42).is_err());
    }

    #[test]
    fn remainder_regression_mercury_alpha3() {
        // Direct formula evaluation at Mercury's eccentricity.
        let r = remainder_bound(RemainderParams::new(ALPHA3_STRIP, 21, 0.2056).unwrap()).unwrap();
        let b: f64 = ALPHA3_STRIP;
        let es = b / b.cosh();
        let inner = (1.0 + es - 0.2056) * (1.0 + b.cosh()) + 1.0 - b;
        let expected = 2.0 / (1.0 - b).powi(5) * inner * inner * (0.2056 / (es - 0.2056)).powi(22);
        assert!((r - expected).abs() <= 1e-13 * expected);
        assert!(r > 0.0 && r.is_finite());
        let q = fourier_coefficient(0.2056, 3, 2048).unwrap();
        assert!((q - alpha_series(3, 0.2056).unwrap()).abs() <= r);
    }

    #[test]
    fn lower_bound_trivial_points() {
        assert_eq!(alpha_lower_bound(2, 0.0).unwrap(), 0.5);
        assert_eq!(alpha_lower_bound(3, 0.0).unwrap(), 0.0);
        let moon = alpha_lower_bound(2, 0.0549).unwrap();
        assert!(moon > 0.44 && moon < 0.47);
        assert!(alpha_lower_bound(2, 0.45).is_err());
    }

    #[test]
    fn potential_trivial_points() {
        let pi = std::f64::consts::PI;
        assert!((potential_fx(0.0, pi / 4.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(potential_fx(0.0, 0.8, 0.8).unwrap(), 0.0);
        assert_eq!(potential_fxx(0.0, 0.8, 0.8).unwrap(), 2.0);
        assert!(potential_fxx(0.0, 0.8 + pi / 4.0, 0.8).unwrap().abs() < 1e-15);
    }

    #[test]
    fn potential_fx_against_composed_formula() {
        // Independent path: bisection for u, principal half-angle for f.
        let (e, x, t) = (0.0549, 0.3, 0.7);
        let g = |u: f64| u - e * u.sin() - t;
        let (mut lo, mut hi) = (t - 0.1, t + 0.1);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        let u = 0.5 * (lo + hi);
        let f = 2.0 * (((1.0 + e) / (1.0 - e)).sqrt() * (u / 2.0).tan()).atan();
        let rho = 1.0 - e * u.cos();
        let expected = (2.0 * x - 2.0 * f).sin() / rho.powi(3);
        assert!((potential_fx(e, x, t).unwrap() - expected).abs() < 1e-14);
    }
}
