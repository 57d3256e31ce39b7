use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;
use spinorbit::kepler::{
    anomalies, anomalies_complex, disk_radius, solve_real, true_anomaly, Eccentricity,
    DEFAULT_TOLERANCE,
};
use spinorbit::potential::{ALPHA2_STRIP, ALPHA3_STRIP};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn kepler_residual(e in 0.0f64..=0.6, t in -20.0f64..20.0) {
        let u = solve_real(e, t, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((u - e * u.sin() - t).abs() <= 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parity(e in 0.0f64..0.9, t in -PI..PI) {
        let a = anomalies(e, t, DEFAULT_TOLERANCE).unwrap();
        let b = anomalies(e, -t, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((a.u + b.u).abs() <= 1e-13);
        prop_assert!((a.rho - b.rho).abs() <= 1e-14);
        prop_assert!((a.f + b.f).abs() <= 1e-12);
    }

    #[test]
    fn periodicity(e in 0.0f64..0.9, t in -PI..PI, k in -5i32..=5) {
        let u = solve_real(e, t, DEFAULT_TOLERANCE).unwrap();
        let shifted = solve_real(e, t + TAU * k as f64, DEFAULT_TOLERANCE).unwrap();
        prop_assert!((shifted - u - TAU * k as f64).abs() <= 1e-11);
    }

    #[test]
    fn true_anomaly_is_continuous_and_monotone(e in 0.0f64..0.95, u in -3.0f64..3.0) {
        let h = 1e-3;
        let (f0, f1) = (true_anomaly(e, u), true_anomaly(e, u + h));
        prop_assert!(f1 > f0);
        prop_assert!(f1 - f0 < 0.1);
    }

    #[test]
    fn complex_domain_bounds(
        which in 0usize..2,
        radius_frac in 0.0f64..0.999,
        arg in -PI..PI,
    ) {
        let b = [ALPHA2_STRIP, ALPHA3_STRIP][which];
        let z = Complex64::from_polar(radius_frac * disk_radius(b), arg);
        let e = Eccentricity::complex(z, b).unwrap();
        for i in 0..64 {
            let t = TAU * i as f64 / 64.0 - PI;
            let a = anomalies_complex(e, t, DEFAULT_TOLERANCE).unwrap();
            prop_assert!((a.u - t).norm() <= b, "|u - t| = {} at t = {t}", (a.u - t).norm());
            prop_assert!(a.rho.norm() >= 1.0 - b);
        }
    }
}

#[test]
fn complex_solver_matches_real_solver_on_the_axis() {
    for e in [0.01, 0.1, 0.3] {
        let z = Eccentricity::complex(Complex64::new(e, 0.0), ALPHA3_STRIP).unwrap();
        for i in 0..32 {
            let t = TAU * i as f64 / 32.0;
            let c = anomalies_complex(z, t, DEFAULT_TOLERANCE).unwrap();
            let r = anomalies(e, t, DEFAULT_TOLERANCE).unwrap();
            assert!((c.u.re - r.u).abs() < 1e-12 && c.u.im.abs() < 1e-14);
            assert!((c.rho.re - r.rho).abs() < 1e-12);
        }
    }
}

#[test]
fn outside_disk_is_rejected() {
    let z = Complex64::new(0.0, disk_radius(ALPHA2_STRIP) * 1.01);
    assert!(Eccentricity::complex(z, ALPHA2_STRIP).is_err());
    assert!(solve_real(1.0, 0.3, DEFAULT_TOLERANCE).is_err());
    assert!(solve_real(-0.1, 0.3, DEFAULT_TOLERANCE).is_err());
}
