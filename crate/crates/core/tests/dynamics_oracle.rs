use std::f64::consts::TAU;

use spinorbit::catalog::Bundled;
use spinorbit::dynamics::{
    check_resonance, integrate, orbit_initial_state, orbit_residual, trajectory_deviation,
    DEFAULT_STEP,
};
use spinorbit::{solve_bifurcation, ResonantOrbit, SolverConfig};

fn orbit(name: &str, eta: f64) -> ResonantOrbit {
    let body = Bundled::All
        .load()
        .into_iter()
        .find(|b| b.name == name)
        .unwrap();
    let params = body.resonance_params(eta).unwrap();
    solve_bifurcation(&params, &SolverConfig::for_params(&params)).unwrap()
}

#[test]
fn integrated_trajectory_follows_every_orbit() {
    for body in Bundled::All.load() {
        let orbit = orbit(&body.name, 0.0);
        let period = TAU * body.q as f64;
        let tr = integrate(
            orbit_initial_state(&orbit),
            period,
            &orbit.params,
            DEFAULT_STEP,
        )
        .unwrap();
        let dev = trajectory_deviation(&tr, &orbit);
        assert!(dev <= 1e-5, "{}: deviation {dev}", body.name);
    }
}

#[test]
fn orbits_are_resonant() {
    for name in ["Moon", "Mercury"] {
        let o = orbit(name, 0.0);
        let (p, q) = (o.params.p(), o.params.q());
        assert!(check_resonance(&o, p, q, 1e-9).unwrap() <= 1e-12);
        let tr = integrate(
            orbit_initial_state(&o),
            2.0 * TAU * q as f64,
            &o.params,
            DEFAULT_STEP,
        )
        .unwrap();
        assert!(check_resonance(&tr, p, q, 1e-9).unwrap() <= 1e-5, "{name}");
    }
}

#[test]
fn perturbed_orbit_has_larger_residual() {
    let o = orbit("Mercury", 0.001);
    let base = orbit_residual(&o, 512).unwrap();
    let mut bumped = o.clone();
    bumped.u = o.u.scale(1.01);
    assert!(orbit_residual(&bumped, 512).unwrap() > base);
}

#[test]
fn trajectory_export_is_deterministic() {
    let o = orbit("Titan", 0.0);
    let run = || {
        let tr = integrate(orbit_initial_state(&o), 1.0, &o.params, DEFAULT_STEP).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        buf
    };
    assert_eq!(run(), run());
}
