//! C ABI over `spinorbit`.
//!
//! Every fallible function returns an [`SoStatus`]; on failure a message is
//! available from [`so_last_error`] on the same thread. Handles are opaque
//! and must be released with their `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinorbit::catalog::{load_catalog_bytes, load_catalog_path, Bundled};
use spinorbit::certification::{certify, green_norm_bound};
use spinorbit::dynamics::orbit_residual;
use spinorbit::potential::{alpha_lower_bound, fourier_coefficient};
use spinorbit::{Body, Error, ResonantOrbit, SolverConfig};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Parse = 4,
    Io = 5,
    NoConvergence = 6,
    Precondition = 7,
    NotFound = 8,
    Panic = 9,
}

/// One row of the certification table.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SoReport {
    pub p: i64,
    pub q: i64,
    pub alpha_lower: f64,
    pub range_margin: f64,
    pub nonempty_margin: f64,
    /// `INFINITY` when the bifurcation condition does not bound eta.
    pub eta_bif_max: f64,
    pub eta_green_max: f64,
    pub eta_admissible: f64,
    pub certified: bool,
}

/// Loaded, validated catalog.
pub struct SoCatalog {
    bodies: Vec<Body>,
    names: Vec<CString>,
}

/// Constructed resonant orbit.
pub struct SoOrbit {
    orbit: ResonantOrbit,
    modes: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (SoStatus, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> SoStatus {
    match err {
        Error::InvalidInput(_) | Error::ZeroFourierIndex | Error::UnsupportedResonance { .. } => {
            SoStatus::InvalidArgument
        }
        Error::EccentricityDomain(..)
        | Error::DegenerateRadius(_)
        | Error::NonFinite(_)
        | Error::NonzeroMean(_) => SoStatus::Domain,
        Error::Catalog { .. } | Error::Csv(_) | Error::Json(_) => SoStatus::Parse,
        Error::Io(_) => SoStatus::Io,
        Error::NoConvergence { .. }
        | Error::QuadratureUnresolved { .. }
        | Error::Aliasing { .. } => SoStatus::NoConvergence,
        Error::Precondition(_) | Error::Bifurcation(_) => SoStatus::Precondition,
    }
}

fn fail(err: Error) -> Failure {
    (status_of(&err), err.to_string())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SoStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            SoStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err((SoStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (SoStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    // SAFETY: non-null checked; the caller guarantees the pointer is writable.
    unsafe { p.as_mut() }.ok_or_else(|| (SoStatus::NullPointer, format!("{what} is NULL")))
}

fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    // SAFETY: non-null checked; the caller guarantees a live handle.
    unsafe { p.as_ref() }.ok_or_else(|| (SoStatus::NullPointer, format!("{what} is NULL")))
}

fn body_at(cat: &SoCatalog, index: usize) -> Result<&Body, Failure> {
    cat.bodies.get(index).ok_or_else(|| {
        (
            SoStatus::NotFound,
            format!("index {index} out of range for {} bodies", cat.bodies.len()),
        )
    })
}

fn new_catalog(bodies: Vec<Body>) -> *mut SoCatalog {
    let names = bodies
        .iter()
        .map(|b| CString::new(b.name.replace('\0', " ")).unwrap_or_default())
        .collect();
    Box::into_raw(Box::new(SoCatalog { bodies, names }))
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn so_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn so_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Loads a bundled catalog: `"moons"`, `"mercury"`, `"minor"` or `"all"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_load_bundled(
    name: *const c_char,
    out: *mut *mut SoCatalog,
) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let name = str_arg(name, "name")?;
        let which = Bundled::parse(name).ok_or_else(|| {
            (
                SoStatus::NotFound,
                format!("unknown bundled catalog '{name}'"),
            )
        })?;
        *out = new_catalog(which.load());
        Ok(())
    })
}

/// Loads a CSV or JSON catalog file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_load_path(
    path: *const c_char,
    out: *mut *mut SoCatalog,
) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let path = str_arg(path, "path")?;
        *out = new_catalog(load_catalog_path(path).map_err(fail)?);
        Ok(())
    })
}

/// Parses catalog text (CSV, or JSON when it starts with `[`).
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_parse(
    text: *const c_char,
    out: *mut *mut SoCatalog,
) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        let text = str_arg(text, "text")?;
        *out = new_catalog(load_catalog_bytes(text.as_bytes()).map_err(fail)?);
        Ok(())
    })
}

/// Number of bodies; 0 for NULL.
///
/// # Safety
/// `cat` must be NULL or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_len(cat: *const SoCatalog) -> usize {
    cat.as_ref().map_or(0, |c| c.bodies.len())
}

/// Name of body `index`, owned by the catalog; NULL when out of range.
///
/// # Safety
/// `cat` must be NULL or a live catalog handle.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_name(cat: *const SoCatalog, index: usize) -> *const c_char {
    cat.as_ref()
        .and_then(|c| c.names.get(index))
        .map_or(ptr::null(), |n| n.as_ptr())
}

/// Index of the body called `name`.
///
/// # Safety
/// `cat` must be a live catalog handle, `name` a NUL-terminated string and
/// `index` writable.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_find(
    cat: *const SoCatalog,
    name: *const c_char,
    index: *mut usize,
) -> SoStatus {
    guard(|| {
        let cat = handle(cat, "catalog")?;
        let name = str_arg(name, "name")?;
        let index = out_arg(index, "index")?;
        *index = cat
            .bodies
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| (SoStatus::NotFound, format!("unknown body '{name}'")))?;
        Ok(())
    })
}

/// # Safety
/// `cat` must be NULL or a handle from a `so_catalog_*` constructor that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn so_catalog_free(cat: *mut SoCatalog) {
    if !cat.is_null() {
        drop(Box::from_raw(cat));
    }
}

/// Evaluates the existence conditions for body `index`.
///
/// # Safety
/// `cat` must be a live catalog handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so_certify(
    cat: *const SoCatalog,
    index: usize,
    out: *mut SoReport,
) -> SoStatus {
    guard(|| {
        let cat = handle(cat, "catalog")?;
        let out = out_arg(out, "out")?;
        let r = certify(body_at(cat, index)?).map_err(fail)?;
        *out = SoReport {
            p: r.p,
            q: r.q,
            alpha_lower: r.alpha_lower,
            range_margin: r.range_margin,
            nonempty_margin: r.nonempty_margin,
            eta_bif_max: r.eta_bif_max,
            eta_green_max: r.eta_green_max,
            eta_admissible: r.eta_admissible,
            certified: r.certified,
        };
        Ok(())
    })
}

/// `alpha_j(e)` by `n_quad`-point quadrature.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_fourier_coefficient(
    e: f64,
    j: i64,
    n_quad: usize,
    out: *mut f64,
) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = fourier_coefficient(e, j, n_quad).map_err(fail)?;
        Ok(())
    })
}

/// Certified lower bound on `|alpha_j(e)|` for `j` in {2, 3}.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_alpha_lower_bound(j: i64, e: f64, out: *mut f64) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = alpha_lower_bound(j, e).map_err(fail)?;
        Ok(())
    })
}

/// Operator-norm bound of the Green operator at `eta_hat`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn so_green_norm_bound(eta_hat: f64, out: *mut f64) -> SoStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = green_norm_bound(eta_hat).map_err(fail)?;
        Ok(())
    })
}

/// Constructs the resonant orbit of body `index` at dissipation `eta` with
/// the default solver settings.
///
/// # Safety
/// `cat` must be a live catalog handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_solve(
    cat: *const SoCatalog,
    index: usize,
    eta: f64,
    out: *mut *mut SoOrbit,
) -> SoStatus {
    guard(|| {
        let cat = handle(cat, "catalog")?;
        let out = out_arg(out, "out")?;
        let params = body_at(cat, index)?.resonance_params(eta).map_err(fail)?;
        let config = SolverConfig::for_params(&params);
        let orbit = spinorbit::solve_bifurcation(&params, &config).map_err(fail)?;
        *out = Box::into_raw(Box::new(SoOrbit {
            orbit,
            modes: config.modes,
        }));
        Ok(())
    })
}

/// Phase `xi*` of the orbit; NaN for NULL.
///
/// # Safety
/// `orbit` must be NULL or a live orbit handle.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_xi_star(orbit: *const SoOrbit) -> f64 {
    orbit.as_ref().map_or(f64::NAN, |o| o.orbit.xi_star)
}

/// Rotation angle `x(s)` at mean anomaly `s`.
///
/// # Safety
/// `orbit` must be a live orbit handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_angle(orbit: *const SoOrbit, s: f64, out: *mut f64) -> SoStatus {
    guard(|| {
        let orbit = handle(orbit, "orbit")?;
        let out = out_arg(out, "out")?;
        if !s.is_finite() {
            return Err((SoStatus::InvalidArgument, format!("s = {s} is not finite")));
        }
        *out = orbit.orbit.angle(s);
        Ok(())
    })
}

/// Sup of the equation-of-motion residual over `n_samples` nodes.
///
/// # Safety
/// `orbit` must be a live orbit handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_residual(
    orbit: *const SoOrbit,
    n_samples: usize,
    out: *mut f64,
) -> SoStatus {
    guard(|| {
        let orbit = handle(orbit, "orbit")?;
        let out = out_arg(out, "out")?;
        *out = orbit_residual(&orbit.orbit, n_samples).map_err(fail)?;
        Ok(())
    })
}

/// JSON export with `n_samples + 1` points over one resonance period. The
/// string must be released with [`so_string_free`].
///
/// # Safety
/// `orbit` must be a live orbit handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_to_json(
    orbit: *const SoOrbit,
    n_samples: usize,
    out: *mut *mut c_char,
) -> SoStatus {
    guard(|| {
        let orbit = handle(orbit, "orbit")?;
        let out = out_arg(out, "out")?;
        let n = n_samples.max(1);
        let period = std::f64::consts::TAU * orbit.orbit.params.q() as f64;
        let times: Vec<f64> = (0..=n).map(|i| period * i as f64 / n as f64).collect();
        let mut export = orbit.orbit.export(&times);
        export.orbit_residual = Some(orbit_residual(&orbit.orbit, 4 * orbit.modes).map_err(fail)?);
        let text = serde_json::to_string(&export).map_err(|e| (SoStatus::Parse, e.to_string()))?;
        *out = CString::new(text)
            .map_err(|e| (SoStatus::Parse, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `orbit` must be NULL or a handle from [`so_orbit_solve`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn so_orbit_free(orbit: *mut SoOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library that has not been
/// freed.
#[no_mangle]
pub unsafe extern "C" fn so_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
