//! Physical parameters of resonant bodies and the model parameters derived
//! from them.
//!
//! Catalogs are UTF-8 CSV with columns `name,primary,a_km,b_km,c_km,e,p,q[,K]`
//! (`#` starts a comment line) or a JSON array of objects with the same field
//! names. Three catalogs are bundled: the eighteen synchronous moons,
//! Mercury, and five minor bodies.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MOONS_CSV: &str = include_str!("../data/moons.csv");
pub const MERCURY_CSV: &str = include_str!("../data/mercury.csv");
pub const MINOR_BODIES_CSV: &str = include_str!("../data/minor_bodies.csv");

/// CSV header written by [`write_csv`].
pub const CSV_HEADER: [&str; 9] = [
    "name", "primary", "a_km", "b_km", "c_km", "e", "p", "q", "K",
];

/// One satellite or planet in spin-orbit resonance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Body {
    pub name: String,
    /// Hosting planet or star.
    pub primary: String,
    /// Maximal equatorial radius.
    pub a_km: f64,
    /// Minimal equatorial radius.
    pub b_km: f64,
    /// Polar radius; informational only.
    pub c_km: f64,
    pub e: f64,
    pub p: i64,
    pub q: i64,
    /// Rigidity constant (`eta = K * Omega_e`); informational only.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl Body {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::InvalidInput(format!("{}: {m}", self.name)));
        if self.name.trim().is_empty() {
            return Err(Error::InvalidInput("body name is empty".into()));
        }
        if !(self.b_km > 0.0 && self.b_km.is_finite() && self.a_km.is_finite()) {
            return fail(format!("radii must be positive, got b = {}", self.b_km));
        }
        if self.a_km < self.b_km {
            return fail(format!("a = {} smaller than b = {}", self.a_km, self.b_km));
        }
        if !(self.c_km > 0.0 && self.c_km.is_finite()) {
            return fail(format!("polar radius must be positive, got {}", self.c_km));
        }
        if !(0.0..1.0).contains(&self.e) {
            return fail(format!("eccentricity {} outside [0, 1)", self.e));
        }
        if self.p < 1 || self.q < 1 {
            return fail(format!("p = {}, q = {} must be positive", self.p, self.q));
        }
        if gcd(self.p, self.q) != 1 {
            return fail(format!("p = {} and q = {} are not coprime", self.p, self.q));
        }
        if let Some(k) = self.k {
            if !(k >= 0.0 && k.is_finite()) {
                return fail(format!("rigidity constant K = {k} must be nonnegative"));
            }
        }
        Ok(())
    }

    pub fn oblateness(&self) -> Result<f64> {
        oblateness(self.a_km, self.b_km)
    }

    pub fn nu(&self) -> Result<f64> {
        nu_of_e(self.e)
    }

    /// Model parameters at dissipation `eta`.
    pub fn resonance_params(&self, eta: f64) -> Result<ResonanceParams> {
        ResonanceParams::new(self.p, self.q, self.e, self.oblateness()?, eta, self.nu()?)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// `eps = (3/2)(a^2 - b^2)/(a^2 + b^2)`, the equatorial oblateness of a
/// homogeneous ellipsoid.
pub fn oblateness(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidInput(format!(
            "radii must be positive, got a = {a}, b = {b}"
        )));
    }
    if a < b {
        return Err(Error::InvalidInput(format!("a = {a} smaller than b = {b}")));
    }
    Ok(1.5 * (a - b) * (a + b) / (a * a + b * b))
}

/// `Omega_e = (1 + 3e^2 + 3/8 e^4) / (1 - e^2)^(9/2)`.
pub fn omega_of_e(e: f64) -> Result<f64> {
    check_e(e)?;
    let e2 = e * e;
    Ok((1.0 + 3.0 * e2 + 0.375 * e2 * e2) / (1.0 - e2).powf(4.5))
}

/// `N_e = (1 + 15/2 e^2 + 45/8 e^4 + 5/16 e^6) / (1 - e^2)^6`.
pub fn n_of_e(e: f64) -> Result<f64> {
    check_e(e)?;
    let e2 = e * e;
    Ok((1.0 + 7.5 * e2 + 5.625 * e2 * e2 + 0.3125 * e2 * e2 * e2) / (1.0 - e2).powi(6))
}

/// `nu_e = N_e / Omega_e`.
pub fn nu_of_e(e: f64) -> Result<f64> {
    check_e(e)?;
    let e2 = e * e;
    let num = 1.0 + 7.5 * e2 + 5.625 * e2 * e2 + 0.3125 * e2 * e2 * e2;
    let den = 1.0 + 3.0 * e2 + 0.375 * e2 * e2;
    // (1 - e^2)^(9/2) / (1 - e^2)^6 = (1 - e^2)^(-3/2)
    Ok(num / den / (1.0 - e2).powf(1.5))
}

fn check_e(e: f64) -> Result<()> {
    if (0.0..1.0).contains(&e) {
        Ok(())
    } else {
        Err(Error::EccentricityDomain(e, "must lie in [0, 1)".into()))
    }
}

/// `(p, q, e, eps, eta, nu)` and the rescaled `eta_hat = q eta`,
/// `nu_hat = q nu - p`, `eps_hat = q^2 eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResonanceParams {
    p: i64,
    q: i64,
    e: f64,
    eps: f64,
    eta: f64,
    nu: f64,
    eta_hat: f64,
    nu_hat: f64,
    eps_hat: f64,
}

impl ResonanceParams {
    pub fn new(p: i64, q: i64, e: f64, eps: f64, eta: f64, nu: f64) -> Result<Self> {
        if p < 1 || q < 1 {
            return Err(Error::InvalidInput(format!(
                "p = {p}, q = {q} must be positive"
            )));
        }
        check_e(e)?;
        for (name, v) in [("eps", eps), ("eta", eta)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "{name} = {v} must be finite and nonnegative"
                )));
            }
        }
        if !nu.is_finite() {
            return Err(Error::InvalidInput(format!("nu = {nu} is not finite")));
        }
        let qf = q as f64;
        Ok(Self {
            p,
            q,
            e,
            eps,
            eta,
            nu,
            eta_hat: qf * eta,
            nu_hat: qf * nu - p as f64,
            eps_hat: qf * qf * eps,
        })
    }

    pub fn p(&self) -> i64 {
        self.p
    }
    pub fn q(&self) -> i64 {
        self.q
    }
    pub fn e(&self) -> f64 {
        self.e
    }
    pub fn eps(&self) -> f64 {
        self.eps
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn nu(&self) -> f64 {
        self.nu
    }
    pub fn eta_hat(&self) -> f64 {
        self.eta_hat
    }
    pub fn nu_hat(&self) -> f64 {
        self.nu_hat
    }
    pub fn eps_hat(&self) -> f64 {
        self.eps_hat
    }

    /// Copy with a different dissipation.
    pub fn with_eta(&self, eta: f64) -> Result<Self> {
        Self::new(self.p, self.q, self.e, self.eps, eta, self.nu)
    }

    /// Right-hand side `eta_hat nu_hat / eps_hat` of the bifurcation equation.
    pub fn bifurcation_target(&self) -> f64 {
        if self.eta_hat == 0.0 || self.nu_hat == 0.0 {
            0.0
        } else {
            self.eta_hat * self.nu_hat / self.eps_hat
        }
    }
}

/// Input format of a catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogFormat {
    Csv,
    Json,
}

impl CatalogFormat {
    /// JSON if the first non-blank byte opens an array, CSV otherwise.
    pub fn sniff(bytes: &[u8]) -> Self {
        match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
            Some(b'[') => CatalogFormat::Json,
            _ => CatalogFormat::Csv,
        }
    }
}

/// Reads and validates a catalog, detecting the format from its content.
pub fn load_catalog<R: Read>(mut source: R) -> Result<Vec<Body>> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    load_catalog_bytes(&bytes)
}

pub fn load_catalog_bytes(bytes: &[u8]) -> Result<Vec<Body>> {
    let bodies = match CatalogFormat::sniff(bytes) {
        CatalogFormat::Json => parse_json(bytes)?,
        CatalogFormat::Csv => parse_csv(bytes)?,
    };
    check_unique(&bodies)?;
    Ok(bodies.into_iter().map(|(_, b)| b).collect())
}

pub fn load_catalog_path(path: impl AsRef<Path>) -> Result<Vec<Body>> {
    let bytes = std::fs::read(path)?;
    load_catalog_bytes(&bytes)
}

fn parse_csv(bytes: &[u8]) -> Result<Vec<(usize, Body)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = reader.headers()?.clone();
    for required in &CSV_HEADER[..8] {
        if !headers.iter().any(|h| h == *required) {
            return Err(Error::Catalog {
                line: 1,
                message: format!("missing column '{required}'"),
            });
        }
    }
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let body: Body = record
            .deserialize(Some(&headers))
            .map_err(|e| Error::Catalog {
                line,
                message: e.to_string(),
            })?;
        body.validate().map_err(|e| Error::Catalog {
            line,
            message: e.to_string(),
        })?;
        out.push((line, body));
    }
    Ok(out)
}

fn parse_json(bytes: &[u8]) -> Result<Vec<(usize, Body)>> {
    let bodies: Vec<Body> = serde_json::from_slice(bytes)?;
    bodies
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            b.validate().map_err(|e| Error::Catalog {
                line: i + 1,
                message: e.to_string(),
            })?;
            Ok((i + 1, b))
        })
        .collect()
}

fn check_unique(bodies: &[(usize, Body)]) -> Result<()> {
    let mut seen = HashSet::new();
    for (line, b) in bodies {
        if !seen.insert(b.name.as_str()) {
            return Err(Error::Catalog {
                line: *line,
                message: format!("duplicate body name '{}'", b.name),
            });
        }
    }
    Ok(())
}

/// Writes bodies as CSV with the full header (empty `K` when absent).
pub fn write_csv<W: Write>(bodies: &[Body], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for b in bodies {
        w.write_record([
            b.name.clone(),
            b.primary.clone(),
            b.a_km.to_string(),
            b.b_km.to_string(),
            b.c_km.to_string(),
            b.e.to_string(),
            b.p.to_string(),
            b.q.to_string(),
            b.k.map(|k| k.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(bodies: &[Body], writer: W) -> Result<()> {
    serde_json::to_writer_pretty(writer, bodies)?;
    Ok(())
}

/// Canonical text of a CSV catalog: comment and blank lines dropped, fields
/// trimmed.
pub fn normalize_csv(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// The catalogs shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bundled {
    Moons,
    Mercury,
    MinorBodies,
    /// Moons followed by Mercury.
    All,
}

impl Bundled {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "moons" => Some(Self::Moons),
            "mercury" => Some(Self::Mercury),
            "minor" | "minor-bodies" | "minor_bodies" => Some(Self::MinorBodies),
            "all" => Some(Self::All),
            _ => None,
        }
    }

    pub fn load(self) -> Vec<Body> {
        let parse = |s: &str| load_catalog_bytes(s.as_bytes()).expect("bundled catalog is valid");
        match self {
            Self::Moons => parse(MOONS_CSV),
            Self::Mercury => parse(MERCURY_CSV),
            Self::MinorBodies => parse(MINOR_BODIES_CSV),
            Self::All => {
                let mut v = parse(MOONS_CSV);
                v.extend(parse(MERCURY_CSV));
                v
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oblateness_examples() {
        assert_eq!(oblateness(1.0, 1.0).unwrap(), 0.0);
        assert!((oblateness(3f64.sqrt(), 1.0).unwrap() - 0.75).abs() < 1e-15);
        assert!(oblateness(1.0, 2.0).is_err());
        assert!(oblateness(0.0, 0.0).is_err());
    }

    #[test]
    fn nu_examples() {
        assert_eq!(nu_of_e(0.0).unwrap(), 1.0);
        // nu = 1 + 6 e^2 + O(e^4)
        let e = 1e-3;
        assert!(((nu_of_e(e).unwrap() - 1.0) / 6e-6 - 1.0).abs() < 1e-5);
        assert!(((nu_of_e(e).unwrap()) / (1.0 + 6e-6) - 1.0).abs() < 1e-8);
        assert!(nu_of_e(1.0).is_err());
        let e = 0.2056;
        let direct = n_of_e(e).unwrap() / omega_of_e(e).unwrap();
        assert!((nu_of_e(e).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn nu_is_monotone() {
        let mut prev = nu_of_e(0.0).unwrap();
        for i in 1..=900 {
            let v = nu_of_e(i as f64 * 1e-3).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn bundled_catalogs() {
        let moons = Bundled::Moons.load();
        assert_eq!(moons.len(), 18);
        assert!(moons.iter().all(|b| (b.p, b.q) == (1, 1)));
        let mercury = Bundled::Mercury.load();
        assert_eq!((mercury[0].p, mercury[0].q), (3, 2));
        let minor: Vec<String> = Bundled::MinorBodies
            .load()
            .into_iter()
            .map(|b| b.name)
            .collect();
        assert_eq!(
            minor,
            ["Phobos", "Deimos", "Amalthea", "Janus", "Epimetheus"]
        );
        assert_eq!(Bundled::All.load().len(), 19);
    }

    #[test]
    fn csv_round_trip_for_bundled_files() {
        for text in [MOONS_CSV, MERCURY_CSV, MINOR_BODIES_CSV] {
            let bodies = load_catalog_bytes(text.as_bytes()).unwrap();
            let mut out = Vec::new();
            write_csv(&bodies, &mut out).unwrap();
            assert_eq!(String::from_utf8(out).unwrap(), normalize_csv(text));
        }
    }

    #[test]
    fn json_mirror_loads() {
        let moons = Bundled::Moons.load();
        let mut buf = Vec::new();
        write_json(&moons, &mut buf).unwrap();
        assert_eq!(load_catalog_bytes(&buf).unwrap(), moons);
    }

    #[test]
    fn row_precise_diagnostics() {
        let text = "# c\nname,primary,a_km,b_km,c_km,e,p,q\nA,X,2,1,1,0.1,1,1\nB,X,1,2,1,0.1,1,1\n";
        match load_catalog_bytes(text.as_bytes()) {
            Err(Error::Catalog { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let dup = "name,primary,a_km,b_km,c_km,e,p,q\nA,X,2,1,1,0.1,1,1\nA,X,2,1,1,0.1,1,1\n";
        assert!(matches!(
            load_catalog_bytes(dup.as_bytes()),
            Err(Error::Catalog { line: 3, .. })
        ));
        let bad_pq = "name,primary,a_km,b_km,c_km,e,p,q\nA,X,2,1,1,0.1,2,2\n";
        assert!(load_catalog_bytes(bad_pq.as_bytes()).is_err());
        let bad_e = "name,primary,a_km,b_km,c_km,e,p,q\nA,X,2,1,1,1.0,1,1\n";
        assert!(load_catalog_bytes(bad_e.as_bytes()).is_err());
        let missing = "name,primary,a_km,b_km,e,p,q\nA,X,2,1,0.1,1,1\n";
        assert!(matches!(
            load_catalog_bytes(missing.as_bytes()),
            Err(Error::Catalog { line: 1, .. })
        ));
        assert!(load_catalog_bytes(b"[{\"name\": 3}]").is_err());
    }

    #[test]
    fn derived_parameters() {
        let p = ResonanceParams::new(3, 2, 0.2056, 1e-4, 0.001, 1.2559).unwrap();
        assert_eq!(p.eta_hat(), 0.002);
        assert!((p.nu_hat() - (2.0 * 1.2559 - 3.0)).abs() < 1e-15);
        assert_eq!(p.eps_hat(), 4e-4);
        assert!(ResonanceParams::new(1, 1, 0.1, -1.0, 0.0, 1.0).is_err());
    }
}
