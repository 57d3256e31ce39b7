//! `spinorbit` command-line frontend.
//!
//! Exit codes: `0` success (all selected bodies certified), `1` a body is not
//! certified or an orbit request is refused, `2` usage, IO or parse errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::catalog::{load_catalog_path, Body, Bundled};
use crate::certification::{certify, certify_all};
use crate::dynamics::orbit_residual;
use crate::error::{Error, Result};
use crate::potential::{alpha_series, fourier_coefficient, remainder_bound, RemainderParams};
use crate::report::{write_reports, Format};
use crate::solver::{solve_bifurcation, SolverConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_CERTIFIED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "spinorbit",
    version,
    about = "Certify and construct spin-orbit resonances"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the existence conditions for every selected body.
    Certify,
    /// Tabulate Fourier coefficients alpha_j(e) of the potential.
    Fourier {
        /// Orbital eccentricity.
        #[arg(long = "e", value_name = "E")]
        e: f64,
        /// Largest index j.
        #[arg(long = "jmax", default_value_t = 4)]
        j_max: i64,
    },
    /// Construct the resonant orbit of one body and export it as JSON.
    Orbit {
        /// Number of samples of x(t) over one resonance period.
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Catalog file (CSV or JSON) or `bundled:{moons,mercury,minor,all}`.
    #[arg(
        long,
        global = true,
        env = "RESONANCE_CATALOG",
        default_value = "bundled:all"
    )]
    pub catalog: String,

    /// Restrict to these bodies (repeatable or comma separated).
    #[arg(long = "body", global = true, value_delimiter = ',')]
    pub bodies: Vec<String>,

    /// Dissipation parameter eta.
    #[arg(long, global = true)]
    pub eta: Option<f64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Quadrature nodes for alpha_j.
    #[arg(long = "nquad", global = true, default_value_t = 2048)]
    pub quadrature_n: usize,

    /// Fourier modes of the periodic correction (default 64 for q = 1, 128 otherwise).
    #[arg(long = "modes", global = true)]
    pub fourier_n: Option<usize>,

    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_fixed_point: f64,

    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_bifurcation: f64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if let Some(eta) = self.eta {
            if !(eta >= 0.0 && eta.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "--eta {eta} must be nonnegative"
                )));
            }
        }
        if self.quadrature_n == 0 || self.fourier_n == Some(0) {
            return Err(Error::InvalidInput(
                "numeric settings must be positive".into(),
            ));
        }
        if !(self.tol_fixed_point > 0.0 && self.tol_bifurcation > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn load_bodies(&self) -> Result<Vec<Body>> {
        let all = match self.catalog.strip_prefix("bundled:") {
            Some(name) => Bundled::parse(name)
                .ok_or_else(|| Error::InvalidInput(format!("unknown bundled catalog '{name}'")))?
                .load(),
            None => load_catalog_path(&self.catalog)?,
        };
        if self.bodies.is_empty() {
            return Ok(all);
        }
        for name in &self.bodies {
            if !all.iter().any(|b| &b.name == name) {
                return Err(Error::InvalidInput(format!("unknown body '{name}'")));
            }
        }
        Ok(all
            .into_iter()
            .filter(|b| self.bodies.contains(&b.name))
            .collect())
    }

    fn solver_config(&self, body: &Body) -> SolverConfig {
        SolverConfig {
            modes: self.fourier_n.unwrap_or(if body.q == 1 { 64 } else { 128 }),
            tol_fixed_point: self.tol_fixed_point,
            tol_bifurcation: self.tol_bifurcation,
            ..SolverConfig::default()
        }
    }

    fn open_output<'a>(&self, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
        Ok(match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(stdout),
        })
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_OK
            };
            let _ = if err.use_stderr() {
                write!(stderr, "{}", err.render())
            } else {
                write!(stdout, "{}", err.render())
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            EXIT_ERROR
        }
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    cli.config.validate()?;
    match &cli.command {
        Command::Certify => cmd_certify(&cli.config, stdout, stderr),
        Command::Fourier { e, j_max } => cmd_fourier(&cli.config, *e, *j_max, stdout),
        Command::Orbit { samples } => cmd_orbit(&cli.config, *samples, stdout, stderr),
    }
}

pub fn cmd_certify(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let bodies = cfg.load_bodies()?;
    if bodies.is_empty() {
        return Err(Error::InvalidInput("no bodies selected".into()));
    }
    let reports = certify_all(&bodies)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut out = cfg.open_output(stdout)?;
    write_reports(&reports, cfg.format, &mut out)?;
    out.flush()?;

    let mut code = EXIT_OK;
    for r in &reports {
        if let Some(why) = r.failure() {
            writeln!(stderr, "{}: not certified ({why})", r.body_name)?;
            code = EXIT_NOT_CERTIFIED;
        } else if let Some(why) = cfg.eta.and_then(|eta| r.eta_violation(eta)) {
            writeln!(
                stderr,
                "{}: eta = {} exceeds the admissible {} ({why})",
                r.body_name,
                cfg.eta.unwrap_or_default(),
                r.eta_admissible
            )?;
            code = EXIT_NOT_CERTIFIED;
        }
    }
    Ok(code)
}

#[derive(Debug, Serialize)]
struct FourierRow {
    j: i64,
    quadrature: f64,
    series: Option<f64>,
    remainder_bound: Option<f64>,
    within_bound: Option<bool>,
}

pub fn cmd_fourier(cfg: &RunConfig, e: f64, j_max: i64, stdout: &mut dyn Write) -> Result<i32> {
    if !(0.0..1.0).contains(&e) {
        return Err(Error::EccentricityDomain(e, "must lie in [0, 1)".into()));
    }
    if j_max < 1 {
        return Err(Error::InvalidInput(format!(
            "--jmax {j_max} must be at least 1"
        )));
    }
    let mut rows = Vec::new();
    for j in 1..=j_max {
        let quadrature = fourier_coefficient(e, j, cfg.quadrature_n)?;
        let (series, bound) = match RemainderParams::canonical(j, e) {
            Ok(params) => (Some(alpha_series(j, e)?), Some(remainder_bound(params)?)),
            Err(_) => (None, None),
        };
        let within_bound = series.zip(bound).map(|(s, r)| (quadrature - s).abs() <= r);
        rows.push(FourierRow {
            j,
            quadrature,
            series,
            remainder_bound: bound,
            within_bound,
        });
    }

    let mut out = cfg.open_output(stdout)?;
    let opt = |v: Option<f64>| {
        v.map(|x| x.to_string())
            .unwrap_or_else(|| "unavailable".into())
    };
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, &rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "j,quadrature,series,remainder_bound,within_bound")?;
            for r in &rows {
                let within = r
                    .within_bound
                    .map(|b| b.to_string())
                    .unwrap_or_else(|| "unavailable".into());
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.j,
                    r.quadrature,
                    opt(r.series),
                    opt(r.remainder_bound),
                    within
                )?;
            }
        }
        Format::Md => {
            writeln!(
                out,
                "| j | alpha_j (quadrature) | Taylor polynomial | remainder bound | within bound |"
            )?;
            writeln!(out, "|---|---|---|---|---|")?;
            for r in &rows {
                let within = r
                    .within_bound
                    .map(|b| if b { "yes" } else { "no" })
                    .unwrap_or("unavailable");
                writeln!(
                    out,
                    "| {} | {:.12e} | {} | {} | {} |",
                    r.j,
                    r.quadrature,
                    r.series
                        .map(|v| format!("{v:.12e}"))
                        .unwrap_or_else(|| "unavailable".into()),
                    r.remainder_bound
                        .map(|v| format!("{v:.3e}"))
                        .unwrap_or_else(|| "unavailable".into()),
                    within
                )?;
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

pub fn cmd_orbit(
    cfg: &RunConfig,
    samples: usize,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    if cfg.bodies.len() != 1 {
        return Err(Error::InvalidInput("orbit needs exactly one --body".into()));
    }
    let bodies = cfg.load_bodies()?;
    let body = &bodies[0];
    let report = certify(body)?;
    let eta = cfg.eta.unwrap_or(0.0);
    if let Some(why) = report.failure() {
        writeln!(stderr, "{}: not certified: {why} fails", body.name)?;
        return Ok(EXIT_NOT_CERTIFIED);
    }
    if let Some(why) = report.eta_violation(eta) {
        writeln!(
            stderr,
            "{}: eta = {eta} exceeds the admissible {} ({why} fails)",
            body.name, report.eta_admissible
        )?;
        return Ok(EXIT_NOT_CERTIFIED);
    }

    let params = body.resonance_params(eta)?;
    let solver = cfg.solver_config(body);
    let orbit = solve_bifurcation(&params, &solver)?;
    let residual = orbit_residual(&orbit, 4 * solver.modes)?;

    let period = std::f64::consts::TAU * body.q as f64;
    let n = samples.max(1);
    let times: Vec<f64> = (0..=n).map(|i| period * i as f64 / n as f64).collect();
    let mut export = orbit.export(&times);
    export.orbit_residual = Some(residual);

    let mut out = cfg.open_output(stdout)?;
    serde_json::to_writer_pretty(&mut out, &export)?;
    writeln!(out)?;
    out.flush()?;
    Ok(EXIT_OK)
}
