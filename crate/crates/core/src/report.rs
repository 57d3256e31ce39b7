//! Renderers for certification tables.
//!
//! The CSV and markdown column order is: body, lower bound on `|alpha_q|`,
//! range margin, non-empty margin, bifurcation ceiling on `eta`, certified.

use std::io::Write;

use crate::certification::CertificationReport;
use crate::error::Result;

/// Output format shared by the CLI commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Md,
}

pub const TABLE_COLUMNS: [&str; 6] = [
    "body",
    "alpha_lower",
    "range_margin",
    "nonempty_margin",
    "eta_bif_max",
    "certified",
];

fn plain(v: f64) -> String {
    if v.is_finite() {
        v.to_string()
    } else {
        "unbounded".to_string()
    }
}

fn short(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.4e}")
    } else {
        "unbounded".to_string()
    }
}

pub fn write_reports<W: Write>(
    reports: &[CertificationReport],
    format: Format,
    mut out: W,
) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, reports)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(TABLE_COLUMNS)?;
            for r in reports {
                w.write_record([
                    r.body_name.clone(),
                    plain(r.alpha_lower),
                    plain(r.range_margin),
                    plain(r.nonempty_margin),
                    plain(r.eta_bif_max),
                    r.certified.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Md => {
            writeln!(
                out,
                "| Body | lower bound on abs(alpha_q) | range margin | non-empty margin | eta ceiling (bifurcation) | certified |"
            )?;
            writeln!(out, "|---|---|---|---|---|---|")?;
            for r in reports {
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.body_name,
                    short(r.alpha_lower),
                    short(r.range_margin),
                    short(r.nonempty_margin),
                    short(r.eta_bif_max),
                    if r.certified { "yes" } else { "no" }
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Bundled;
    use crate::certification::certify;

    #[test]
    fn csv_has_fixed_columns() {
        let reports: Vec<_> = Bundled::Mercury
            .load()
            .iter()
            .map(|b| certify(b).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_reports(&reports, Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TABLE_COLUMNS.join(","));
        assert!(lines.next().unwrap().starts_with("Mercury,"));
    }

    #[test]
    fn markdown_has_one_row_per_body() {
        let reports: Vec<_> = Bundled::Moons
            .load()
            .iter()
            .map(|b| certify(b).unwrap())
            .collect();
        let mut buf = Vec::new();
        write_reports(&reports, Format::Md, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 20);
    }
}
