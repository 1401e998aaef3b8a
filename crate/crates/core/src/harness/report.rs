//! CSV and plain-text emission of bound reports.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::BoundReport;
use crate::{Error, Result};

pub const COLUMNS: [&str; 9] = [
    "family_tag",
    "q_or_alpha",
    "exponent",
    "k",
    "t",
    "lhs",
    "bound",
    "slack",
    "preconds_ok",
];

pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            _ => Err(Error::Argument(format!("unknown format '{s}' (csv|table)"))),
        }
    }
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, scientific
/// notation outside `[1e-5, 1e12)`.
pub fn format_sig(x: f64) -> String {
    format_sig_digits(x, SIGNIFICANT_DIGITS)
}

pub fn format_sig_digits(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn row(r: &BoundReport) -> [String; 9] {
    [
        r.family.tag().to_string(),
        format_sig(r.q_or_alpha),
        format_sig(r.exponent),
        format_sig(r.k),
        r.t.map(|t| t.to_string()).unwrap_or_default(),
        format_sig(r.lhs),
        format_sig(r.bound),
        format_sig(r.slack),
        r.preconditions_ok.to_string(),
    ]
}

/// Renders reports as CSV (header row first) or as an aligned table.
pub fn emit_report(reports: &[BoundReport], format: Format) -> Result<String> {
    if reports.is_empty() {
        return Err(Error::Argument("no report rows to emit".into()));
    }
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(COLUMNS)?;
            for r in reports {
                w.write_record(row(r))?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
            String::from_utf8(bytes).map_err(|e| Error::Io(std::io::Error::other(e)))
        }
        Format::Table => {
            let rows: Vec<[String; 9]> = reports.iter().map(row).collect();
            let mut widths = COLUMNS.map(str::len);
            for r in &rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let mut out = String::new();
            let mut line = |cells: &[&str]| {
                let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:>w$}")).collect();
                let _ = writeln!(out, "{}", parts.join("  ").trim_end());
            };
            line(&COLUMNS);
            for r in &rows {
                let cells: Vec<&str> = r.iter().map(String::as_str).collect();
                line(&cells);
            }
            Ok(out)
        }
    }
}

pub fn write_report(reports: &[BoundReport], format: Format, path: &Path) -> Result<()> {
    let text = emit_report(reports, format)?;
    std::fs::write(path, text).map_err(|e| Error::from(e).context(format!("writing {}", path.display())))
}
