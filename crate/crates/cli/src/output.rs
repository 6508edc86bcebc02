//! Projections of a command's JSON report onto csv and aligned text.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_complex::Complex64;
use quatspin_core::Scalar;
use serde_json::Value;

use crate::args::Format;
use crate::error::CliError;

/// Flat records behind the csv and table formats.
#[derive(Debug, Default)]
pub struct Records {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Records {
    pub fn new(headers: &[&'static str]) -> Self {
        Records {
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 fields"))
    }

    pub fn to_table(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &mut dyn Iterator<Item = &str>| {
            let padded: Vec<String> = cells
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&mut self.headers.iter().copied());
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(&mut row.iter().map(String::as_str)));
            out.push('\n');
        }
        out
    }
}

/// What a command produced, plus whether it counts as a failure.
pub struct Rendered {
    pub json: Value,
    pub records: Records,
    /// Replaces the plain record table in `--format table`.
    pub table: Option<String>,
    pub failed: bool,
}

impl Rendered {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        Ok(match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
            Format::Csv => self.records.to_csv()?,
            Format::Table => self
                .table
                .clone()
                .unwrap_or_else(|| self.records.to_table()),
        })
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Fixed-precision float text; `-0` prints as `0`.
pub fn float_text(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

fn complex_text(z: Complex64) -> String {
    match (float_text(z.re).as_str(), float_text(z.im)) {
        (re, im) if im == "0" => re.to_string(),
        ("0", im) => format!("{im}i"),
        (re, im) if im.starts_with('-') => format!("{re}{im}i"),
        (re, im) => format!("{re}+{im}i"),
    }
}

/// Exact values print as `p/q` (with an `i` part when complex); float values
/// print at twelve decimals so reports stay byte-stable.
pub fn scalar_text<S: Scalar>(s: &S) -> String {
    if S::EXACT {
        s.to_string()
    } else {
        complex_text(s.to_complex64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_are_trimmed() {
        assert_eq!(float_text(1.5), "1.5");
        assert_eq!(float_text(-0.0), "0");
        assert_eq!(float_text(-1e-15), "0");
        assert_eq!(float_text(2.0), "2");
        assert_eq!(complex_text(Complex64::new(0.0, -2.0)), "-2i");
        assert_eq!(complex_text(Complex64::new(1.0, 0.5)), "1+0.5i");
    }

    #[test]
    fn table_aligns_columns() {
        let mut r = Records::new(&["a", "long"]);
        r.push(vec!["xyz".into(), "1".into()]);
        assert_eq!(r.to_table(), "a    long\nxyz  1\n");
        assert_eq!(r.to_csv().unwrap(), "a,long\nxyz,1\n");
    }
}
