//! Column datasets and their CSV form.

use std::io::Write as _;
use std::path::Path;

use crate::error::{CliError, Result};

/// Probabilities are range-checked and clamped on output; plain values are not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Plain,
    Probability,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: Kind,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub columns: Vec<Column>,
}

/// Slack allowed outside `[0, 1]` before a probability is an error.
pub const RANGE_SLACK: f64 = 1e-9;

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn plain(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.push(name.into(), Kind::Plain, values);
        self
    }

    pub fn prob(mut self, name: impl Into<String>, values: Vec<f64>) -> Self {
        self.push(name.into(), Kind::Probability, values);
        self
    }

    fn push(&mut self, name: String, kind: Kind, values: Vec<f64>) {
        if let Some(first) = self.columns.first() {
            assert_eq!(
                first.values.len(),
                values.len(),
                "column {name} has the wrong length"
            );
        }
        self.columns.push(Column { name, kind, values });
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    /// Header comment, column names, rows, and a trailing comment if any
    /// probability had to be clamped.
    pub fn to_csv(&self, header: &str, precision: usize) -> Result<String> {
        let mut clamped = 0usize;
        let mut rows: Vec<Vec<String>> = vec![Vec::with_capacity(self.columns.len()); self.rows()];
        for col in &self.columns {
            for (i, &v) in col.values.iter().enumerate() {
                let v = match col.kind {
                    Kind::Plain => v,
                    Kind::Probability => {
                        if !(-RANGE_SLACK..=1.0 + RANGE_SLACK).contains(&v) {
                            return Err(CliError::OutOfRange {
                                column: col.name.clone(),
                                row: i,
                                value: v,
                            });
                        }
                        let c = v.clamp(0.0, 1.0);
                        if c != v {
                            clamped += 1;
                        }
                        c
                    }
                };
                rows[i].push(format_sig(v, precision));
            }
        }

        let mut out = Vec::new();
        writeln!(out, "# {header}").expect("write to Vec");
        {
            let mut w = csv::Writer::from_writer(&mut out);
            let names: Vec<&str> = self.columns.iter().map(|c| c.name.as_str()).collect();
            w.write_record(&names).map_err(csv_error)?;
            for row in &rows {
                w.write_record(row).map_err(csv_error)?;
            }
            w.flush().map_err(|e| csv_error(e.into()))?;
        }
        if clamped > 0 {
            writeln!(
                out,
                "# clamped {clamped} probabilities into [0, 1] (each within {RANGE_SLACK:e})"
            )
            .expect("write to Vec");
        }
        Ok(String::from_utf8(out).expect("ascii output"))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::usage(format!("csv: {e}"))
}

/// `x` to `digits` significant digits: fixed notation for moderate
/// exponents, scientific otherwise; trailing zeros dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
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
    // the exponent after rounding, so 9.99..96 -> 10 is handled
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        return stdout
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            });
    };
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(text.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.1, 12), "0.1");
        assert_eq!(format_sig(1.0 / 3.0, 4), "0.3333");
        assert_eq!(format_sig(2.0 / 3.0, 3), "0.667");
        assert_eq!(format_sig(123456.0, 3), "1.23e5");
        assert_eq!(format_sig(9.9996, 4), "10");
        assert_eq!(format_sig(-2.5e-7, 2), "-2.5e-7");
        assert_eq!(format_sig(f64::INFINITY, 5), "inf");
        assert_eq!(format_sig(0.735758882342885, 12), "0.735758882343");
    }

    #[test]
    fn csv_layout_and_clamping() {
        let d = Dataset::new()
            .plain("t", vec![0.0, 1.0])
            .prob("p", vec![1.0 + 5e-10, 0.25]);
        let text = d.to_csv("zeno-lab v0 test x=1", 6).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# zeno-lab v0 test x=1");
        assert_eq!(lines[1], "t,p");
        assert_eq!(lines[2], "0,1");
        assert_eq!(lines[3], "1,0.25");
        assert!(lines[4].starts_with("# clamped 1 "));
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn out_of_range_is_numeric_error() {
        let d = Dataset::new().prob("p", vec![1.1]);
        let err = d.to_csv("h", 6).unwrap_err();
        assert!(matches!(err, CliError::OutOfRange { .. }));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        std::fs::write(&path, "old").unwrap();
        write_output("new\n", Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "new\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
