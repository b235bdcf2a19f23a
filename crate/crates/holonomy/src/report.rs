//! Result rows and their serialization. CSV columns are fixed:
//! `scenario,method,phase_rad,trace_re,trace_im,visibility,max_residual,steps,walltime_s`
//! with floats printed like C's `%.17g`, which round-trips f64 exactly.

use std::io::Write;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str =
    "scenario,method,phase_rad,trace_re,trace_im,visibility,max_residual,steps,walltime_s";

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario: String,
    pub method: String,
    pub phase_rad: f64,
    pub trace_re: f64,
    pub trace_im: f64,
    pub visibility: f64,
    pub max_residual: f64,
    pub steps: usize,
    pub walltime_s: f64,
}

/// Print like C's `%.17g`: 17 significant digits, scientific notation when the
/// decimal exponent is < −4 or ≥ 17, trailing zeros stripped.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    const P: i32 = 17;
    // %e with P−1 fraction digits gives the decimal exponent and mantissa
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("e-format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..P).contains(&exp) {
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        format!("{mantissa}e{exp}")
    } else {
        let frac_digits = (P - 1 - exp).max(0) as usize;
        let fixed = format!("{:.*}", frac_digits, x);
        if fixed.contains('.') {
            fixed.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            fixed
        }
    }
}

impl ReportRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.method,
            fmt_g17(self.phase_rad),
            fmt_g17(self.trace_re),
            fmt_g17(self.trace_im),
            fmt_g17(self.visibility),
            fmt_g17(self.max_residual),
            self.steps,
            fmt_g17(self.walltime_s),
        )
    }

    pub fn json_line(&self) -> String {
        serde_json::json!({
            "scenario": self.scenario,
            "method": self.method,
            "phase_rad": self.phase_rad,
            "trace_re": self.trace_re,
            "trace_im": self.trace_im,
            "visibility": self.visibility,
            "max_residual": self.max_residual,
            "steps": self.steps,
            "walltime_s": self.walltime_s,
        })
        .to_string()
    }

    /// Parse a CSV data line produced by [`ReportRow::csv_line`].
    pub fn from_csv_line(line: &str) -> Result<ReportRow> {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 9 {
            return Err(Error::Config(format!(
                "CSV row has {} fields, expected 9",
                parts.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            match s {
                "nan" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                _ => s
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad float `{s}`: {e}"))),
            }
        };
        Ok(ReportRow {
            scenario: parts[0].to_string(),
            method: parts[1].to_string(),
            phase_rad: parse(parts[2])?,
            trace_re: parse(parts[3])?,
            trace_im: parse(parts[4])?,
            visibility: parse(parts[5])?,
            max_residual: parse(parts[6])?,
            steps: parts[7]
                .parse()
                .map_err(|e| Error::Config(format!("bad steps `{}`: {e}", parts[7])))?,
            walltime_s: parse(parts[8])?,
        })
    }
}

pub fn emit_csv(rows: &[ReportRow], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        writeln!(out, "{}", row.csv_line())?;
    }
    Ok(())
}

pub fn emit_json_lines(rows: &[ReportRow], out: &mut impl Write) -> std::io::Result<()> {
    for row in rows {
        writeln!(out, "{}", row.json_line())?;
    }
    Ok(())
}

pub fn emit_text(rows: &[ReportRow], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<28} {:<18} {:>12} {:>11} {:>11} {:>10} {:>12} {:>7} {:>9}",
        "scenario", "method", "phase_rad", "trace_re", "trace_im", "visibility", "max_residual",
        "steps", "wall_s"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<28} {:<18} {:>12.6} {:>11.6} {:>11.6} {:>10.6} {:>12.3e} {:>7} {:>9.3}",
            r.scenario,
            r.method,
            r.phase_rad,
            r.trace_re,
            r.trace_im,
            r.visibility,
            r.max_residual,
            r.steps,
            r.walltime_s
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub enum EmitFormat {
    Text,
    Csv,
    JsonLines,
}

/// Serialize rows to a writer in the requested format.
pub fn emit(rows: &[ReportRow], format: EmitFormat, out: &mut impl Write) -> std::io::Result<()> {
    match format {
        EmitFormat::Text => emit_text(rows, out),
        EmitFormat::Csv => emit_csv(rows, out),
        EmitFormat::JsonLines => emit_json_lines(rows, out),
    }
}

/// Write rows to a file path (or stdout for `-`/None).
pub fn emit_to_path(rows: &[ReportRow], format: EmitFormat, path: Option<&str>) -> Result<()> {
    match path {
        None | Some("-") => {
            let stdout = std::io::stdout();
            emit(rows, format, &mut stdout.lock()).map_err(|e| Error::Io {
                path: "<stdout>".into(),
                source: e,
            })
        }
        Some(p) => {
            let mut file = std::fs::File::create(p).map_err(|e| Error::Io {
                path: p.to_string(),
                source: e,
            })?;
            emit(rows, format, &mut file).map_err(|e| Error::Io {
                path: p.to_string(),
                source: e,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_row() -> ReportRow {
        ReportRow {
            scenario: "trefoil".into(),
            method: "open".into(),
            phase_rad: -1.2367422553104265,
            trace_re: 0.16805,
            trace_im: -0.49289,
            visibility: 0.5207,
            max_residual: 3.4e-9,
            steps: 4000,
            walltime_s: 0.031,
        }
    }

    #[test]
    fn single_row_gives_two_line_csv() {
        let mut buf = Vec::new();
        emit_csv(&[sample_row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("trefoil,open,"));
    }

    #[test]
    fn empty_rows_give_header_only_csv() {
        let mut buf = Vec::new();
        emit_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let row = sample_row();
        let parsed = ReportRow::from_csv_line(&row.csv_line()).unwrap();
        assert_eq!(parsed, row);
    }

    #[test]
    fn g17_formatting_matches_c_conventions() {
        assert_eq!(fmt_g17(0.0), "0");
        assert_eq!(fmt_g17(1.0), "1");
        assert_eq!(fmt_g17(-1.5), "-1.5");
        assert_eq!(fmt_g17(0.5), "0.5");
        // 1e-5 is not exactly representable; these are the true 17 digits
        assert_eq!(fmt_g17(1e-5), "1.0000000000000001e-5");
        assert_eq!(fmt_g17(2.0_f64.powi(-20)), "9.5367431640625e-7");
        assert_eq!(fmt_g17(1e16), "10000000000000000");
        assert_eq!(fmt_g17(f64::NAN), "nan");
        assert_eq!(fmt_g17(std::f64::consts::PI), "3.1415926535897931");
    }

    proptest! {
        #[test]
        fn g17_round_trips_f64(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(x.is_finite());
            let parsed: f64 = fmt_g17(x).parse().unwrap();
            prop_assert_eq!(parsed.to_bits(), x.to_bits());
        }
    }
}
