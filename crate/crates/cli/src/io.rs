use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use trendspectra::TimeSeries;

use crate::CliError;

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `1e-5 <= |x| < 1e12`.
pub fn fmt_g(x: f64) -> String {
    fmt_sig(x, 12)
}

pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
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

/// `δ` summaries use four decimals.
pub fn fmt_delta(x: f64) -> String {
    format!("{x:.4}")
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Config(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Appends one CSV record.
pub fn push_row<I, S>(buf: &mut String, fields: I)
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut first = true;
    for f in fields {
        if !first {
            buf.push(',');
        }
        buf.push_str(f.as_ref());
        first = false;
    }
    buf.push('\n');
}

pub fn read_series(path: &Path) -> Result<TimeSeries, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_series(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Parses `t,value` records; `t` is kept verbatim as a label.
pub fn parse_series(text: &str) -> Result<TimeSeries, String> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or("empty input, expected header `t,value`")?;
    let cols: Vec<&str> = header.1.split(',').map(str::trim).collect();
    if cols != ["t", "value"] {
        return Err(format!(
            "line {}: expected header `t,value`, found `{}`",
            header.0 + 1,
            header.1.trim()
        ));
    }
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for (i, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let lineno = i + 1;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(format!(
                "line {lineno}: expected 2 fields, found {}",
                fields.len()
            ));
        }
        let v: f64 = fields[1]
            .parse()
            .map_err(|_| format!("line {lineno}: cannot parse value `{}`", fields[1]))?;
        if !v.is_finite() {
            return Err(format!(
                "line {lineno}: value `{}` is not finite",
                fields[1]
            ));
        }
        labels.push(fields[0].to_string());
        values.push(v);
    }
    TimeSeries::new(labels, values).map_err(|e| e.to_string())
}

/// Formats a labelled table of numbers.
pub fn table(header: &[String], rows: impl IntoIterator<Item = (String, Vec<f64>)>) -> String {
    let mut buf = String::new();
    push_row(&mut buf, header);
    for (label, vals) in rows {
        let mut line = label;
        for v in vals {
            let _ = write!(line, ",{}", fmt_g(v));
        }
        buf.push_str(&line);
        buf.push('\n');
    }
    buf
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(0.240057), "0.240057");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_g(-2.5e-7), "-2.5e-07");
        assert_eq!(fmt_g(123456789012345.0), "1.23456789012e+14");
        assert_eq!(fmt_g(-0.0), "0");
        assert_eq!(fmt_g(100.0), "100");
        assert_eq!(fmt_g(0.1 + 0.2), "0.3");
    }

    #[test]
    fn four_decimal_delta() {
        assert_eq!(fmt_delta(0.16116), "0.1612");
        assert_eq!(fmt_delta(0.0), "0.0000");
    }

    #[test]
    fn series_parsing() {
        let s = parse_series("t,value\n2020-01,1.5\n2020-02, 2\n\n").unwrap();
        assert_eq!(s.labels(), ["2020-01", "2020-02"]);
        assert_eq!(s.values(), [1.5, 2.0]);
        let err = parse_series("t,value\n1,1\n2,abc\n").unwrap_err();
        assert!(err.starts_with("line 3:"), "{err}");
        assert!(parse_series("time,y\n1,1\n")
            .unwrap_err()
            .contains("header"));
        assert!(parse_series("t,value\n1,inf\n")
            .unwrap_err()
            .contains("not finite"));
        assert!(parse_series("t,value\n1,2,3\n")
            .unwrap_err()
            .contains("line 2"));
    }
}
