use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// `%.{digits}g`-style rendering: shortest of fixed or exponent notation
/// with `digits` significant digits and trailing zeros removed.
pub fn sig(x: f64, digits: usize) -> String {
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
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// CSV cell for a float at 12 significant digits.
pub fn cell(x: f64) -> String {
    sig(x, 12)
}

/// Writes `contents` to `out`, or to stdout when `out` is `None`.
pub fn emit(out: Option<&Path>, contents: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, contents).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

/// A float for JSON output; non-finite values become `null`.
pub fn num(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(cell(1.0), "1");
        assert_eq!(cell(0.1), "0.1");
        assert_eq!(cell(2.0 / 3.0), "0.666666666667");
        assert_eq!(cell(123456.789), "123456.789");
        assert_eq!(cell(1e-7), "1e-7");
        assert_eq!(cell(1.5e15), "1.5e15");
        assert_eq!(cell(-90.71869952000004), "-90.71869952");
        assert_eq!(cell(f64::INFINITY), "inf");
        assert_eq!(cell(0.0), "0");
    }

    #[test]
    fn json_numbers_drop_non_finite() {
        assert_eq!(num(f64::INFINITY), serde_json::Value::Null);
        assert_eq!(num(0.5), serde_json::json!(0.5));
    }
}
