//! Number formatting shared by the human and JSON report writers.
//!
//! Every real number leaves the program with 9 significant digits. JSON
//! output is rounded before serialization, so parsing a report and writing
//! it again reproduces the same bytes.

use serde::Serialize;
use serde_json::Value;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to 9 significant digits. Non-finite values pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .unwrap_or(x)
}

/// Human-readable form with 9 significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..9).contains(&mag) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // rounding may carry into a new leading digit, e.g. 9.99999999996
        if s.trim_start_matches('-').replace('.', "").trim_start_matches('0').len() > SIGNIFICANT_DIGITS {
            return format!("{:.*}", decimals.saturating_sub(1), x);
        }
        s
    } else {
        format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
    }
}

pub fn sig9_list(xs: &[f64]) -> String {
    xs.iter().map(|x| sig9(*x)).collect::<Vec<_>>().join("  ")
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().map(round_sig).and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to 9 significant digits.
pub fn to_json<T: Serialize>(report: &T) -> serde_json::Result<String> {
    let mut v = serde_json::to_value(report)?;
    round_value(&mut v);
    serde_json::to_string_pretty(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round_sig(0.8660254037844386), 0.866025404);
        assert_eq!(round_sig(-0.5773502691896258), -0.577350269);
        assert_eq!(round_sig(1.0), 1.0);
        assert_eq!(round_sig(1.23456789012e-20), 1.23456789e-20);
        assert_eq!(round_sig(round_sig(std::f64::consts::PI)), round_sig(std::f64::consts::PI));
    }

    #[test]
    fn human_format() {
        assert_eq!(sig9(0.5), "0.500000000");
        assert_eq!(sig9(0.8660254037844386), "0.866025404");
        assert_eq!(sig9(3.0), "3.00000000");
        assert_eq!(sig9(-0.5773502691896258), "-0.577350269");
        assert_eq!(sig9(0.0), "0");
        assert_eq!(sig9(1.5e-12), "1.50000000e-12");
        assert_eq!(sig9(9.999999999996), "10.0000000");
    }

    #[test]
    fn json_rounds_nested_floats_and_keeps_integers() {
        #[derive(Serialize)]
        struct R {
            a: Vec<f64>,
            n: u64,
        }
        let s = to_json(&R {
            a: vec![1.0 / 3.0, 2.0],
            n: u64::MAX,
        })
        .unwrap();
        assert!(s.contains("0.333333333"));
        assert!(s.contains("18446744073709551615"));
    }
}
