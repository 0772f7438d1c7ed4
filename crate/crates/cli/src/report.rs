//! Report envelope, number formatting and the flat table export.

use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Significant digits of every printed number.
pub const DIGITS: usize = 15;

/// `v` with `DIGITS` significant digits, trailing zeros dropped, in plain
/// notation for moderate exponents. Rounds the shortest round-trip decimal
/// of `v` half up, so `0.7071067811865475` prints as `0.707106781186548`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let shortest = format!("{:e}", v.abs());
    let (mant, exp) = shortest.split_once('e').expect("exponent");
    let mut exp: i32 = exp.parse().expect("integer exponent");
    let mut digits: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    if digits.len() > DIGITS {
        let up = digits[DIGITS] >= 5;
        digits.truncate(DIGITS);
        if up {
            let mut i = DIGITS;
            loop {
                if i == 0 {
                    digits.insert(0, 1);
                    digits.truncate(DIGITS);
                    exp += 1;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
        }
    }
    while digits.len() > 1 && digits.last() == Some(&0) {
        digits.pop();
    }
    let d: String = digits.iter().map(|&c| char::from(b'0' + c)).collect();
    let sign = if v < 0.0 { "-" } else { "" };
    let body = if !(-5..DIGITS as i32).contains(&exp) {
        let (head, tail) = d.split_at(1);
        if tail.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{tail}e{exp}")
        }
    } else if exp < 0 {
        format!("0.{}{d}", "0".repeat((-exp - 1) as usize))
    } else {
        let int_len = exp as usize + 1;
        if d.len() <= int_len {
            format!("{d}{}", "0".repeat(int_len - d.len()))
        } else {
            format!("{}.{}", &d[..int_len], &d[int_len..])
        }
    };
    format!("{sign}{body}")
}

/// Rounds every float in `v` to `DIGITS` significant digits, so the JSON
/// writer never prints more.
pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64");
            if let Some(r) = fmt_num(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64) {
                *n = r;
            }
        }
        Value::Array(a) => a.iter_mut().for_each(round_floats),
        Value::Object(o) => o.values_mut().for_each(round_floats),
        _ => {}
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    ConvergenceWarning,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::ConvergenceWarning => 3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Skipped {
    pub bound_id: String,
    pub alpha: f64,
    pub reason: String,
}

/// One row of the table export.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub bound_id: String,
    pub alpha: f64,
    pub lower_const: Option<f64>,
    pub upper_const: Option<f64>,
    pub worst_lower_margin: Option<f64>,
    pub worst_upper_margin: Option<f64>,
    pub empirical_max_quotient: Option<f64>,
    pub pass: Option<bool>,
}

pub const TABLE_HEADER: &str =
    "bound_id,alpha,lower_const,upper_const,worst_lower_margin,worst_upper_margin,empirical_max_quotient,pass";

impl Row {
    pub fn csv(&self) -> String {
        let o = |v: Option<f64>| v.map(fmt_num).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.bound_id,
            fmt_num(self.alpha),
            o(self.lower_const),
            o(self.upper_const),
            o(self.worst_lower_margin),
            o(self.worst_upper_margin),
            o(self.empirical_max_quotient),
            self.pass.map(|p| p.to_string()).unwrap_or_default()
        )
    }
}

pub fn table(rows: &[Row]) -> String {
    let mut s = String::from(TABLE_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&r.csv());
        s.push('\n');
    }
    s
}

/// Everything a run reports. `wall_time_seconds` is the only field that
/// differs between runs with the same flags.
#[derive(Debug, Clone, Serialize)]
pub struct ReportEnvelope {
    pub schema_version: u32,
    pub command: Vec<String>,
    pub subcommand: String,
    pub seed: u64,
    pub domain: Option<String>,
    pub domain_spec: Option<Value>,
    pub alphas: Vec<f64>,
    pub samples: Option<usize>,
    pub violation_reports: Vec<Value>,
    pub search_results: Vec<Value>,
    pub skipped: Vec<Skipped>,
    pub notes: Vec<String>,
    pub status: Status,
    pub wall_time_seconds: f64,
}

impl ReportEnvelope {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("serializable report");
        round_floats(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("json");
        s.push('\n');
        s
    }
}

pub fn value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fifteen_digits() {
        assert_eq!(fmt_num(0.5f64.sqrt()), "0.707106781186548");
        assert_eq!(fmt_num(0.5), "0.5");
        assert_eq!(fmt_num(4.0), "4");
        assert_eq!(fmt_num(-1.0 / 3.0), "-0.333333333333333");
        assert_eq!(fmt_num(1.0 / 3.0 * 1e-9), "3.33333333333333e-10");
        assert_eq!(fmt_num(2.5e20), "2.5e20");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(fmt_num(0.0), "0");
        assert_eq!(fmt_num(2.0 / 8f64.sqrt()), "0.707106781186548");
        assert_eq!(fmt_num(0.9999999999999999), "1");
        assert_eq!(fmt_num(999999999999999.9), "1e15");
        assert_eq!(fmt_num(1.5e-5), "0.000015");
        assert_eq!(fmt_num(-2.220446049250313e-16), "-2.22044604925031e-16");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn rounding_in_json() {
        let mut v = serde_json::json!({"a": [0.1f64 + 0.2], "b": 3});
        round_floats(&mut v);
        assert_eq!(v.to_string(), r#"{"a":[0.3],"b":3}"#);
    }

    #[test]
    fn csv_row() {
        let r = Row {
            bound_id: "thm3.1".into(),
            alpha: 4.0,
            lower_const: Some(1.0),
            upper_const: Some(2f64.sqrt()),
            worst_lower_margin: Some(0.0),
            worst_upper_margin: None,
            empirical_max_quotient: Some(1.25),
            pass: Some(true),
        };
        assert_eq!(r.csv(), "thm3.1,4,1,1.4142135623731,0,,1.25,true");
    }
}
