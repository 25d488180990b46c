//! Structured results for inequality checks.
//!
//! Every verification routine reports lhs/rhs/slack instead of a bare
//! boolean: the constants in the bounds are loose by design, so the slack is
//! the interesting output. Rows render to JSON with floats printed at 17
//! significant digits (round-trip exact for f64) so repeated runs are
//! byte-identical.

use std::fmt::Write as _;

/// A single parameter attached to a check row.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Str(String),
    Bool(bool),
}

impl From<usize> for ParamValue {
    fn from(v: usize) -> Self {
        ParamValue::Int(v as i64)
    }
}
impl From<i64> for ParamValue {
    fn from(v: i64) -> Self {
        ParamValue::Int(v)
    }
}
impl From<f64> for ParamValue {
    fn from(v: f64) -> Self {
        ParamValue::Float(v)
    }
}
impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Str(v.to_owned())
    }
}
impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Str(v)
    }
}
impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

/// One verified inequality `lhs ≤ rhs (+ tol)`.
#[derive(Debug, Clone)]
pub struct BoundCheck {
    /// Role-named identifier of the inequality family.
    pub check: String,
    /// JSON key used for `check` when rendering (`"check"` or `"lemma"`).
    pub label_key: &'static str,
    /// Parameters, rendered in insertion order.
    pub params: Vec<(String, ParamValue)>,
    pub lhs: f64,
    pub rhs: f64,
    /// Additive tolerance folded into `holds`.
    pub tol: f64,
    pub holds: bool,
}

impl BoundCheck {
    /// Check `lhs ≤ rhs` exactly (no tolerance).
    pub fn bound(check: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::bound_with_tol(check, lhs, rhs, 0.0)
    }

    /// Check `lhs ≤ rhs + tol`.
    pub fn bound_with_tol(check: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        BoundCheck {
            check: check.into(),
            label_key: "check",
            params: Vec::new(),
            lhs,
            rhs,
            tol,
            holds: lhs <= rhs + tol,
        }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<ParamValue>) -> Self {
        self.params.push((key.into(), value.into()));
        self
    }

    /// Use `"lemma"` as the identifier key when rendering to JSON.
    pub fn labeled_lemma(mut self) -> Self {
        self.label_key = "lemma";
        self
    }

    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    /// Render as one JSON object on a single line.
    pub fn to_json_row(&self) -> String {
        let mut out = String::new();
        out.push('{');
        let _ = write!(out, "\"{}\":{}", self.label_key, json_str(&self.check));
        out.push_str(",\"params\":{");
        for (i, (k, v)) in self.params.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}:{}", json_str(k), render_param(v));
        }
        out.push('}');
        let _ = write!(
            out,
            ",\"lhs\":{},\"rhs\":{},\"slack\":{},\"holds\":{}",
            fmt_f64(self.lhs),
            fmt_f64(self.rhs),
            fmt_f64(self.slack()),
            self.holds
        );
        out.push('}');
        out
    }
}

fn render_param(v: &ParamValue) -> String {
    match v {
        ParamValue::Int(i) => i.to_string(),
        ParamValue::Float(x) => fmt_f64(*x),
        ParamValue::Str(s) => json_str(s),
        ParamValue::Bool(b) => b.to_string(),
    }
}

/// Format a finite f64 with 17 significant digits in scientific notation.
///
/// 17 digits are always sufficient for exact round-trip of a 64-bit float.
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "cannot render non-finite float as JSON: {x}");
    format!("{:.16e}", x)
}

/// JSON string literal with minimal escaping.
pub fn json_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for &x in &[
            0.0,
            1.0,
            -1.0,
            0.1,
            std::f64::consts::PI,
            1.0 / 3.0,
            6.02e23,
            -2.2250738585072014e-308,
        ] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn row_is_valid_json() {
        let row = BoundCheck::bound("demo", 1.0, 2.0)
            .with_param("l", 10usize)
            .with_param("mu", 0.5f64)
            .with_param("note", "a\"b")
            .to_json_row();
        let v: serde_json::Value = serde_json::from_str(&row).unwrap();
        assert_eq!(v["check"], "demo");
        assert_eq!(v["params"]["l"], 10);
        assert_eq!(v["holds"], true);
        assert_eq!(v["slack"].as_f64().unwrap(), 1.0);
    }

    #[test]
    fn lemma_key_rendering() {
        let row = BoundCheck::bound("x", 0.0, 1.0).labeled_lemma().to_json_row();
        let v: serde_json::Value = serde_json::from_str(&row).unwrap();
        assert_eq!(v["lemma"], "x");
    }
}
