//! Output formatting: fixed 12-significant-digit text, JSON assembly.

use esq_core::BoundResult;
use serde_json::{json, Value};

/// Format with 12 significant digits, locale-independent. Non-finite
/// values print as `inf` / `-inf` / `nan` so asymptotes stay readable in
/// tables.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One `key = value` line on stdout.
pub fn print_field(key: &str, value: f64) {
    println!("{key} = {}", fmt_sig(value));
}

/// JSON value for a float, spelling non-finite values as strings (JSON
/// numbers cannot carry them).
pub fn json_float(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

/// Render an upper bound together with an optional lower bound as either
/// text lines or a JSON document, honoring `--json`.
pub fn emit_bound(upper: &BoundResult, lower: Option<f64>, json_mode: bool) {
    if json_mode {
        let mut doc = serde_json::Map::new();
        doc.insert(
            "upper".to_string(),
            serde_json::to_value(upper).expect("BoundResult serializes"),
        );
        if let Some(l) = lower {
            doc.insert("lower".to_string(), json_float(l));
            doc.insert("gap".to_string(), json_float(upper.value - l));
        }
        println!(
            "{}",
            serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON renders")
        );
        return;
    }
    print_field("upper", upper.value);
    for (key, value) in &upper.params {
        print_field(key, *value);
    }
    if let Some(l) = lower {
        print_field("lower", l);
        print_field("gap", upper.value - l);
    }
    if let Some(caveat) = &upper.caveat {
        println!("caveat = {caveat}");
    }
}
