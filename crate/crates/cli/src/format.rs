//! Fixed-precision number formatting for reproducible output.

use serde_json::Value;

/// `x` rounded to 9 significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().expect("formatted float parses")
}

/// Shortest text for `x` rounded to 9 significant digits.
pub fn sig9(x: f64) -> String {
    let r = round9(x);
    if r == 0.0 {
        "0".into()
    } else if !r.is_finite() || (1e-4..1e9).contains(&r.abs()) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// Round every float in a JSON tree to 9 significant digits.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round9(n.as_f64().expect("f64 number"));
            serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with rounded floats and a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut s = serde_json::to_string_pretty(&round_json(v)).expect("serializable");
    s.push('\n');
    s
}
