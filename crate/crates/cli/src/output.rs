use serde_json::{Number, Value};

/// Significant digits kept for every floating point number.
pub const DIGITS: usize = 15;

fn round(x: f64) -> f64 {
    format!("{:.*e}", DIGITS - 1, x).parse().unwrap_or(x)
}

fn walk(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => n
            .as_f64()
            .and_then(|x| Number::from_f64(round(x)))
            .map_or(Value::Null, Value::Number),
        Value::Array(items) => Value::Array(items.into_iter().map(walk).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, walk(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with floats rounded to [`DIGITS`] significant digits.
pub fn render(v: Value) -> String {
    serde_json::to_string_pretty(&walk(v)).expect("JSON values always serialize")
}
