//! Plain-text rendering of a report: one line per top-level key, list
//! entries indented beneath their key.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().map(scalar).collect::<Vec<_>>().join(", ")
        }
        Value::Array(_) | Value::Object(_) => v.to_string(),
        _ => scalar(v),
    }
}

pub fn render(report: &Value) -> String {
    let Value::Object(map) = report else {
        return inline(report);
    };
    let width = map.keys().map(String::len).max().unwrap_or(0);
    let mut lines = Vec::new();
    for (key, value) in map {
        match value {
            Value::Array(items) if items.iter().any(|x| x.is_object()) => {
                lines.push(format!("{key}:"));
                for (i, item) in items.iter().enumerate() {
                    let fields = match item {
                        Value::Object(m) => m
                            .iter()
                            .map(|(k, v)| format!("{k}={}", inline(v)))
                            .collect::<Vec<_>>()
                            .join("  "),
                        other => inline(other),
                    };
                    lines.push(format!("  [{i}] {fields}"));
                }
            }
            _ => lines.push(format!("{key:<width$}  {}", inline(value))),
        }
    }
    lines.join("\n")
}
