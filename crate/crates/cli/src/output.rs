//! Printing reports.
//!
//! JSON output is the report itself, pretty-printed with sorted keys, so
//! identical inputs give byte-identical output. The text format prints one
//! `key  value` line per top-level field (keys padded to a common width),
//! with nested values as compact JSON.

use crate::Format;
use serde_json::Value;

pub fn print(value: &Value, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize")),
        Format::Text => print!("{}", text(value)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn text(value: &Value) -> String {
    match value {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            map.iter().map(|(k, v)| format!("{k:width$}  {}\n", scalar(v))).collect()
        }
        Value::Array(items) => items.iter().map(|v| format!("{}\n", scalar(v))).collect(),
        other => format!("{}\n", scalar(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn text_aligns_top_level_fields() {
        let v = json!({"verdict": "theorem", "n": 3, "model": {"worlds": ["x"]}});
        assert_eq!(text(&v), "model    {\"worlds\":[\"x\"]}\nn        3\nverdict  theorem\n");
    }
}
