//! Table emission: CSV with round-trip-exact floats, or a JSON array.

use serde_json::{Map, Value};

/// Formats a float with 17 significant digits, enough to round-trip any
/// 64-bit value. Plain decimal notation in a moderate exponent range,
/// scientific notation outside it.
pub fn fmt17(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.16}", 0.0f64);
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if !(-5..17).contains(&e) {
        return format!("{:.16e}", x);
    }
    let prec = (16 - e).max(0) as usize;
    format!("{:.*}", prec, x)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn value_to_csv(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => fmt17(x),
            _ => n.to_string(),
        },
        Value::String(s) => csv_field(s),
        Value::Bool(b) => b.to_string(),
        other => csv_field(&other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Renders records under a fixed column schema as CSV (always with a
/// header row) or a JSON array. A record whose keys differ from the
/// schema is a mixed-schema error.
pub fn emit_records(
    schema: &[&str],
    records: &[Map<String, Value>],
    format: Format,
) -> Result<String, String> {
    for r in records {
        let keys: Vec<&str> = r.keys().map(String::as_str).collect();
        if keys != schema {
            return Err(format!(
                "record schema {keys:?} does not match table schema {schema:?}"
            ));
        }
    }
    match format {
        Format::Json => {
            let arr: Vec<Value> = records.iter().cloned().map(Value::Object).collect();
            Ok(serde_json::to_string_pretty(&arr).expect("serializable"))
        }
        Format::Csv => {
            let mut out = String::new();
            let header: Vec<String> = schema.iter().map(|k| csv_field(k)).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            for r in records {
                let row: Vec<String> = r.values().map(value_to_csv).collect();
                out.push_str(&row.join(","));
                out.push('\n');
            }
            Ok(out)
        }
    }
}
