//! Plain-text rendering of the JSON records for `--pretty`.

use serde_json::Value;

use critnum::GroupTable;

/// Objects become aligned `key  value` rows, nested objects are indented,
/// lists of scalars stay on one line and lists of objects are separated by
/// blank lines.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Array(items) if items.iter().any(Value::is_object) => {
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                write_value(&mut out, item, 0);
            }
        }
        _ => write_value(&mut out, v, 0),
    }
    out
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, val) in map {
                let pad = " ".repeat(indent);
                match val {
                    Value::Object(inner) if !inner.is_empty() => {
                        out.push_str(&format!("{pad}{k}\n"));
                        write_value(out, val, indent + 2);
                    }
                    Value::Array(items) if items.iter().any(Value::is_object) => {
                        out.push_str(&format!("{pad}{k}\n"));
                        for item in items {
                            write_value(out, item, indent + 2);
                            out.push_str(&format!("{pad}  --\n"));
                        }
                    }
                    _ => out.push_str(&format!("{pad}{k:width$}  {}\n", inline(val))),
                }
            }
        }
        _ => out.push_str(&format!("{}{}\n", " ".repeat(indent), inline(v))),
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(inline).collect();
            format!("[{}]", parts.join(", "))
        }
        other => other.to_string(),
    }
}

/// The Cayley table with row and column headers.
pub fn cayley(g: &GroupTable) -> String {
    let n = g.order();
    let w = (n - 1).to_string().len().max(1);
    let mut out = format!("{:>w$} |", "+");
    for j in 0..n {
        out.push_str(&format!(" {j:>w$}"));
    }
    out.push('\n');
    out.push_str(&"-".repeat(w + 2 + n * (w + 1)));
    out.push('\n');
    for (i, row) in g.rows().iter().enumerate() {
        out.push_str(&format!("{i:>w$} |"));
        for x in row {
            out.push_str(&format!(" {x:>w$}"));
        }
        out.push('\n');
    }
    out
}
