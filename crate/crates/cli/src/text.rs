//! Plain-text rendering of output documents.

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = Vec::new();
    match v {
        Value::Object(m) if is_fiber(m) => {
            out.push(fiber_summary(v));
            for (k, x) in m {
                if !matches!(k.as_str(), "fiber" | "states" | "blocks" | "pairs" | "matrix") {
                    entry(&mut out, k, x, 0);
                }
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                entry(&mut out, k, x, 0);
            }
        }
        _ => out.push(scalar(v)),
    }
    out.join("\n")
}

fn is_fiber(m: &serde_json::Map<String, Value>) -> bool {
    m.contains_key("fiber") && m.contains_key("states")
}

fn fiber_summary(v: &Value) -> String {
    let kind = v["fiber"].as_str().unwrap_or("?");
    let strs = |x: &Value| x.as_array().map(|a| a.iter().map(scalar).collect::<Vec<_>>()).unwrap_or_default();
    match kind {
        "eqrel" => {
            let blocks: Vec<String> =
                v["blocks"].as_array().into_iter().flatten().map(|b| format!("{{{}}}", strs(b).join(","))).collect();
            format!("eqrel {}", blocks.join(" "))
        }
        "erel" => {
            let pairs: Vec<String> =
                v["pairs"].as_array().into_iter().flatten().map(|p| format!("({})", strs(p).join(","))).collect();
            format!("erel {}", pairs.join(" "))
        }
        _ => {
            let mut lines = vec![format!("{kind} over {}", strs(&v["states"]).join(" "))];
            for row in v["matrix"].as_array().into_iter().flatten() {
                lines.push(format!("  {}", strs(row).join(" ")));
            }
            lines.join("\n")
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if !n.is_u64() && !n.is_i64() => format!("{f}"),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn entry(out: &mut Vec<String>, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if is_fiber(m) => {
            out.push(format!("{pad}{key}:"));
            for line in fiber_summary(v).lines() {
                out.push(format!("{pad}  {line}"));
            }
        }
        Value::Object(m) if m.is_empty() => out.push(format!("{pad}{key}: -")),
        Value::Object(m) => {
            out.push(format!("{pad}{key}:"));
            for (k, x) in m {
                entry(out, k, x, depth + 1);
            }
        }
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push(format!("{pad}{key}: {}", a.iter().map(scalar).collect::<Vec<_>>().join(", ")));
        }
        Value::Array(a) => {
            out.push(format!("{pad}{key}:"));
            for (i, x) in a.iter().enumerate() {
                entry(out, &i.to_string(), x, depth + 1);
            }
        }
        _ => out.push(format!("{pad}{key}: {}", scalar(v))),
    }
}
