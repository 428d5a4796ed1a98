use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;

/// A data file produced by a command.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub file_name: String,
    pub body: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub code_version: String,
    pub timestamp: String,
    pub outputs: Vec<String>,
    pub summary: BTreeMap<String, Value>,
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// `key,value` rows from a JSON object; nested keys are joined with `.`.
pub fn report_csv(value: &Value) -> String {
    fn walk(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
        match v {
            Value::Object(map) => {
                for (k, x) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, x, rows);
                }
            }
            Value::Array(items) => {
                for (i, x) in items.iter().enumerate() {
                    walk(&format!("{prefix}.{i}"), x, rows);
                }
            }
            Value::Number(n) if n.is_f64() => rows.push(vec![prefix.into(), num(n.as_f64().unwrap_or(f64::NAN))]),
            Value::Null => rows.push(vec![prefix.into(), String::new()]),
            Value::String(s) => rows.push(vec![prefix.into(), s.clone()]),
            other => rows.push(vec![prefix.into(), other.to_string()]),
        }
    }
    let mut rows = Vec::new();
    walk("", value, &mut rows);
    csv(&["key", "value"], rows)
}

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

pub fn to_map<T: Serialize>(value: &T) -> BTreeMap<String, Value> {
    match serde_json::to_value(value) {
        Ok(Value::Object(map)) => map.into_iter().collect(),
        _ => BTreeMap::new(),
    }
}

/// Write artifacts and the manifest into `dir`, or print the artifacts when no directory is given.
pub fn emit(dir: Option<&Path>, artifacts: &[Artifact], mut manifest: RunManifest) -> Result<()> {
    let Some(dir) = dir else {
        let mut stdout = std::io::stdout().lock();
        for a in artifacts {
            match stdout.write_all(a.body.as_bytes()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => return Ok(()),
                other => other?,
            }
        }
        return Ok(());
    };
    fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
    for a in artifacts {
        let path = dir.join(&a.file_name);
        fs::write(&path, &a.body).with_context(|| format!("cannot write {}", path.display()))?;
        manifest.outputs.push(a.file_name.clone());
    }
    let path = dir.join("manifest.json");
    fs::write(&path, json(&manifest)?).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
