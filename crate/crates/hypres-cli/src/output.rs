use crate::commands::Table;
use crate::config::{Format, RunConfig};
use serde_json::{json, Value};

pub const SCHEMA: &str = "hypres/1";

fn metadata(command: &str, cfg: &RunConfig, summary: &Value) -> Value {
    json!({
        "schema": SCHEMA,
        "tool": { "name": "hypres", "version": env!("CARGO_PKG_VERSION") },
        "command": command,
        "config": cfg,
        "summary": summary,
    })
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "NaN".into(),
        other => other.to_string(),
    }
}

/// CSV: one `#`-comment line with the metadata as compact JSON, then a
/// header row and the data rows.
fn to_csv(command: &str, cfg: &RunConfig, t: &Table) -> Result<Vec<u8>, String> {
    let mut out = format!("# {}\n", metadata(command, cfg, &t.summary)).into_bytes();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&t.columns).map_err(|e| e.to_string())?;
    for row in &t.rows {
        w.write_record(row.iter().map(csv_cell)).map_err(|e| e.to_string())?;
    }
    out.extend(w.into_inner().map_err(|e| e.to_string())?);
    Ok(out)
}

fn to_json(command: &str, cfg: &RunConfig, t: &Table) -> Result<Vec<u8>, String> {
    let mut doc = metadata(command, cfg, &t.summary);
    doc["columns"] = json!(t.columns);
    doc["rows"] = json!(t.rows);
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
    s.push('\n');
    Ok(s.into_bytes())
}

pub fn render(command: &str, cfg: &RunConfig, t: &Table) -> Result<Vec<u8>, String> {
    match cfg.format {
        Format::Csv => to_csv(command, cfg, t),
        Format::Json => to_json(command, cfg, t),
    }
}
