//! Report rows and their CSV/JSON renderings.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Int(u64),
    Real(f64),
}

/// One evaluated parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub model: &'static str,
    pub params: Vec<(String, Param)>,
    pub quantities: Vec<(String, f64)>,
}

impl Row {
    pub fn new(model: &'static str) -> Self {
        Self {
            model,
            params: Vec::new(),
            quantities: Vec::new(),
        }
    }

    pub fn param(&mut self, name: impl Into<String>, value: Param) {
        self.params.push((name.into(), value));
    }

    pub fn quantity(&mut self, name: impl Into<String>, value: f64) -> Result<(), CliError> {
        let name = name.into();
        if !value.is_finite() {
            return Err(CliError::Numeric(format!(
                "quantity {name} is not finite ({value})"
            )));
        }
        self.quantities.push((name, value));
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Meta {
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

pub fn meta_json(meta: Meta) -> Value {
    let mut m = Map::new();
    m.insert("seed".into(), meta.seed.into());
    m.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    Value::Object(m)
}

fn param_json(p: Param) -> Value {
    match p {
        Param::Int(i) => i.into(),
        Param::Real(x) => Value::from(x),
    }
}

pub fn row_json(row: &Row, meta: Meta) -> Value {
    let params: Map<String, Value> = row
        .params
        .iter()
        .map(|(k, v)| (k.clone(), param_json(*v)))
        .collect();
    let quantities: Map<String, Value> = row
        .quantities
        .iter()
        .map(|(k, v)| (k.clone(), Value::from(*v)))
        .collect();
    let mut m = Map::new();
    m.insert("model".into(), row.model.into());
    m.insert("params".into(), Value::Object(params));
    m.insert("quantities".into(), Value::Object(quantities));
    m.insert("meta".into(), meta_json(meta));
    Value::Object(m)
}

/// `%.9g`: nine significant digits, trailing zeros dropped.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn param_csv(p: Param) -> String {
    match p {
        Param::Int(i) => i.to_string(),
        Param::Real(x) => format_sig9(x),
    }
}

/// Columns are the union of names in first-seen order; absent cells stay empty.
pub fn rows_csv(rows: &[Row]) -> Result<Vec<u8>, CliError> {
    let mut params: Vec<&str> = Vec::new();
    let mut quantities: Vec<&str> = Vec::new();
    for r in rows {
        for (k, _) in &r.params {
            if !params.contains(&k.as_str()) {
                params.push(k);
            }
        }
        for (k, _) in &r.quantities {
            if !quantities.contains(&k.as_str()) {
                quantities.push(k);
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("model".to_string())
        .chain(params.iter().map(|p| format!("param:{p}")))
        .chain(quantities.iter().map(|q| format!("quantity:{q}")));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![r.model.to_string()];
        for p in &params {
            rec.push(
                r.params
                    .iter()
                    .find(|(k, _)| k == p)
                    .map(|(_, v)| param_csv(*v))
                    .unwrap_or_default(),
            );
        }
        for q in &quantities {
            rec.push(
                r.quantities
                    .iter()
                    .find(|(k, _)| k == q)
                    .map(|(_, v)| format_sig9(*v))
                    .unwrap_or_default(),
            );
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// A single row renders as an object, anything else as an array.
pub fn render(rows: &[Row], format: Format, meta: Meta) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Csv => rows_csv(rows),
        Format::Json => {
            let v = if rows.len() == 1 {
                row_json(&rows[0], meta)
            } else {
                Value::Array(rows.iter().map(|r| row_json(r, meta)).collect())
            };
            Ok(json_bytes(&v))
        }
    }
}

pub fn json_bytes(v: &Value) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(v).expect("finite values serialize");
    out.push(b'\n');
    out
}

/// Writes to `path` through a temporary sibling and a rename, or to `stdout`.
pub fn emit(bytes: &[u8], path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    let Some(path) = path else {
        return stdout
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string()));
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        // temp files start owner-only; a report is an ordinary file
        tmp.as_file()
            .set_permissions(std::fs::Permissions::from_mode(0o644))
            .map_err(io)?;
    }
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}
