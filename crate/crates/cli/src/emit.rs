//! Dataset rendering. Output bytes depend only on the resolved config.

use std::io::Write;
use std::path::Path;

use freqwalk_core::{SquareMatrix, C64};
use serde_json::{json, Map, Value};

use crate::config::{Format, RunConfig};
use crate::error::{CliError, Result};

pub const TOOL: &str = "freqwalk";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) => format!("{x:.16e}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Real(x) => json!(x),
            Cell::Text(s) => json!(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Table { columns: Vec<&'static str>, rows: Vec<Vec<Cell>> },
    Report(Map<String, Value>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub config: RunConfig,
    pub body: Body,
}

fn metadata(cfg: &RunConfig) -> Value {
    json!({ "tool": TOOL, "version": VERSION, "config": cfg })
}

/// Render `ds` in `format`.
pub fn render(ds: &Dataset, format: Format) -> Result<String> {
    match (&ds.body, format) {
        (Body::Table { columns, rows }, Format::Csv) => {
            let mut out = format!("# {TOOL} {VERSION}\n# config: {}\n{}\n", ds.config.echo(), columns.join(","));
            for row in rows {
                let line: Vec<String> = row.iter().map(Cell::csv).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
            Ok(out)
        }
        (Body::Table { columns, rows }, Format::Json) => {
            let rows: Vec<Value> = rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
            let doc = json!({ "metadata": metadata(&ds.config), "columns": columns, "rows": rows });
            Ok(pretty(&doc))
        }
        (Body::Report(map), Format::Json) => {
            let mut doc = Map::new();
            doc.insert("metadata".into(), metadata(&ds.config));
            doc.extend(map.clone());
            Ok(pretty(&Value::Object(doc)))
        }
        (Body::Report(_), Format::Csv) => {
            Err(CliError::Config(format!("experiment `{}` writes a JSON report; csv is not available", ds.config.experiment)))
        }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("dataset serializes");
    s.push('\n');
    s
}

/// Write `ds` to `path`, or to stdout when `path` is `None`.
pub fn emit(ds: &Dataset, path: Option<&Path>, format: Format) -> Result<()> {
    let text = render(ds, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

/// `{"re": [...], "im": [...]}` with row-major nested arrays.
pub fn matrix_json<const N: usize>(m: &SquareMatrix<N>) -> Value {
    let part = |f: fn(&C64) -> f64| -> Value { m.entries.iter().map(|row| row.iter().map(f).collect::<Vec<_>>()).collect() };
    json!({ "re": part(|z| z.re), "im": part(|z| z.im) })
}

pub fn vector_json(v: &[C64]) -> Value {
    json!({
        "re": v.iter().map(|z| z.re).collect::<Vec<_>>(),
        "im": v.iter().map(|z| z.im).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{RawConfig, RunConfig};

    fn band_cfg() -> RunConfig {
        RunConfig::resolve(RawConfig::from_json(r#"{"experiment":"band","gamma":1,"theta":0,"phi_h":0,"phi_v":0}"#).unwrap()).unwrap()
    }

    #[test]
    fn csv_layout() {
        let ds = Dataset {
            config: band_cfg(),
            body: Body::Table {
                columns: vec!["step", "model", "M"],
                rows: vec![vec![Cell::Int(-3), Cell::Text("dtqw".into()), Cell::Real(0.1)]],
            },
        };
        let text = render(&ds, Format::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# freqwalk "));
        assert!(lines[1].starts_with("# config: {\"experiment\":\"band\""));
        assert_eq!(lines[2], "step,model,M");
        assert_eq!(lines[3], "-3,dtqw,1.0000000000000001e-1");
        assert!(!text.contains('\r'));
        // 17 significant digits round-trip
        let back: f64 = lines[3].rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn report_keys_follow_insertion_order() {
        let mut map = Map::new();
        map.insert("zeta".into(), json!(1));
        map.insert("alpha".into(), json!(2));
        let mut cfg = band_cfg();
        cfg.format = Format::Json;
        let ds = Dataset { config: cfg, body: Body::Report(map) };
        let text = render(&ds, Format::Json).unwrap();
        let (m, z, a) = (text.find("metadata").unwrap(), text.find("zeta").unwrap(), text.find("alpha").unwrap());
        assert!(m < z && z < a);
        assert!(render(&ds, Format::Csv).is_err());
    }

    #[test]
    fn matrix_layout() {
        let m = SquareMatrix::<2>::new([[C64::new(1.0, 2.0), C64::new(0.0, 0.0)], [C64::new(0.0, -1.0), C64::new(3.0, 0.0)]]);
        assert_eq!(matrix_json(&m), json!({"re": [[1.0, 0.0], [0.0, 3.0]], "im": [[2.0, 0.0], [-1.0, 0.0]]}));
    }
}
