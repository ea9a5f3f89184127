//! Deterministic CSV and JSON emission.
//!
//! CSV: comma separation, `.` decimal point, 17 significant digits, LF line
//! endings, mandatory header. JSON: `{meta, config, tables, flags}` with an
//! optional `timings` map that is only present when explicitly requested, so
//! identical configurations rerun to byte-identical files. All writes go
//! through a temp file plus rename.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use robin_gap::verify::{Cell, Table};
use serde_json::{json, Map, Value};

use crate::config::RunConfig;

/// 17 significant digits, `.` decimal, locale-free.
pub fn fmt_num(x: f64) -> String {
    debug_assert!(x.is_finite());
    format!("{x:.16e}")
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn cell_to_csv(c: &Cell) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Num(v) => fmt_num(*v),
        Cell::Text(s) => csv_escape(s),
        Cell::Bool(b) => b.to_string(),
    }
}

pub fn table_to_csv(t: &Table) -> String {
    let mut out = String::new();
    out.push_str(
        &t.columns
            .iter()
            .map(|c| csv_escape(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');
    for row in &t.rows {
        out.push_str(&row.iter().map(cell_to_csv).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

pub fn cell_to_json(c: &Cell) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Num(v) => {
            debug_assert!(v.is_finite());
            json!(v)
        }
        Cell::Text(s) => json!(s),
        Cell::Bool(b) => json!(b),
    }
}

pub fn table_to_json(t: &Table) -> Value {
    json!({
        "name": t.name,
        "columns": t.columns,
        "rows": t.rows.iter()
            .map(|row| Value::Array(row.iter().map(cell_to_json).collect()))
            .collect::<Vec<_>>(),
    })
}

/// One report: stable `{meta, config, tables, flags}` schema.
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub tables: Vec<Table>,
    pub flags: Vec<String>,
    /// Wall-clock seconds per experiment; emitted only when requested.
    pub timings: Option<BTreeMap<String, f64>>,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Report {
            command: command.to_string(),
            config: config.clone(),
            tables: Vec::new(),
            flags: Vec::new(),
            timings: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert(
            "meta".into(),
            json!({
                "tool": "robin-gap",
                "version": env!("CARGO_PKG_VERSION"),
                "command": self.command,
            }),
        );
        map.insert("config".into(), serde_json::to_value(&self.config).unwrap());
        map.insert(
            "tables".into(),
            Value::Array(self.tables.iter().map(table_to_json).collect()),
        );
        map.insert("flags".into(), json!(self.flags));
        if let Some(t) = &self.timings {
            map.insert("timings".into(), serde_json::to_value(t).unwrap());
        }
        Value::Object(map)
    }

    pub fn json_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(&self.to_json()).unwrap();
        bytes.push(b'\n');
        bytes
    }
}

/// Write via temp file + rename in the destination directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_formatting_17_digits() {
        assert_eq!(fmt_num(2.404825557695773), "2.4048255576957729e0");
        assert_eq!(fmt_num(-11.566371925893572), "-1.1566371925893572e1");
        assert_eq!(fmt_num(0.0), "0.0000000000000000e0");
    }

    #[test]
    fn csv_round_basics() {
        let mut t = Table::new("demo", &["a", "b,c"]);
        t.push(vec![Cell::Int(3), Cell::Text("x\"y".into())]);
        let csv = table_to_csv(&t);
        assert_eq!(csv, "a,\"b,c\"\n3,\"x\"\"y\"\n");
        assert!(!csv.contains('\r'));
    }
}
