//! CSV tables and the JSON run summary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use paircorr_core::AsymptoticReport;
use serde_json::{json, Value};

/// A CSV file held in memory until the run is complete.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub file: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(file: impl Into<String>, header: &[&str]) -> Self {
        Self {
            file: file.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv_bytes(&self) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        Ok(w.into_inner().map_err(|e| e.into_error())?)
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(&self.to_csv_bytes()?)?;
        Ok(())
    }
}

/// Shortest round-trip decimal; identical bits give identical text.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:e}")
    }
}

/// One row per report, the columns every stanza shares.
pub fn reports_table(file: impl Into<String>, reports: &[AsymptoticReport]) -> Table {
    let mut t = Table::new(
        file,
        &[
            "name", "measured", "predicted", "rel_err", "tolerance", "error_scale", "pass",
            "comparison", "provenance", "notes",
        ],
    );
    for r in reports {
        t.push(vec![
            r.name.clone(),
            num(r.measured),
            num(r.predicted),
            num(r.rel_err),
            num(r.tolerance),
            r.error_scale.map(num).unwrap_or_default(),
            r.pass.to_string(),
            comparison_name(r),
            r.provenance.clone(),
            r.notes.clone(),
        ]);
    }
    t
}

fn comparison_name(r: &AsymptoticReport) -> String {
    match serde_json::to_value(r.comparison) {
        Ok(Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Non-finite floats have no JSON literal; they are written as strings.
fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(num(x))
    }
}

pub fn report_json(r: &AsymptoticReport) -> Value {
    json!({
        "name": r.name,
        "measured": json_num(r.measured),
        "predicted": json_num(r.predicted),
        "rel_err": json_num(r.rel_err),
        "tolerance": json_num(r.tolerance),
        "error_scale": r.error_scale.map(json_num),
        "pass": r.pass,
        "comparison": comparison_name(r),
        "provenance": r.provenance,
        "notes": r.notes,
    })
}

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(path)
}

pub fn write_table(dir: &Path, table: &Table) -> Result<PathBuf> {
    write_atomic(dir, &table.file, &table.to_csv_bytes()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use paircorr_core::Comparison;

    #[test]
    fn csv_quotes_per_rfc4180() {
        let mut t = Table::new("t.csv", &["a", "b"]);
        t.push(vec!["x,y".into(), "say \"hi\"".into()]);
        let s = String::from_utf8(t.to_csv_bytes().unwrap()).unwrap();
        assert_eq!(s, "a,b\r\n\"x,y\",\"say \"\"hi\"\"\"\r\n");
    }

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -0.0] {
            let back: f64 = num(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::INFINITY), "inf");
    }

    #[test]
    fn report_json_key_order_is_fixed() {
        let r = AsymptoticReport::new("r", 1.0, 0.0, 1.0, Comparison::Relative);
        let s = serde_json::to_string(&report_json(&r)).unwrap();
        assert!(s.starts_with("{\"name\":\"r\",\"measured\":1.0,"), "{s}");
        assert!(s.contains("\"rel_err\":\"inf\""));
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "a.txt", b"hello").unwrap();
        let names: Vec<_> = fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .collect();
        assert_eq!(names, vec!["a.txt"]);
    }
}
