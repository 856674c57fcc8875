//! Config-driven runs: load zeros once, run stanzas, emit the bundle.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use paircorr_core::ZeroCatalog;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::output::{report_json, reports_table, write_atomic, write_table};
use crate::source::load_zeros;
use crate::stanzas::{run_stanza, StanzaOutput};

/// Results of every stanza, in config order.
#[derive(Debug, Clone)]
pub struct RunBundle {
    pub config_hash: String,
    pub zeros: Option<ZerosInfo>,
    pub stanzas: Vec<StanzaOutput>,
}

#[derive(Debug, Clone)]
pub struct ZerosInfo {
    pub source: String,
    pub fingerprint: String,
    pub count: usize,
    pub t_max: f64,
}

impl RunBundle {
    pub fn report_count(&self) -> usize {
        self.stanzas.iter().map(|s| s.reports.len()).sum()
    }

    pub fn pass_count(&self) -> usize {
        self.stanzas
            .iter()
            .flat_map(|s| &s.reports)
            .filter(|r| r.pass)
            .count()
    }

    pub fn summary(&self) -> Value {
        let stanzas: Vec<Value> = self
            .stanzas
            .iter()
            .map(|s| {
                let pass = s.reports.iter().filter(|r| r.pass).count();
                json!({
                    "name": s.name,
                    "kind": s.kind,
                    "pass": pass,
                    "fail": s.reports.len() - pass,
                    "files": file_names(s),
                    "reports": s.reports.iter().map(report_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        let pass = self.pass_count();
        json!({
            "config_sha256": self.config_hash,
            "zeros": self.zeros.as_ref().map(|z| json!({
                "source": z.source,
                "fingerprint": z.fingerprint,
                "count": z.count,
                "t_max": z.t_max,
            })),
            "totals": {
                "reports": self.report_count(),
                "pass": pass,
                "fail": self.report_count() - pass,
            },
            "stanzas": stanzas,
        })
    }

    /// Writes every table, a per-stanza report CSV and `summary.json`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for s in &self.stanzas {
            for t in &s.tables {
                written.push(write_table(dir, t)?);
            }
            written.push(write_table(dir, &reports_table(reports_file(s), &s.reports))?);
        }
        let mut text = serde_json::to_string_pretty(&self.summary())?;
        text.push('\n');
        written.push(write_atomic(dir, "summary.json", text.as_bytes())?);
        Ok(written)
    }
}

fn reports_file(s: &StanzaOutput) -> String {
    format!("{}_reports.csv", s.name)
}

fn file_names(s: &StanzaOutput) -> Vec<String> {
    let mut v: Vec<String> = s.tables.iter().map(|t| t.file.clone()).collect();
    v.push(reports_file(s));
    v
}

fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    // Hash the normalized config so formatting changes do not matter.
    let text = toml::to_string(cfg)?;
    Ok(Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect())
}

/// Runs all stanzas. Stanzas run concurrently; results keep config order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunBundle> {
    cfg.validate()?;
    let zeros: Option<ZeroCatalog> = match (&cfg.zeros, cfg.required_height()) {
        (Some(spec), Some(h)) => Some(load_zeros(spec, Some(h))?),
        _ => None,
    };
    if let (Some(z), Some(h)) = (&zeros, cfg.required_height()) {
        if h > z.t_max() {
            log::warn!("catalog covers {} but stanzas ask for {h}", z.t_max());
        }
    }
    let stanzas = cfg
        .stanzas
        .par_iter()
        .map(|s| {
            log::info!("running stanza '{}' ({})", s.name(), s.kind());
            run_stanza(s, zeros.as_ref()).with_context(|| format!("stanza '{}' ({})", s.name(), s.kind()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RunBundle {
        config_hash: config_hash(cfg)?,
        zeros: zeros.map(|z| ZerosInfo {
            source: z.source().to_string(),
            fingerprint: z.fingerprint(),
            count: z.len(),
            t_max: z.t_max(),
        }),
        stanzas,
    })
}
