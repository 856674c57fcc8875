//! Experiment configuration. Every threshold a stanza asserts lives here.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// A zero-table path or `synthetic:KIND[:SEED]`. Relative paths resolve
    /// against the config file's directory.
    #[serde(default)]
    pub zeros: Option<String>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(rename = "stanza", default)]
    pub stanzas: Vec<Stanza>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Stanza {
    WeightCurves {
        name: String,
        #[serde(default = "one")]
        nu: f64,
        #[serde(default = "three")]
        k_max: u32,
        #[serde(default = "ten")]
        u_max: f64,
        #[serde(default = "d_curve_points")]
        points: usize,
    },
    WeightExactness {
        name: String,
        #[serde(default = "d_exact_nus")]
        nus: Vec<f64>,
        #[serde(default = "eight")]
        k_max: u32,
        #[serde(default = "d_hundred")]
        points: usize,
        #[serde(default = "d_exact_tol")]
        tolerance: f64,
    },
    KernelDuality {
        name: String,
        #[serde(default = "d_exact_nus")]
        nus: Vec<f64>,
        #[serde(default = "d_duality_ks")]
        ks: Vec<u32>,
        #[serde(default = "d_duality_deltas")]
        deltas: Vec<f64>,
        #[serde(default = "d_duality_tol")]
        tolerance: f64,
    },
    ExplicitFormula {
        name: String,
        x_grid: Vec<f64>,
        t_grid: Vec<f64>,
        #[serde(default = "d_formula_nus")]
        nus: Vec<f64>,
        #[serde(default = "d_zero_k")]
        ks: Vec<u32>,
        /// Defaults to the largest window the catalog covers at every t.
        #[serde(default)]
        window: Option<f64>,
        #[serde(default = "d_formula_tol")]
        tolerance: f64,
    },
    PairCorrelation {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        alphas: Vec<f64>,
        #[serde(default = "d_weights")]
        weights: Vec<(f64, u32)>,
        #[serde(default = "d_window")]
        window: f64,
        #[serde(default = "d_quarter")]
        tolerance: f64,
        /// Optional spike check: F for `spike.weight` over F for `weights[0]`.
        #[serde(default)]
        spike: Option<SpikeCheck>,
    },
    Convolution {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        #[serde(default = "d_kernel")]
        kernel: String,
        #[serde(default = "d_half")]
        lambda: f64,
        #[serde(default = "d_two_weights")]
        weights: Vec<(f64, u32)>,
        #[serde(default = "d_window")]
        window: f64,
        #[serde(default = "d_quarter")]
        tolerance: f64,
        #[serde(default = "d_agreement_tol")]
        agreement_tolerance: f64,
    },
    Cardinality {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        #[serde(default = "two")]
        mu: u32,
        #[serde(default = "d_merge_tol")]
        merge_tol: f64,
        #[serde(default = "d_card_tol")]
        tolerance: f64,
        #[serde(default = "d_prefix")]
        recursion_prefix: usize,
        #[serde(default = "three")]
        recursion_mu_max: u32,
    },
    Delta {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        #[serde(default = "d_merge_tol")]
        merge_tol: f64,
        #[serde(default = "d_quarter")]
        ratio_tolerance: f64,
        #[serde(default = "yes")]
        toy_check: bool,
    },
    Theorem2 {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        mu: Vec<u32>,
        alphas: Vec<f64>,
        #[serde(default)]
        merge_tol: Option<f64>,
        #[serde(default = "d_window")]
        window: f64,
        #[serde(default)]
        method: GMethod,
        /// Allowed factor between measured and predicted.
        #[serde(default = "d_factor")]
        factor: f64,
    },
    Gonek {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        ns: Vec<u64>,
        #[serde(default = "d_envelopes")]
        envelopes: f64,
    },
    Phi {
        name: String,
        #[serde(rename = "T")]
        t: Vec<f64>,
        #[serde(default = "two")]
        mu: u32,
        #[serde(default)]
        k: u32,
        ns: Vec<u64>,
        #[serde(default = "d_merge_tol")]
        merge_tol: f64,
        #[serde(default = "d_envelopes")]
        envelopes: f64,
    },
    Lemmas {
        name: String,
        x_grid: Vec<f64>,
        #[serde(default = "d_quarter")]
        tolerance: f64,
    },
    Oracles {
        name: String,
        #[serde(default = "d_seed")]
        seed: u64,
        #[serde(default = "d_oracle_tol")]
        tolerance: f64,
        #[serde(default = "d_fd_tol")]
        fd_tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpikeCheck {
    pub alpha: f64,
    pub weight: (f64, u32),
    pub max_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GMethod {
    /// Exact multiset for μ ≤ 2, histogram above.
    #[default]
    Auto,
    Exact,
    Binned,
}

fn one() -> f64 {
    1.0
}
fn two() -> u32 {
    2
}
fn three() -> u32 {
    3
}
fn eight() -> u32 {
    8
}
fn ten() -> f64 {
    10.0
}
fn yes() -> bool {
    true
}
fn d_curve_points() -> usize {
    401
}
fn d_hundred() -> usize {
    100
}
fn d_exact_nus() -> Vec<f64> {
    vec![0.75, 1.0, 2.0]
}
fn d_exact_tol() -> f64 {
    1e-12
}
fn d_duality_ks() -> Vec<u32> {
    vec![0, 1, 2]
}
fn d_duality_deltas() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 2.0, 5.0]
}
fn d_duality_tol() -> f64 {
    1e-7
}
fn d_formula_nus() -> Vec<f64> {
    vec![1.0, 1.5]
}
fn d_zero_k() -> Vec<u32> {
    vec![0]
}
fn d_formula_tol() -> f64 {
    1e-6
}
fn d_weights() -> Vec<(f64, u32)> {
    vec![(1.0, 0)]
}
fn d_two_weights() -> Vec<(f64, u32)> {
    vec![(1.0, 0), (1.0, 1)]
}
fn d_window() -> f64 {
    50.0
}
fn d_quarter() -> f64 {
    0.25
}
fn d_kernel() -> String {
    "fejer".into()
}
fn d_half() -> f64 {
    0.5
}
fn d_agreement_tol() -> f64 {
    0.15
}
fn d_merge_tol() -> f64 {
    2e-8
}
fn d_card_tol() -> f64 {
    0.35
}
fn d_prefix() -> usize {
    300
}
fn d_factor() -> f64 {
    2.0
}
fn d_envelopes() -> f64 {
    10.0
}
fn d_seed() -> u64 {
    7
}
fn d_oracle_tol() -> f64 {
    1e-9
}
fn d_fd_tol() -> f64 {
    1e-6
}

impl Stanza {
    pub fn name(&self) -> &str {
        match self {
            Stanza::WeightCurves { name, .. }
            | Stanza::WeightExactness { name, .. }
            | Stanza::KernelDuality { name, .. }
            | Stanza::ExplicitFormula { name, .. }
            | Stanza::PairCorrelation { name, .. }
            | Stanza::Convolution { name, .. }
            | Stanza::Cardinality { name, .. }
            | Stanza::Delta { name, .. }
            | Stanza::Theorem2 { name, .. }
            | Stanza::Gonek { name, .. }
            | Stanza::Phi { name, .. }
            | Stanza::Lemmas { name, .. }
            | Stanza::Oracles { name, .. } => name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Stanza::WeightCurves { .. } => "weight-curves",
            Stanza::WeightExactness { .. } => "weight-exactness",
            Stanza::KernelDuality { .. } => "kernel-duality",
            Stanza::ExplicitFormula { .. } => "explicit-formula",
            Stanza::PairCorrelation { .. } => "pair-correlation",
            Stanza::Convolution { .. } => "convolution",
            Stanza::Cardinality { .. } => "cardinality",
            Stanza::Delta { .. } => "delta",
            Stanza::Theorem2 { .. } => "theorem2",
            Stanza::Gonek { .. } => "gonek",
            Stanza::Phi { .. } => "phi",
            Stanza::Lemmas { .. } => "lemmas",
            Stanza::Oracles { .. } => "oracles",
        }
    }

    /// Height the stanza needs from the zero catalog, if it reads zeros.
    pub fn required_height(&self) -> Option<f64> {
        let max = |v: &[f64]| v.iter().copied().fold(f64::NAN, f64::max);
        match self {
            Stanza::WeightCurves { .. }
            | Stanza::WeightExactness { .. }
            | Stanza::KernelDuality { .. }
            | Stanza::Lemmas { .. }
            | Stanza::Oracles { .. } => None,
            Stanza::ExplicitFormula { t_grid, window, .. } => {
                Some(max(&t_grid.iter().map(|t| t.abs()).collect::<Vec<_>>()) + window.unwrap_or(paircorr_core::explicit_formula::DEFAULT_WINDOW))
            }
            Stanza::PairCorrelation { t, .. }
            | Stanza::Convolution { t, .. }
            | Stanza::Cardinality { t, .. }
            | Stanza::Delta { t, .. }
            | Stanza::Theorem2 { t, .. }
            | Stanza::Gonek { t, .. }
            | Stanza::Phi { t, .. } => Some(max(t)),
        }
    }

    fn validate(&self) -> Result<()> {
        let finite_pos = |what: &str, v: &[f64]| -> Result<()> {
            if v.is_empty() {
                bail!("{what} list is empty");
            }
            if let Some(bad) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
                bail!("{what} entries must be positive and finite, got {bad}");
            }
            Ok(())
        };
        let nonempty = |what: &str, n: usize| -> Result<()> {
            if n == 0 {
                bail!("{what} list is empty");
            }
            Ok(())
        };
        let tol = |what: &str, v: f64| -> Result<()> {
            if !(v.is_finite() && v >= 0.0) {
                bail!("{what} must be a non-negative number, got {v}");
            }
            Ok(())
        };
        if self.name().is_empty()
            || !self
                .name()
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            bail!("stanza name '{}' must be non-empty ASCII [A-Za-z0-9_-]", self.name());
        }
        match self {
            Stanza::WeightCurves { nu, u_max, points, .. } => {
                finite_pos("nu", &[*nu])?;
                finite_pos("u_max", &[*u_max])?;
                if *points < 2 {
                    bail!("points must be at least 2");
                }
            }
            Stanza::WeightExactness { nus, points, tolerance, .. } => {
                finite_pos("nus", nus)?;
                nonempty("points", *points)?;
                tol("tolerance", *tolerance)?;
            }
            Stanza::KernelDuality { nus, ks, deltas, tolerance, .. } => {
                finite_pos("nus", nus)?;
                nonempty("ks", ks.len())?;
                nonempty("deltas", deltas.len())?;
                tol("tolerance", *tolerance)?;
            }
            Stanza::ExplicitFormula { x_grid, t_grid, nus, ks, tolerance, window, .. } => {
                finite_pos("x_grid", x_grid)?;
                nonempty("t_grid", t_grid.len())?;
                finite_pos("nus", nus)?;
                nonempty("ks", ks.len())?;
                tol("tolerance", *tolerance)?;
                if let Some(w) = window {
                    finite_pos("window", &[*w])?;
                }
            }
            Stanza::PairCorrelation { t, alphas, weights, window, tolerance, spike, .. } => {
                finite_pos("T", t)?;
                nonempty("alphas", alphas.len())?;
                nonempty("weights", weights.len())?;
                finite_pos("window", &[*window])?;
                tol("tolerance", *tolerance)?;
                if let Some(sp) = spike {
                    finite_pos("spike.alpha", &[sp.alpha])?;
                    tol("spike.max_ratio", sp.max_ratio)?;
                }
            }
            Stanza::Convolution { t, weights, window, tolerance, agreement_tolerance, lambda, .. } => {
                finite_pos("T", t)?;
                nonempty("weights", weights.len())?;
                finite_pos("window", &[*window])?;
                finite_pos("lambda", &[*lambda])?;
                tol("tolerance", *tolerance)?;
                tol("agreement_tolerance", *agreement_tolerance)?;
            }
            Stanza::Cardinality { t, merge_tol, tolerance, .. } => {
                finite_pos("T", t)?;
                tol("merge_tol", *merge_tol)?;
                tol("tolerance", *tolerance)?;
            }
            Stanza::Delta { t, merge_tol, ratio_tolerance, .. } => {
                finite_pos("T", t)?;
                tol("merge_tol", *merge_tol)?;
                tol("ratio_tolerance", *ratio_tolerance)?;
            }
            Stanza::Theorem2 { t, mu, alphas, factor, window, .. } => {
                finite_pos("T", t)?;
                nonempty("mu", mu.len())?;
                nonempty("alphas", alphas.len())?;
                finite_pos("window", &[*window])?;
                if !(*factor >= 1.0) {
                    bail!("factor must be at least 1, got {factor}");
                }
            }
            Stanza::Gonek { t, ns, envelopes, .. } => {
                finite_pos("T", t)?;
                nonempty("ns", ns.len())?;
                tol("envelopes", *envelopes)?;
            }
            Stanza::Phi { t, ns, envelopes, merge_tol, .. } => {
                finite_pos("T", t)?;
                nonempty("ns", ns.len())?;
                tol("envelopes", *envelopes)?;
                tol("merge_tol", *merge_tol)?;
            }
            Stanza::Lemmas { x_grid, tolerance, .. } => {
                finite_pos("x_grid", x_grid)?;
                tol("tolerance", *tolerance)?;
            }
            Stanza::Oracles { tolerance, fd_tolerance, .. } => {
                tol("tolerance", *tolerance)?;
                tol("fd_tolerance", *fd_tolerance)?;
            }
        }
        Ok(())
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file; relative paths inside it are made
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if cfg.output_dir.is_relative() {
            cfg.output_dir = base.join(&cfg.output_dir);
        }
        if let Some(z) = &cfg.zeros {
            if !z.starts_with("synthetic:") && Path::new(z).is_relative() {
                cfg.zeros = Some(base.join(z).to_string_lossy().into_owned());
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.stanzas.is_empty() {
            bail!("config has no stanzas");
        }
        let mut seen = BTreeSet::new();
        for s in &self.stanzas {
            s.validate()
                .with_context(|| format!("stanza '{}' ({})", s.name(), s.kind()))?;
            if !seen.insert(s.name()) {
                bail!("duplicate stanza name '{}'", s.name());
            }
        }
        if self.zeros.is_none() {
            if let Some(s) = self.stanzas.iter().find(|s| s.required_height().is_some()) {
                bail!("stanza '{}' ({}) needs zeros but the config names no source", s.name(), s.kind());
            }
        }
        Ok(())
    }

    /// Largest height any stanza reads.
    pub fn required_height(&self) -> Option<f64> {
        self.stanzas
            .iter()
            .filter_map(Stanza::required_height)
            .reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_t_list_is_rejected() {
        let text = r#"
zeros = "synthetic:poisson:1"
[[stanza]]
kind = "cardinality"
name = "card"
T = []
"#;
        let err = ExperimentConfig::from_toml(text).unwrap_err();
        let msg = format!("{err:#}");
        assert!(msg.contains("card") && msg.contains("T list is empty"), "{msg}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = r#"
[[stanza]]
kind = "lemmas"
name = "l"
x_grid = [1000.0]
tolerence = 0.3
"#;
        assert!(ExperimentConfig::from_toml(text).is_err());
        let top = "colour = 1\n[[stanza]]\nkind = \"lemmas\"\nname = \"l\"\nx_grid = [1e3]\n";
        assert!(ExperimentConfig::from_toml(top).is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let text = r#"
[[stanza]]
kind = "kernel-duality"
name = "dual"
"#;
        let cfg = ExperimentConfig::from_toml(text).unwrap();
        match &cfg.stanzas[0] {
            Stanza::KernelDuality { nus, ks, deltas, tolerance, .. } => {
                assert_eq!(nus.len() * ks.len() * deltas.len(), 45);
                assert_eq!(*tolerance, 1e-7);
            }
            other => panic!("wrong variant {other:?}"),
        }
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }

    #[test]
    fn zero_reading_stanza_needs_a_source() {
        let text = r#"
[[stanza]]
kind = "gonek"
name = "g"
T = [1000.0]
ns = [2]
"#;
        let msg = format!("{:#}", ExperimentConfig::from_toml(text).unwrap_err());
        assert!(msg.contains("needs zeros"), "{msg}");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = r#"
[[stanza]]
kind = "oracles"
name = "o"
[[stanza]]
kind = "oracles"
name = "o"
"#;
        assert!(ExperimentConfig::from_toml(text).is_err());
    }
}
