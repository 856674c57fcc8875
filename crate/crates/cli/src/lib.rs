//! Experiment runner and command-line plumbing over `paircorr_core`.
//!
//! A run reads a TOML config of stanzas, evaluates each one against a zero
//! catalog (a table on disk or a synthetic catalog), and writes CSV tables
//! plus a `summary.json` listing every report.

pub mod config;
pub mod oracles;
pub mod output;
pub mod run;
pub mod source;
pub mod stanzas;

pub use config::{ExperimentConfig, Stanza};
pub use run::{run_experiment, RunBundle};
pub use stanzas::{run_stanza, StanzaOutput};
