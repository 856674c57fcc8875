//! Zero sources: a table on disk or a named synthetic catalog.

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use anyhow::{bail, Context, Result};
use paircorr_core::zeros::{ingest_zeros, synthetic_catalog};
use paircorr_core::{SyntheticKind, ZeroCatalog};

/// `synthetic:KIND[:SEED]` or a path. `height` is the ceiling of a synthetic
/// catalog; tables are always read whole.
pub fn load_zeros(spec: &str, height: Option<f64>) -> Result<ZeroCatalog> {
    if let Some(rest) = spec.strip_prefix("synthetic:") {
        let mut parts = rest.splitn(2, ':');
        let kind: SyntheticKind = parts.next().unwrap_or("").parse()?;
        let seed = match parts.next() {
            Some(s) => s.parse().with_context(|| format!("bad seed in '{spec}'"))?,
            None => 0,
        };
        let Some(h) = height else {
            bail!("synthetic source '{spec}' needs a height");
        };
        return Ok(synthetic_catalog(kind, seed, h)?);
    }
    let path = Path::new(spec);
    let f = File::open(path).with_context(|| format!("opening zero table {}", path.display()))?;
    let cat = ingest_zeros(BufReader::new(f), f64::INFINITY)
        .with_context(|| format!("ingesting {}", path.display()))?;
    Ok(cat)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_specs_parse() {
        let c = load_zeros("synthetic:poisson:3", Some(200.0)).unwrap();
        assert!(c.len() > 20);
        assert_eq!(c.source(), "synthetic:poisson:3");
        let toy = load_zeros("synthetic:independent-toy", Some(100.0)).unwrap();
        assert_eq!(toy.ordinates()[0], 1.0);
        assert!(load_zeros("synthetic:nope", Some(10.0)).is_err());
        assert!(load_zeros("synthetic:poisson", None).is_err());
    }

    #[test]
    fn missing_file_names_the_path() {
        let msg = format!("{:#}", load_zeros("/no/such/zeros.txt", None).unwrap_err());
        assert!(msg.contains("/no/such/zeros.txt"));
    }
}
