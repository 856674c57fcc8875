//! Measured statistic versus predicted main term.

use serde::Serialize;

/// How `rel_err` is formed from measured and predicted values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Comparison {
    /// |m − p| / |p|.
    Relative,
    /// max(m/p, p/m) − 1, for quantities only pinned down up to a factor.
    Factor,
    /// |m − p| with no normalization.
    Absolute,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub name: String,
    pub measured: f64,
    pub predicted: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    /// Size of the unspecified error term the prediction carries, if known.
    pub error_scale: Option<f64>,
    pub pass: bool,
    pub comparison: Comparison,
    pub provenance: String,
    pub notes: String,
}

impl AsymptoticReport {
    pub fn new(
        name: impl Into<String>,
        measured: f64,
        predicted: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        let rel_err = match comparison {
            Comparison::Relative => {
                if predicted == 0.0 {
                    if measured == 0.0 {
                        0.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    (measured - predicted).abs() / predicted.abs()
                }
            }
            Comparison::Absolute => (measured - predicted).abs(),
            Comparison::Factor => {
                if measured > 0.0 && predicted > 0.0 {
                    (measured / predicted).max(predicted / measured) - 1.0
                } else if measured == predicted {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
        };
        let pass = rel_err.is_finite() && rel_err <= tolerance;
        Self {
            name: name.into(),
            measured,
            predicted,
            rel_err,
            tolerance,
            error_scale: None,
            pass,
            comparison,
            provenance: String::new(),
            notes: String::new(),
        }
    }

    pub fn with_error_scale(mut self, scale: f64) -> Self {
        self.error_scale = Some(scale);
        self
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = p.into();
        self
    }

    pub fn with_notes(mut self, n: impl Into<String>) -> Self {
        self.notes = n.into();
        self
    }

    /// One human-readable line.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {}: measured {:.6e} predicted {:.6e} err {:.3e} (tol {:.3e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            self.predicted,
            self.rel_err,
            self.tolerance
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_and_factor_modes() {
        let r = AsymptoticReport::new("a", 1.1, 1.0, 0.2, Comparison::Relative);
        assert!(r.pass && (r.rel_err - 0.1).abs() < 1e-12);
        let f = AsymptoticReport::new("b", 0.5, 1.0, 0.5, Comparison::Factor);
        assert!((f.rel_err - 1.0).abs() < 1e-12 && !f.pass);
        let z = AsymptoticReport::new("c", 1.0, 0.0, 1.0, Comparison::Relative);
        assert!(!z.pass);
    }
}
