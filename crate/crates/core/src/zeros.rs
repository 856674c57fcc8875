//! Ordinates of zeros on the critical line: ingestion, validation,
//! serialization, counting, synthetic stand-ins and a Gram-point zero finder.

use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::report::{AsymptoticReport, Comparison};
use crate::special::{gram_point, hardy_z};

pub const DEFAULT_PRECISION_HINT: f64 = 1e-9;
/// Upper limit of [`find_zeros`].
pub const FIND_ZEROS_CEILING: f64 = 5e3;

/// Sorted positive ordinates with a guaranteed-complete coverage ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCatalog {
    ordinates: Vec<f64>,
    t_max: f64,
    source: String,
    precision_hint: f64,
}

impl ZeroCatalog {
    /// Validates positivity and order. Duplicates are kept as multiplicity
    /// and logged.
    pub fn new(
        ordinates: Vec<f64>,
        t_max: f64,
        source: impl Into<String>,
        precision_hint: f64,
    ) -> Result<Self> {
        let mut prev = 0.0;
        for (i, &g) in ordinates.iter().enumerate() {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::Parse {
                    line: i + 1,
                    text: g.to_string(),
                });
            }
            if g < prev {
                return Err(Error::Monotonicity {
                    line: i + 1,
                    value: g,
                    previous: prev,
                });
            }
            if g == prev {
                log::warn!("duplicate ordinate {g} at position {}; treated as multiplicity", i + 1);
            }
            prev = g;
        }
        if !(t_max >= 0.0) {
            return Err(Error::InvalidParameter(format!("t_max must be non-negative, got {t_max}")));
        }
        if let Some(&last) = ordinates.last() {
            if last > t_max {
                return Err(Error::InvalidParameter(format!(
                    "ordinate {last} exceeds coverage ceiling {t_max}"
                )));
            }
        }
        let source = source.into();
        if !source.starts_with("synthetic") {
            if let Some(&first) = ordinates.first() {
                if !(14.13..14.14).contains(&first) {
                    log::warn!("first ordinate {first} is not the expected 14.1347...");
                }
            }
        }
        Ok(Self {
            ordinates,
            t_max,
            source,
            precision_hint,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn precision_hint(&self) -> f64 {
        self.precision_hint
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Fails unless the catalog is complete up to `t`.
    pub fn require_coverage(&self, t: f64) -> Result<()> {
        if t > self.t_max {
            return Err(Error::Coverage {
                requested: t,
                t_max: self.t_max,
            });
        }
        Ok(())
    }

    /// Ordinates in (0, t].
    pub fn up_to(&self, t: f64) -> Result<&[f64]> {
        self.require_coverage(t)?;
        Ok(&self.ordinates[..self.ordinates.partition_point(|&g| g <= t)])
    }

    /// N(u), the number of ordinates ≤ u.
    pub fn count_zeros(&self, u: f64) -> Result<usize> {
        Ok(self.up_to(u)?.len())
    }

    /// |N(u) − main(u)| against the main term, with tolerance as a fraction
    /// of N(u).
    pub fn check_counting(&self, u: f64, tolerance: f64) -> Result<AsymptoticReport> {
        let n = self.count_zeros(u)? as f64;
        let main = counting_main_term(u);
        let mut r = AsymptoticReport::new("N(u)", n, main, tolerance * n, Comparison::Absolute)
            .with_error_scale(u.ln() / u.ln().ln())
            .with_provenance(format!("source={} u={u}", self.source));
        r.notes = format!("|N - main| = {:.4}", (n - main).abs());
        Ok(r)
    }

    /// Most ordinates in any half-open interval of unit length.
    pub fn max_count_per_unit(&self) -> usize {
        let g = &self.ordinates;
        let mut best = 0;
        let mut lo = 0;
        for hi in 0..g.len() {
            while g[hi] - g[lo] >= 1.0 {
                lo += 1;
            }
            best = best.max(hi - lo + 1);
        }
        best
    }

    /// SHA-256 over the ordinate bit patterns and the ceiling.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for g in &self.ordinates {
            h.update(g.to_bits().to_le_bytes());
        }
        h.update(self.t_max.to_bits().to_le_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Writes the plain-text table format with a '#' header.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# source: {}", self.source)?;
        writeln!(w, "# t_max: {}", self.t_max)?;
        writeln!(w, "# precision_hint: {:e}", self.precision_hint)?;
        for g in &self.ordinates {
            writeln!(w, "{g}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }

    /// A copy restricted to ordinates ≤ t.
    pub fn truncated(&self, t: f64) -> Result<Self> {
        let ords = self.up_to(t)?.to_vec();
        Ok(Self {
            ordinates: ords,
            t_max: t,
            source: self.source.clone(),
            precision_hint: self.precision_hint,
        })
    }
}

/// Reads one ordinate per line; blank and '#' lines are skipped. Reading
/// stops past `t_max`, and the ceiling is clamped to the last ordinate kept.
pub fn ingest_zeros<R: BufRead>(reader: R, t_max: f64) -> Result<ZeroCatalog> {
    let mut ords = Vec::new();
    let mut source = String::from("file");
    let mut precision_hint = DEFAULT_PRECISION_HINT;
    let mut prev = 0.0;
    let mut prev_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            text: e.to_string(),
        })?;
        let s = line.trim();
        if s.is_empty() {
            continue;
        }
        if let Some(c) = s.strip_prefix('#') {
            let c = c.trim();
            if let Some(v) = c.strip_prefix("source:") {
                source = v.trim().to_string();
            } else if let Some(v) = c.strip_prefix("precision_hint:") {
                if let Ok(p) = v.trim().parse::<f64>() {
                    precision_hint = p;
                }
            }
            continue;
        }
        let g: f64 = s.parse().map_err(|_| Error::Parse {
            line: line_no,
            text: s.to_string(),
        })?;
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                text: s.to_string(),
            });
        }
        if g < prev {
            return Err(Error::Monotonicity {
                line: line_no,
                value: g,
                previous: prev,
            });
        }
        if g > t_max {
            break;
        }
        if g == prev {
            log::warn!("duplicate ordinate {g} on line {line_no} (previous on line {prev_line})");
        }
        prev = g;
        prev_line = line_no;
        ords.push(g);
    }
    if ords.is_empty() {
        return Err(Error::EmptyInput);
    }
    let clamped = *ords.last().expect("non-empty");
    ZeroCatalog::new(ords, clamped, source, precision_hint)
}

/// (u/2π) log(u/2πe).
pub fn counting_main_term(u: f64) -> f64 {
    u / (2.0 * PI) * (u / (2.0 * PI * std::f64::consts::E)).ln()
}

/// Kinds of synthetic catalogs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticKind {
    /// 1, √2, π, π√2, π², π²√2, …: linearly independent over ℚ.
    IndependentToy,
    /// Exponential gaps with mean 2π/log t, starting at t = 10.
    Poisson,
    /// A jittered unit lattice pushed through the inverse of the smooth
    /// counting function.
    UnfoldedModel,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "independent-toy" | "toy" => Ok(Self::IndependentToy),
            "poisson" => Ok(Self::Poisson),
            "unfolded-model" | "unfolded" => Ok(Self::UnfoldedModel),
            _ => Err(Error::InvalidParameter(format!("unknown synthetic kind '{s}'"))),
        }
    }
}

/// θ(t)/π + 1 without the oscillating part.
pub fn smooth_count(t: f64) -> f64 {
    counting_main_term(t) + 7.0 / 8.0
}

fn inverse_smooth_count(y: f64) -> f64 {
    let mut t = 2.0 * PI * std::f64::consts::E + 2.0 * PI * y;
    for _ in 0..60 {
        let f = smooth_count(t) - y;
        let d = (t / (2.0 * PI)).ln() / (2.0 * PI);
        let step = f / d;
        t -= step;
        if t < 2.0 * PI * std::f64::consts::E {
            t = 2.0 * PI * std::f64::consts::E;
        }
        if step.abs() < 1e-13 * t {
            break;
        }
    }
    t
}

/// Deterministic-by-seed synthetic catalog with ceiling `t_max`.
pub fn synthetic_catalog(kind: SyntheticKind, seed: u64, t_max: f64) -> Result<ZeroCatalog> {
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidParameter(format!("t_max must be positive, got {t_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ords = Vec::new();
    match kind {
        SyntheticKind::IndependentToy => {
            let mut p = 1.0;
            loop {
                if p > t_max {
                    break;
                }
                ords.push(p);
                let q = p * std::f64::consts::SQRT_2;
                if q <= t_max {
                    ords.push(q);
                }
                p *= PI;
            }
        }
        SyntheticKind::Poisson => {
            let mut t: f64 = 10.0;
            loop {
                let mean = 2.0 * PI / t.ln();
                let gap = Exp::new(1.0 / mean).expect("positive rate").sample(&mut rng);
                t += gap;
                if t > t_max {
                    break;
                }
                ords.push(t);
            }
        }
        SyntheticKind::UnfoldedModel => {
            let mut n = 1u64;
            loop {
                let y = n as f64 - 0.5 + rng.gen_range(-0.25..0.25);
                let t = inverse_smooth_count(y);
                if t > t_max {
                    break;
                }
                if t > 0.0 {
                    ords.push(t);
                }
                n += 1;
            }
        }
    }
    let name = match kind {
        SyntheticKind::IndependentToy => "synthetic:independent-toy".to_string(),
        SyntheticKind::Poisson => format!("synthetic:poisson:{seed}"),
        SyntheticKind::UnfoldedModel => format!("synthetic:unfolded-model:{seed}"),
    };
    ZeroCatalog::new(ords, t_max, name, 0.0)
}

/// All zeros with ordinate ≤ `t_max`, for 10 ≤ t_max ≤ 5·10³.
pub fn find_zeros(t_max: f64) -> Result<ZeroCatalog> {
    if !(10.0..=FIND_ZEROS_CEILING).contains(&t_max) {
        return Err(Error::Range(format!(
            "find_zeros covers 10 ≤ t_max ≤ {FIND_ZEROS_CEILING}, got {t_max}"
        )));
    }
    tabulate_zeros(t_max)
}

/// Zero location without the height cap of [`find_zeros`]; above 5·10³ the
/// Riemann–Siegel expansion supplies Z.
pub fn tabulate_zeros(t_max: f64) -> Result<ZeroCatalog> {
    if !(t_max >= 10.0) || !t_max.is_finite() {
        return Err(Error::Range(format!("t_max must be at least 10, got {t_max}")));
    }
    let z = |t: f64| -> Result<f64> { Ok(hardy_z(t)?.value) };
    let mut zeros: Vec<f64> = Vec::new();
    // Gram blocks run between consecutive good Gram points, where
    // (−1)^n Z(g_n) > 0 and N(g_n) = n + 1.
    let mut block_start_n: i64 = -1;
    let mut block_start_t = gram_point(-1);
    let mut z_start = z(block_start_t)?;
    loop {
        // The block containing t_max is completed so that zeros just below
        // t_max cannot go missing in an unchecked tail.
        if block_start_t > t_max {
            break;
        }
        let mut n = block_start_n + 1;
        let mut gram = vec![block_start_t];
        let mut z_end;
        loop {
            let g = gram_point(n);
            gram.push(g);
            z_end = z(g)?;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            if sign * z_end > 0.0 {
                break;
            }
            n += 1;
            if n - block_start_n > 64 {
                return Err(Error::MissedZeros {
                    found: zeros.len(),
                    expected: (n + 1) as f64,
                    t_max: g,
                });
            }
        }
        let expected = (n - block_start_n) as usize;
        let found = locate_in_block(&gram, z_start, z_end, expected, &z)?;
        zeros.extend(found);
        block_start_n = n;
        block_start_t = *gram.last().expect("non-empty");
        z_start = z_end;
    }
    zeros.retain(|&g| g <= t_max);
    let expected = counting_main_term(t_max);
    if (zeros.len() as f64 - expected).abs() > 3.0 {
        return Err(Error::MissedZeros {
            found: zeros.len(),
            expected,
            t_max,
        });
    }
    ZeroCatalog::new(zeros, t_max, "computed:gram-block-scan", 1e-10)
}

fn locate_in_block<F: Fn(f64) -> Result<f64>>(
    gram: &[f64],
    z_start: f64,
    z_end: f64,
    expected: usize,
    z: &F,
) -> Result<Vec<f64>> {
    let mut last_count = 0;
    for level in 0..=10 {
        let mut brackets = Vec::new();
        let mut prev_t = gram[0];
        let mut prev_z = z_start;
        for w in gram.windows(2) {
            let (a, b) = (w[0], w[1]);
            let m = ((4.0 * (b - a)).ceil() as usize).max(4) << level;
            for i in 1..=m {
                let t = if i == m { b } else { a + (b - a) * i as f64 / m as f64 };
                let zt = if i == m && w[1] == *gram.last().expect("non-empty") {
                    z_end
                } else {
                    z(t)?
                };
                if (prev_z < 0.0) != (zt < 0.0) {
                    brackets.push((prev_t, prev_z, t, zt));
                }
                prev_t = t;
                prev_z = zt;
            }
        }
        last_count = brackets.len();
        if brackets.len() == expected {
            return brackets
                .into_iter()
                .map(|(a, fa, b, fb)| refine_root(z, a, fa, b, fb))
                .collect();
        }
    }
    Err(Error::MissedZeros {
        found: last_count,
        expected: expected as f64,
        t_max: *gram.last().expect("non-empty"),
    })
}

/// Illinois regula falsi on a sign-change bracket.
fn refine_root<F: Fn(f64) -> Result<f64>>(
    z: &F,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
) -> Result<f64> {
    let tol = 4.0 * f64::EPSILON * b.abs();
    let mut side = 0i8;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a && c < b) {
            c = 0.5 * (a + b);
        }
        let fc = z(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if (fc < 0.0) == (fb < 0.0) {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    const FIRST: [f64; 3] = [14.134_725_142, 21.022_039_639, 25.010_857_580];

    #[test]
    fn ingest_three_lines() {
        let c = ingest_zeros(Cursor::new("14.134725\n21.022040\n25.010858\n"), 30.0).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.t_max(), 25.010858);
    }

    #[test]
    fn ingest_rejects_disorder_with_line() {
        let e = ingest_zeros(Cursor::new("# hdr\n14.1\n\n25.0\n21.0\n"), 30.0).unwrap_err();
        assert!(matches!(e, Error::Monotonicity { line: 5, .. }), "{e:?}");
        let e = ingest_zeros(Cursor::new("14.1\nabc\n"), 30.0).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert_eq!(ingest_zeros(Cursor::new("# only\n\n"), 30.0), Err(Error::EmptyInput));
    }

    #[test]
    fn counting_main_term_values() {
        assert!(counting_main_term(2.0 * PI * std::f64::consts::E).abs() < 1e-12);
        assert!((counting_main_term(100.0) - 28.127).abs() < 1e-3);
        assert!((counting_main_term(1000.0) - 647.741).abs() < 1e-3);
    }

    #[test]
    fn find_first_zeros() {
        let c = find_zeros(30.0).unwrap();
        assert_eq!(c.len(), 3);
        for (g, e) in c.ordinates().iter().zip(FIRST) {
            assert!((g - e).abs() < 1e-8, "{g} {e}");
        }
        assert!(find_zeros(14.0).unwrap().is_empty());
        assert_eq!(find_zeros(100.0).unwrap().len(), 29);
        assert!(find_zeros(9.0).is_err());
        assert!(find_zeros(6000.0).is_err());
    }

    #[test]
    fn count_and_coverage() {
        let c = find_zeros(100.0).unwrap();
        assert_eq!(c.count_zeros(10.0).unwrap(), 0);
        assert_eq!(c.count_zeros(100.0).unwrap(), 29);
        assert!(matches!(c.count_zeros(101.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn serialization_round_trips_bit_exactly() {
        let c = find_zeros(60.0).unwrap();
        let back = ingest_zeros(Cursor::new(c.to_text()), c.t_max()).unwrap();
        assert_eq!(back.ordinates(), c.ordinates());
        assert_eq!(back.source(), c.source());
        let again = ingest_zeros(Cursor::new(back.to_text()), back.t_max()).unwrap();
        assert_eq!(again.fingerprint(), back.fingerprint());
    }

    #[test]
    fn toy_catalog() {
        let c = synthetic_catalog(SyntheticKind::IndependentToy, 0, 4.0).unwrap();
        assert_eq!(c.ordinates(), &[1.0, std::f64::consts::SQRT_2, PI]);
    }

    #[test]
    fn poisson_is_reproducible() {
        let a = synthetic_catalog(SyntheticKind::Poisson, 7, 2000.0).unwrap();
        let b = synthetic_catalog(SyntheticKind::Poisson, 7, 2000.0).unwrap();
        let c = synthetic_catalog(SyntheticKind::Poisson, 8, 2000.0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.ordinates(), c.ordinates());
        // gaps scaled by log t / 2π have mean one
        let g = a.ordinates();
        let mean = g.windows(2).map(|w| (w[1] - w[0]) * w[0].ln() / (2.0 * PI)).sum::<f64>()
            / (g.len() - 1) as f64;
        assert!((mean - 1.0).abs() < 0.1, "{mean}");
    }

    #[test]
    fn unfolded_mean_spacing() {
        let c = synthetic_catalog(SyntheticKind::UnfoldedModel, 3, 1.0e4).unwrap();
        let g = c.ordinates();
        assert!(g.len() > 10_000);
        let gaps: Vec<f64> = g.windows(2).map(|w| smooth_count(w[1]) - smooth_count(w[0])).collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert!((mean - 1.0).abs() < 0.05);
    }

    #[test]
    fn max_count_per_unit_window() {
        let c = ZeroCatalog::new(vec![1.0, 1.5, 1.9, 3.0, 3.1], 4.0, "synthetic:t", 0.0).unwrap();
        assert_eq!(c.max_count_per_unit(), 3);
    }
}
