//! The ordered multiset 𝔷_μ(T) of ordinate sums γ₁ + ⋯ + γ_μ ≤ T and the
//! statistics defined over it.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::io::{BufRead, Write};

use rustfft::FftPlanner;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::pair_correlation::{check_window, estimate, pair_sweep, CorrelationEstimate};
use crate::report::{AsymptoticReport, Comparison};
use crate::summation::CompensatedSum;
use crate::weights::{general_weight, montgomery_weight, WeightParams};
use crate::zeros::ZeroCatalog;
use crate::Complex;

/// Default cap on materialized tuples.
pub const DEFAULT_BUDGET: usize = 50_000_000;

/// 𝒩_T = T log T / 2π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NtConstant {
    #[serde(rename = "T")]
    pub t: f64,
    pub value: f64,
}

impl NtConstant {
    pub fn new(t: f64) -> Result<Self> {
        if !(t >= 2.0) {
            return Err(Error::InvalidParameter(format!("T must be at least 2, got {t}")));
        }
        Ok(Self {
            t,
            value: crate::n_t(t),
        })
    }
}

/// Default merge tolerance 10·μ·precision_hint.
pub fn default_merge_tol(mu: u32, precision_hint: f64) -> f64 {
    10.0 * mu as f64 * precision_hint
}

/// Ascending (sum, count) pairs; sums closer than `merge_tol` to the first
/// value of their group are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct SumMultiset {
    mu: u32,
    t: f64,
    values: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
    merge_tol: f64,
    /// Largest distance between a group's first value and a merged member.
    max_spread: f64,
    source_hash: String,
    synthetic: bool,
}

impl SumMultiset {
    pub fn mu(&self) -> u32 {
        self.mu
    }
    pub fn t(&self) -> f64 {
        self.t
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
    /// |𝔷_μ(T)|.
    pub fn total(&self) -> u64 {
        self.total
    }
    pub fn merge_tol(&self) -> f64 {
        self.merge_tol
    }
    pub fn max_spread(&self) -> f64 {
        self.max_spread
    }
    pub fn source_hash(&self) -> &str {
        &self.source_hash
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Text format: '#' header, then "sum count" lines.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# mu: {}", self.mu)?;
        writeln!(w, "# T: {}", self.t)?;
        writeln!(w, "# merge_tol: {:e}", self.merge_tol)?;
        writeln!(w, "# source: {}", self.source_hash)?;
        for (v, c) in self.values.iter().zip(&self.counts) {
            writeln!(w, "{v} {c}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Self> {
        let mut mu = None;
        let mut t = None;
        let mut merge_tol = 0.0;
        let mut source = String::new();
        let mut values = Vec::new();
        let mut counts = Vec::new();
        for (i, line) in r.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                text: e.to_string(),
            })?;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            let bad = || Error::Parse {
                line: line_no,
                text: s.to_string(),
            };
            if let Some(h) = s.strip_prefix('#') {
                let (k, v) = h.split_once(':').ok_or_else(bad)?;
                let v = v.trim();
                match k.trim() {
                    "mu" => mu = Some(v.parse().map_err(|_| bad())?),
                    "T" => t = Some(v.parse().map_err(|_| bad())?),
                    "merge_tol" => merge_tol = v.parse().map_err(|_| bad())?,
                    "source" => source = v.to_string(),
                    _ => {}
                }
                continue;
            }
            let (a, b) = s.split_once(char::is_whitespace).ok_or_else(bad)?;
            let v: f64 = a.parse().map_err(|_| bad())?;
            let c: u64 = b.trim().parse().map_err(|_| bad())?;
            if let Some(&p) = values.last() {
                if v <= p {
                    return Err(Error::Monotonicity {
                        line: line_no,
                        value: v,
                        previous: p,
                    });
                }
            }
            values.push(v);
            counts.push(c);
        }
        let mu = mu.ok_or(Error::EmptyInput)?;
        let t = t.ok_or(Error::EmptyInput)?;
        Ok(Self {
            mu,
            t,
            total: counts.iter().sum(),
            values,
            counts,
            merge_tol,
            max_spread: 0.0,
            synthetic: source.starts_with("synthetic"),
            source_hash: source,
        })
    }

    /// Fixed-width binning of the sums.
    pub fn to_histogram(&self, bin_width: f64) -> Result<SumHistogram> {
        let mut h = SumHistogram::empty(self.mu, self.t, bin_width)?;
        for (&v, &c) in self.values.iter().zip(&self.counts) {
            h.add(v, c);
        }
        Ok(h)
    }
}

fn source_tag(catalog: &ZeroCatalog) -> String {
    let mut h = Sha256::new();
    h.update(catalog.fingerprint().as_bytes());
    let d: String = h.finalize().iter().take(8).map(|b| format!("{b:02x}")).collect();
    if catalog.source().starts_with("synthetic") {
        format!("synthetic:{d}")
    } else {
        d
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

struct Level {
    values: Vec<f64>,
    counts: Vec<u64>,
    max_spread: f64,
    tuples: u64,
}

fn merge_sorted_stream(
    stream: impl Iterator<Item = (f64, u64)>,
    merge_tol: f64,
    budget: usize,
) -> Result<Level> {
    let mut values: Vec<f64> = Vec::new();
    let mut counts: Vec<u64> = Vec::new();
    let mut max_spread: f64 = 0.0;
    let mut tuples = 0u64;
    for (v, c) in stream {
        tuples += c;
        match values.last() {
            Some(&first) if v - first <= merge_tol => {
                *counts.last_mut().expect("parallel vectors") += c;
                max_spread = max_spread.max(v - first);
            }
            _ => {
                if values.len() >= budget {
                    return Err(Error::MemoryBudget { budget });
                }
                values.push(v);
                counts.push(c);
            }
        }
    }
    Ok(Level {
        values,
        counts,
        max_spread,
        tuples,
    })
}

fn next_level(prev: &Level, g: &[f64], t: f64, merge_tol: f64, budget: usize) -> Result<Level> {
    // One sorted stream per ordinate γ_j: prev.values[i] + γ_j, i ascending.
    let mut heap = BinaryHeap::new();
    for (j, &gj) in g.iter().enumerate() {
        if let Some(&v0) = prev.values.first() {
            let s = v0 + gj;
            if s <= t {
                heap.push(Reverse((Key(s), j, 0usize)));
            }
        }
    }
    let stream = std::iter::from_fn(|| {
        let Reverse((Key(s), j, i)) = heap.pop()?;
        let c = prev.counts[i];
        if i + 1 < prev.values.len() {
            let n = prev.values[i + 1] + g[j];
            if n <= t {
                heap.push(Reverse((Key(n), j, i + 1)));
            }
        }
        Some((s, c))
    });
    let mut level = merge_sorted_stream(stream, merge_tol, budget)?;
    level.max_spread = level.max_spread.max(prev.max_spread);
    Ok(level)
}

fn level_one(g: &[f64], merge_tol: f64, budget: usize) -> Result<Level> {
    merge_sorted_stream(g.iter().map(|&v| (v, 1)), merge_tol, budget)
}

/// 𝔷_μ(T) built level by level as the tolerance-merged convolution of
/// 𝔷_{μ−1} with the ordinates.
pub fn build_sum_multiset(
    catalog: &ZeroCatalog,
    mu: u32,
    t: f64,
    merge_tol: f64,
) -> Result<SumMultiset> {
    build_sum_multiset_with_budget(catalog, mu, t, merge_tol, DEFAULT_BUDGET)
}

pub fn build_sum_multiset_with_budget(
    catalog: &ZeroCatalog,
    mu: u32,
    t: f64,
    merge_tol: f64,
    budget: usize,
) -> Result<SumMultiset> {
    if !(1..=4).contains(&mu) {
        return Err(Error::InvalidParameter(format!(
            "materialized multisets need 1 ≤ mu ≤ 4, got {mu}; use build_sum_histogram"
        )));
    }
    if !(merge_tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("merge_tol must be non-negative, got {merge_tol}")));
    }
    let g = catalog.up_to(t)?;
    let mut level = level_one(g, merge_tol, budget)?;
    for _ in 1..mu {
        level = next_level(&level, g, t, merge_tol, budget)?;
    }
    Ok(SumMultiset {
        mu,
        t,
        total: level.tuples,
        values: level.values,
        counts: level.counts,
        merge_tol,
        max_spread: level.max_spread,
        source_hash: source_tag(catalog),
        synthetic: catalog.source().starts_with("synthetic"),
    })
}

/// Counts of sums in bins [i h, (i+1) h).
#[derive(Debug, Clone, PartialEq)]
pub struct SumHistogram {
    pub mu: u32,
    pub t: f64,
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl SumHistogram {
    fn empty(mu: u32, t: f64, bin_width: f64) -> Result<Self> {
        if !(bin_width > 0.0) {
            return Err(Error::InvalidParameter(format!("bin width must be positive, got {bin_width}")));
        }
        let n = (t / bin_width).floor() as usize + 1;
        if n > 1 << 26 {
            return Err(Error::MemoryBudget { budget: 1 << 26 });
        }
        Ok(Self {
            mu,
            t,
            bin_width,
            counts: vec![0; n],
            total: 0,
        })
    }

    fn add(&mut self, v: f64, c: u64) {
        let b = ((v / self.bin_width).floor() as usize).min(self.counts.len() - 1);
        self.counts[b] += c;
        self.total += c;
    }

    /// Σ over bins of count², an upper bound for Δ_μ at this resolution.
    pub fn binned_delta(&self) -> u128 {
        self.counts.iter().map(|&c| (c as u128) * (c as u128)).sum()
    }
}

/// Default histogram resolution: 100·merge_tol, coarsened so that at most
/// 2²¹ bins cover (0, T].
pub fn default_bin_width(t: f64, merge_tol: f64) -> f64 {
    (100.0 * merge_tol).max(t / (1u64 << 21) as f64)
}

/// Streams 𝔷_μ(T) into a histogram; the (μ−1)-level multiset is
/// materialized, the last convolution step is not.
pub fn build_sum_histogram(
    catalog: &ZeroCatalog,
    mu: u32,
    t: f64,
    merge_tol: f64,
    bin_width: f64,
) -> Result<SumHistogram> {
    if mu == 0 {
        return Err(Error::InvalidParameter("mu must be positive".into()));
    }
    let g = catalog.up_to(t)?;
    let mut hist = SumHistogram::empty(mu, t, bin_width)?;
    if mu == 1 {
        for &v in g {
            hist.add(v, 1);
        }
        return Ok(hist);
    }
    let mut level = level_one(g, merge_tol, DEFAULT_BUDGET)?;
    for _ in 1..mu - 1 {
        level = next_level(&level, g, t, merge_tol, DEFAULT_BUDGET)?;
    }
    for &gj in g {
        for (&v, &c) in level.values.iter().zip(&level.counts) {
            let s = v + gj;
            if s > t {
                break;
            }
            hist.add(s, c);
        }
    }
    Ok(hist)
}

/// T^μ L^μ / ((2π)^μ μ!).
pub fn cardinality_prediction(mu: u32, t: f64) -> f64 {
    let l = t.ln();
    let fact: f64 = (1..=mu).map(f64::from).product();
    (t * l / (2.0 * PI)).powi(mu as i32) / fact
}

/// |𝔷_μ(T)| from the smooth density N₀′(u) = log(u/2π)/2π, by recursive
/// numerical convolution.
pub fn cardinality_smooth_model(mu: u32, t: f64) -> f64 {
    let n = 4000usize;
    let h = t / n as f64;
    let density = |u: f64| {
        if u <= 2.0 * PI {
            0.0
        } else {
            (u / (2.0 * PI)).ln() / (2.0 * PI)
        }
    };
    let n0 = |u: f64| {
        if u <= 2.0 * PI * std::f64::consts::E {
            0.0
        } else {
            crate::zeros::counting_main_term(u) + 7.0 / 8.0
        }
    };
    let first_zero = 14.134725;
    // F_1(u) = smooth count, floored at the first zero.
    let mut f: Vec<f64> = (0..=n)
        .map(|i| {
            let u = i as f64 * h;
            if u < first_zero {
                0.0
            } else {
                n0(u)
            }
        })
        .collect();
    for _ in 1..mu {
        let mut next = vec![0.0; n + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            // ∫_{γ₁}^{u} F(u − v) dN₀(v), midpoint rule
            let mut acc = CompensatedSum::new();
            for j in 0..i {
                let v = (j as f64 + 0.5) * h;
                if v < first_zero {
                    continue;
                }
                let idx = (i - j) as f64 - 0.5;
                let lo = idx.floor() as usize;
                let frac = idx - lo as f64;
                let fu = f[lo] * (1.0 - frac) + f[(lo + 1).min(n)] * frac;
                acc.add(fu * density(v) * h);
            }
            *slot = acc.value();
        }
        f = next;
    }
    f[n]
}

/// |𝔷_μ(T)| against T^μL^μ/((2π)^μ μ!), error scale log L / L.
pub fn check_cardinality(ms: &SumMultiset, tolerance: f64) -> AsymptoticReport {
    let pred = cardinality_prediction(ms.mu, ms.t);
    let l = ms.t.ln();
    let mut r = AsymptoticReport::new(
        format!("|Z_{}({})|", ms.mu, ms.t),
        ms.total as f64,
        pred,
        tolerance,
        Comparison::Relative,
    )
    .with_error_scale(l.ln() / l)
    .with_provenance(format!("source={} merge_tol={:e}", ms.source_hash, ms.merge_tol));
    let mut notes = format!(
        "smooth-model count {:.6e}",
        cardinality_smooth_model(ms.mu, ms.t)
    );
    if ms.mu == 1 {
        notes.push_str(&format!(
            "; refined N(T) main term {:.4}",
            crate::zeros::counting_main_term(ms.t)
        ));
    }
    if ms.synthetic || ms.t < 14.0 * ms.mu as f64 {
        notes.push_str("; non-asymptotic input");
    }
    r.notes = notes;
    r
}

/// Σ count · (Σγ)^k.
pub fn moment(ms: &SumMultiset, k: i32) -> Result<f64> {
    if (ms.mu as i32) + k < 0 {
        return Err(Error::Range(format!("mu + k must be non-negative, got {}", ms.mu as i32 + k)));
    }
    let mut acc = CompensatedSum::new();
    for (&v, &c) in ms.values.iter().zip(&ms.counts) {
        acc.add(c as f64 * v.powi(k));
    }
    Ok(acc.value())
}

/// Main term of the k-th moment of ordinate sums.
pub fn moment_prediction(mu: u32, k: i32, t: f64) -> Result<f64> {
    let m = mu as i32;
    if m + k < 0 {
        return Err(Error::Range(format!("mu + k must be non-negative, got {}", m + k)));
    }
    let l = t.ln();
    let fact: f64 = (1..=mu).map(f64::from).product();
    let tp = (2.0 * PI).powi(m);
    if m + k == 0 {
        Ok(mu as f64 * l.powi(m + 1) / (tp * fact * (mu + 1) as f64))
    } else {
        Ok(mu as f64 * t.powi(m + k) * l.powi(m) / (tp * (m + k) as f64 * fact))
    }
}

/// Δ_μ(T) with a flag raised when groups are wide enough that halving the
/// merge tolerance could split them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DeltaResult {
    pub value: u128,
    pub tolerance_sensitive: bool,
}

pub fn delta_mu(ms: &SumMultiset) -> DeltaResult {
    let value = ms.counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let tolerance_sensitive = ms.max_spread > 0.5 * ms.merge_tol;
    if tolerance_sensitive {
        log::warn!(
            "Δ_{}: merged group spread {:e} exceeds half the merge tolerance {:e}",
            ms.mu,
            ms.max_spread,
            ms.merge_tol
        );
    }
    DeltaResult {
        value,
        tolerance_sensitive,
    }
}

/// (2π/(T log T))^{2μ−1}.
pub fn g_normalization(mu: u32, t: f64) -> f64 {
    (2.0 * PI / (t * t.ln())).powi(2 * mu as i32 - 1)
}

fn max_mass_per_unit(values: &[f64], counts: &[u64]) -> f64 {
    let mut best = 0u64;
    let mut lo = 0;
    let mut mass = 0u64;
    for hi in 0..values.len() {
        mass += counts[hi];
        while values[hi] - values[lo] >= 1.0 {
            mass -= counts[lo];
            lo += 1;
        }
        best = best.max(mass);
    }
    best as f64
}

/// G_μ(x, T) with Montgomery's weight over entry pairs within `window`.
pub fn g_mu(ms: &SumMultiset, x: f64, t: f64, window: f64) -> Result<CorrelationEstimate> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be at least 1, got {x}")));
    }
    if (t - ms.t).abs() > 0.0 {
        return Err(Error::InvalidParameter(format!(
            "multiset was built for T = {}, not {t}",
            ms.t
        )));
    }
    let mean_gap_n = ms.len();
    check_window(window, t, mean_gap_n)?;
    let p = WeightParams::montgomery();
    let sweep = pair_sweep(&ms.values, Some(&ms.counts), montgomery_weight, x.ln(), window);
    Ok(estimate(
        p,
        x,
        t,
        window,
        sweep,
        g_normalization(ms.mu, t),
        ms.total as f64,
        max_mass_per_unit(&ms.values, &ms.counts),
        precision_hint_of(ms),
    ))
}

fn precision_hint_of(ms: &SumMultiset) -> f64 {
    // merge_tol = 10 μ · hint by default; a merged sum is uncertain by its
    // spread on top of μ ordinate errors.
    ms.merge_tol / 10.0 + ms.max_spread
}

/// G_μ from binned counts: the lag autocorrelation R(d) = Σ_b c_b c_{b+d}
/// (via FFT) summed against w(dh) cos(dh log x) over all lags.
#[derive(Debug, Clone)]
pub struct BinnedCorrelation {
    hist_mu: u32,
    t: f64,
    h: f64,
    total: u64,
    lags: Vec<f64>,
}

impl BinnedCorrelation {
    pub fn new(hist: &SumHistogram) -> Self {
        let n = hist.counts.len();
        let size = (2 * n).next_power_of_two();
        let mut buf: Vec<Complex> = hist
            .counts
            .iter()
            .map(|&c| Complex::new(c as f64, 0.0))
            .chain(std::iter::repeat(Complex::new(0.0, 0.0)))
            .take(size)
            .collect();
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(size).process(&mut buf);
        for z in buf.iter_mut() {
            *z = Complex::new(z.norm_sqr(), 0.0);
        }
        planner.plan_fft_inverse(size).process(&mut buf);
        let lags = buf[..n]
            .iter()
            .map(|z| (z.re / size as f64).round().max(0.0))
            .collect();
        Self {
            hist_mu: hist.mu,
            t: hist.t,
            h: hist.bin_width,
            total: hist.total,
            lags,
        }
    }

    /// R(d) for d = 0, 1, …
    pub fn lags(&self) -> &[f64] {
        &self.lags
    }

    /// G_μ(x, T); `tail_bound` carries the binning error bound.
    pub fn g(&self, x: f64) -> Result<CorrelationEstimate> {
        if !(x >= 1.0) || !x.is_finite() {
            return Err(Error::InvalidParameter(format!("x must be at least 1, got {x}")));
        }
        let lx = x.ln();
        let mut acc = CompensatedSum::new();
        for (d, &r) in self.lags.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            let u = d as f64 * self.h;
            let m = if d == 0 { 1.0 } else { 2.0 };
            acc.add(m * r * montgomery_weight(u) * (u * lx).cos());
        }
        let norm = g_normalization(self.hist_mu, self.t);
        let p = WeightParams::montgomery();
        // Each pair's true difference is within h of its lag.
        let pairs = (self.total as f64).powi(2);
        let binning = norm * pairs * self.h * (p.derivative_bound() + lx);
        Ok(CorrelationEstimate {
            params: p,
            x,
            alpha: lx / self.t.ln(),
            height: self.t,
            value: norm * acc.value(),
            imag_residual: 0.0,
            window: f64::INFINITY,
            tail_bound: binning,
            phase_error: 0.0,
            pairs: pairs as u64,
        })
    }
}

fn log_log_ratio(t: f64) -> f64 {
    t.ln().ln() / t.ln()
}

/// Theorem-2 main term without range checks.
pub fn theorem2_main_term(mu: u32, alpha: f64, t: f64) -> f64 {
    let l = t.ln();
    match mu {
        2 => (l / t.powf(2.0 * alpha)).max(4.0 * alpha.powi(3) / (3.0 * t.powf(alpha))),
        3 => l / (4.0 * t.powf(2.0 * alpha)),
        _ => {
            let f: f64 = (1..mu).map(f64::from).product();
            l / (f * f * t.powf(2.0 * alpha))
        }
    }
}

/// Theorem-2 main term, refusing α outside each branch's range.
pub fn theorem2_prediction(mu: u32, alpha: f64, t: f64) -> Result<f64> {
    if mu < 2 {
        return Err(Error::Range(format!("Theorem-2 branches need mu ≥ 2, got {mu}")));
    }
    if !(t >= 2.0) {
        return Err(Error::Range(format!("T must be at least 2, got {t}")));
    }
    let upper = match mu {
        2 => 1.0 - 3.0 * log_log_ratio(t),
        3 => f64::INFINITY,
        _ => 0.5 - log_log_ratio(t),
    };
    if !(alpha >= 0.0 && alpha <= upper) {
        return Err(Error::Range(format!(
            "alpha = {alpha} outside [0, {upper:.4}] for mu = {mu} at T = {t}"
        )));
    }
    Ok(theorem2_main_term(mu, alpha, t))
}

/// Theorem-3 envelope with unit implied constant; (log T)^{O(1)} is taken as
/// log T.
pub fn theorem3_bound(mu: u32, alpha: f64, t: f64) -> Result<f64> {
    if mu < 2 {
        return Err(Error::Range(format!("Theorem-3 envelopes need mu ≥ 2, got {mu}")));
    }
    if !(alpha >= 0.0) {
        return Err(Error::Range(format!("alpha must be non-negative, got {alpha}")));
    }
    let l = t.ln();
    let base = l * l / t;
    let extra = if alpha <= 1.0 {
        if mu == 2 {
            l / t.powf(2.0 * alpha) + alpha.powi(3) / t.powf(alpha)
        } else {
            l / t.powf(2.0 * alpha)
        }
    } else {
        match mu {
            2 => t.powf(2.0 * alpha - 3.0) * l.ln(),
            3 => t.powf(2.0 * alpha - 3.5) * l.ln(),
            _ => t.powf(2.0 * alpha - mu as f64 / 2.0 - 2.0) * l,
        }
    };
    Ok(base + extra)
}

/// N_μ(T, u) = 𝒩_T^{1−2μ}·#{ordered pairs with 0 < Σγ − Σγ′ ≤ 2πu/log T}.
pub fn close_pair_count(ms: &SumMultiset, u: f64) -> f64 {
    if !(u > 0.0) {
        return 0.0;
    }
    let delta = 2.0 * PI * u / ms.t.ln();
    let mut prefix = Vec::with_capacity(ms.len() + 1);
    prefix.push(0u128);
    for &c in &ms.counts {
        prefix.push(prefix.last().expect("non-empty") + c as u128);
    }
    let mut pairs = 0u128;
    for (i, &v) in ms.values.iter().enumerate() {
        let lo = ms.values.partition_point(|&s| s < v - delta);
        pairs += ms.counts[i] as u128 * (prefix[i] - prefix[lo]);
    }
    let nt = crate::n_t(ms.t);
    pairs as f64 * nt.powi(1 - 2 * ms.mu as i32)
}

/// Exact Stieltjes sum and its main term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactAndMain {
    pub exact: f64,
    pub main: f64,
}

impl ExactAndMain {
    pub fn ratio(&self) -> f64 {
        self.exact / self.main
    }
}

/// Σ_{14 < γ ≤ T−14} γ^a (T−γ)^b log^c γ log^d (T−γ) with main term
/// a! b! T^{a+b+1} L^{c+d+1} / (2π (a+b+1)!).
pub fn stieltjes_weighted_integral(
    catalog: &ZeroCatalog,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    t: f64,
) -> Result<ExactAndMain> {
    if !(t >= 28.0) {
        return Err(Error::Range(format!("T must be at least 28, got {t}")));
    }
    let g = catalog.up_to(t)?;
    let mut acc = CompensatedSum::new();
    for &u in g {
        if u <= 14.0 || u > t - 14.0 {
            continue;
        }
        let v = t - u;
        acc.add(
            u.powi(a as i32) * v.powi(b as i32) * u.ln().powi(c as i32) * v.ln().powi(d as i32),
        );
    }
    let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
    let l = t.ln();
    let main = fact(a) * fact(b) * t.powi((a + b + 1) as i32) * l.powi((c + d + 1) as i32)
        / (2.0 * PI * fact(a + b + 1));
    Ok(ExactAndMain {
        exact: acc.value(),
        main,
    })
}

/// Σ count · log(|t − Σγ| + 10) with main term T^μ L^μ L♮/((2π)^μ μ!).
pub fn log_tau_sum(ms: &SumMultiset, t: f64) -> ExactAndMain {
    let mut acc = CompensatedSum::new();
    for (&v, &c) in ms.values.iter().zip(&ms.counts) {
        acc.add(c as f64 * ((t - v).abs() + 10.0).ln());
    }
    let l_nat = ms.t.max(t.abs() + 10.0).ln();
    ExactAndMain {
        exact: acc.value(),
        main: cardinality_prediction(ms.mu, ms.t) * l_nat,
    }
}

/// Independent count of |𝔷_μ(T)| from total_μ(T) = Σ_γ total_{μ−1}(T − γ).
pub fn total_by_recursion(catalog: &ZeroCatalog, mu: u32, t: f64) -> Result<u64> {
    let g = catalog.up_to(t)?;
    fn rec(g: &[f64], mu: u32, t: f64) -> u64 {
        let n = g.partition_point(|&v| v <= t);
        if mu == 1 {
            return n as u64;
        }
        g[..n].iter().map(|&v| rec(g, mu - 1, t - v)).sum()
    }
    Ok(rec(g, mu, t))
}

/// Weighted sweep helper for general weights, used by consistency checks.
pub fn g_general(ms: &SumMultiset, p: WeightParams, x: f64, window: f64) -> CorrelationEstimate {
    let sweep = pair_sweep(&ms.values, Some(&ms.counts), |d| general_weight(p, d), x.ln(), window);
    estimate(
        p,
        x,
        ms.t,
        window,
        sweep,
        g_normalization(ms.mu, ms.t),
        ms.total as f64,
        max_mass_per_unit(&ms.values, &ms.counts),
        precision_hint_of(ms),
    )
}
