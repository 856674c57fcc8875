//! F_{ν,k}(x, T) and kernel-convolution sums over pairs of ordinates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::simpson;
use crate::report::{AsymptoticReport, Comparison};
use crate::summation::{ordered_par_reduce, CompensatedSum, ComplexSum};
use crate::weights::{general_weight, WeightParams};
use crate::zeros::ZeroCatalog;
use crate::Complex;

pub const DEFAULT_WINDOW: f64 = 50.0;

/// A measured pair statistic with its truncation and error diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationEstimate {
    pub params: WeightParams,
    pub x: f64,
    pub alpha: f64,
    #[serde(rename = "T")]
    pub height: f64,
    pub value: f64,
    pub imag_residual: f64,
    pub window: f64,
    pub tail_bound: f64,
    pub phase_error: f64,
    /// Ordered pairs inside the window.
    pub pairs: u64,
}

/// Raw output of a windowed sweep over ordered pairs.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Sweep {
    pub sum: Complex,
    /// Σ c_i c_j |f(s_i − s_j)| over the pairs inside the window.
    pub abs_weight: f64,
    pub pairs: u64,
}

#[derive(Default)]
struct SweepAcc {
    sum: ComplexSum,
    abs: CompensatedSum,
    pairs: u64,
}

/// Σ_{|s_i − s_j| ≤ window} c_i c_j f(s_i − s_j) e^{i (s_i − s_j) log_x} over
/// ordered pairs of the sorted `values`, reduced in fixed index order.
pub(crate) fn pair_sweep<F>(
    values: &[f64],
    counts: Option<&[u64]>,
    f: F,
    log_x: f64,
    window: f64,
) -> Sweep
where
    F: Fn(f64) -> f64 + Sync,
{
    let count = |i: usize| counts.map_or(1.0, |c| c[i] as f64);
    let acc = ordered_par_reduce(
        values.len(),
        |range, acc: &mut SweepAcc| {
            let mut lo = values.partition_point(|&v| v < values[range.start] - window);
            for i in range {
                let si = values[i];
                while values[lo] < si - window {
                    lo += 1;
                }
                let ci = count(i);
                let mut j = lo;
                while j < values.len() && values[j] - si <= window {
                    let d = si - values[j];
                    let w = ci * count(j) * f(d);
                    if log_x == 0.0 {
                        acc.sum.add(Complex::new(w, 0.0));
                    } else {
                        let (s, c) = (d * log_x).sin_cos();
                        acc.sum.add(Complex::new(w * c, w * s));
                    }
                    acc.abs.add(w.abs());
                    acc.pairs += 1;
                    j += 1;
                }
            }
        },
        |a, b| {
            a.sum.merge(&b.sum);
            a.abs.merge(&b.abs);
            a.pairs += b.pairs;
        },
    );
    Sweep {
        sum: acc.sum.value(),
        abs_weight: acc.abs.value(),
        pairs: acc.pairs,
    }
}

/// Bound on Σ c_i c_j |w(s_i − s_j)| over pairs farther apart than `window`,
/// given `total` = Σ c_i and at most `per_unit` weight in any unit interval.
pub(crate) fn weight_tail_bound(p: WeightParams, total: f64, per_unit: f64, window: f64) -> f64 {
    if !window.is_finite() {
        return 0.0;
    }
    let e = 2 * p.k() as i32 + 2;
    let w = window.max(1.0);
    // Σ_{m ≥ W} m^{−e} ≤ 2W^{−e} + W^{1−e}/(e−1), both sides of each point.
    let sum = 2.0 * w.powi(-e) + w.powi(1 - e) / (e - 1) as f64;
    2.0 * total * per_unit * p.decay_constant() * sum
}

/// 2π/(T log T).
pub fn normalization(t: f64) -> f64 {
    2.0 * PI / (t * t.ln())
}

/// F_{ν,k}(x, T) summed over pairs with |γ − γ′| ≤ window.
pub fn f_general(
    catalog: &ZeroCatalog,
    p: WeightParams,
    x: f64,
    t: f64,
    window: f64,
) -> Result<CorrelationEstimate> {
    if !(t >= 2.0) {
        return Err(Error::InvalidParameter(format!("T must be at least 2, got {t}")));
    }
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be at least 1, got {x}")));
    }
    let g = catalog.up_to(t)?;
    check_window(window, t, g.len())?;
    let log_x = x.ln();
    let sweep = pair_sweep(g, None, |d| general_weight(p, d), log_x, window);
    let per_unit = crate::zeros::ZeroCatalog::new(g.to_vec(), t, "synthetic:slice", 0.0)
        .map(|c| c.max_count_per_unit())
        .unwrap_or(g.len()) as f64;
    Ok(estimate(
        p,
        x,
        t,
        window,
        sweep,
        normalization(t),
        g.len() as f64,
        per_unit,
        catalog.precision_hint(),
    ))
}

pub(crate) fn check_window(window: f64, t: f64, n: usize) -> Result<()> {
    let mean_gap = if n > 0 { t / n as f64 } else { t };
    if !(window >= mean_gap) {
        return Err(Error::DegenerateWindow { window, mean_gap });
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn estimate(
    p: WeightParams,
    x: f64,
    t: f64,
    window: f64,
    sweep: Sweep,
    norm: f64,
    total: f64,
    per_unit: f64,
    precision_hint: f64,
) -> CorrelationEstimate {
    let log_x = x.ln();
    CorrelationEstimate {
        params: p,
        x,
        alpha: log_x / t.ln(),
        height: t,
        value: norm * sweep.sum.re,
        imag_residual: norm * sweep.sum.im,
        window,
        tail_bound: norm * weight_tail_bound(p, total, per_unit, window),
        phase_error: norm * sweep.abs_weight * 2.0 * precision_hint * log_x,
        pairs: sweep.pairs,
    }
}

/// Montgomery's F(α, T): (ν, k) = (1, 0), x = T^α, default window.
pub fn f_montgomery(catalog: &ZeroCatalog, alpha: f64, t: f64) -> Result<CorrelationEstimate> {
    f_general(
        catalog,
        WeightParams::montgomery(),
        t.powf(alpha),
        t,
        DEFAULT_WINDOW,
    )
}

/// α^{2k}(2ν log T)^{2k+1}/(2(2k)! T^{2να}) + α.
pub fn theorem1_prediction(p: WeightParams, alpha: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Range(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let k = p.k() as i32;
    let fact: f64 = (1..=2 * k).map(f64::from).product();
    let l = t.ln();
    let spike = alpha.powi(2 * k) * (2.0 * p.nu() * l).powi(2 * k + 1)
        / (2.0 * fact * t.powf(2.0 * p.nu() * alpha));
    Ok(spike + alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelKind {
    Fejer,
    DirichletSinc,
    Triangle,
}

impl std::str::FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fejer" => Ok(Self::Fejer),
            "dirichlet-sinc" | "sinc" => Ok(Self::DirichletSinc),
            "triangle" => Ok(Self::Triangle),
            _ => Err(Error::InvalidParameter(format!("unknown kernel '{s}'"))),
        }
    }
}

/// r and r̂(α) = ∫ r(u) e^{−2πiαu} du.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPair {
    pub kind: KernelKind,
    pub lambda: f64,
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

impl KernelPair {
    pub fn new(kind: KernelKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "kernel parameter must lie in (0, 1), got {lambda}"
            )));
        }
        Ok(Self { kind, lambda })
    }

    pub fn r(&self, u: f64) -> f64 {
        let l = self.lambda;
        match self.kind {
            KernelKind::Fejer => sinc(PI * l * u).powi(2),
            KernelKind::DirichletSinc => sinc(2.0 * PI * l * u),
            KernelKind::Triangle => (1.0 - u.abs() / l).max(0.0),
        }
    }

    pub fn r_hat(&self, alpha: f64) -> f64 {
        let l = self.lambda;
        match self.kind {
            KernelKind::Fejer => (1.0 - alpha.abs() / l).max(0.0) / l,
            KernelKind::DirichletSinc => {
                if alpha.abs() < l {
                    0.5 / l
                } else if alpha.abs() == l {
                    0.25 / l
                } else {
                    0.0
                }
            }
            KernelKind::Triangle => l * sinc(PI * alpha * l).powi(2),
        }
    }

    /// Half-width of the support of r̂, if compact.
    pub fn r_hat_support(&self) -> Option<f64> {
        match self.kind {
            KernelKind::Fejer | KernelKind::DirichletSinc => Some(self.lambda),
            KernelKind::Triangle => None,
        }
    }

    /// Limit of the normalized sum, ∫(δ + min(|α|, 1)) r̂.
    pub fn predicted_limit(&self) -> Option<f64> {
        let l = self.lambda;
        match self.kind {
            KernelKind::Fejer => Some(1.0 / l + l / 3.0),
            KernelKind::DirichletSinc => Some(0.5 / l + l / 2.0),
            KernelKind::Triangle => None,
        }
    }
}

/// Σ r((γ − γ′) log T/2π) w(γ − γ′) with its truncation bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvolutionSum {
    pub value: f64,
    pub tail_bound: f64,
    pub window: f64,
}

pub fn kernel_convolution_sum(
    catalog: &ZeroCatalog,
    p: WeightParams,
    kernel: KernelPair,
    t: f64,
    window: f64,
) -> Result<ConvolutionSum> {
    let g = catalog.up_to(t)?;
    check_window(window, t, g.len())?;
    let scale = t.ln() / (2.0 * PI);
    let sweep = pair_sweep(g, None, |d| kernel.r(d * scale) * general_weight(p, d), 0.0, window);
    let per_unit = ZeroCatalog::new(g.to_vec(), t, "synthetic:slice", 0.0)
        .map(|c| c.max_count_per_unit())
        .unwrap_or(g.len()) as f64;
    // |r| ≤ 1 for all three kernels.
    let tail_bound = weight_tail_bound(p, g.len() as f64, per_unit, window);
    Ok(ConvolutionSum {
        value: sweep.sum.re,
        tail_bound,
        window,
    })
}

/// Compares the direct kernel sum with (T log T/2π)∫F(α) r̂(α) dα, F measured
/// on the uniform grid `0, h, 2h, …` (an odd number of points) and extended
/// evenly. Notes carry the predicted limit.
pub fn convolution_consistency(
    catalog: &ZeroCatalog,
    p: WeightParams,
    kernel: KernelPair,
    t: f64,
    alpha_grid: &[f64],
    tolerance: f64,
) -> Result<AsymptoticReport> {
    let n = alpha_grid.len();
    if n < 5 || n % 2 == 0 {
        return Err(Error::InvalidParameter(
            "alpha grid needs an odd number (≥ 5) of uniformly spaced points".into(),
        ));
    }
    let h = alpha_grid[1] - alpha_grid[0];
    if alpha_grid[0] != 0.0
        || alpha_grid
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.max(1.0))
    {
        return Err(Error::InvalidParameter(
            "alpha grid must start at 0 with uniform spacing".into(),
        ));
    }
    let top = alpha_grid[n - 1];
    if let Some(s) = kernel.r_hat_support() {
        if top < s {
            return Err(Error::InvalidParameter(format!(
                "alpha grid ends at {top}, before the kernel support {s}"
            )));
        }
    }
    let lhs = kernel_convolution_sum(catalog, p, kernel, t, DEFAULT_WINDOW)?;
    let lt = t.ln();
    let f: Vec<f64> = alpha_grid
        .iter()
        .map(|&a| f_general(catalog, p, t.powf(a), t, DEFAULT_WINDOW).map(|e| e.value))
        .collect::<Result<_>>()?;
    let prod: Vec<f64> = alpha_grid
        .iter()
        .zip(&f)
        .map(|(&a, &v)| v * kernel.r_hat(a))
        .collect();
    let fine = 2.0 * simpson(&prod, h)?;
    // Simpson on every other point estimates the discretization error.
    let coarse_pts: Vec<f64> = prod.iter().step_by(2).copied().collect();
    let coarse = if coarse_pts.len() >= 3 && coarse_pts.len() % 2 == 1 {
        2.0 * simpson(&coarse_pts, 2.0 * h)?
    } else {
        // trapezoid on the fine grid
        let mut acc = CompensatedSum::new();
        for w in prod.windows(2) {
            acc.add(0.5 * h * (w[0] + w[1]));
        }
        2.0 * acc.value()
    };
    let mut estimate = (fine - coarse).abs();
    if kernel.r_hat_support().is_none() {
        // |F| ≤ F at x = 1 and ∫_{A}^∞ λ sinc²(παλ) ≤ 1/(π²λA).
        let f0 = f_general(catalog, p, 1.0, t, DEFAULT_WINDOW)?.value.abs();
        estimate += 2.0 * f0 / (PI * PI * kernel.lambda * top);
    }
    if estimate > 0.1 * fine.abs() {
        return Err(Error::GridTooCoarse {
            estimate,
            value: fine,
        });
    }
    let scale = t * lt / (2.0 * PI);
    let rhs = scale * fine;
    let mut report = AsymptoticReport::new(
        format!("convolution {:?} lambda={} nu={} k={}", kernel.kind, kernel.lambda, p.nu(), p.k()),
        lhs.value,
        rhs,
        tolerance,
        Comparison::Relative,
    )
    .with_error_scale(scale * estimate + lhs.tail_bound);
    if let Some(limit) = kernel.predicted_limit() {
        report.notes = format!(
            "predicted limit {:.6e}; lhs/limit = {:.4}",
            limit * scale,
            lhs.value / (limit * scale)
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(ords: Vec<f64>, t: f64) -> ZeroCatalog {
        ZeroCatalog::new(ords, t, "synthetic:test", 0.0).unwrap()
    }

    #[test]
    fn two_point_enumeration() {
        let c = toy(vec![1.0, 2.0], 10.0);
        let e = f_general(&c, WeightParams::montgomery(), 1.0, 10.0, f64::INFINITY).unwrap();
        let expected = 2.0 * PI / (10.0 * 10f64.ln()) * (2.0 + 2.0 * 0.8);
        assert!((e.value - expected).abs() < 1e-15);
        assert_eq!(e.pairs, 4);
        assert_eq!(e.tail_bound, 0.0);
    }

    #[test]
    fn single_zero_is_diagonal() {
        let c = toy(vec![3.0], 10.0);
        for &x in &[1.0, 2.0, 1e3] {
            let e = f_general(&c, WeightParams::new(1.5, 2).unwrap(), x, 10.0, f64::INFINITY)
                .unwrap();
            assert!((e.value - normalization(10.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn montgomery_wrapper_at_zero() {
        let c = toy(vec![1.0, 2.0, 4.5, 7.0], 10.0);
        let a = f_montgomery(&c, 0.0, 10.0).unwrap();
        let b = f_general(&c, WeightParams::montgomery(), 1.0, 10.0, DEFAULT_WINDOW).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn degenerate_window_rejected() {
        let c = toy(vec![1.0, 2.0, 4.5, 7.0], 10.0);
        let e = f_general(&c, WeightParams::montgomery(), 1.0, 10.0, 1.0).unwrap_err();
        assert!(matches!(e, Error::DegenerateWindow { .. }));
    }

    #[test]
    fn prediction_values() {
        let m = WeightParams::montgomery();
        let t = 10f64.exp();
        assert!((theorem1_prediction(m, 0.0, t).unwrap() - 10.0).abs() < 1e-12);
        assert_eq!(theorem1_prediction(WeightParams::new(1.0, 1).unwrap(), 0.0, 1e4).unwrap(), 0.0);
        let v = theorem1_prediction(m, 0.5, 1e4).unwrap();
        assert!((v - (0.5 + 1e4f64.ln() / 1e4)).abs() < 1e-12);
        assert!(theorem1_prediction(m, 1.5, 1e4).is_err());
    }

    #[test]
    fn kernel_pairs_are_transforms() {
        // r̂(α) = 2∫_0^∞ r(u) cos(2παu) du, checked on a long grid for the
        // compactly supported triangle, and r(0) = ∫ r̂ for all three.
        for kind in [KernelKind::Fejer, KernelKind::DirichletSinc, KernelKind::Triangle] {
            let k = KernelPair::new(kind, 0.5).unwrap();
            let total = crate::quadrature::integrate(|a| k.r_hat(a), -0.5, 0.5, 1e-12, 0.0)
                .unwrap()
                .value
                + if kind == KernelKind::Triangle {
                    2.0 * crate::quadrature::integrate(|a| k.r_hat(a), 0.5, 2000.0, 1e-10, 0.0)
                        .unwrap()
                        .value
                } else {
                    0.0
                };
            assert!((total - k.r(0.0)).abs() < 1e-3, "{kind:?} {total}");
        }
        let k = KernelPair::new(KernelKind::Triangle, 0.5).unwrap();
        for &a in &[0.0, 0.3, 1.7] {
            let q = crate::quadrature::integrate(
                |u| 2.0 * k.r(u) * (2.0 * PI * a * u).cos(),
                0.0,
                0.5,
                1e-13,
                0.0,
            )
            .unwrap();
            assert!((q.value - k.r_hat(a)).abs() < 1e-12);
        }
    }

    #[test]
    fn convolution_two_points() {
        let c = toy(vec![1.0, 2.0], 10.0);
        let k = KernelPair::new(KernelKind::Fejer, 0.5).unwrap();
        let p = WeightParams::montgomery();
        let s = kernel_convolution_sum(&c, p, k, 10.0, f64::INFINITY).unwrap();
        let u = 10f64.ln() / (2.0 * PI);
        let expected = 2.0 + 2.0 * k.r(u) * 0.8;
        assert!((s.value - expected).abs() < 1e-14);
    }
}
