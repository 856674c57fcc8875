//! Brute-force small-instance oracles, on synthetic catalogs only.
//!
//! Every comparison is reported as |library − oracle| divided by the sum of
//! the absolute values of the oracle's terms, so cancellation in the total
//! does not inflate the error.

use std::collections::BTreeMap;

use anyhow::Result;
use paircorr_core::arithmetic::phi_sum;
use paircorr_core::explicit_formula::{a_term, b_term, c_term, d_term};
use paircorr_core::ordinate_sums::{
    build_sum_histogram, build_sum_multiset, default_bin_width, delta_mu, g_mu, g_normalization,
    BinnedCorrelation,
};
use paircorr_core::pair_correlation::{f_general, kernel_convolution_sum, normalization};
use paircorr_core::special::polygamma;
use paircorr_core::weights::{general_weight, lorentzian_kernel, montgomery_weight};
use paircorr_core::zeros::synthetic_catalog;
use paircorr_core::{
    AsymptoticReport, Comparison, Complex, ComplexPoint, KernelKind, KernelPair, SyntheticKind,
    WeightParams, ZeroCatalog,
};

use crate::stanzas::errored;

const PAIR_HEIGHT: f64 = 200.0;
const MAX_PAIR_ENTRIES: usize = 200;
const TUPLE_ORDINATES: usize = 30;
const WHOLE: f64 = 1e9;
const MERGE_TOL: f64 = 2e-8;

fn report(name: String, lib: f64, oracle: f64, scale: f64, tol: f64) -> AsymptoticReport {
    let scale = if scale > 0.0 { scale } else { 1.0 };
    AsymptoticReport::new(name, (lib - oracle).abs() / scale, 0.0, tol, Comparison::Absolute)
        .with_notes(format!("library {lib:e}, oracle {oracle:e}"))
}

fn push(out: &mut Vec<AsymptoticReport>, name: String, tol: f64, r: Result<AsymptoticReport>) {
    match r {
        Ok(r) => out.push(r),
        Err(e) => out.push(errored(name, tol, e)),
    }
}

/// All oracle comparisons in a fixed order.
pub fn run_all(seed: u64, tol: f64, fd_tol: f64) -> Vec<AsymptoticReport> {
    let mut out = Vec::new();
    match pair_catalog(seed) {
        Ok(cat) => {
            pair_sums(&cat, tol, &mut out);
            convolution(&cat, tol, &mut out);
            binned_vs_exact(&cat, &mut out);
        }
        Err(e) => out.push(errored("pair catalog".into(), tol, e)),
    }
    match tuple_catalog(seed) {
        Ok(cat) => tuples(&cat, tol, &mut out),
        Err(e) => out.push(errored("tuple catalog".into(), tol, e)),
    }
    phi_toy(tol, &mut out);
    finite_differences(fd_tol, &mut out);
    out
}

fn pair_catalog(seed: u64) -> Result<ZeroCatalog> {
    let cat = synthetic_catalog(SyntheticKind::Poisson, seed, PAIR_HEIGHT)?;
    anyhow::ensure!(cat.len() <= MAX_PAIR_ENTRIES, "pair catalog has {} entries", cat.len());
    Ok(cat)
}

fn tuple_catalog(seed: u64) -> Result<ZeroCatalog> {
    let cat = synthetic_catalog(SyntheticKind::Poisson, seed.wrapping_add(1), PAIR_HEIGHT)?;
    let t = cat.ordinates()[TUPLE_ORDINATES - 1];
    Ok(cat.truncated(t)?)
}

fn pair_sums(cat: &ZeroCatalog, tol: f64, out: &mut Vec<AsymptoticReport>) {
    let g = cat.ordinates();
    let t = cat.t_max();
    for (nu, k) in [(1.0, 0), (1.5, 2), (0.75, 1)] {
        for x in [1.0, 7.3, 1000.0] {
            let name = format!("pair sum nu={nu} k={k} x={x}");
            let r = (|| -> Result<AsymptoticReport> {
                let p = WeightParams::new(nu, k)?;
                let lib = f_general(cat, p, x, t, WHOLE)?.value;
                let (mut s, mut a) = (0.0, 0.0);
                for &gi in g {
                    for &gj in g {
                        let d = gi - gj;
                        let term = general_weight(p, d) * (d * x.ln()).cos();
                        s += term;
                        a += term.abs();
                    }
                }
                let norm = normalization(t);
                Ok(report(name.clone(), lib, norm * s, norm * a, tol))
            })();
            push(out, name, tol, r);
        }
    }
}

fn convolution(cat: &ZeroCatalog, tol: f64, out: &mut Vec<AsymptoticReport>) {
    let g = cat.ordinates();
    let t = cat.t_max();
    let scale = t.ln() / (2.0 * std::f64::consts::PI);
    for kind in [KernelKind::Fejer, KernelKind::DirichletSinc, KernelKind::Triangle] {
        let name = format!("kernel sum {kind:?}");
        let r = (|| -> Result<AsymptoticReport> {
            let kp = KernelPair::new(kind, 0.5)?;
            let p = WeightParams::new(1.0, 1)?;
            let lib = kernel_convolution_sum(cat, p, kp, t, WHOLE)?.value;
            let (mut s, mut a) = (0.0, 0.0);
            for &gi in g {
                for &gj in g {
                    let d = gi - gj;
                    let term = kp.r(d * scale) * general_weight(p, d);
                    s += term;
                    a += term.abs();
                }
            }
            Ok(report(name.clone(), lib, s, a, tol))
        })();
        push(out, name, tol, r);
    }
}

fn binned_vs_exact(cat: &ZeroCatalog, out: &mut Vec<AsymptoticReport>) {
    let t = cat.t_max();
    for x in [1.0, 3.0] {
        let name = format!("binned G2 within binning bound x={x}");
        let r = (|| -> Result<AsymptoticReport> {
            let ms = build_sum_multiset(cat, 2, t, MERGE_TOL)?;
            let exact = g_mu(&ms, x, t, WHOLE)?.value;
            let hist = build_sum_histogram(cat, 2, t, MERGE_TOL, default_bin_width(t, MERGE_TOL))?;
            let b = BinnedCorrelation::new(&hist).g(x)?;
            Ok(
                AsymptoticReport::new(name.clone(), (b.value - exact).abs(), 0.0, b.tail_bound, Comparison::Absolute)
                    .with_notes(format!("binned {:e}, exact {exact:e}", b.value)),
            )
        })();
        push(out, name, 0.0, r);
    }
}

/// Ordered μ-tuples of indices with ordinate sum ≤ t.
fn enumerate_tuples(g: &[f64], mu: u32, t: f64) -> Vec<(Vec<usize>, f64)> {
    let mut out = Vec::new();
    let mut idx = Vec::with_capacity(mu as usize);
    fn rec(g: &[f64], mu: u32, t: f64, sum: f64, idx: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, f64)>) {
        if idx.len() == mu as usize {
            out.push((idx.clone(), sum));
            return;
        }
        for (i, &v) in g.iter().enumerate() {
            if sum + v > t {
                break;
            }
            idx.push(i);
            rec(g, mu, t, sum + v, idx, out);
            idx.pop();
        }
    }
    rec(g, mu, t, 0.0, &mut idx, &mut out);
    out
}

fn tuples(cat: &ZeroCatalog, tol: f64, out: &mut Vec<AsymptoticReport>) {
    let g = cat.ordinates();
    let t = cat.t_max();
    for mu in 1..=3u32 {
        let all = enumerate_tuples(g, mu, t);
        let ms = match build_sum_multiset(cat, mu, t, MERGE_TOL) {
            Ok(ms) => ms,
            Err(e) => {
                out.push(errored(format!("tuple build mu={mu}"), 0.0, e));
                continue;
            }
        };
        out.push(AsymptoticReport::new(
            format!("tuple count mu={mu}"),
            ms.total() as f64,
            all.len() as f64,
            0.0,
            Comparison::Absolute,
        ));
        // Generic ordinates: equal sums come only from permutations.
        let mut classes: BTreeMap<Vec<usize>, u128> = BTreeMap::new();
        for (idx, _) in &all {
            let mut key = idx.clone();
            key.sort_unstable();
            *classes.entry(key).or_default() += 1;
        }
        let brute_delta: u128 = classes.values().map(|c| c * c).sum();
        out.push(AsymptoticReport::new(
            format!("delta mu={mu}"),
            delta_mu(&ms).value as f64,
            brute_delta as f64,
            0.0,
            Comparison::Absolute,
        ));
        for x in [1.0, 5.0] {
            let name = format!("G mu={mu} x={x}");
            let r = (|| -> Result<AsymptoticReport> {
                let lib = g_mu(&ms, x, t, WHOLE)?.value;
                let (mut s, mut a) = (0.0, 0.0);
                for (_, si) in &all {
                    for (_, sj) in &all {
                        let d = si - sj;
                        let term = montgomery_weight(d) * (d * f64::ln(x)).cos();
                        s += term;
                        a += term.abs();
                    }
                }
                let norm = g_normalization(mu, t);
                Ok(report(name.clone(), lib, norm * s, norm * a, tol))
            })();
            push(out, name, tol, r);
        }
    }
}

fn phi_toy(tol: f64, out: &mut Vec<AsymptoticReport>) {
    // 1, √2, π, …, π^14√2: thirty ordinates.
    let t = 1.3e7;
    let toy = match synthetic_catalog(SyntheticKind::IndependentToy, 0, t) {
        Ok(c) => c,
        Err(e) => {
            out.push(errored("toy catalog".into(), tol, e));
            return;
        }
    };
    let g = toy.ordinates();
    for mu in 1..=3u32 {
        let all = enumerate_tuples(g, mu, t);
        let ms = match build_sum_multiset(&toy, mu, t, MERGE_TOL) {
            Ok(ms) => ms,
            Err(e) => {
                out.push(errored(format!("toy build mu={mu}"), tol, e));
                continue;
            }
        };
        for (n, k) in [(2u64, 0u32), (3, 1), (7, 2)] {
            let name = format!("phi toy mu={mu} n={n} k={k}");
            let r = (|| -> Result<AsymptoticReport> {
                let lib = phi_sum(&ms, n, k)?.value;
                let ln = (n as f64).ln();
                let kf: f64 = (1..=k).map(f64::from).product();
                let mut s = Complex::new(0.0, 0.0);
                let mut a = 0.0;
                for (_, sum) in &all {
                    let term = Complex::from_polar(sum.powi(k as i32) / kf, sum * ln);
                    s += term;
                    a += term.norm();
                }
                let diff = (lib - s).norm() / a;
                Ok(AsymptoticReport::new(name.clone(), diff, 0.0, tol, Comparison::Absolute)
                    .with_notes(format!("{} tuples", all.len())))
            })();
            push(out, name, tol, r);
        }
    }
}

fn central<F: Fn(f64) -> Result<Complex>>(f: F, t: f64, h: f64) -> Result<Complex> {
    Ok((f(t + h)? - f(t - h)?) / (2.0 * h))
}

fn fd_report(name: String, fd: Complex, exact: Complex, base: Complex, tol: f64) -> AsymptoticReport {
    let scale = exact.norm() + base.norm();
    AsymptoticReport::new(name, (fd - exact).norm() / scale, 0.0, tol, Comparison::Absolute)
        .with_notes(format!("difference quotient {fd}, derivative {exact}"))
}

fn finite_differences(tol: f64, out: &mut Vec<AsymptoticReport>) {
    let re = |v: f64| Complex::new(v, 0.0);
    for nu in [1.0, 1.5] {
        for k in 0..=3u32 {
            for d in [0.3, 1.7, -2.2] {
                let name = format!("fd kernel nu={nu} k={k} d={d}");
                let r = (|| -> Result<AsymptoticReport> {
                    let p = WeightParams::new(nu, 0)?;
                    let f = |t: f64| -> Result<Complex> { Ok(re(lorentzian_kernel(p, 0.0, t, k)?)) };
                    let fd = central(f, d, 1e-5)?;
                    let exact = re(lorentzian_kernel(p, 0.0, d, k + 1)?);
                    Ok(fd_report(name.clone(), fd, exact, f(d)?, tol))
                })();
                push(out, name, tol, r);
            }
        }
    }
    for m in 0..=2u32 {
        for (s, t) in [(0.7, 3.0), (5.0, 0.5)] {
            let name = format!("fd polygamma order={m} s={s}+{t}i");
            let r = (|| -> Result<AsymptoticReport> {
                let f = |x: f64| -> Result<Complex> { Ok(polygamma(m, ComplexPoint::new(x, t))?) };
                let fd = central(f, s, 1e-5)?;
                let exact = polygamma(m + 1, ComplexPoint::new(s, t))?;
                Ok(fd_report(name.clone(), fd, exact, f(s)?, tol))
            })();
            push(out, name, tol, r);
        }
    }
    type Term = fn(f64, f64, f64, u32) -> Result<Complex>;
    let terms: [(&str, Term); 4] = [
        ("A", |x, t, nu, k| Ok(a_term(x, t, nu, k)?)),
        ("B", |x, t, nu, k| Ok(b_term(x, t, nu, k, 1e-10)?)),
        ("C", |x, t, nu, k| Ok(c_term(x, t, nu, k)?)),
        ("D", |x, t, nu, k| Ok(d_term(x, t, nu, k)?)),
    ];
    for (label, f) in terms {
        for (x, t) in [(2.5, 10.0), (1.0, 3.0)] {
            for k in 0..=1u32 {
                let name = format!("fd term {label} x={x} t={t} k={k}");
                let r = (|| -> Result<AsymptoticReport> {
                    let fd = central(|s| f(x, s, 1.0, k), t, 1e-4)?;
                    let exact = f(x, t, 1.0, k + 1)?;
                    Ok(fd_report(name.clone(), fd, exact, f(x, t, 1.0, k)?, tol))
                })();
                push(out, name, tol, r);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_enumeration_counts() {
        let g = [1.0, 2.0, 3.0];
        assert_eq!(enumerate_tuples(&g, 1, 2.5).len(), 2);
        // (1,1) (1,2) (2,1) (1,3) (3,1) (2,2)
        assert_eq!(enumerate_tuples(&g, 2, 4.0).len(), 6);
    }
}
