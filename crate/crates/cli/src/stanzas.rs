//! One runner per stanza kind. Each returns its reports and data tables.

use anyhow::{anyhow, bail, Result};
use paircorr_core::arithmetic::{
    gonek_sum, lemma_beef, lemma_sirloin, lemma_steak, lemma_wagyu, phi_sum, SirloinDisplay,
};
use paircorr_core::explicit_formula::identity_residual;
use paircorr_core::ordinate_sums::{
    build_sum_histogram, build_sum_multiset, check_cardinality, default_bin_width,
    default_merge_tol, delta_mu, g_mu, theorem2_main_term, theorem2_prediction,
    total_by_recursion, BinnedCorrelation,
};
use paircorr_core::pair_correlation::{f_general, kernel_convolution_sum, theorem1_prediction};
use paircorr_core::weights::{general_weight, kernel_product_integral, montgomery_weight};
use paircorr_core::zeros::synthetic_catalog;
use paircorr_core::{
    n_t, AsymptoticReport, Comparison, KernelKind, KernelPair, MainTermComparison, SyntheticKind,
    WeightParams, ZeroCatalog,
};
use rayon::prelude::*;

use crate::config::{GMethod, Stanza};
use crate::oracles;
use crate::output::{num, Table};

/// Everything a stanza produced.
#[derive(Debug, Clone)]
pub struct StanzaOutput {
    pub name: String,
    pub kind: &'static str,
    pub reports: Vec<AsymptoticReport>,
    pub tables: Vec<Table>,
}

/// A report that records a computation error as a failure.
pub(crate) fn errored(name: String, tolerance: f64, err: impl std::fmt::Display) -> AsymptoticReport {
    AsymptoticReport::new(name, f64::NAN, f64::NAN, tolerance, Comparison::Absolute)
        .with_notes(format!("error: {err}"))
}

fn catalog<'a>(stanza: &Stanza, zeros: Option<&'a ZeroCatalog>) -> Result<&'a ZeroCatalog> {
    zeros.ok_or_else(|| anyhow!("stanza '{}' needs a zero catalog", stanza.name()))
}

fn weight(nu: f64, k: u32) -> Result<WeightParams> {
    Ok(WeightParams::new(nu, k)?)
}

fn weight_label(nu: f64, k: u32) -> String {
    format!("nu={nu} k={k}")
}

/// Count of steps where `v` moves away from its target.
fn trend_violations(v: &[f64]) -> usize {
    v.windows(2).filter(|w| w[1] > w[0]).count()
}

pub fn run_stanza(stanza: &Stanza, zeros: Option<&ZeroCatalog>) -> Result<StanzaOutput> {
    let mut reports = Vec::new();
    let mut tables = Vec::new();
    let name = stanza.name().to_string();
    match stanza {
        Stanza::WeightCurves { nu, k_max, u_max, points, .. } => {
            let labels: Vec<String> = (0..=*k_max)
                .map(|k| if *nu == 1.0 { format!("w1{k}") } else { format!("w{nu}_{k}") })
                .collect();
            let mut header = vec!["u".to_string()];
            header.extend(labels);
            let hdr: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut t = Table::new(format!("{name}.csv"), &hdr);
            let params = (0..=*k_max).map(|k| weight(*nu, k)).collect::<Result<Vec<_>>>()?;
            for i in 0..*points {
                let u = -u_max + 2.0 * u_max * i as f64 / (*points - 1) as f64;
                let mut row = vec![num(u)];
                row.extend(params.iter().map(|&p| num(general_weight(p, u))));
                t.push(row);
            }
            tables.push(t);
        }
        Stanza::WeightExactness { nus, k_max, points, tolerance, .. } => {
            let grid: Vec<f64> = (1..=*points).map(|i| 20.0 * i as f64 / *points as f64).collect();
            for &nu in nus {
                for k in 0..=*k_max {
                    let p = weight(nu, k)?;
                    let label = weight_label(nu, k);
                    reports.push(
                        AsymptoticReport::new(
                            format!("w(0) {label}"),
                            general_weight(p, 0.0),
                            1.0,
                            *tolerance,
                            Comparison::Absolute,
                        )
                        .with_provenance(label.clone()),
                    );
                    let odd = grid
                        .iter()
                        .map(|&u| (general_weight(p, u) - general_weight(p, -u)).abs())
                        .fold(0.0, f64::max);
                    reports.push(
                        AsymptoticReport::new(
                            format!("evenness {label}"),
                            odd,
                            0.0,
                            *tolerance,
                            Comparison::Absolute,
                        )
                        .with_provenance(label),
                    );
                }
            }
            let displayed: [(u32, fn(f64) -> f64); 4] = [
                (0, montgomery_weight),
                (1, |u| {
                    let d = u * u + 4.0;
                    16.0 * (4.0 - 3.0 * u * u) / d.powi(3)
                }),
                (2, |u| {
                    let u2 = u * u;
                    64.0 * (16.0 - 40.0 * u2 + 5.0 * u2 * u2) / (u2 + 4.0).powi(5)
                }),
                (3, |u| {
                    let u2 = u * u;
                    256.0 * (64.0 - 336.0 * u2 + 140.0 * u2 * u2 - 7.0 * u2.powi(3))
                        / (u2 + 4.0).powi(7)
                }),
            ];
            let mut t = Table::new(format!("{name}_polynomials.csv"), &["u", "k", "family", "displayed"]);
            for (k, f) in displayed {
                let p = weight(1.0, k)?;
                let mut worst: f64 = 0.0;
                for &u in &grid {
                    let (a, b) = (general_weight(p, u), f(u));
                    worst = worst.max((a - b).abs());
                    t.push(vec![num(u), k.to_string(), num(a), num(b)]);
                }
                reports.push(
                    AsymptoticReport::new(
                        format!("displayed polynomial w1{k}"),
                        worst,
                        0.0,
                        *tolerance,
                        Comparison::Absolute,
                    )
                    .with_provenance(format!("{} points on (0, 20]", grid.len())),
                );
            }
            tables.push(t);
        }
        Stanza::KernelDuality { nus, ks, deltas, tolerance, .. } => {
            let grid: Vec<(f64, u32, f64)> = nus
                .iter()
                .flat_map(|&nu| ks.iter().flat_map(move |&k| deltas.iter().map(move |&d| (nu, k, d))))
                .collect();
            let results: Vec<_> = grid
                .par_iter()
                .map(|&(nu, k, d)| weight(nu, k).and_then(|p| Ok(kernel_product_integral(p, d)?)))
                .collect();
            let mut t = Table::new(
                format!("{name}.csv"),
                &["nu", "k", "delta", "closed_form", "quadrature", "tail_bound", "rel_discrepancy"],
            );
            for (&(nu, k, d), r) in grid.iter().zip(results) {
                let label = format!("duality {} delta={d}", weight_label(nu, k));
                match r {
                    Ok(r) => {
                        t.push(vec![
                            num(nu),
                            k.to_string(),
                            num(d),
                            num(r.closed_form),
                            num(r.quadrature),
                            num(r.tail_bound),
                            num(r.relative_discrepancy),
                        ]);
                        reports.push(AsymptoticReport::new(
                            label,
                            r.relative_discrepancy,
                            0.0,
                            *tolerance,
                            Comparison::Absolute,
                        ));
                    }
                    Err(e) => reports.push(errored(label, *tolerance, e)),
                }
            }
            tables.push(t);
        }
        Stanza::ExplicitFormula { x_grid, t_grid, nus, ks, window, tolerance, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut points = Vec::new();
            for &nu in nus {
                for &k in ks {
                    for &x in x_grid {
                        for &t in t_grid {
                            points.push((x, t, nu, k));
                        }
                    }
                }
            }
            let results: Vec<_> = points
                .par_iter()
                .map(|&(x, t, nu, k)| {
                    let w = window.unwrap_or(cat.t_max() - t.abs() - 1.0);
                    identity_residual(cat, x, t, nu, k, w, *tolerance)
                })
                .collect();
            let mut table = Table::new(
                format!("{name}.csv"),
                &[
                    "x", "t", "nu", "k", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual",
                    "zero_tail_bound", "dirichlet_tail_bound",
                ],
            );
            for (&(x, t, nu, k), r) in points.iter().zip(results) {
                let label = format!("identity x={x} t={t} {}", weight_label(nu, k));
                match r {
                    Ok(s) => {
                        table.push(vec![
                            num(x),
                            num(t),
                            num(nu),
                            k.to_string(),
                            num(s.lhs.re),
                            num(s.lhs.im),
                            num(s.rhs.re),
                            num(s.rhs.im),
                            num(s.residual),
                            num(s.zero_tail_bound),
                            num(s.dirichlet_tail_bound),
                        ]);
                        reports.push(
                            AsymptoticReport::new(
                                label,
                                s.residual,
                                0.0,
                                tolerance * (1.0 + s.rhs.norm()),
                                Comparison::Absolute,
                            )
                            .with_provenance(cat.source().to_string())
                            .with_notes(format!(
                                "zero tail bound {:e}, dirichlet tail bound {:e}",
                                s.zero_tail_bound, s.dirichlet_tail_bound
                            )),
                        );
                    }
                    Err(e) => reports.push(errored(label, *tolerance, e)),
                }
            }
            tables.push(table);
        }
        Stanza::PairCorrelation { t, alphas, weights, window, tolerance, spike, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut detail = Table::new(
                format!("{name}.csv"),
                &[
                    "T", "nu", "k", "alpha", "x", "value", "prediction", "rel_err", "tail_bound",
                    "imag_residual",
                ],
            );
            for &tt in t {
                for (wi, &(nu, k)) in weights.iter().enumerate() {
                    let p = weight(nu, k)?;
                    let results: Vec<_> = alphas
                        .par_iter()
                        .map(|&a| f_general(cat, p, tt.powf(a), tt, *window))
                        .collect();
                    let mut overlay = Table::new(
                        format!("{name}_T{tt}_w{wi}.csv"),
                        &["alpha", "measured", "predicted"],
                    );
                    for (&a, r) in alphas.iter().zip(results) {
                        let label = format!("F T={tt} {} alpha={a}", weight_label(nu, k));
                        let pred = theorem1_prediction(p, a, tt);
                        match (r, pred) {
                            (Ok(e), Ok(pred)) => {
                                let rep = AsymptoticReport::new(
                                    label,
                                    e.value,
                                    pred,
                                    *tolerance,
                                    Comparison::Relative,
                                )
                                .with_error_scale(tt.ln().powf(-0.25))
                                .with_provenance(format!("{} window={window}", cat.source()))
                                .with_notes(format!(
                                    "tail bound {:e}; imaginary residual {:e}",
                                    e.tail_bound, e.imag_residual
                                ));
                                detail.push(vec![
                                    num(tt),
                                    num(nu),
                                    k.to_string(),
                                    num(a),
                                    num(e.x),
                                    num(e.value),
                                    num(pred),
                                    num(rep.rel_err),
                                    num(e.tail_bound),
                                    num(e.imag_residual),
                                ]);
                                overlay.push(vec![num(a), num(e.value), num(pred)]);
                                reports.push(rep);
                            }
                            (Err(e), _) => reports.push(errored(label, *tolerance, e)),
                            (_, Err(e)) => reports.push(errored(label, *tolerance, e)),
                        }
                    }
                    tables.push(overlay);
                }
                if let Some(s) = spike {
                    let label = format!(
                        "spike ratio T={tt} alpha={} {} over {}",
                        s.alpha,
                        weight_label(s.weight.0, s.weight.1),
                        weight_label(weights[0].0, weights[0].1)
                    );
                    let x = tt.powf(s.alpha);
                    let p0 = weight(weights[0].0, weights[0].1)?;
                    let p1 = weight(s.weight.0, s.weight.1)?;
                    let r = (|| -> Result<(f64, f64)> {
                        let m = f_general(cat, p1, x, tt, *window)?.value
                            / f_general(cat, p0, x, tt, *window)?.value;
                        let pr = theorem1_prediction(p1, s.alpha, tt)? / theorem1_prediction(p0, s.alpha, tt)?;
                        Ok((m, pr))
                    })();
                    match r {
                        Ok((m, pr)) => reports.push(
                            AsymptoticReport::new(label, m, 0.0, s.max_ratio, Comparison::Absolute)
                                .with_notes(format!(
                                    "asserts ratio below {}; main-term ratio {pr:.4}",
                                    s.max_ratio
                                )),
                        ),
                        Err(e) => reports.push(errored(label, s.max_ratio, e)),
                    }
                }
            }
            tables.insert(0, detail);
        }
        Stanza::Convolution { t, kernel, lambda, weights, window, tolerance, agreement_tolerance, .. } => {
            let cat = catalog(stanza, zeros)?;
            let kind: KernelKind = kernel.parse()?;
            let kp = KernelPair::new(kind, *lambda)?;
            let limit = kp
                .predicted_limit()
                .ok_or_else(|| anyhow!("kernel '{kernel}' has no closed-form limit"))?;
            let mut table = Table::new(
                format!("{name}.csv"),
                &["T", "nu", "k", "sum", "predicted", "rel_err", "tail_bound"],
            );
            for &tt in t {
                let pred = limit * n_t(tt);
                let mut values = Vec::new();
                for &(nu, k) in weights {
                    let label = format!("{kernel} sum T={tt} lambda={lambda} {}", weight_label(nu, k));
                    match weight(nu, k).and_then(|p| Ok(kernel_convolution_sum(cat, p, kp, tt, *window)?)) {
                        Ok(s) => {
                            let rep = AsymptoticReport::new(label, s.value, pred, *tolerance, Comparison::Relative)
                                .with_error_scale(tt.ln().powf(-0.25))
                                .with_provenance(format!("{} window={window}", cat.source()));
                            table.push(vec![
                                num(tt),
                                num(nu),
                                k.to_string(),
                                num(s.value),
                                num(pred),
                                num(rep.rel_err),
                                num(s.tail_bound),
                            ]);
                            values.push(s.value);
                            reports.push(rep);
                        }
                        Err(e) => reports.push(errored(label, *tolerance, e)),
                    }
                }
                if values.len() >= 2 {
                    let (a, b) = (values[0], values[1]);
                    let spread = (a - b).abs() / a.abs().max(b.abs());
                    reports.push(
                        AsymptoticReport::new(
                            format!("weight agreement T={tt}"),
                            spread,
                            0.0,
                            *agreement_tolerance,
                            Comparison::Absolute,
                        )
                        .with_notes("relative spread between the first two weights"),
                    );
                }
            }
            tables.push(table);
        }
        Stanza::Cardinality { t, mu, merge_tol, tolerance, recursion_prefix, recursion_mu_max, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut ts = t.clone();
            ts.sort_by(f64::total_cmp);
            let built: Vec<_> = ts
                .par_iter()
                .map(|&tt| build_sum_multiset(cat, *mu, tt, *merge_tol))
                .collect();
            let mut table = Table::new(
                format!("{name}.csv"),
                &["T", "mu", "total", "distinct", "predicted", "rel_err"],
            );
            let mut errs = Vec::new();
            for (&tt, ms) in ts.iter().zip(built) {
                match ms {
                    Ok(ms) => {
                        let rep = check_cardinality(&ms, *tolerance);
                        table.push(vec![
                            num(tt),
                            mu.to_string(),
                            ms.total().to_string(),
                            ms.len().to_string(),
                            num(rep.predicted),
                            num(rep.rel_err),
                        ]);
                        errs.push(rep.rel_err);
                        reports.push(rep);
                    }
                    Err(e) => reports.push(errored(format!("cardinality mu={mu} T={tt}"), *tolerance, e)),
                }
            }
            if ts.len() > 1 {
                reports.push(
                    AsymptoticReport::new(
                        format!("cardinality mu={mu} deviation non-increasing in T"),
                        trend_violations(&errs) as f64,
                        0.0,
                        0.0,
                        Comparison::Absolute,
                    )
                    .with_notes(format!("relative deviations {errs:?}")),
                );
            }
            if *recursion_prefix > 0 {
                let ords = cat.ordinates();
                if ords.len() < *recursion_prefix {
                    bail!("catalog has fewer than {recursion_prefix} ordinates");
                }
                let tp = ords[recursion_prefix - 1];
                let prefix = cat.truncated(tp)?;
                for m in 1..=*recursion_mu_max {
                    let label = format!("recursion total mu={m} prefix={recursion_prefix}");
                    let r = (|| -> Result<(u64, u64)> {
                        Ok((
                            build_sum_multiset(&prefix, m, tp, *merge_tol)?.total(),
                            total_by_recursion(&prefix, m, tp)?,
                        ))
                    })();
                    match r {
                        Ok((built, rec)) => reports.push(
                            AsymptoticReport::new(label, built as f64, rec as f64, 0.0, Comparison::Absolute)
                                .with_provenance(format!("T={tp}")),
                        ),
                        Err(e) => reports.push(errored(label, 0.0, e)),
                    }
                }
            }
            tables.push(table);
        }
        Stanza::Delta { t, merge_tol, ratio_tolerance, toy_check, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut table = Table::new(
                format!("{name}.csv"),
                &["T", "delta2", "total", "n_half", "identity_rhs", "delta_over_n2", "tolerance_sensitive"],
            );
            for &tt in t {
                let label = format!("delta2 identity T={tt}");
                let r = (|| -> Result<_> {
                    let ms = build_sum_multiset(cat, 2, tt, *merge_tol)?;
                    let half = cat.count_zeros(tt / 2.0)? as u128;
                    let n = cat.count_zeros(tt)? as f64;
                    Ok((delta_mu(&ms), ms.total() as u128, half, n))
                })();
                match r {
                    Ok((d, total, half, n)) => {
                        let rhs = 2 * total - half;
                        let ratio = d.value as f64 / (n * n);
                        table.push(vec![
                            num(tt),
                            d.value.to_string(),
                            total.to_string(),
                            half.to_string(),
                            rhs.to_string(),
                            num(ratio),
                            d.tolerance_sensitive.to_string(),
                        ]);
                        let diff = if d.value >= rhs { d.value - rhs } else { rhs - d.value };
                        reports.push(
                            AsymptoticReport::new(label, diff as f64, 0.0, 0.0, Comparison::Absolute)
                                .with_provenance(format!("merge_tol={merge_tol}"))
                                .with_notes(format!(
                                    "delta2 = {}, 2|Z2| - N(T/2) = {rhs}; delta2/N(T)^2 = {ratio:.4} \
                                     (reported only, within {ratio_tolerance} of 1: {})",
                                    d.value,
                                    (ratio - 1.0).abs() <= *ratio_tolerance
                                )),
                        );
                    }
                    Err(e) => reports.push(errored(label, 0.0, e)),
                }
            }
            if *toy_check {
                let label = "delta2 independent toy T=3".to_string();
                let r = (|| -> Result<u128> {
                    let toy = synthetic_catalog(SyntheticKind::IndependentToy, 0, 3.0)?;
                    Ok(delta_mu(&build_sum_multiset(&toy, 2, 3.0, *merge_tol)?).value)
                })();
                match r {
                    Ok(d) => reports.push(AsymptoticReport::new(label, d as f64, 6.0, 0.0, Comparison::Absolute)),
                    Err(e) => reports.push(errored(label, 0.0, e)),
                }
            }
            tables.push(table);
        }
        Stanza::Theorem2 { t, mu, alphas, merge_tol, window, method, factor, .. } => {
            let cat = catalog(stanza, zeros)?;
            for &tt in t {
                for &m in mu {
                    let tol_m = merge_tol.unwrap_or(default_merge_tol(m, cat.precision_hint()));
                    let binned = match method {
                        GMethod::Auto => m >= 3,
                        GMethod::Exact => false,
                        GMethod::Binned => true,
                    };
                    let values: Vec<Result<(f64, f64)>> = if binned {
                        match build_sum_histogram(cat, m, tt, tol_m, default_bin_width(tt, tol_m)) {
                            Ok(h) => {
                                let bc = BinnedCorrelation::new(&h);
                                alphas
                                    .iter()
                                    .map(|&a| bc.g(tt.powf(a)).map(|e| (e.value, e.tail_bound)).map_err(Into::into))
                                    .collect()
                            }
                            Err(e) => {
                                let msg = e.to_string();
                                alphas.iter().map(|_| Err(anyhow!(msg.clone()))).collect()
                            }
                        }
                    } else {
                        match build_sum_multiset(cat, m, tt, tol_m) {
                            Ok(ms) => alphas
                                .par_iter()
                                .map(|&a| {
                                    g_mu(&ms, tt.powf(a), tt, *window)
                                        .map(|e| (e.value, e.tail_bound))
                                        .map_err(Into::into)
                                })
                                .collect(),
                            Err(e) => {
                                let msg = e.to_string();
                                alphas.iter().map(|_| Err(anyhow!(msg.clone()))).collect()
                            }
                        }
                    };
                    let mut overlay = Table::new(
                        format!("{name}_G{m}_T{tt}.csv"),
                        &["alpha", "measured", "predicted"],
                    );
                    for (&a, v) in alphas.iter().zip(values) {
                        let label = format!("G{m} T={tt} alpha={a}");
                        match v {
                            Ok((g, bound)) => {
                                let (pred, range_note) = match theorem2_prediction(m, a, tt) {
                                    Ok(p) => (p, String::new()),
                                    Err(e) => (theorem2_main_term(m, a, tt), format!("; outside the stated range ({e})")),
                                };
                                overlay.push(vec![num(a), num(g), num(pred)]);
                                reports.push(
                                    AsymptoticReport::new(label, g, pred, factor - 1.0, Comparison::Factor)
                                        .with_provenance(format!(
                                            "{} merge_tol={tol_m} {}",
                                            cat.source(),
                                            if binned { "binned" } else { "exact" }
                                        ))
                                        .with_notes(format!("truncation/binning bound {bound:e}{range_note}")),
                                );
                            }
                            Err(e) => reports.push(errored(label, factor - 1.0, e)),
                        }
                    }
                    tables.push(overlay);
                }
            }
        }
        Stanza::Gonek { t, ns, envelopes, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut table = Table::new(
                format!("{name}.csv"),
                &["T", "n", "sum_re", "sum_im", "prediction", "error_scale", "normalized_error"],
            );
            for &tt in t {
                for &n in ns {
                    let label = format!("gonek n={n} T={tt}");
                    match gonek_sum(cat, n, tt) {
                        Ok(s) => {
                            let ne = s.normalized_error();
                            table.push(vec![
                                num(tt),
                                n.to_string(),
                                num(s.value.re),
                                num(s.value.im),
                                num(s.prediction),
                                num(s.error_scale),
                                num(ne),
                            ]);
                            reports.push(
                                AsymptoticReport::new(label, ne, 0.0, *envelopes, Comparison::Absolute)
                                    .with_error_scale(s.error_scale)
                                    .with_notes("measured in units of the error envelope"),
                            );
                        }
                        Err(e) => reports.push(errored(label, *envelopes, e)),
                    }
                }
            }
            tables.push(table);
        }
        Stanza::Phi { t, mu, k, ns, merge_tol, envelopes, .. } => {
            let cat = catalog(stanza, zeros)?;
            let mut table = Table::new(
                format!("{name}.csv"),
                &["T", "mu", "k", "n", "sum_re", "sum_im", "prediction", "error_scale", "normalized_error"],
            );
            for &tt in t {
                let ms = build_sum_multiset(cat, *mu, tt, *merge_tol);
                for &n in ns {
                    let label = format!("phi mu={mu} k={k} n={n} T={tt}");
                    let r = match &ms {
                        Ok(ms) => phi_sum(ms, n, *k).map_err(anyhow::Error::from),
                        Err(e) => Err(anyhow!(e.to_string())),
                    };
                    match r {
                        Ok(s) => {
                            let ne = s.normalized_error();
                            table.push(vec![
                                num(tt),
                                mu.to_string(),
                                k.to_string(),
                                n.to_string(),
                                num(s.value.re),
                                num(s.value.im),
                                num(s.prediction),
                                num(s.error_scale),
                                num(ne),
                            ]);
                            reports.push(
                                AsymptoticReport::new(label, ne, 0.0, *envelopes, Comparison::Absolute)
                                    .with_error_scale(s.error_scale)
                                    .with_notes("measured in units of the error envelope"),
                            );
                        }
                        Err(e) => reports.push(errored(label, *envelopes, e)),
                    }
                }
            }
            tables.push(table);
        }
        Stanza::Lemmas { x_grid, tolerance, .. } => {
            let mut xs = x_grid.clone();
            xs.sort_by(f64::total_cmp);
            let jobs: Vec<(LemmaCase, f64)> = LemmaCase::standard()
                .into_iter()
                .flat_map(|c| xs.iter().map(move |&x| (c, x)))
                .collect();
            let results: Vec<_> = jobs.par_iter().map(|&(c, x)| c.eval(x)).collect();
            let mut table = Table::new(
                format!("{name}.csv"),
                &["lemma", "x", "exact", "main", "ratio", "error_scale", "tail_estimate", "tail_bound", "cutoff"],
            );
            for (ci, case) in LemmaCase::standard().into_iter().enumerate() {
                let chunk = &results[ci * xs.len()..(ci + 1) * xs.len()];
                let mut dists = Vec::new();
                let mut ok = true;
                for (&x, r) in xs.iter().zip(chunk) {
                    match r {
                        Ok(c) => {
                            table.push(vec![
                                case.label(),
                                num(x),
                                num(c.exact),
                                num(c.main),
                                num(c.ratio()),
                                num(c.error_scale),
                                num(c.tail_estimate),
                                num(c.tail_bound),
                                c.cutoff.map(|n| n.to_string()).unwrap_or_default(),
                            ]);
                            dists.push((c.ratio() - 1.0).abs());
                        }
                        Err(e) => {
                            ok = false;
                            reports.push(errored(format!("{} x={x}", case.label()), *tolerance, e));
                        }
                    }
                }
                if !ok {
                    continue;
                }
                let last = chunk.last().and_then(|r| r.as_ref().ok()).expect("non-empty grid");
                let xmax = xs[xs.len() - 1];
                reports.push(
                    AsymptoticReport::new(
                        format!("{} ratio x={xmax}", case.label()),
                        last.ratio(),
                        1.0,
                        *tolerance,
                        Comparison::Relative,
                    )
                    .with_error_scale(last.error_scale),
                );
                if xs.len() > 1 {
                    reports.push(
                        AsymptoticReport::new(
                            format!("{} ratio approaches 1", case.label()),
                            trend_violations(&dists) as f64,
                            0.0,
                            0.0,
                            Comparison::Absolute,
                        )
                        .with_notes(format!("|ratio - 1| along x: {dists:?}")),
                    );
                }
            }
            tables.push(table);
        }
        Stanza::Oracles { seed, tolerance, fd_tolerance, .. } => {
            reports = oracles::run_all(*seed, *tolerance, *fd_tolerance);
        }
    }
    Ok(StanzaOutput {
        name,
        kind: stanza.kind(),
        reports,
        tables,
    })
}

/// The lemma instances the lemma stanza evaluates.
#[derive(Debug, Clone, Copy)]
pub enum LemmaCase {
    Beef { a: f64, b: u32 },
    Wagyu { k: u32 },
    Steak { a: f64 },
    Sirloin { a: f64 },
}

impl LemmaCase {
    pub fn standard() -> Vec<LemmaCase> {
        let mut v = Vec::new();
        for a in [0.0, 1.0] {
            for b in [0, 2] {
                v.push(LemmaCase::Beef { a, b });
            }
        }
        for k in 1..=3 {
            v.push(LemmaCase::Wagyu { k });
        }
        for a in [2.0, 3.0] {
            v.push(LemmaCase::Steak { a });
        }
        for a in [2.0, 3.0] {
            v.push(LemmaCase::Sirloin { a });
        }
        v
    }

    pub fn label(&self) -> String {
        match self {
            LemmaCase::Beef { a, b } => format!("beef a={a} b={b}"),
            LemmaCase::Wagyu { k } => format!("wagyu k={k} a=0"),
            LemmaCase::Steak { a } => format!("steak a={a} b=0"),
            LemmaCase::Sirloin { a } => format!("sirloin a={a} k=1"),
        }
    }

    pub fn eval(&self, x: f64) -> Result<MainTermComparison> {
        Ok(match *self {
            LemmaCase::Beef { a, b } => lemma_beef(x, a, b)?,
            LemmaCase::Wagyu { k } => lemma_wagyu(x, k, 0.0)?,
            LemmaCase::Steak { a } => lemma_steak(x, a, 0, None)?,
            LemmaCase::Sirloin { a } => lemma_sirloin(x, 1, a, SirloinDisplay::Plain, None)?,
        })
    }
}
