use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use paircorr_cli::output::{num, reports_table, write_atomic, Table};
use paircorr_cli::source::load_zeros;
use paircorr_cli::stanzas::LemmaCase;
use paircorr_cli::{run_experiment, ExperimentConfig};
use paircorr_core::arithmetic::{gonek_sum, phi_sum};
use paircorr_core::explicit_formula::{identity_residual, DEFAULT_WINDOW as FORMULA_WINDOW};
use paircorr_core::ordinate_sums::{
    build_sum_multiset, check_cardinality, close_pair_count, default_merge_tol, delta_mu, g_mu,
    log_tau_sum, moment, moment_prediction, stieltjes_weighted_integral, theorem2_main_term,
    total_by_recursion,
};
use paircorr_core::pair_correlation::{
    f_general, kernel_convolution_sum, theorem1_prediction, DEFAULT_WINDOW,
};
use paircorr_core::weights::kernel_product_integral;
use paircorr_core::zeros::{find_zeros, tabulate_zeros};
use paircorr_core::{n_t, KernelPair, SumMultiset, WeightParams, ZeroCatalog};

#[derive(Parser)]
#[command(name = "paircorr", version, about = "Pair correlation of zeta zeros and of ordinate sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a zero table and print its fingerprint.
    Ingest {
        #[arg(long)]
        zeros: String,
        /// Rewrite the validated table here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate zeros on the critical line up to a height.
    FindZeros {
        #[arg(long)]
        t_max: f64,
        /// Allow heights above the default cap.
        #[arg(long)]
        uncapped: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weight curves and the kernel duality check.
    Weights {
        #[command(subcommand)]
        action: WeightsAction,
    },
    /// F_{nu,k}(alpha, T) over an alpha grid, or a kernel-convolution sum.
    Paircorr(PaircorrArgs),
    /// Ordinate-sum multiset statistics.
    Ordsums(OrdsumsArgs),
    /// Prime-power sum lemmas and Gonek-type sums.
    Arith {
        #[command(subcommand)]
        action: ArithAction,
    },
    /// Both sides of the explicit formula on an (x, t) grid.
    ExplicitCheck(ExplicitArgs),
    /// Run a TOML experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Exit with status 1 when any report fails.
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Subcommand)]
enum WeightsAction {
    /// Columns u, w_{nu,0}, ..., w_{nu,k_max}.
    Curves {
        #[arg(long, default_value_t = 1.0)]
        nu: f64,
        #[arg(long, default_value_t = 3)]
        k_max: u32,
        #[arg(long, default_value_t = 10.0)]
        u_max: f64,
        #[arg(long, default_value_t = 401)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadrature against the closed form of the kernel-product integral.
    Duality {
        #[arg(long, value_delimiter = ',', default_value = "0.75,1,2")]
        nu: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        k: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "0,0.5,1,2,5")]
        delta: Vec<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct PaircorrArgs {
    #[arg(long)]
    zeros: String,
    #[arg(long = "T")]
    t: f64,
    #[arg(long, default_value_t = 1.0)]
    nu: f64,
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// start:stop:step or a comma list.
    #[arg(long, default_value = "0:1:0.05")]
    alpha_grid: String,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: f64,
    /// fejer, dirichlet-sinc or triangle: report the convolution sum instead.
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum OrdsumsAction {
    Build,
    Cardinality,
    Moments,
    Delta,
    Gmu,
    Nmu,
    Caltech,
    Logtau,
}

#[derive(Args)]
struct OrdsumsArgs {
    #[arg(value_enum)]
    action: OrdsumsAction,
    #[arg(long)]
    zeros: Option<String>,
    /// Read a multiset written by `build` instead of building one.
    #[arg(long)]
    multiset: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    mu: u32,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    merge_tol: Option<f64>,
    /// Moment orders (moments).
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    k: Vec<i32>,
    /// gmu alpha grid.
    #[arg(long, default_value = "0.05,0.1,0.2,0.4")]
    alpha_grid: String,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: f64,
    /// nmu distances, in units of mean spacing.
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2")]
    u: Vec<f64>,
    /// caltech exponents a,b,c,d.
    #[arg(long, value_delimiter = ',', default_value = "0,0,0,0")]
    abcd: Vec<u32>,
    /// logtau evaluation point (defaults to T).
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ArithAction {
    /// The four prime-power sum lemmas against their main terms.
    Lemma {
        #[arg(long)]
        which: String,
        #[arg(long, value_delimiter = ',', default_value = "1e3,1e4,1e5,1e6")]
        x: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 0)]
        b: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// S(n, T) = sum of n^{i gamma} against lambda_n T.
    Gonek {
        #[arg(long)]
        zeros: String,
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phi(mu, k) over the ordinate-sum multiset.
    Phi {
        #[arg(long)]
        zeros: String,
        #[arg(long, default_value_t = 2)]
        mu: u32,
        #[arg(long, default_value_t = 0)]
        k: u32,
        #[arg(long, value_delimiter = ',')]
        n: Vec<u64>,
        #[arg(long = "T")]
        t: f64,
        #[arg(long)]
        merge_tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExplicitArgs {
    #[arg(long)]
    zeros: String,
    #[arg(long, value_delimiter = ',', default_value = "1,2,2.718,10,100")]
    x_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0,25,100,500")]
    t_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,1.5")]
    nu: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    k: Vec<u32>,
    #[arg(long, default_value_t = FORMULA_WINDOW)]
    window: f64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value = "csv")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// `start:stop:step` (inclusive) or a comma-separated list.
fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let (a, b, h): (f64, f64, f64) = (parts[0].parse()?, parts[1].parse()?, parts[2].parse()?);
        if !(h > 0.0) || b < a {
            bail!("bad grid '{s}'");
        }
        let n = ((b - a) / h + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * h).collect());
    }
    s.split(',')
        .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad grid entry '{v}'")))
        .collect()
}

fn emit(table: &Table, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
            let name = path
                .file_name()
                .and_then(|n| n.to_str())
                .context("output path has no file name")?;
            write_atomic(dir.unwrap_or(std::path::Path::new(".")), name, &table.to_csv_bytes()?)?;
        }
        None => table.write_to(io::stdout().lock())?,
    }
    Ok(())
}

fn emit_json<T: serde::Serialize>(v: &T, out: Option<&PathBuf>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn catalog_for(spec: &str, height: f64) -> Result<ZeroCatalog> {
    load_zeros(spec, Some(height))
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Ingest { zeros, out } => {
            let cat = load_zeros(&zeros, None)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "source": cat.source(),
                    "count": cat.len(),
                    "t_max": cat.t_max(),
                    "precision_hint": cat.precision_hint(),
                    "fingerprint": cat.fingerprint(),
                }))?
            );
            if let Some(p) = out {
                cat.write_to(File::create(&p).with_context(|| format!("creating {}", p.display()))?)?;
            }
        }
        Command::FindZeros { t_max, uncapped, out } => {
            let cat = if uncapped { tabulate_zeros(t_max)? } else { find_zeros(t_max)? };
            match out {
                Some(p) => cat.write_to(File::create(&p)?)?,
                None => cat.write_to(io::stdout().lock())?,
            }
            eprintln!("{} zeros up to {t_max}", cat.len());
        }
        Command::Weights { action } => match action {
            WeightsAction::Curves { nu, k_max, u_max, points, out } => {
                let cfg = paircorr_cli::Stanza::WeightCurves {
                    name: "weights".into(),
                    nu,
                    k_max,
                    u_max,
                    points,
                };
                let o = paircorr_cli::run_stanza(&cfg, None)?;
                emit(&o.tables[0], out.as_ref())?;
            }
            WeightsAction::Duality { nu, k, delta, out } => {
                let mut t = Table::new(
                    "duality.csv",
                    &["nu", "k", "delta", "closed_form", "quadrature", "tail_bound", "rel_discrepancy"],
                );
                for &n in &nu {
                    for &kk in &k {
                        for &d in &delta {
                            let r = kernel_product_integral(WeightParams::new(n, kk)?, d)?;
                            t.push(vec![
                                num(n),
                                kk.to_string(),
                                num(d),
                                num(r.closed_form),
                                num(r.quadrature),
                                num(r.tail_bound),
                                num(r.relative_discrepancy),
                            ]);
                        }
                    }
                }
                emit(&t, out.as_ref())?;
            }
        },
        Command::Paircorr(a) => paircorr(a)?,
        Command::Ordsums(a) => ordsums(a)?,
        Command::Arith { action } => arith(action)?,
        Command::ExplicitCheck(a) => explicit(a)?,
        Command::Run { config, out_dir, strict } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(d) = out_dir {
                cfg.output_dir = d;
            }
            let bundle = run_experiment(&cfg)?;
            bundle.write(&cfg.output_dir)?;
            for s in &bundle.stanzas {
                for r in &s.reports {
                    println!("[{}] {}", s.name, r.summary_line());
                }
            }
            let total = bundle.report_count();
            let pass = bundle.pass_count();
            println!("{total} reports: {pass} pass, {} fail", total - pass);
            println!("output written to {}", cfg.output_dir.display());
            if strict && pass < total {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn paircorr(a: PaircorrArgs) -> Result<()> {
    let cat = catalog_for(&a.zeros, a.t)?;
    let p = WeightParams::new(a.nu, a.k)?;
    if let Some(kernel) = &a.kernel {
        let kp = KernelPair::new(kernel.parse()?, a.lambda)?;
        let s = kernel_convolution_sum(&cat, p, kp, a.t, a.window)?;
        let predicted = kp.predicted_limit().map(|l| l * n_t(a.t));
        let mut t = Table::new("convolution.csv", &["kernel", "lambda", "T", "sum", "predicted", "tail_bound"]);
        t.push(vec![
            kernel.clone(),
            num(a.lambda),
            num(a.t),
            num(s.value),
            predicted.map(num).unwrap_or_default(),
            num(s.tail_bound),
        ]);
        return emit(&t, a.out.as_ref());
    }
    let mut rows = Vec::new();
    let mut t = Table::new(
        "paircorr.csv",
        &["alpha", "x", "value", "prediction", "rel_err", "tail_bound", "imag_residual"],
    );
    for alpha in parse_grid(&a.alpha_grid)? {
        let e = f_general(&cat, p, a.t.powf(alpha), a.t, a.window)?;
        let pred = theorem1_prediction(p, alpha, a.t)?;
        let rel = (e.value - pred).abs() / pred.abs();
        t.push(vec![
            num(alpha),
            num(e.x),
            num(e.value),
            num(pred),
            num(rel),
            num(e.tail_bound),
            num(e.imag_residual),
        ]);
        rows.push(e);
    }
    if a.format == "json" {
        emit_json(&rows, a.out.as_ref())
    } else {
        emit(&t, a.out.as_ref())
    }
}

fn ordsums(a: OrdsumsArgs) -> Result<()> {
    let load_ms = || -> Result<SumMultiset> {
        if let Some(path) = &a.multiset {
            return Ok(SumMultiset::read_from(BufReader::new(File::open(path)?))?);
        }
        let spec = a.zeros.as_deref().context("--zeros or --multiset is required")?;
        let t = a.t.context("--T is required")?;
        let cat = catalog_for(spec, t)?;
        let tol = a.merge_tol.unwrap_or(default_merge_tol(a.mu, cat.precision_hint()));
        Ok(build_sum_multiset(&cat, a.mu, t, tol)?)
    };
    match a.action {
        OrdsumsAction::Build => {
            let ms = load_ms()?;
            match &a.out {
                Some(p) => ms.write_to(File::create(p)?)?,
                None => ms.write_to(io::stdout().lock())?,
            }
        }
        OrdsumsAction::Cardinality => {
            let ms = load_ms()?;
            let mut rows = vec![check_cardinality(&ms, 0.35)];
            if let (Some(spec), Some(t)) = (&a.zeros, a.t) {
                let cat = catalog_for(spec, t)?;
                let rec = total_by_recursion(&cat, a.mu, t)?;
                rows.push(paircorr_core::AsymptoticReport::new(
                    "total by recursion",
                    ms.total() as f64,
                    rec as f64,
                    0.0,
                    paircorr_core::Comparison::Absolute,
                ));
            }
            emit(&reports_table("cardinality.csv", &rows), a.out.as_ref())?;
        }
        OrdsumsAction::Moments => {
            let ms = load_ms()?;
            let mut t = Table::new("moments.csv", &["mu", "T", "k", "moment", "prediction"]);
            for &k in &a.k {
                t.push(vec![
                    ms.mu().to_string(),
                    num(ms.t()),
                    k.to_string(),
                    num(moment(&ms, k)?),
                    num(moment_prediction(ms.mu(), k, ms.t())?),
                ]);
            }
            emit(&t, a.out.as_ref())?;
        }
        OrdsumsAction::Delta => {
            let ms = load_ms()?;
            let d = delta_mu(&ms);
            let fact: u128 = (1..=ms.mu() as u128).product();
            let mut t = Table::new(
                "delta.csv",
                &["mu", "T", "delta", "mu_factorial_total", "n_t_pow_mu", "tolerance_sensitive"],
            );
            t.push(vec![
                ms.mu().to_string(),
                num(ms.t()),
                d.value.to_string(),
                (fact * ms.total() as u128).to_string(),
                num(n_t(ms.t()).powi(ms.mu() as i32)),
                d.tolerance_sensitive.to_string(),
            ]);
            emit(&t, a.out.as_ref())?;
        }
        OrdsumsAction::Gmu => {
            let ms = load_ms()?;
            let mut t = Table::new("gmu.csv", &["alpha", "measured", "predicted", "tail_bound"]);
            for alpha in parse_grid(&a.alpha_grid)? {
                let e = g_mu(&ms, ms.t().powf(alpha), ms.t(), a.window)?;
                t.push(vec![
                    num(alpha),
                    num(e.value),
                    num(theorem2_main_term(ms.mu(), alpha, ms.t())),
                    num(e.tail_bound),
                ]);
            }
            emit(&t, a.out.as_ref())?;
        }
        OrdsumsAction::Nmu => {
            let ms = load_ms()?;
            let mut t = Table::new("nmu.csv", &["u", "n_mu"]);
            for &u in &a.u {
                t.push(vec![num(u), num(close_pair_count(&ms, u))]);
            }
            emit(&t, a.out.as_ref())?;
        }
        OrdsumsAction::Caltech => {
            if a.abcd.len() != 4 {
                bail!("--abcd takes four integers");
            }
            let spec = a.zeros.as_deref().context("--zeros is required")?;
            let t = a.t.context("--T is required")?;
            let cat = catalog_for(spec, t)?;
            let r = stieltjes_weighted_integral(&cat, a.abcd[0], a.abcd[1], a.abcd[2], a.abcd[3], t)?;
            let mut tab = Table::new("caltech.csv", &["T", "exact", "main", "ratio"]);
            tab.push(vec![num(t), num(r.exact), num(r.main), num(r.ratio())]);
            emit(&tab, a.out.as_ref())?;
        }
        OrdsumsAction::Logtau => {
            let ms = load_ms()?;
            let tau = a.tau.unwrap_or(ms.t());
            let r = log_tau_sum(&ms, tau);
            let mut tab = Table::new("logtau.csv", &["mu", "t", "exact", "main", "ratio"]);
            tab.push(vec![ms.mu().to_string(), num(tau), num(r.exact), num(r.main), num(r.ratio())]);
            emit(&tab, a.out.as_ref())?;
        }
    }
    Ok(())
}

fn arith(action: ArithAction) -> Result<()> {
    match action {
        ArithAction::Lemma { which, x, a, b, k, out } => {
            let case = match which.as_str() {
                "beef" => LemmaCase::Beef { a, b },
                "wagyu" => LemmaCase::Wagyu { k },
                "steak" => LemmaCase::Steak { a },
                "sirloin" => LemmaCase::Sirloin { a },
                other => bail!("unknown lemma '{other}' (beef, steak, wagyu, sirloin)"),
            };
            let mut t = Table::new(
                "lemma.csv",
                &["lemma", "x", "exact", "main", "ratio", "error_scale", "tail_bound"],
            );
            for &xv in &x {
                let c = case.eval(xv)?;
                t.push(vec![
                    case.label(),
                    num(xv),
                    num(c.exact),
                    num(c.main),
                    num(c.ratio()),
                    num(c.error_scale),
                    num(c.tail_bound),
                ]);
            }
            emit(&t, out.as_ref())
        }
        ArithAction::Gonek { zeros, n, t, out } => {
            let cat = catalog_for(&zeros, t)?;
            let mut tab = Table::new(
                "gonek.csv",
                &["n", "T", "exact_re", "exact_im", "main", "ratio", "error_scale"],
            );
            for nn in n {
                let s = gonek_sum(&cat, nn, t)?;
                tab.push(vec![
                    nn.to_string(),
                    num(t),
                    num(s.value.re),
                    num(s.value.im),
                    num(s.prediction),
                    num(s.value.re / s.prediction),
                    num(s.error_scale),
                ]);
            }
            emit(&tab, out.as_ref())
        }
        ArithAction::Phi { zeros, mu, k, n, t, merge_tol, out } => {
            let cat = catalog_for(&zeros, t)?;
            let tol = merge_tol.unwrap_or(default_merge_tol(mu, cat.precision_hint()));
            let ms = build_sum_multiset(&cat, mu, t, tol)?;
            let mut tab = Table::new(
                "phi.csv",
                &["mu", "k", "n", "T", "exact_re", "exact_im", "main", "ratio", "error_scale"],
            );
            for nn in n {
                let s = phi_sum(&ms, nn, k)?;
                tab.push(vec![
                    mu.to_string(),
                    k.to_string(),
                    nn.to_string(),
                    num(t),
                    num(s.value.re),
                    num(s.value.im),
                    num(s.prediction),
                    num(s.value.re / s.prediction),
                    num(s.error_scale),
                ]);
            }
            emit(&tab, out.as_ref())
        }
    }
}

fn explicit(a: ExplicitArgs) -> Result<()> {
    let height = a.t_grid.iter().fold(0.0f64, |m, t| m.max(t.abs())) + a.window;
    let cat = catalog_for(&a.zeros, height)?;
    let mut t = Table::new(
        "explicit.csv",
        &["x", "t", "nu", "k", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "residual", "bounds"],
    );
    let mut rows = Vec::new();
    for &nu in &a.nu {
        for &k in &a.k {
            for &x in &a.x_grid {
                for &tt in &a.t_grid {
                    let s = identity_residual(&cat, x, tt, nu, k, a.window, a.tol)?;
                    t.push(vec![
                        num(x),
                        num(tt),
                        num(nu),
                        k.to_string(),
                        num(s.lhs.re),
                        num(s.lhs.im),
                        num(s.rhs.re),
                        num(s.rhs.im),
                        num(s.residual),
                        num(s.zero_tail_bound + s.dirichlet_tail_bound),
                    ]);
                    rows.push(s);
                }
            }
        }
    }
    if a.format == "json" {
        emit_json(&rows, a.out.as_ref())
    } else {
        emit(&t, a.out.as_ref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_parse() {
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:0.05").unwrap().len(), 21);
        assert_eq!(parse_grid("1,2.5").unwrap(), vec![1.0, 2.5]);
        assert!(parse_grid("1:0:0.1").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
