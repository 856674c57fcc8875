//! Von Mangoldt sieve, prime-power sums with their main terms, and Gonek-type
//! exponential sums over zero ordinates.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ordinate_sums::SumMultiset;
use crate::summation::{ComplexSum, CompensatedSum};
use crate::zeros::ZeroCatalog;
use crate::Complex;

/// Largest sieve the library will build.
pub const SIEVE_BUDGET: u64 = 100_000_000;

/// Default truncation cap for sums over n > x.
pub const DEFAULT_CUTOFF_CAP: u64 = 1 << 26;

/// Target for automatically chosen cutoffs, relative to the main term.
pub const TAIL_TARGET: f64 = 1e-9;

/// Λ(n) for n ≤ limit, stored as a prime bitset.
#[derive(Debug, Clone)]
pub struct MangoldtTable {
    limit: u64,
    composite: Vec<u64>,
}

impl MangoldtTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > SIEVE_BUDGET {
            return Err(Error::SieveBudget {
                limit,
                budget: SIEVE_BUDGET,
            });
        }
        let words = (limit as usize >> 6) + 1;
        let mut composite = vec![0u64; words];
        let set = |c: &mut Vec<u64>, i: u64| c[(i >> 6) as usize] |= 1 << (i & 63);
        set(&mut composite, 0);
        if limit >= 1 {
            set(&mut composite, 1);
        }
        let mut p = 2u64;
        while p * p <= limit {
            if composite[(p >> 6) as usize] & (1 << (p & 63)) == 0 {
                let mut m = p * p;
                while m <= limit {
                    set(&mut composite, m);
                    m += p;
                }
            }
            p += 1;
        }
        Ok(Self { limit, composite })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.composite[(n >> 6) as usize] & (1 << (n & 63)) == 0
    }

    /// Primes up to `hi`, ascending.
    pub fn primes(&self, hi: u64) -> impl Iterator<Item = u64> + '_ {
        (2..=hi.min(self.limit)).filter(move |&n| self.is_prime(n))
    }

    /// Λ(n); panics past the limit.
    pub fn lambda(&self, n: u64) -> f64 {
        assert!(n <= self.limit, "n = {n} beyond sieve limit {}", self.limit);
        if n < 2 {
            return 0.0;
        }
        if self.is_prime(n) {
            return (n as f64).ln();
        }
        let mut p = 2u64;
        while p * p <= n {
            if n % p == 0 {
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                return if m == 1 { (p as f64).ln() } else { 0.0 };
            }
            p += 1;
        }
        0.0
    }

    /// Λ(0..=limit).
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.limit as usize + 1];
        self.for_each_prime_power(1, self.limit, |n, lp| v[n as usize] = lp);
        v
    }

    /// Calls `f(n, log p)` for every prime power n = p^j in (lo, hi], grouped
    /// by p ascending.
    pub fn for_each_prime_power<F: FnMut(u64, f64)>(&self, lo: u64, hi: u64, mut f: F) {
        let hi = hi.min(self.limit);
        for p in self.primes(hi) {
            let lp = (p as f64).ln();
            let mut q = p;
            loop {
                if q > lo {
                    f(q, lp);
                }
                match q.checked_mul(p) {
                    Some(next) if next <= hi => q = next,
                    _ => break,
                }
            }
        }
    }
}

/// Λ(0..=n).
pub fn mangoldt_values(n: usize) -> Vec<f64> {
    MangoldtTable::new(n as u64)
        .expect("callers stay within the sieve budget")
        .values()
}

/// Exact sum, its main term, and the error scale 1/L_x.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MainTermComparison {
    pub exact: f64,
    pub main: f64,
    pub error_scale: f64,
    /// Smooth estimate ∫ g of the terms past the cutoff, included in `exact`.
    pub tail_estimate: f64,
    /// Bound on the error of that estimate; 0 for finite sums.
    pub tail_bound: f64,
    pub cutoff: Option<u64>,
}

impl MainTermComparison {
    pub fn ratio(&self) -> f64 {
        self.exact / self.main
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("x must be at least 1, got {x}")));
    }
    Ok(())
}

fn sum_below<F: Fn(u64, f64) -> f64>(x: f64, f: F) -> Result<f64> {
    let table = MangoldtTable::new(x.floor() as u64)?;
    let mut acc = CompensatedSum::new();
    table.for_each_prime_power(1, table.limit(), |n, lp| acc.add(f(n, lp)));
    Ok(acc.value())
}

/// ∫_V^∞ log^h v · v^{−g} dv for g > 1, V ≥ 1.
fn log_power_tail(v: f64, h: u32, g: f64) -> f64 {
    let lv = v.ln();
    let gm = g - 1.0;
    let mut acc = 0.0;
    for j in 0..=h {
        acc += factorial(h) / factorial(j) * lv.powi(j as i32) / gm.powi((h - j + 1) as i32);
    }
    v.powf(-gm) * acc
}

/// Largest |ψ(u)/u − 1| for u ≥ n (0.078 is attained near u = 96).
fn chebyshev_deviation(n: f64) -> f64 {
    if n >= 1e6 {
        0.01
    } else {
        0.1
    }
}

/// Σ_{n>N} Λ(n) g(n) − ∫_N^∞ g, by parts with |ψ(u) − u| ≤ δu, for |g|
/// decreasing: at most δ (2N|g(N)| + ∫|g|).
fn tail_uncertainty(n: f64, g_at_n: f64, integral: f64) -> f64 {
    chebyshev_deviation(n) * (2.0 * n * g_at_n.abs() + integral.abs())
}

/// ∫_N^∞ g by the substitution u = N e^s; g must decay faster than 1/u.
fn numeric_tail_integral<G: Fn(f64) -> f64>(g: G, n: f64, a: f64) -> Result<f64> {
    let s_max = 80.0 / (a - 1.0);
    let q = crate::quadrature::integrate(
        |s| {
            let u = n * s.exp();
            g(u) * u
        },
        0.0,
        s_max,
        1e-300,
        1e-12,
    )?;
    Ok(q.value)
}

fn check_fat_tail(a: f64) -> Result<()> {
    if !(a > 1.1) {
        return Err(Error::TailTooFat { a });
    }
    Ok(())
}

/// Sums over x < n ≤ N, then adds the smooth estimate ∫_N^∞ g of the rest.
/// `tail(N)` returns (g(N), ∫_N^∞ g). Without an explicit cutoff, N doubles
/// from 2x until the uncertainty of that estimate falls below
/// TAIL_TARGET·|main| or N reaches the cap.
fn truncated_sum<F, B>(x: f64, cutoff: Option<u64>, main: f64, f: F, tail: B) -> Result<TailedSum>
where
    F: Fn(u64, f64) -> f64,
    B: Fn(f64) -> Result<(f64, f64)>,
{
    let uncertainty = |n: f64| -> Result<f64> {
        let (g, i) = tail(n)?;
        Ok(tail_uncertainty(n, g, i))
    };
    let n = match cutoff {
        Some(n) => {
            if (n as f64) < x {
                return Err(Error::InvalidParameter(format!("cutoff {n} below x = {x}")));
            }
            n
        }
        None => {
            let mut n = ((2.0 * x).ceil() as u64).max(64);
            while uncertainty(n as f64)? > TAIL_TARGET * main.abs() && n < DEFAULT_CUTOFF_CAP {
                n = (2 * n).min(DEFAULT_CUTOFF_CAP);
            }
            n
        }
    };
    let (g, estimate) = tail(n as f64)?;
    let bound = tail_uncertainty(n as f64, g, estimate);
    if bound > TAIL_TARGET * main.abs() {
        log::debug!("tail uncertainty {bound:e} at cutoff {n} misses the relative target");
    }
    let table = MangoldtTable::new(n)?;
    let mut acc = CompensatedSum::new();
    table.for_each_prime_power(x.floor() as u64, n, |m, lp| acc.add(f(m, lp)));
    Ok(TailedSum {
        truncated: acc.value(),
        estimate,
        bound,
        cutoff: n,
    })
}

struct TailedSum {
    truncated: f64,
    estimate: f64,
    bound: f64,
    cutoff: u64,
}

impl TailedSum {
    fn into_comparison(self, main: f64, lx: f64) -> MainTermComparison {
        MainTermComparison {
            exact: self.truncated + self.estimate,
            main,
            error_scale: 1.0 / lx,
            tail_estimate: self.estimate,
            tail_bound: self.bound,
            cutoff: Some(self.cutoff),
        }
    }
}

/// Σ_{n≤x} Λ(n)² n^a log^b(x/n) against b! x^{a+1} L_x/(a+1)^{b+1}.
pub fn lemma_beef(x: f64, a: f64, b: u32) -> Result<MainTermComparison> {
    check_x(x)?;
    if !(a > -1.0) {
        return Err(Error::Range(format!("a must exceed -1, got {a}")));
    }
    let lx = x.ln();
    let exact = sum_below(x, |n, lp| {
        let nf = n as f64;
        lp * lp * nf.powf(a) * (x / nf).ln().powi(b as i32)
    })?;
    Ok(MainTermComparison {
        exact,
        main: factorial(b) * x.powf(a + 1.0) * lx / (a + 1.0).powi(b as i32 + 1),
        error_scale: 1.0 / lx,
        tail_estimate: 0.0,
        tail_bound: 0.0,
        cutoff: None,
    })
}

/// Σ_{n>x} Λ(n)² n^{−a} log^b(x/n) against (−1)^b b! x^{1−a} L_x/(a−1)^{b+1}.
pub fn lemma_steak(x: f64, a: f64, b: u32, cutoff: Option<u64>) -> Result<MainTermComparison> {
    check_x(x)?;
    check_fat_tail(a)?;
    let lx = x.ln();
    let sign = if b % 2 == 0 { 1.0 } else { -1.0 };
    let main = sign * factorial(b) * x.powf(1.0 - a) * lx / (a - 1.0).powi(b as i32 + 1);
    // g(u) = (−1)^b log u · log^b(u/x) · u^{−a}; with u = xv the integral is
    // x^{1−a} ∫_V^∞ (L_x + log v) log^b v v^{−a} dv.
    let tail = |n: f64| {
        let v = n / x;
        let g = sign * n.ln() * v.ln().powi(b as i32) * n.powf(-a);
        let integral = x.powf(1.0 - a) * (lx * log_power_tail(v, b, a) + log_power_tail(v, b + 1, a));
        Ok((g, sign * integral))
    };
    let sum = truncated_sum(
        x,
        cutoff,
        main,
        |m, lp| {
            let mf = m as f64;
            lp * lp * mf.powf(-a) * (x / mf).ln().powi(b as i32)
        },
        tail,
    )?;
    Ok(sum.into_comparison(main, lx))
}

/// Σ_{n≤x} Λ(n)^k n^a against x^{a+1} L_x^{k−1}/(a+1).
pub fn lemma_wagyu(x: f64, k: u32, a: f64) -> Result<MainTermComparison> {
    check_x(x)?;
    if k == 0 {
        return Err(Error::Range("k must be at least 1".into()));
    }
    if !(a > -1.0) {
        return Err(Error::Range(format!("a must exceed -1, got {a}")));
    }
    let lx = x.ln();
    let exact = sum_below(x, |n, lp| lp.powi(k as i32) * (n as f64).powf(a))?;
    Ok(MainTermComparison {
        exact,
        main: x.powf(a + 1.0) * lx.powi(k as i32 - 1) / (a + 1.0),
        error_scale: 1.0 / lx,
        tail_estimate: 0.0,
        tail_bound: 0.0,
        cutoff: None,
    })
}

/// Σ_{n≤x} Λ(n)^k / n against L_x^k / k.
pub fn wagyu_harmonic(x: f64, k: u32) -> Result<MainTermComparison> {
    check_x(x)?;
    if k == 0 {
        return Err(Error::Range("k must be at least 1".into()));
    }
    let lx = x.ln();
    let exact = sum_below(x, |n, lp| lp.powi(k as i32) / n as f64)?;
    Ok(MainTermComparison {
        exact,
        main: lx.powi(k as i32) / k as f64,
        error_scale: 1.0 / lx,
        tail_estimate: 0.0,
        tail_bound: 0.0,
        cutoff: None,
    })
}

/// Which sirloin display to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SirloinDisplay {
    /// Σ_{n>x} Λ(n)^k n^{−a}
    Plain,
    /// Σ_{n>x} Λ(n)^k n^{−a} log n log log n
    LogLog,
}

pub fn lemma_sirloin(
    x: f64,
    k: u32,
    a: f64,
    display: SirloinDisplay,
    cutoff: Option<u64>,
) -> Result<MainTermComparison> {
    check_x(x)?;
    if k == 0 {
        return Err(Error::Range("k must be at least 1".into()));
    }
    check_fat_tail(a)?;
    if display == SirloinDisplay::LogLog && x < 3.0 {
        return Err(Error::Range(format!("the log log display needs x ≥ 3, got {x}")));
    }
    let lx = x.ln();
    let h = k - 1;
    let main = match display {
        SirloinDisplay::Plain => x.powf(1.0 - a) * lx.powi(h as i32) / (a - 1.0),
        SirloinDisplay::LogLog => x.powf(1.0 - a) * lx.powi(k as i32) * lx.ln() / (a - 1.0),
    };
    // g(u) = log^{k−1} u · u^{−a} (· log u log log u)
    let g = move |u: f64| {
        let lu = u.ln();
        match display {
            SirloinDisplay::Plain => lu.powi(h as i32) * u.powf(-a),
            SirloinDisplay::LogLog => lu.powi(k as i32) * lu.ln() * u.powf(-a),
        }
    };
    let tail = |n: f64| {
        let integral = match display {
            SirloinDisplay::Plain => log_power_tail(n, h, a),
            SirloinDisplay::LogLog => numeric_tail_integral(g, n, a)?,
        };
        Ok((g(n), integral))
    };
    let sum = truncated_sum(
        x,
        cutoff,
        main,
        |m, lp| {
            let mf = m as f64;
            let base = lp.powi(k as i32) * mf.powf(-a);
            match display {
                SirloinDisplay::Plain => base,
                SirloinDisplay::LogLog => base * mf.ln() * mf.ln().ln(),
            }
        },
        tail,
    )?;
    Ok(sum.into_comparison(main, lx))
}

/// λ_n = −Λ(n)/(2π√n) and the envelope ℰ(n, T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GonekConstants {
    pub n: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub lambda_n: f64,
    pub error_scale: f64,
}

impl GonekConstants {
    pub fn new(n: u64, t: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Range(format!("n must be at least 2, got {n}")));
        }
        if !(t > std::f64::consts::E) {
            return Err(Error::Range(format!("T must exceed e, got {t}")));
        }
        if n > SIEVE_BUDGET {
            return Err(Error::SieveBudget {
                limit: n,
                budget: SIEVE_BUDGET,
            });
        }
        let lam = single_lambda(n);
        let nf = n as f64;
        let error_scale = if nf <= t {
            let l = t.ln();
            nf.sqrt() * l * l.ln()
        } else {
            nf.sqrt() * nf.ln() * nf.ln().ln()
        };
        Ok(Self {
            n,
            t,
            lambda_n: -lam / (2.0 * PI * nf.sqrt()),
            error_scale,
        })
    }
}

/// Λ(n) by trial division.
fn single_lambda(n: u64) -> f64 {
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            while m % p == 0 {
                m /= p;
            }
            return if m == 1 { (p as f64).ln() } else { 0.0 };
        }
        p += 1;
    }
    if n >= 2 {
        (n as f64).ln()
    } else {
        0.0
    }
}

/// An exponential sum with its predicted main term and error envelope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSum {
    pub value: Complex,
    pub prediction: f64,
    pub error_scale: f64,
}

impl PhaseSum {
    /// |value − prediction| / error_scale.
    pub fn normalized_error(&self) -> f64 {
        (self.value - Complex::new(self.prediction, 0.0)).norm() / self.error_scale
    }
}

/// S(T) = Σ_{γ≤T} n^{iγ} against λ_n T.
pub fn gonek_sum(catalog: &ZeroCatalog, n: u64, t: f64) -> Result<PhaseSum> {
    let c = GonekConstants::new(n, t)?;
    let ln = (n as f64).ln();
    let value = catalog
        .up_to(t)?
        .iter()
        .map(|&g| Complex::from_polar(1.0, g * ln))
        .collect::<ComplexSum>()
        .value();
    Ok(PhaseSum {
        value,
        prediction: c.lambda_n * t,
        error_scale: c.error_scale,
    })
}

/// Φ(μ, k) = Σ count · n^{iΣγ} (Σγ)^k/k! against
/// λ_n^μ T^{μ+k}/((μ+k)(μ−1)! k!), error scale T^{μ+k−1} L^{μ−1} ℰ(n,T).
pub fn phi_sum(ms: &SumMultiset, n: u64, k: u32) -> Result<PhaseSum> {
    if k > 8 {
        return Err(Error::Range(format!("k must be at most 8, got {k}")));
    }
    let t = ms.t();
    let c = GonekConstants::new(n, t)?;
    let ln = (n as f64).ln();
    let kf = factorial(k);
    let value = ms
        .values()
        .iter()
        .zip(ms.counts())
        .map(|(&s, &cnt)| Complex::from_polar(cnt as f64 * s.powi(k as i32) / kf, s * ln))
        .collect::<ComplexSum>()
        .value();
    let mu = ms.mu();
    let prediction = c.lambda_n.powi(mu as i32) * t.powi((mu + k) as i32)
        / ((mu + k) as f64 * factorial(mu - 1) * kf);
    let error_scale = t.powi((mu + k) as i32 - 1) * t.ln().powi(mu as i32 - 1) * c.error_scale;
    Ok(PhaseSum {
        value,
        prediction,
        error_scale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        let t = MangoldtTable::new(100).unwrap();
        assert_eq!(t.lambda(8), 2f64.ln());
        assert_eq!(t.lambda(6), 0.0);
        assert_eq!(t.lambda(13), 13f64.ln());
        assert_eq!(t.lambda(1), 0.0);
        assert_eq!(t.lambda(97), 97f64.ln());
        assert_eq!(t.values()[64], 2f64.ln());
    }

    #[test]
    fn divisor_sum_identity() {
        let v = mangoldt_values(10_000);
        for n in 1..=10_000usize {
            let mut s = 0.0;
            let mut d = 1;
            while d * d <= n {
                if n % d == 0 {
                    s += v[d];
                    if d * d != n {
                        s += v[n / d];
                    }
                }
                d += 1;
            }
            assert!((s - (n as f64).ln()).abs() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn chebyshev_sanity() {
        for &x in &[1e4, 1e5, 1e6] {
            let psi = lemma_wagyu(x, 1, 0.0).unwrap().exact;
            assert!((psi / x - 1.0).abs() < 0.05, "psi({x}) = {psi}");
        }
    }

    #[test]
    fn budget() {
        assert!(matches!(
            MangoldtTable::new(SIEVE_BUDGET + 1),
            Err(Error::SieveBudget { .. })
        ));
    }

    #[test]
    fn beef_examples() {
        let r = lemma_beef(100.0, 0.0, 0).unwrap();
        assert!((r.main - 460.517).abs() < 1e-3);
        let direct: f64 = mangoldt_values(100).iter().map(|l| l * l).sum();
        assert!((r.exact - direct).abs() < 1e-9);
        assert_eq!(lemma_beef(1.0, 0.0, 0).unwrap().exact, 0.0);
        assert!(lemma_beef(10.0, -1.0, 0).is_err());
        let r = lemma_beef(1e6, 1.0, 0).unwrap();
        assert!((r.ratio() - 1.0).abs() < 0.25, "{}", r.ratio());
    }

    #[test]
    fn steak_examples() {
        let r = lemma_steak(1e3, 2.0, 0, None).unwrap();
        assert!((r.ratio() - 1.0).abs() < 0.25, "{}", r.ratio());
        let r = lemma_steak(1e3, 3.0, 1, None).unwrap();
        assert!(r.main < 0.0 && r.exact < 0.0);
        assert!(r.tail_bound < 1e-6 * r.main.abs());
        assert!(matches!(lemma_steak(1e3, 1.05, 0, None), Err(Error::TailTooFat { .. })));
    }

    #[test]
    fn steak_tail_bound_holds() {
        let near = lemma_steak(100.0, 2.5, 1, Some(2_000)).unwrap();
        let far = lemma_steak(100.0, 2.5, 1, Some(2_000_000)).unwrap();
        assert!((far.exact - near.exact).abs() <= near.tail_bound + far.tail_bound);
        assert!(far.tail_bound < near.tail_bound);
    }

    #[test]
    fn wagyu_examples() {
        let r = wagyu_harmonic(1e6, 2).unwrap();
        assert!((r.ratio() - 1.0).abs() < 0.25, "{}", r.ratio());
        let r = lemma_wagyu(1e5, 3, 0.5).unwrap();
        assert!((r.ratio() - 1.0).abs() < 0.30, "{}", r.ratio());
        assert!(lemma_wagyu(10.0, 0, 0.0).is_err());
    }

    #[test]
    fn sirloin_examples() {
        let r = lemma_sirloin(1e3, 1, 2.0, SirloinDisplay::Plain, None).unwrap();
        assert!((r.ratio() - 1.0).abs() < 0.25, "{}", r.ratio());
        let r = lemma_sirloin(1e3, 1, 2.0, SirloinDisplay::LogLog, None).unwrap();
        assert!(r.exact > 0.0);
        assert!(matches!(
            lemma_sirloin(1e3, 1, 1.05, SirloinDisplay::Plain, None),
            Err(Error::TailTooFat { .. })
        ));
        for display in [SirloinDisplay::Plain, SirloinDisplay::LogLog] {
            let near = lemma_sirloin(50.0, 2, 2.2, display, Some(5_000)).unwrap();
            let far = lemma_sirloin(50.0, 2, 2.2, display, Some(5_000_000)).unwrap();
            assert!((far.exact - near.exact).abs() <= near.tail_bound + far.tail_bound);
        }
    }

    #[test]
    fn ratios_trend_toward_one() {
        let xs = [1e3, 1e4, 1e5, 1e6];
        let beef: Vec<f64> = xs.iter().map(|&x| lemma_beef(x, 0.0, 1).unwrap().ratio()).collect();
        let wagyu: Vec<f64> = xs.iter().map(|&x| wagyu_harmonic(x, 1).unwrap().ratio()).collect();
        for r in [beef, wagyu] {
            assert!((r[3] - 1.0).abs() < (r[0] - 1.0).abs(), "{r:?}");
        }
    }

    #[test]
    fn gonek_constants() {
        let c = GonekConstants::new(2, 1e3).unwrap();
        assert!((c.lambda_n * 1e3 + 78.0).abs() < 0.05, "{}", c.lambda_n * 1e3);
        assert_eq!(GonekConstants::new(6, 1e3).unwrap().lambda_n, 0.0);
        let below = GonekConstants::new(1000, 1000.0).unwrap();
        let above = GonekConstants::new(1001, 1000.0).unwrap();
        let l = 1000f64.ln();
        assert!((below.error_scale - 1000f64.sqrt() * l * l.ln()).abs() < 1e-9);
        let m = 1001f64;
        assert!((above.error_scale - m.sqrt() * m.ln() * m.ln().ln()).abs() < 1e-9);
        assert!(GonekConstants::new(1, 1e3).is_err());
    }

    #[test]
    fn single_ordinate_phase() {
        let c = ZeroCatalog::new(vec![14.134725], 20.0, "synthetic:one", 0.0).unwrap();
        let s = gonek_sum(&c, 3, 20.0).unwrap();
        assert!((s.value.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phi_reduces_to_gonek() {
        let c = crate::zeros::find_zeros(300.0).unwrap();
        let ms = crate::ordinate_sums::build_sum_multiset(&c, 1, 300.0, 0.0).unwrap();
        let a = phi_sum(&ms, 5, 0).unwrap();
        let b = gonek_sum(&c, 5, 300.0).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.prediction, b.prediction);
    }

    #[test]
    fn phi_matches_nested_loops() {
        let c = crate::zeros::synthetic_catalog(crate::zeros::SyntheticKind::Poisson, 9, 40.0).unwrap();
        let g = c.ordinates();
        assert!(g.len() <= 30);
        let ms = crate::ordinate_sums::build_sum_multiset(&c, 3, 40.0, 0.0).unwrap();
        let ln = 7f64.ln();
        let mut brute = Complex::new(0.0, 0.0);
        for &a in g {
            for &b in g {
                for &d in g {
                    let s = a + b + d;
                    if s <= 40.0 {
                        brute += Complex::from_polar(s * s / 2.0, s * ln);
                    }
                }
            }
        }
        let v = phi_sum(&ms, 7, 2).unwrap().value;
        assert!((v - brute).norm() < 1e-9 * brute.norm().max(1.0));
    }

    proptest! {
        #[test]
        fn lambda_positive_iff_prime_power(n in 2u64..5000) {
            let t = MangoldtTable::new(5000).unwrap();
            let mut m = n;
            let mut p = 2;
            while m % p != 0 { p += 1; }
            while m % p == 0 { m /= p; }
            prop_assert_eq!(t.lambda(n) > 0.0, m == 1);
        }
    }
}
