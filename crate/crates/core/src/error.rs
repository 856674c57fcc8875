use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zeta has a pole at s = 1")]
    PoleAtOne,

    #[error("pole of the gamma function at s = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("{what}: tolerance {tol:e} not reached (best error estimate {achieved:e})")]
    NonConvergence {
        what: &'static str,
        tol: f64,
        achieved: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{0} is outside the stated range")]
    Range(String),

    #[error("line {line}: cannot parse {text:?} as a positive ordinate")]
    Parse { line: usize, text: String },

    #[error("line {line}: ordinate {value} is below its predecessor {previous}")]
    Monotonicity {
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("no ordinates in input")]
    EmptyInput,

    #[error("height {requested} exceeds catalog coverage t_max = {t_max}")]
    Coverage { requested: f64, t_max: f64 },

    #[error("zero finder located {found} zeros up to {t_max}, main term predicts {expected:.2}")]
    MissedZeros {
        found: usize,
        expected: f64,
        t_max: f64,
    },

    #[error("window {window} is below the mean gap {mean_gap:.4}")]
    DegenerateWindow { window: f64, mean_gap: f64 },

    #[error("quadrature {quadrature:e} disagrees with closed form {closed:e} (relative {relative:e})")]
    QuadratureDisagreement {
        closed: f64,
        quadrature: f64,
        relative: f64,
    },

    #[error("alpha grid too coarse: quadrature error estimate {estimate:e} against value {value:e}")]
    GridTooCoarse { estimate: f64, value: f64 },

    #[error("multiset would hold more than {budget} entries; stream into a histogram instead")]
    MemoryBudget { budget: usize },

    #[error("tail of the series is too fat for exponent a = {a} (need a > 1.1)")]
    TailTooFat { a: f64 },

    #[error("nu = {nu} is too close to 1/2 (need nu > {min})")]
    ConvergenceMargin { nu: f64, min: f64 },

    #[error("sieve limit {limit} exceeds budget {budget}")]
    SieveBudget { limit: u64, budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
