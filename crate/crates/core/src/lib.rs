//! Numerical laboratory for pair correlation of Riemann zeta zeros and of
//! sums of zero ordinates.
//!
//! The crate is organized bottom-up:
//!
//! * [`special`] evaluates ζ, ζ′/ζ, digamma/polygamma and the Riemann–Siegel
//!   Z-function.
//! * [`zeros`] ingests, validates, serializes and (at low height) locates
//!   zeros on the critical line.
//! * [`weights`] holds the Lorentzian weight family w_{ν,k} and its kernels.
//! * [`pair_correlation`] measures F_{ν,k}(x, T) and kernel-convolution sums.
//! * [`ordinate_sums`] builds the ordered multiset of ordinate sums and the
//!   statistics defined over it.
//! * [`arithmetic`] holds the von Mangoldt sieve, prime-power sum lemmas and
//!   Gonek-type exponential sums.
//! * [`explicit_formula`] evaluates both sides of the Landau-type identity
//!   pointwise.
//!
//! Shared result types ([`AsymptoticReport`], [`CorrelationEstimate`],
//! [`ZeroCatalog`], ...) are re-exported at the crate root.

pub mod arithmetic;
pub mod error;
pub mod explicit_formula;
pub mod ordinate_sums;
pub mod pair_correlation;
pub mod quadrature;
pub mod report;
pub mod special;
pub mod summation;
pub mod weights;
pub mod zeros;

pub use arithmetic::{GonekConstants, MainTermComparison, MangoldtTable, PhaseSum};
pub use error::{Error, Result};
pub use explicit_formula::FormulaSides;
pub use ordinate_sums::{NtConstant, SumHistogram, SumMultiset};
pub use pair_correlation::{CorrelationEstimate, KernelKind, KernelPair};
pub use report::{AsymptoticReport, Comparison};
pub use special::ComplexPoint;
pub use weights::WeightParams;
pub use zeros::{SyntheticKind, ZeroCatalog};

/// Complex numbers used throughout.
pub type Complex = num_complex::Complex64;

/// 𝒩_T = T log T / 2π, the asymptotic zero count to height T.
pub fn n_t(t: f64) -> f64 {
    t * t.ln() / (2.0 * std::f64::consts::PI)
}
