//! Special functions: ζ(s) and its logarithmic derivative, digamma and
//! polygamma, and the Riemann–Siegel Z-function.
//!
//! Everything here is a pure function of its arguments.

mod gamma;
mod jet;
mod riemann_siegel;
mod rs_coeffs;
mod zeta;

pub use gamma::{digamma, ln_gamma, polygamma};
pub use jet::Jet;
pub use riemann_siegel::{
    gram_point, hardy_z, riemann_siegel_theta, riemann_siegel_z, riemann_siegel_z_with, ZValue,
    EULER_MACLAURIN_Z_CEILING,
};
pub use zeta::{
    log_deriv_zeta, log_deriv_zeta_jet, log_deriv_zeta_series, zeta, zeta_jet, zeta_jet_bounded,
    DIRICHLET_MARGIN,
};

use crate::Complex;

/// A point s = σ + it of the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub const fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    pub const fn real(sigma: f64) -> Self {
        Self { sigma, t: 0.0 }
    }

    /// τ = |t| + 10.
    pub fn tau(&self) -> f64 {
        self.t.abs() + 10.0
    }

    pub fn conj(&self) -> Self {
        Self {
            sigma: self.sigma,
            t: -self.t,
        }
    }

    pub fn as_complex(&self) -> Complex {
        Complex::new(self.sigma, self.t)
    }
}

impl From<Complex> for ComplexPoint {
    fn from(z: Complex) -> Self {
        Self::new(z.re, z.im)
    }
}

impl From<ComplexPoint> for Complex {
    fn from(p: ComplexPoint) -> Self {
        p.as_complex()
    }
}

/// B_{2j} / (2j)! for j = 1, 2, ...; index 0 holds j = 1.
pub(crate) fn bernoulli_over_factorial(j: usize) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        // B_{2j}/(2j)! = (-1)^{j+1} 2 ζ(2j) / (2π)^{2j}
        let two_pi = 2.0 * std::f64::consts::PI;
        (1..=60)
            .map(|j: i32| {
                if j <= 10 {
                    let b = BERNOULLI_EVEN[j as usize - 1];
                    let fact: f64 = (1..=2 * j).map(f64::from).product();
                    return b / fact;
                }
                let zeta_2j = {
                    {
                        let mut acc = 0.0;
                        for n in (1..=200).rev() {
                            acc += (n as f64).powi(-2 * j);
                        }
                        acc
                    }
                };
                let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                sign * 2.0 * zeta_2j / two_pi.powi(2 * j)
            })
            .collect()
    });
    table[j - 1]
}

/// Exact Bernoulli numbers B_2 .. B_20 (index 0 holds B_2).
pub(crate) const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_ratios_match_exact_values() {
        let mut fact = 1.0;
        for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
            let n = 2 * (i + 1);
            fact *= ((n - 1) * n) as f64;
            let expected = b / fact;
            let got = bernoulli_over_factorial(i + 1);
            assert!(
                ((got - expected) / expected).abs() < 1e-13,
                "j={} got {got} expected {expected}",
                i + 1
            );
        }
    }

    #[test]
    fn tau_is_at_least_ten() {
        assert_eq!(ComplexPoint::new(0.5, -3.0).tau(), 13.0);
        assert_eq!(ComplexPoint::real(2.0).tau(), 10.0);
    }
}
