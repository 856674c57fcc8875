//! The Lorentzian weight family w_{ν,k} and its kernels W^{(k)}_{ν,γ}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::Complex;

pub const MAX_K: u32 = 8;

/// Selects w_{ν,k}; ν > 1/2 and k ≤ 8.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    nu: f64,
    k: u32,
}

impl WeightParams {
    pub fn new(nu: f64, k: u32) -> Result<Self> {
        if !(nu > 0.5) || !nu.is_finite() {
            return Err(Error::InvalidParameter(format!("nu must exceed 1/2, got {nu}")));
        }
        if k > MAX_K {
            return Err(Error::InvalidParameter(format!("k must be at most {MAX_K}, got {k}")));
        }
        Ok(Self { nu, k })
    }

    /// Montgomery's weight, (ν, k) = (1, 0).
    pub fn montgomery() -> Self {
        Self { nu: 1.0, k: 0 }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// C with |w(u) − 1| ≤ C u² on |u| ≤ 1.
    pub fn near_zero_constant(&self) -> f64 {
        let n = 2 * self.k + 1;
        let r_max = 1.0 / (4.0 * self.nu * self.nu);
        let mut acc = 0.0;
        let mut r_pow = 1.0;
        for m in 1..=n {
            let even = if 2 * m <= n {
                let s = if m % 2 == 0 { 1.0 } else { -1.0 };
                s * binomial(n, 2 * m)
            } else {
                0.0
            };
            acc += (even - binomial(n, m)).abs() * r_pow;
            r_pow *= r_max;
        }
        acc / (4.0 * self.nu * self.nu)
    }

    /// C′ with |w(u)| ≤ C′ |u|^{−2k−2} for all u ≠ 0.
    pub fn decay_constant(&self) -> f64 {
        (2 * self.k + 1) as f64 * (2.0 * self.nu).powi(2 * self.k as i32 + 2)
    }

    /// Bound on ∫_{|u|>r} |w(u)| du.
    pub fn tail_integral(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return f64::INFINITY;
        }
        let e = 2 * self.k as i32 + 1;
        2.0 * self.decay_constant() / (e as f64 * r.powi(e))
    }

    /// sup |w′(u)|, bounded by the sum of the derivative magnitudes of the
    /// binomial terms.
    pub fn derivative_bound(&self) -> f64 {
        // w = Σ c_m a^{n−m} b^m with a = 1/(1+r), b = r/(1+r), r = u²/4ν².
        // |d/du (a^{n−m} b^m)| ≤ n·|da/du| and |da/du| ≤ 3√3/(8·2ν)·2.
        let n = (2 * self.k + 1) as f64;
        let mut coeff_sum = 0.0;
        for m in 0..=self.k {
            coeff_sum += binomial(2 * self.k + 1, 2 * m);
        }
        let da = 3.0 * 3f64.sqrt() / (8.0 * self.nu);
        coeff_sum * n * da
    }
}

fn binomial(n: u32, r: u32) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    let mut acc = 1.0;
    for i in 0..r {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Montgomery's weight 4/(u² + 4).
pub fn montgomery_weight(u: f64) -> f64 {
    4.0 / (u * u + 4.0)
}

/// w_{ν,k}(u) = (2ν)^{2k+1} Re{(2ν − iu)^{2k+1}} / (u² + 4ν²)^{2k+1}.
pub fn general_weight(p: WeightParams, u: f64) -> f64 {
    let four_nu2 = 4.0 * p.nu * p.nu;
    let u2 = u * u;
    let d = u2 + four_nu2;
    let a = four_nu2 / d;
    let b = u2 / d;
    let n = 2 * p.k + 1;
    let mut acc = 0.0;
    for m in 0..=p.k {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * binomial(n, 2 * m) * a.powi((n - m) as i32) * b.powi(m as i32);
    }
    acc
}

/// The `deriv`-th t-derivative of W_{ν,γ}(t) = 2ν/((t−γ)² + ν²).
pub fn lorentzian_kernel(p: WeightParams, gamma: f64, t: f64, deriv: u32) -> Result<f64> {
    if deriv > MAX_K {
        return Err(Error::InvalidParameter(format!(
            "kernel derivative {deriv} exceeds {MAX_K}"
        )));
    }
    Ok(kernel(p.nu, t - gamma, deriv))
}

// 2(−1)^{k+1} k! Im((d + iν)^{−k−1})
pub(crate) fn kernel(nu: f64, d: f64, k: u32) -> f64 {
    if k == 0 {
        return 2.0 * nu / (d * d + nu * nu);
    }
    let z = Complex::new(d, nu);
    let im = z.powi(-(k as i32) - 1).im;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sign * factorial(k) * im
}

/// Closed form of ∫ W^{(k)}_{ν,0}(t) W^{(k)}_{ν,δ}(t) dt.
pub fn kernel_product_closed_form(p: WeightParams, delta: f64) -> f64 {
    let k = p.k;
    4.0 * std::f64::consts::PI * factorial(2 * k) / (2.0 * p.nu).powi(2 * k as i32 + 1)
        * general_weight(p, delta)
}

/// Both evaluations of the kernel-product integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelIntegral {
    pub closed_form: f64,
    pub quadrature: f64,
    /// Bound on the integral outside the quadrature window.
    pub tail_bound: f64,
    pub relative_discrepancy: f64,
}

pub const KERNEL_QUADRATURE_RADIUS: f64 = 1e4;
pub const KERNEL_DISAGREEMENT_TOL: f64 = 1e-7;

/// ∫_ℝ W^{(k)}_{ν,0} W^{(k)}_{ν,δ} dt by adaptive quadrature on
/// [−10⁴, 10⁴] and in closed form; errors if they disagree beyond 1e−7.
pub fn kernel_product_integral(p: WeightParams, delta: f64) -> Result<KernelIntegral> {
    let r = KERNEL_QUADRATURE_RADIUS;
    if !(delta.abs() < r / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "offset {delta} too large for the quadrature window"
        )));
    }
    let nu = p.nu;
    let k = p.k;
    let f = |t: f64| kernel(nu, t, k) * kernel(nu, t - delta, k);
    let mut breaks = vec![-r, r];
    for c in [0.0, delta] {
        for s in [0.0, 1.0, 10.0, 100.0, 1000.0] {
            breaks.push(c - s * nu);
            breaks.push(c + s * nu);
        }
    }
    breaks.retain(|b| b.abs() <= r);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let closed = kernel_product_closed_form(p, delta);
    let scale = kernel_product_closed_form(p, 0.0);
    let q = quadrature::integrate_with_breaks(f, &breaks, 1e-13 * scale, 1e-11)?;
    // |W^{(k)}(t)| ≤ 2(k+1)! ν / |t|^{k+2}
    let c = 2.0 * factorial(k + 1) * nu;
    let far = r - delta.abs();
    let e = 2 * k as i32 + 3;
    let tail_bound = 2.0 * c * c / (e as f64 * far.powi(e));
    let denom = if closed.abs() > 1e-6 * scale {
        closed.abs()
    } else {
        scale
    };
    let relative = ((q.value - closed).abs() - tail_bound).max(0.0) / denom;
    if relative > KERNEL_DISAGREEMENT_TOL {
        return Err(Error::QuadratureDisagreement {
            closed,
            quadrature: q.value,
            relative,
        });
    }
    Ok(KernelIntegral {
        closed_form: closed,
        quadrature: q.value,
        tail_bound,
        relative_discrepancy: relative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn wp(nu: f64, k: u32) -> WeightParams {
        WeightParams::new(nu, k).unwrap()
    }

    #[test]
    fn montgomery_values() {
        assert_eq!(montgomery_weight(0.0), 1.0);
        assert_eq!(montgomery_weight(2.0), 0.5);
        assert_eq!(montgomery_weight(6.0), 0.1);
        assert_eq!(montgomery_weight(-6.0), 0.1);
    }

    #[test]
    fn rejects_bad_params() {
        assert!(WeightParams::new(0.5, 0).is_err());
        assert!(WeightParams::new(1.0, 9).is_err());
        assert!(WeightParams::new(f64::NAN, 0).is_err());
    }

    #[test]
    fn nu_one_k_zero_is_montgomery() {
        for i in -50..=50 {
            let u = i as f64 * 0.37;
            assert!((general_weight(wp(1.0, 0), u) - montgomery_weight(u)).abs() < 1e-15);
        }
    }

    #[test]
    fn displayed_rational_forms() {
        for i in 0..100 {
            let u = -10.0 + 20.0 * i as f64 / 99.0;
            let u2 = u * u;
            let d = u2 + 4.0;
            let w11 = 16.0 * (4.0 - 3.0 * u2) / d.powi(3);
            let w12 = 64.0 * (16.0 - 40.0 * u2 + 5.0 * u2 * u2) / d.powi(5);
            let w13 = 256.0 * (64.0 - 336.0 * u2 + 140.0 * u2 * u2 - 7.0 * u2.powi(3))
                / d.powi(7);
            assert!((general_weight(wp(1.0, 1), u) - w11).abs() < 1e-12);
            assert!((general_weight(wp(1.0, 2), u) - w12).abs() < 1e-12);
            assert!((general_weight(wp(1.0, 3), u) - w13).abs() < 1e-12);
        }
        assert!((general_weight(wp(1.0, 1), 2.0) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn kernel_peak_values() {
        assert_eq!(lorentzian_kernel(wp(1.0, 0), 3.0, 3.0, 0).unwrap(), 2.0);
        assert_eq!(lorentzian_kernel(wp(1.7, 0), 3.0, 3.0, 1).unwrap(), 0.0);
    }

    #[test]
    fn kernel_second_derivative_by_differences() {
        let p = wp(1.0, 0);
        let h = 1e-4;
        let f = |t: f64| lorentzian_kernel(p, 0.0, t, 0).unwrap();
        let fd = (f(1.0 + h) - 2.0 * f(1.0) + f(1.0 - h)) / (h * h);
        assert!((lorentzian_kernel(p, 0.0, 1.0, 2).unwrap() - fd).abs() < 1e-6);
    }

    #[test]
    fn kernel_derivatives_chain() {
        let h = 1e-5;
        for k in 0..6 {
            let f = |t: f64| kernel(0.8, t, k);
            for &t in &[-2.0, 0.3, 1.7] {
                let fd = (f(t + h) - f(t - h)) / (2.0 * h);
                let exact = kernel(0.8, t, k + 1);
                assert!((fd - exact).abs() < 1e-5 * (1.0 + exact.abs()), "k={k} t={t}");
            }
        }
    }

    #[test]
    fn kernel_integral_examples() {
        let a = kernel_product_integral(wp(1.0, 0), 0.0).unwrap();
        assert!((a.closed_form - 2.0 * PI).abs() < 1e-12);
        let b = kernel_product_integral(wp(1.0, 0), 2.0).unwrap();
        assert!((b.closed_form - PI).abs() < 1e-12);
        let c = kernel_product_integral(wp(1.0, 1), 2.0).unwrap();
        assert!((c.closed_form + PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn decay_and_near_zero_bounds_hold() {
        for &nu in &[0.75, 1.0, 2.0] {
            for k in 0..=MAX_K {
                let p = wp(nu, k);
                let c = p.near_zero_constant();
                let cp = p.decay_constant();
                for i in 1..=200 {
                    let u = i as f64 * 0.005;
                    let w = general_weight(p, u);
                    assert!((w - 1.0).abs() <= c * u * u * (1.0 + 1e-12) + 1e-15);
                }
                for i in 1..=200 {
                    let u = 4.0 * nu + i as f64 * 0.7;
                    let w = general_weight(p, u);
                    assert!(w.abs() <= cp * u.powi(-2 * k as i32 - 2) * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn derivative_bound_holds() {
        for &nu in &[0.75, 1.0, 2.0] {
            for k in 0..=4 {
                let p = wp(nu, k);
                let b = p.derivative_bound();
                let h = 1e-6;
                for i in 0..400 {
                    let u = i as f64 * 0.05;
                    let d = (general_weight(p, u + h) - general_weight(p, u - h)) / (2.0 * h);
                    assert!(d.abs() <= b, "nu={nu} k={k} u={u} d={d} b={b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn even_and_normalized(nu in 0.51f64..5.0, k in 0u32..=8, u in -1e3f64..1e3) {
            let p = wp(nu, k);
            prop_assert_eq!(general_weight(p, u), general_weight(p, -u));
            prop_assert!((general_weight(p, 0.0) - 1.0).abs() < 1e-12);
            prop_assert!(general_weight(p, u).abs() <= 1.0 + 1e-12);
        }
    }
}
