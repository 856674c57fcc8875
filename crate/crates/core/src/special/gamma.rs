use super::{ComplexPoint, BERNOULLI_EVEN};
use crate::error::{Error, Result};
use crate::Complex;

const SHIFT_TARGET: f64 = 15.0;
const MAX_SHIFT: usize = 1_000_000;

fn check_pole(z: Complex) -> Result<()> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.re < -(MAX_SHIFT as f64) {
        return Err(Error::Domain(format!("real part {} too negative", z.re)));
    }
    Ok(())
}

/// ψ(s) = Γ′/Γ(s).
pub fn digamma(s: ComplexPoint) -> Result<Complex> {
    polygamma(0, s)
}

/// ψ^{(m)}(s) for m in 0..=3.
pub fn polygamma(order: u32, s: ComplexPoint) -> Result<Complex> {
    if order > 3 {
        return Err(Error::InvalidParameter(format!(
            "polygamma order {order} not in 0..=3"
        )));
    }
    let mut z = s.as_complex();
    check_pole(z)?;
    let m = order as i32;
    let fact_m: f64 = (1..=order).map(|i| i as f64).product();
    // ψ^{(m)}(z) = ψ^{(m)}(z+1) − (−1)^m m!/z^{m+1}
    let sign_m = if order % 2 == 0 { 1.0 } else { -1.0 };
    let mut shift = Complex::new(0.0, 0.0);
    while z.re < SHIFT_TARGET {
        shift -= sign_m * fact_m / z.powi(m + 1);
        z += 1.0;
    }
    Ok(asymptotic(order, z) + shift)
}

fn asymptotic(order: u32, z: Complex) -> Complex {
    let inv = z.inv();
    let inv2 = inv * inv;
    if order == 0 {
        let mut acc = Complex::new(0.0, 0.0);
        let mut p = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
            acc += p * (b / (2 * (k + 1)) as f64);
            p *= inv2;
        }
        return z.ln() - inv * 0.5 - acc;
    }
    let m = order as usize;
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    let mut acc = inv.powi(m as i32) * fact(m - 1) + inv.powi(m as i32 + 1) * (fact(m) / 2.0);
    let mut p = inv.powi(m as i32 + 2);
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = 2 * (k + 1);
        acc += p * (b * fact(two_k + m - 1) / fact(two_k));
        p *= inv2;
    }
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    acc * sign
}

/// A branch of log Γ(s) continuous off the non-positive real axis; agrees
/// with the principal branch for Re s > 0 and moderate |Im s|.
pub fn ln_gamma(s: ComplexPoint) -> Result<Complex> {
    let mut z = s.as_complex();
    check_pole(z)?;
    let mut shift = Complex::new(0.0, 0.0);
    while z.re < SHIFT_TARGET {
        shift -= z.ln();
        z += 1.0;
    }
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut acc = Complex::new(0.0, 0.0);
    let mut p = inv;
    for (k, b) in BERNOULLI_EVEN.iter().enumerate() {
        let two_k = (2 * (k + 1)) as f64;
        acc += p * (b / (two_k * (two_k - 1.0)));
        p *= inv2;
    }
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok((z - 0.5) * z.ln() - z + half_ln_2pi + acc + shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    #[test]
    fn digamma_one() {
        let v = digamma(ComplexPoint::real(1.0)).unwrap();
        assert!((v.re + EULER_GAMMA).abs() < 1e-14 && v.im == 0.0);
    }

    #[test]
    fn trigamma_one() {
        let v = polygamma(1, ComplexPoint::real(1.0)).unwrap();
        assert!((v.re - PI * PI / 6.0).abs() < 1e-13);
    }

    #[test]
    fn higher_orders_at_one() {
        // ψ''(1) = −2ζ(3), ψ'''(1) = π⁴/15
        let z3 = 1.202_056_903_159_594_3;
        let v2 = polygamma(2, ComplexPoint::real(1.0)).unwrap();
        let v3 = polygamma(3, ComplexPoint::real(1.0)).unwrap();
        assert!((v2.re + 2.0 * z3).abs() < 1e-13);
        assert!((v3.re - PI.powi(4) / 15.0).abs() < 1e-12);
    }

    #[test]
    fn digamma_half() {
        // ψ(1/2) = −γ − 2 log 2
        let v = digamma(ComplexPoint::real(0.5)).unwrap();
        assert!((v.re + EULER_GAMMA + 2.0 * 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn digamma_matches_log_gamma_difference() {
        let s = ComplexPoint::new(0.25, 25.0);
        let h = 1e-5;
        let f = |d: f64| ln_gamma(ComplexPoint::new(s.sigma + d, s.t)).unwrap();
        let fd = (f(h) - f(-h)) / (2.0 * h);
        let v = digamma(s).unwrap();
        assert!((v - fd).norm() < 1e-8, "{v} {fd}");
    }

    #[test]
    fn polygamma_chain_by_differences() {
        let s = ComplexPoint::new(1.3, -7.0);
        let h = 1e-4;
        for m in 0..3u32 {
            let f = |d: f64| polygamma(m, ComplexPoint::new(s.sigma + d, s.t)).unwrap();
            let fd = (f(h) - f(-h)) / (2.0 * h);
            let v = polygamma(m + 1, s).unwrap();
            assert!((v - fd).norm() < 1e-7 * (1.0 + v.norm()), "m={m}");
        }
    }

    #[test]
    fn ln_gamma_integers() {
        let v = ln_gamma(ComplexPoint::real(10.0)).unwrap();
        assert!((v.re - 362880f64.ln()).abs() < 1e-13);
        let v = ln_gamma(ComplexPoint::real(0.5)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14);
    }

    #[test]
    fn poles_are_reported() {
        assert!(matches!(digamma(ComplexPoint::real(0.0)), Err(Error::GammaPole { .. })));
        assert!(matches!(polygamma(2, ComplexPoint::real(-3.0)), Err(Error::GammaPole { .. })));
    }

    #[test]
    fn conjugate_symmetry() {
        for m in 0..4 {
            let a = polygamma(m, ComplexPoint::new(0.75, 12.5)).unwrap();
            let b = polygamma(m, ComplexPoint::new(0.75, -12.5)).unwrap();
            assert!((a - b.conj()).norm() < 1e-12);
        }
    }
}
