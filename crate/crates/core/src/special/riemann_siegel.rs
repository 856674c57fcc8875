use std::f64::consts::PI;

use super::rs_coeffs::{C0, C1, C2, C3, C4};
use super::{ln_gamma, zeta_jet_bounded, ComplexPoint};
#[cfg(test)]
use super::zeta;
use crate::error::{Error, Result};
use crate::Complex;

/// Below this height [`hardy_z`] evaluates ζ directly instead of using the
/// Riemann–Siegel expansion.
pub const EULER_MACLAURIN_Z_CEILING: f64 = 5000.0;

/// A value of Z(t) together with an upper bound for its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZValue {
    pub value: f64,
    pub error_bound: f64,
}

impl ZValue {
    /// The sign of `value` is certain.
    pub fn is_reliable(&self) -> bool {
        self.value.abs() > self.error_bound
    }
}

// (1 − 2^{1−2k}) |B_{2k}| / (4k(2k−1)) for k = 1..10
const THETA_COEFFS: [f64; 10] = {
    let b = super::BERNOULLI_EVEN;
    let mut out = [0.0; 10];
    let mut k = 0;
    let mut pow = 2.0; // 2^{2k−1} at k = 1
    while k < 10 {
        let kk = (k + 1) as f64;
        let bb = if b[k] < 0.0 { -b[k] } else { b[k] };
        out[k] = (1.0 - 1.0 / pow) * bb / (4.0 * kk * (2.0 * kk - 1.0));
        pow *= 4.0;
        k += 1;
    }
    out
};

/// Riemann–Siegel θ(t) = arg Γ(1/4 + it/2) − (t/2) log π.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    if t < 0.0 {
        return -riemann_siegel_theta(-t);
    }
    if t < 10.0 {
        let lg = ln_gamma(ComplexPoint::new(0.25, 0.5 * t)).expect("no pole on Re = 1/4");
        return lg.im - 0.5 * t * PI.ln();
    }
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut p = inv;
    for c in THETA_COEFFS {
        corr += c * p;
        p *= inv2;
    }
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + corr
}

fn theta_prime(t: f64) -> f64 {
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

/// The n-th Gram point g_n, θ(g_n) = nπ, for n ≥ −1.
pub fn gram_point(n: i64) -> f64 {
    assert!(n >= -1, "Gram points start at n = -1");
    let target = n as f64 * PI;
    // θ is convex past t ≈ 7, so Newton from the right decreases monotonically.
    let mut t = 30.0 + 2.0 * PI * (n as f64 + 1.0);
    for _ in 0..100 {
        let step = (riemann_siegel_theta(t) - target) / theta_prime(t);
        t -= step;
        if step.abs() <= 4.0 * f64::EPSILON * t {
            break;
        }
    }
    t
}

fn poly(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * z + a)
}

// Gabcke's bounds for the remainder after K correction terms, t ≥ 200.
const GABCKE: [(f64, f64); 5] = [
    (0.127, 0.75),
    (0.053, 1.25),
    (0.011, 1.75),
    (0.031, 2.25),
    (0.017, 2.75),
];

/// Z(t) from the Riemann–Siegel main sum plus `corrections` terms
/// (1..=5; one term is the classical C₀ correction).
pub fn riemann_siegel_z_with(t: f64, corrections: usize) -> Result<ZValue> {
    if !(t >= 10.0) {
        return Err(Error::Domain(format!("Riemann–Siegel needs t ≥ 10, got {t}")));
    }
    if !(1..=5).contains(&corrections) {
        return Err(Error::InvalidParameter(format!(
            "corrections {corrections} not in 1..=5"
        )));
    }
    let tau = t / (2.0 * PI);
    let a = tau.sqrt();
    let n = a.floor() as usize;
    let p = a - n as f64;
    let theta = riemann_siegel_theta(t);
    let mut main = 0.0;
    let mut weight = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        let w = 1.0 / kf.sqrt();
        main += w * (theta - t * kf.ln()).cos();
        weight += w;
    }
    main *= 2.0;
    let z = 2.0 * p - 1.0;
    let tables: [&[f64]; 5] = [&C0, &C1, &C2, &C3, &C4];
    let inv_a = 1.0 / a;
    let mut r = 0.0;
    let mut scale = 1.0;
    for c in tables.iter().take(corrections) {
        r += poly(c, z) * scale;
        scale *= inv_a;
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    let value = main + sign * tau.powf(-0.25) * r;
    let (c, e) = GABCKE[corrections - 1];
    // Gabcke's constants hold from t = 200; below that widen them.
    let widen = if t < 200.0 { 4.0 } else { 1.0 };
    let truncation = widen * c * tau.powf(-e);
    let rounding = 4.0 * f64::EPSILON * (theta.abs() + t.ln() * t) * 2.0 * weight;
    Ok(ZValue {
        value,
        error_bound: truncation + rounding,
    })
}

/// Z(t) from the Riemann–Siegel expansion with all five correction terms.
/// Logs a warning when |Z| does not exceed the error envelope.
pub fn riemann_siegel_z(t: f64) -> Result<ZValue> {
    let v = riemann_siegel_z_with(t, 5)?;
    if !v.is_reliable() {
        log::warn!(
            "Z({t}) = {:e} is within its error envelope {:e}; sign uncertain",
            v.value,
            v.error_bound
        );
    }
    Ok(v)
}

/// The most accurate available Z(t): Euler–Maclaurin ζ below
/// [`EULER_MACLAURIN_Z_CEILING`], Riemann–Siegel above.
pub fn hardy_z(t: f64) -> Result<ZValue> {
    if t >= EULER_MACLAURIN_Z_CEILING {
        return riemann_siegel_z_with(t, 5);
    }
    let (jet, bound) = zeta_jet_bounded(ComplexPoint::new(0.5, t), 1, 0.0)?;
    let z = jet.value();
    let theta = riemann_siegel_theta(t);
    let rot = Complex::from_polar(1.0, theta) * z;
    let theta_err = 8.0 * f64::EPSILON * theta.abs().max(1.0);
    Ok(ZValue {
        value: rot.re,
        error_bound: bound + theta_err * z.norm() + 4.0 * f64::EPSILON * z.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA1: f64 = 14.134_725_141_734_693;

    #[test]
    fn theta_branches_agree_at_ten() {
        let lg = ln_gamma(ComplexPoint::new(0.25, 5.0)).unwrap();
        let direct = lg.im - 5.0 * PI.ln();
        assert!((direct - riemann_siegel_theta(10.0)).abs() < 1e-12);
        let lg = ln_gamma(ComplexPoint::new(0.25, 50.0)).unwrap();
        let direct = lg.im - 50.0 * PI.ln();
        assert!((direct - riemann_siegel_theta(100.0)).abs() < 1e-11);
    }

    #[test]
    fn gram_points() {
        assert!((gram_point(0) - 17.845_599_540_6).abs() < 1e-9);
        assert!((gram_point(-1) - 9.666_908_056).abs() < 1e-8);
        assert!((riemann_siegel_theta(gram_point(1000)) - 1000.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn sign_change_around_first_zero() {
        let a = riemann_siegel_z(14.0).unwrap();
        let b = riemann_siegel_z(14.2).unwrap();
        assert!(a.value * b.value < 0.0);
    }

    #[test]
    fn small_at_first_zero() {
        assert!(riemann_siegel_z(GAMMA1).unwrap().value.abs() < 1e-5);
        assert!(hardy_z(GAMMA1).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn rotation_matches_zeta() {
        let z = zeta(ComplexPoint::new(0.5, 18.0), 1e-12).unwrap();
        let rot = Complex::from_polar(1.0, riemann_siegel_theta(18.0)) * z;
        assert!(rot.im.abs() < 1e-12);
        let rs = riemann_siegel_z(18.0).unwrap();
        assert_eq!(rs.value.signum(), rot.re.signum());
        assert!((rs.value - rot.re).abs() < rs.error_bound);
    }

    #[test]
    fn expansion_within_envelope() {
        for &t in &[250.0, 1000.0, 3000.0, 4999.0] {
            let em = hardy_z(t).unwrap();
            for k in 1..=5 {
                let rs = riemann_siegel_z_with(t, k).unwrap();
                assert!(
                    (rs.value - em.value).abs() <= rs.error_bound + em.error_bound,
                    "t={t} k={k} {} vs {} bound {}",
                    rs.value,
                    em.value,
                    rs.error_bound
                );
            }
        }
    }
}
