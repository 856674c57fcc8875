use super::{bernoulli_over_factorial, ComplexPoint, Jet};
use crate::error::{Error, Result};
use crate::summation::{ComplexSum, CompensatedSum};
use crate::Complex;

/// Default distance from the line σ = 1 below which the Dirichlet series
/// for ζ′/ζ is refused.
pub const DIRICHLET_MARGIN: f64 = 0.25;

const MAX_CORRECTIONS: usize = 60;
const EPS: f64 = f64::EPSILON;

/// ζ(s) by Euler–Maclaurin summation with absolute error at most `tol`.
pub fn zeta(s: ComplexPoint, tol: f64) -> Result<Complex> {
    Ok(zeta_jet(s, 1, tol)?.value())
}

/// Taylor jet of ζ around `s`; coefficients `0..order` are populated
/// (`order` in 1..=4), the rest are zero.
pub fn zeta_jet(s: ComplexPoint, order: usize, tol: f64) -> Result<Jet> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let (jet, bound) = zeta_jet_bounded(s, order, tol)?;
    if bound > tol {
        return Err(Error::NonConvergence {
            what: "zeta",
            tol,
            achieved: bound,
        });
    }
    Ok(jet)
}

/// Jet of ζ together with a bound on the absolute error of its value.
/// With `tol = 0` the evaluation runs to the best accuracy double precision
/// allows at this height.
pub fn zeta_jet_bounded(s: ComplexPoint, order: usize, tol: f64) -> Result<(Jet, f64)> {
    if !(1..=Jet::ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!("jet order {order} not in 1..=4")));
    }
    let s0 = s.as_complex();
    if s0 == Complex::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    if !s0.re.is_finite() || !s0.im.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {s0}")));
    }
    let mut n = 10usize.max((s0.im.abs() / 4.0).ceil() as usize + 10);
    // A very negative real part needs a longer head before the correction
    // series starts to decrease.
    if s0.re < 0.0 {
        n = n.max((2.0 * -s0.re).ceil() as usize + 10);
    }
    let mut best: Option<(Jet, f64)> = None;
    for _ in 0..4 {
        let (jet, truncation, rounding) = euler_maclaurin(s0, n, order, tol);
        let bound = truncation + rounding;
        if best.map_or(true, |b| bound < b.1) {
            best = Some((jet, bound));
        }
        if bound <= tol || truncation <= rounding {
            break;
        }
        n *= 2;
    }
    Ok(best.expect("at least one pass"))
}

// Returns the jet, the truncation bound and a rounding estimate.
fn euler_maclaurin(s0: Complex, n: usize, order: usize, tol: f64) -> (Jet, f64, f64) {
    let mut head: [ComplexSum; 4] = Default::default();
    let mut spread = CompensatedSum::new();
    for k in 1..n {
        let l = (k as f64).ln();
        let v = Complex::from_polar((-s0.re * l).exp(), -s0.im * l);
        // Each term carries relative error ~ε(1 + |t log k|) from its phase.
        let e = v.norm() * (1.0 + (s0.im * l).abs());
        spread.add(e * e);
        head[0].add(v);
        let mut c = v;
        for (j, acc) in head.iter_mut().enumerate().take(order).skip(1) {
            c *= -l / j as f64;
            acc.add(c);
        }
    }
    let mut coeffs = [Complex::new(0.0, 0.0); 4];
    for (c, h) in coeffs.iter_mut().zip(head.iter()) {
        *c = h.value();
    }
    let mut total = Jet(coeffs);

    let ln_n = (n as f64).ln();
    let nf = n as f64;
    let n_pow = Jet::inverse_power(ln_n, s0);
    let integral = n_pow.scale(Complex::new(nf, 0.0)) * Jet::variable(s0 - 1.0).recip();
    total = total + integral + n_pow.scale(Complex::new(0.5, 0.0));
    let phase = 1.0 + (s0.im * ln_n).abs();
    let rounding = 4.0
        * EPS
        * (total.value().norm() + spread.value().sqrt() + integral.value().norm() * phase);

    // Σ B_{2j}/(2j)! s(s+1)…(s+2j−2) N^{−s−2j+1}
    let mut poly = Jet::variable(s0);
    let mut pow = n_pow.scale(Complex::new(1.0 / nf, 0.0));
    let inv_n2 = 1.0 / (nf * nf);
    let mut prev = f64::INFINITY;
    let mut truncation = f64::INFINITY;
    for j in 1..=MAX_CORRECTIONS {
        let term = (poly * pow).scale(Complex::new(bernoulli_over_factorial(j), 0.0));
        let size = truncate(term, order).norm_max();
        // Stopping before term j leaves a remainder of at most
        // |term_j|·|s+2j−1|/(σ+2j−1).
        let sigma_j = s0.re + (2 * j - 1) as f64;
        if sigma_j > 0.0 {
            let bound = size * (s0 + (2 * j - 1) as f64).norm() / sigma_j;
            truncation = truncation.min(bound);
            if bound <= tol.max(rounding) {
                break;
            }
        }
        if j > 3 && size > prev {
            break;
        }
        prev = size;
        total = total + term;
        let a = s0 + (2 * j - 1) as f64;
        let b = s0 + (2 * j) as f64;
        poly = poly * Jet::variable(a) * Jet::variable(b);
        pow = pow.scale(Complex::new(inv_n2, 0.0));
    }
    (truncate(total, order), truncation, rounding)
}

fn truncate(mut j: Jet, order: usize) -> Jet {
    for c in j.0.iter_mut().skip(order) {
        *c = Complex::new(0.0, 0.0);
    }
    j
}

/// ζ′/ζ(s) for any s off the zeros, through the Euler–Maclaurin jet.
pub fn log_deriv_zeta(s: ComplexPoint) -> Result<Complex> {
    Ok(log_deriv_zeta_jet(s)?.value())
}

/// Jet of ζ′/ζ around `s`; the first three coefficients are meaningful.
pub fn log_deriv_zeta_jet(s: ComplexPoint) -> Result<Jet> {
    let (z, _) = zeta_jet_bounded(s, 4, 0.0)?;
    if z.value().norm() < 1e-300 {
        return Err(Error::Domain(format!(
            "ζ vanishes at {}+{}i",
            s.sigma, s.t
        )));
    }
    let mut r = z.differentiate() * z.recip();
    r.0[3] = Complex::new(0.0, 0.0);
    Ok(r)
}

/// Largest head length for which the Dirichlet series is summed directly.
const DIRECT_LIMIT: f64 = 2.0e6;

/// ζ′/ζ(s) = −Σ Λ(n) n^{−s} for σ > 1 + margin.
///
/// The tail past N is at most 1.04 σ N^{1−σ}/(σ−1) (from ψ(x) ≤ 1.04x). When
/// that needs more than a couple of million terms the value is taken from the
/// Euler–Maclaurin jet instead, which has the same accuracy.
pub fn log_deriv_zeta_series(s: ComplexPoint, tol: f64) -> Result<Complex> {
    log_deriv_zeta_series_with_margin(s, tol, DIRICHLET_MARGIN)
}

pub fn log_deriv_zeta_series_with_margin(s: ComplexPoint, tol: f64, margin: f64) -> Result<Complex> {
    if !(s.sigma > 1.0 + margin) {
        return Err(Error::Domain(format!(
            "Dirichlet series needs σ > {}, got {}",
            1.0 + margin,
            s.sigma
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {tol}")));
    }
    let sigma = s.sigma;
    let needed = (1.04 * sigma / ((sigma - 1.0) * tol)).powf(1.0 / (sigma - 1.0));
    if needed > DIRECT_LIMIT {
        return log_deriv_zeta(s);
    }
    let n = (needed.ceil() as usize).max(2);
    let lambda = crate::arithmetic::mangoldt_values(n);
    let mut acc = ComplexSum::new();
    for (k, &l) in lambda.iter().enumerate().skip(2) {
        if l == 0.0 {
            continue;
        }
        let lk = (k as f64).ln();
        acc.add(Complex::from_polar(l * (-sigma * lk).exp(), -s.t * lk));
    }
    Ok(-acc.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn zeta_two_is_basel() {
        let z = zeta(ComplexPoint::real(2.0), 1e-14).unwrap();
        assert!(close(z, Complex::new(PI * PI / 6.0, 0.0), 1e-13), "{z}");
    }

    #[test]
    fn zeta_zero_is_minus_half() {
        let z = zeta(ComplexPoint::real(0.0), 1e-12).unwrap();
        assert!(close(z, Complex::new(-0.5, 0.0), 1e-13), "{z}");
    }

    #[test]
    fn zeta_negative_integers() {
        // ζ(−1) = −1/12, ζ(−3) = 1/120, ζ(−2) = 0
        let cases = [(-1.0, -1.0 / 12.0), (-2.0, 0.0), (-3.0, 1.0 / 120.0)];
        for (s, want) in cases {
            let z = zeta(ComplexPoint::real(s), 1e-10).unwrap();
            assert!(close(z, Complex::new(want, 0.0), 1e-10), "s={s} {z}");
        }
    }

    #[test]
    fn pole_at_one() {
        assert_eq!(zeta(ComplexPoint::real(1.0), 1e-10), Err(Error::PoleAtOne));
    }

    #[test]
    fn vanishes_at_first_zero() {
        let z = zeta(ComplexPoint::new(0.5, 14.134725141734693), 1e-12).unwrap();
        assert!(z.norm() < 1e-6, "{z}");
    }

    #[test]
    fn known_value_on_critical_line() {
        // ζ(1/2 + 100i) ≈ 2.692619885681324 − 0.020386029602598 i
        let z = zeta(ComplexPoint::new(0.5, 100.0), 1e-12).unwrap();
        assert!(close(z, Complex::new(2.692619885681324, -0.020386029602598), 1e-11), "{z}");
    }

    #[test]
    fn conjugate_symmetry() {
        for &(s, t) in &[(0.5, 37.0), (2.0, 5.0), (-1.5, 12.0), (1.2, 1000.0)] {
            let a = zeta(ComplexPoint::new(s, t), 1e-10).unwrap();
            let b = zeta(ComplexPoint::new(s, -t), 1e-10).unwrap();
            assert!(close(a, b.conj(), 1e-12 * (1.0 + a.norm())));
        }
    }

    #[test]
    fn jet_derivative_matches_difference_quotient() {
        let s = ComplexPoint::new(0.7, 21.0);
        let j = zeta_jet(s, 4, 1e-12).unwrap();
        let h = 1e-4;
        let f = |d: f64| zeta(ComplexPoint::new(s.sigma + d, s.t), 1e-12).unwrap();
        let d1 = (f(h) - f(-h)) / (2.0 * h);
        let d2 = (f(h) - f(0.0) * 2.0 + f(-h)) / (h * h);
        assert!(close(j.derivative(1), d1, 1e-7));
        assert!(close(j.derivative(2), d2, 1e-4));
    }

    #[test]
    fn log_derivative_at_two() {
        let v = log_deriv_zeta_series(ComplexPoint::real(2.0), 1e-10).unwrap();
        assert!(close(v, Complex::new(-0.569_960_993_094_5, 0.0), 1e-9), "{v}");
        let w = log_deriv_zeta(ComplexPoint::real(2.0)).unwrap();
        assert!(close(v, w, 1e-9));
    }

    #[test]
    fn log_derivative_real_on_axis() {
        let v = log_deriv_zeta_series(ComplexPoint::real(1.5), 1e-9).unwrap();
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn series_refuses_near_one() {
        assert!(matches!(
            log_deriv_zeta_series(ComplexPoint::new(1.2, 3.0), 1e-6),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn series_and_jet_agree_off_axis() {
        let s = ComplexPoint::new(3.0, 50.0);
        let a = log_deriv_zeta_series(s, 1e-12).unwrap();
        let b = log_deriv_zeta(s).unwrap();
        assert!(close(a, b, 1e-11), "{a} {b}");
    }
}
