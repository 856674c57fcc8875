use std::ops::{Add, Mul, Neg, Sub};

use crate::Complex;

/// Truncated Taylor series a_0 + a_1 ε + a_2 ε² + a_3 ε³ with complex
/// coefficients, used to carry derivatives through series evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet(pub [Complex; 4]);

impl Jet {
    pub const ORDER: usize = 4;

    pub fn constant(c: Complex) -> Self {
        let z = Complex::new(0.0, 0.0);
        Jet([c, z, z, z])
    }

    /// The identity jet s0 + ε.
    pub fn variable(s0: Complex) -> Self {
        let z = Complex::new(0.0, 0.0);
        Jet([s0, Complex::new(1.0, 0.0), z, z])
    }

    /// exp(-s log base) expanded around s0.
    pub fn inverse_power(log_base: f64, s0: Complex) -> Self {
        let value = (-s0 * log_base).exp();
        let mut c = [value; 4];
        let mut f = 1.0;
        for (k, ck) in c.iter_mut().enumerate().skip(1) {
            f *= -log_base / k as f64;
            *ck = value * f;
        }
        Jet(c)
    }

    pub fn value(&self) -> Complex {
        self.0[0]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Complex {
        let mut f = 1.0;
        for i in 2..=k {
            f *= i as f64;
        }
        self.0[k] * f
    }

    pub fn scale(&self, c: Complex) -> Self {
        Jet(self.0.map(|a| a * c))
    }

    pub fn recip(&self) -> Self {
        let a = self.0;
        let b0 = a[0].inv();
        let b1 = -a[1] * b0 * b0;
        let b2 = -(a[1] * b1 + a[2] * b0) * b0;
        let b3 = -(a[1] * b2 + a[2] * b1 + a[3] * b0) * b0;
        Jet([b0, b1, b2, b3])
    }

    /// d/dε, losing the top coefficient.
    pub fn differentiate(&self) -> Self {
        let a = self.0;
        Jet([a[1], a[2] * 2.0, a[3] * 3.0, Complex::new(0.0, 0.0)])
    }

    pub fn norm_max(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        Jet([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet(self.0.map(|a| -a))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let (a, b) = (self.0, rhs.0);
        Jet([
            a[0] * b[0],
            a[0] * b[1] + a[1] * b[0],
            a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
            a[0] * b[3] + a[1] * b[2] + a[2] * b[1] + a[3] * b[0],
        ])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn reciprocal_of_linear_jet() {
        // 1/(2 + ε) = 1/2 - ε/4 + ε²/8 - ε³/16
        let j = Jet::variable(c(2.0)).recip();
        let expected = [0.5, -0.25, 0.125, -0.0625];
        for (got, want) in j.0.iter().zip(expected) {
            assert!((got - c(want)).norm() < 1e-15);
        }
    }

    #[test]
    fn inverse_power_derivatives() {
        let s0 = Complex::new(1.5, 2.0);
        let j = Jet::inverse_power(3f64.ln(), s0);
        let v = (-s0 * 3f64.ln()).exp();
        let l = 3f64.ln();
        assert!((j.derivative(1) + v * l).norm() < 1e-14);
        assert!((j.derivative(2) - v * l * l).norm() < 1e-14);
        assert!((j.derivative(3) + v * l * l * l).norm() < 1e-13);
    }
}
