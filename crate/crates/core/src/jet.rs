//! Truncated Taylor series ("jets") for forward-mode differentiation.
//!
//! A [`Jet`] stores the Taylor coefficients `f(x0 + t) = sum c_k t^k` up to
//! degree [`JET_DEGREE`]. Arithmetic on jets is exact up to truncation, so
//! derivatives of closed-form amplitudes come out analytically through the
//! chain rule instead of through finite differences.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// Highest derivative order carried by a jet.
pub const JET_DEGREE: usize = 7;
const LEN: usize = JET_DEGREE + 1;

const FACTORIAL: [f64; LEN] = [1.0, 1.0, 2.0, 6.0, 24.0, 120.0, 720.0, 5040.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    coeffs: [f64; LEN],
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = value;
        Jet { coeffs }
    }

    /// The identity function seeded at `x0`.
    pub fn variable(x0: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = x0;
        coeffs[1] = 1.0;
        Jet { coeffs }
    }

    pub fn zero() -> Self {
        Jet::constant(0.0)
    }

    /// Builds a jet from derivative values `f, f', f'', ...`; missing
    /// orders are zero.
    pub fn from_derivatives(derivs: &[f64]) -> Self {
        let mut coeffs = [0.0; LEN];
        for (k, d) in derivs.iter().take(LEN).enumerate() {
            coeffs[k] = d / FACTORIAL[k];
        }
        Jet { coeffs }
    }

    /// Builds a jet from Taylor coefficients `c_k = f^(k)/k!`.
    pub fn from_taylor(taylor: &[f64]) -> Self {
        let mut coeffs = [0.0; LEN];
        for (c, t) in coeffs.iter_mut().zip(taylor) {
            *c = *t;
        }
        Jet { coeffs }
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn taylor(&self) -> &[f64; LEN] {
        &self.coeffs
    }

    /// k-th derivative at the expansion point.
    pub fn deriv(&self, k: usize) -> f64 {
        self.coeffs[k] * FACTORIAL[k]
    }

    /// `[f, f', ..., f^(order)]`
    pub fn derivatives(&self, order: usize) -> Vec<f64> {
        (0..=order.min(JET_DEGREE)).map(|k| self.deriv(k)).collect()
    }

    /// Jet of the derivative; the top coefficient becomes zero and is no
    /// longer meaningful.
    pub fn differentiate(&self) -> Self {
        let mut coeffs = [0.0; LEN];
        for k in 1..LEN {
            coeffs[k - 1] = self.coeffs[k] * k as f64;
        }
        Jet { coeffs }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.coeffs.iter_mut().for_each(|c| *c *= s);
        out
    }

    /// `g(self)` where `g_taylor[k] = g^(k)(self.value()) / k!`.
    pub fn compose(&self, g_taylor: &[f64; LEN]) -> Self {
        let mut delta = *self;
        delta.coeffs[0] = 0.0;
        let mut out = Jet::constant(g_taylor[0]);
        let mut power = Jet::constant(1.0);
        for g in g_taylor.iter().skip(1) {
            power = power * delta;
            out = out + power.scale(*g);
        }
        out
    }

    /// `g(self)` from the plain derivative values of `g` at `self.value()`.
    pub fn compose_derivs(&self, g_derivs: &[f64]) -> Self {
        let mut g = [0.0; LEN];
        for (k, d) in g_derivs.iter().take(LEN).enumerate() {
            g[k] = d / FACTORIAL[k];
        }
        self.compose(&g)
    }

    pub fn powf(&self, a: f64) -> Self {
        let x0 = self.value();
        let mut g = [0.0; LEN];
        let mut binom = 1.0;
        for (k, gk) in g.iter_mut().enumerate() {
            *gk = binom * x0.powf(a - k as f64);
            binom *= (a - k as f64) / (k as f64 + 1.0);
        }
        self.compose(&g)
    }

    pub fn powi(&self, n: u32) -> Self {
        (0..n).fold(Jet::constant(1.0), |acc, _| acc * *self)
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    pub fn recip(&self) -> Self {
        Jet::constant(1.0) / *self
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_derivs(&[s, c, -s, -c, s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose_derivs(&[c, -s, -c, s, c, -s, -c, s])
    }

    /// Inverse cosine, for |value| < 1.
    pub fn acos(&self) -> Self {
        let u = Jet::variable(self.value());
        let d = -(1.0 - u * u).powf(-0.5);
        let mut g = [0.0; LEN];
        g[0] = self.value().acos();
        for k in 0..JET_DEGREE {
            g[k + 1] = d.coeffs[k] / (k as f64 + 1.0);
        }
        self.compose(&g)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut coeffs = [0.0; LEN];
        for i in 0..LEN {
            for j in 0..LEN - i {
                coeffs[i + j] += self.coeffs[i] * rhs.coeffs[j];
            }
        }
        Jet { coeffs }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let d0 = rhs.coeffs[0];
        let mut coeffs = [0.0; LEN];
        for k in 0..LEN {
            let mut acc = self.coeffs[k];
            for i in 1..=k {
                acc -= rhs.coeffs[i] * coeffs[k - i];
            }
            coeffs[k] = acc / d0;
        }
        Jet { coeffs }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.coeffs[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.coeffs[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(1.0 / rhs)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        Jet::constant(self) - rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn polynomial_derivatives() {
        let x = Jet::variable(2.0);
        let y = x * x * x - 2.0 * x;
        assert!(close(y.deriv(0), 4.0, 1e-15));
        assert!(close(y.deriv(1), 10.0, 1e-15));
        assert!(close(y.deriv(2), 12.0, 1e-15));
        assert!(close(y.deriv(3), 6.0, 1e-15));
        assert_eq!(y.deriv(4), 0.0);
    }

    #[test]
    fn quotient_and_sqrt() {
        let x = Jet::variable(0.3);
        let y = x.sqrt() / (1.0 - x);
        // d/dx sqrt(x)/(1-x) = 1/(2 sqrt(x)(1-x)) + sqrt(x)/(1-x)^2
        let expected = 1.0 / (2.0 * 0.3f64.sqrt() * 0.7) + 0.3f64.sqrt() / 0.49;
        assert!(close(y.deriv(1), expected, 1e-14));
    }

    #[test]
    fn trig_chain_rule() {
        let r = Jet::variable(0.4);
        let c2 = r.cos() * r.cos();
        // d^3/dr^3 cos^2 r = 4 sin 2r
        assert!(close(c2.deriv(3), 4.0 * (0.8f64).sin(), 1e-13));
        let s = r.sin();
        assert!(close(s.deriv(7), -(0.4f64).cos(), 1e-12));
    }

    #[test]
    fn acos_inverts_cos() {
        let r = Jet::variable(0.9);
        let back = r.cos().acos();
        assert!(close(back.value(), 0.9, 1e-15));
        assert!(close(back.deriv(1), 1.0, 1e-13));
        for k in 2..=JET_DEGREE {
            assert!(back.deriv(k).abs() < 1e-9, "k={k}: {}", back.deriv(k));
        }
    }

    #[test]
    fn compose_inverts_consistently() {
        let x = Jet::variable(0.7);
        let e = x.powf(2.5);
        assert!(close(e.deriv(2), 2.5 * 1.5 * 0.7f64.powf(0.5), 1e-14));
        let back = e.powf(0.4);
        assert!(close(back.deriv(1), 1.0, 1e-13));
        assert!(back.deriv(3).abs() < 1e-11);
    }
}
