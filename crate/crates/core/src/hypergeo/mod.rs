//! Gauss hypergeometric function ₂F₁(α, β; γ; x) on [0, 1).

mod gamma;

pub use gamma::{gamma, is_nonpositive_integer, rgamma};

use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::jet::{Jet, JET_DEGREE};

/// Above this degree the cleared denominators could overflow.
const DD_MAX_DEGREE: usize = 60;
const MAX_TERMS: usize = 100_000;
const REL_CUTOFF: f64 = 1e-16;
const INTEGER_GUARD: f64 = 1e-8;
const SPLIT: f64 = 0.5;
const DEGENERATE_DIRECT_LIMIT: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub terminating: bool,
}

impl Hyp2F1Params {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(Error::InvalidParameters("non-finite 2F1 parameter".into()));
        }
        if is_nonpositive_integer(gamma) {
            return Err(Error::InvalidParameters(format!(
                "gamma = {gamma} is a non-positive integer"
            )));
        }
        let terminating = is_nonpositive_integer(alpha) || is_nonpositive_integer(beta);
        Ok(Hyp2F1Params {
            alpha,
            beta,
            gamma,
            terminating,
        })
    }

    /// Polynomial degree when the series terminates.
    pub fn degree(&self) -> Option<usize> {
        let d = |z: f64| is_nonpositive_integer(z).then(|| (-z.round()) as usize);
        match (d(self.alpha), d(self.beta)) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Parameters of the k-th derivative, (α+k, β+k; γ+k).
    pub fn shifted(&self, k: usize) -> Result<Self> {
        let k = k as f64;
        Hyp2F1Params::new(self.alpha + k, self.beta + k, self.gamma + k)
    }

    /// (α)_k (β)_k / (γ)_k — the prefactor of the k-th derivative.
    pub fn derivative_factor(&self, k: usize) -> f64 {
        (0..k).fold(1.0, |acc, i| {
            let i = i as f64;
            acc * (self.alpha + i) * (self.beta + i) / (self.gamma + i)
        })
    }
}

pub fn gauss_2f1(params: &Hyp2F1Params, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain { x });
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    if let Some(n) = params.degree() {
        return Ok(horner(params, n, x));
    }
    if x <= SPLIT {
        return direct_series(params.alpha, params.beta, params.gamma, x);
    }
    let excess = params.gamma - params.alpha - params.beta;
    if (excess - excess.round()).abs() < INTEGER_GUARD {
        if x <= DEGENERATE_DIRECT_LIMIT {
            return direct_series(params.alpha, params.beta, params.gamma, x);
        }
        return Err(Error::DegenerateParameters { excess, x });
    }
    connection(params, x)
}

/// k-th derivative in x via d/dx F(α,β;γ) = (αβ/γ) F(α+1,β+1;γ+1).
pub fn gauss_2f1_derivative(params: &Hyp2F1Params, x: f64, order: usize) -> Result<f64> {
    if order > JET_DEGREE {
        return Err(Error::InvalidParameters(format!(
            "derivative order {order} exceeds {JET_DEGREE}"
        )));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain { x });
    }
    let factor = params.derivative_factor(order);
    if factor == 0.0 {
        return Ok(0.0);
    }
    Ok(factor * gauss_2f1(&params.shifted(order)?, x)?)
}

/// `[F, F', ..., F^(max_order)]` at x.
pub fn gauss_2f1_derivatives(params: &Hyp2F1Params, x: f64, max_order: usize) -> Result<Vec<f64>> {
    (0..=max_order)
        .map(|k| gauss_2f1_derivative(params, x, k))
        .collect()
}

/// ₂F₁ evaluated on a jet argument, carrying all derivatives through the
/// chain rule.
pub fn gauss_2f1_jet(params: &Hyp2F1Params, x: Jet) -> Result<Jet> {
    let derivs = gauss_2f1_derivatives(params, x.value(), JET_DEGREE)?;
    Ok(x.compose_derivs(&derivs))
}

/// Terminating series by Horner's rule. The series alternates in sign and
/// cancels badly near its roots and near x = 1, so the nested form
/// `1 + r₀x(1 + r₁x(…))` is cleared of denominators and accumulated in
/// double-double arithmetic, leaving a single f64 division at the end.
fn horner(params: &Hyp2F1Params, degree: usize, x: f64) -> f64 {
    if degree > DD_MAX_DEGREE {
        return horner_f64(params, degree, x);
    }
    // acc_k · Π_{i≥k} den_i, with den_i = (γ+i)(i+1)
    let mut scaled = TwoFloat::from(1.0);
    let mut dens = TwoFloat::from(1.0);
    for k in (0..degree).rev() {
        let kf = k as f64;
        let num = (TwoFloat::from(params.alpha) + kf) * (TwoFloat::from(params.beta) + kf);
        let den = (TwoFloat::from(params.gamma) + kf) * (kf + 1.0);
        scaled = den * dens + num * x * scaled;
        dens = den * dens;
    }
    scaled.hi() / dens.hi() * (1.0 + scaled.lo() / scaled.hi() - dens.lo() / dens.hi())
}

fn horner_f64(params: &Hyp2F1Params, degree: usize, x: f64) -> f64 {
    let mut acc = 1.0;
    for k in (0..degree).rev() {
        let kf = k as f64;
        let ratio = (params.alpha + kf) * (params.beta + kf) / ((params.gamma + kf) * (kf + 1.0));
        acc = 1.0 + ratio * x * acc;
    }
    acc
}

fn direct_series(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small = 0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 {
            return Ok(sum);
        }
        if term.abs() < REL_CUTOFF * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS })
}

fn connection(params: &Hyp2F1Params, x: f64) -> Result<f64> {
    let (a, b, c) = (params.alpha, params.beta, params.gamma);
    let y = 1.0 - x;
    let gc = gamma(c);
    let first = {
        let coef = gc * gamma(c - a - b) * rgamma(c - a) * rgamma(c - b);
        if coef == 0.0 {
            0.0
        } else {
            coef * direct_series(a, b, a + b - c + 1.0, y)?
        }
    };
    let second = {
        let coef = gc * gamma(a + b - c) * rgamma(a) * rgamma(b);
        if coef == 0.0 {
            0.0
        } else {
            coef * y.powf(c - a - b) * direct_series(c - a, c - b, c - a - b + 1.0, y)?
        }
    };
    Ok(first + second)
}
