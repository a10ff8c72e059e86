//! Quasi-polynomial amplitudes `scale · cosᵉ r · sinᵏ r · Σ poly_i(x) F_i(x)`.

use crate::error::{Error, Result};
use crate::hypergeo::{gauss_2f1_jet, Hyp2F1Params};
use crate::jet::Jet;
use crate::model::Sign;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    /// x = cos² r
    CosSq,
    /// x = (1 − cos r)/2
    HalfVersine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HyperTerm {
    /// Ascending coefficients of a polynomial in x.
    pub poly: Vec<f64>,
    pub params: Hyp2F1Params,
}

impl HyperTerm {
    pub fn new(poly: Vec<f64>, alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(HyperTerm {
            poly,
            params: Hyp2F1Params::new(alpha, beta, gamma)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude {
    pub var: Variable,
    pub cos_power: u32,
    pub sin_power: u32,
    pub scale: f64,
    pub terms: Vec<HyperTerm>,
}

impl Amplitude {
    fn series(&self, x: Jet) -> Result<Jet> {
        let mut out = Jet::zero();
        for t in &self.terms {
            let poly = t.poly.iter().rev().fold(Jet::zero(), |acc, c| acc * x + *c);
            out = out + poly * gauss_2f1_jet(&t.params, x)?;
        }
        Ok(out * self.scale)
    }

    /// Evaluates on a jet in r ∈ (0, π).
    pub fn eval_r(&self, r: Jet) -> Result<Jet> {
        let (s, c) = (r.sin(), r.cos());
        let x = match self.var {
            Variable::CosSq => c * c,
            Variable::HalfVersine => (1.0 - c) * 0.5,
        };
        let mut out = self.series(x)? * s.powi(self.sin_power);
        if self.cos_power == 1 {
            out = out * c;
        }
        Ok(out)
    }

    /// Evaluates on a jet in x = cos² r; `cos_sign` selects the hemisphere
    /// (sign of cos r).
    pub fn eval_x(&self, x: Jet, cos_sign: Sign) -> Result<Jet> {
        if self.var != Variable::CosSq {
            return Err(Error::InvalidParameters(
                "x-derivatives are only defined for the cos² r variable".into(),
            ));
        }
        let mut out = self.series(x)? * (1.0 - x).powf(self.sin_power as f64 / 2.0);
        if self.cos_power == 1 {
            out = out * x.sqrt() * cos_sign.value();
        }
        Ok(out)
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        Ok(self.eval_r(Jet::constant(r))?.value())
    }
}
