use serde::Serialize;

use super::amplitude::{Amplitude, HyperTerm, Variable};
use super::spectrum::family_p_sq;
use super::Family;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::{coupling_operator_k, coupling_operator_m, ModeParams, QuantumNumbers, Sign};

const SPECTRUM_TOL: f64 = 1e-9;

/// Which of the four general-p solutions a basis member is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BasisKind {
    K1,
    K2,
    M3,
    M4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SolutionKind {
    Family(Family),
    Basis(BasisKind),
}

/// The four amplitudes and their Taylor expansions in r at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components {
    pub k: Jet,
    pub l: Jet,
    pub m: Jet,
    pub n: Jet,
}

impl Components {
    pub fn values(&self) -> [f64; 4] {
        [self.k.value(), self.l.value(), self.m.value(), self.n.value()]
    }

    pub fn derivs(&self) -> [f64; 4] {
        [self.k.deriv(1), self.l.deriv(1), self.m.deriv(1), self.n.deriv(1)]
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Coupled {
        direct: Amplitude,
        direct_is_k: bool,
        partner: Option<Amplitude>,
    },
    J0 {
        m: Amplitude,
        n: Amplitude,
    },
}

/// A closed-form radial mode that can be evaluated, with all derivatives,
/// at any r ∈ (0, π).
#[derive(Debug, Clone, PartialEq)]
pub struct ModeFunction {
    pub kind: SolutionKind,
    pub j: u32,
    pub radial_n: Option<u32>,
    pub params: ModeParams,
    shape: Shape,
}

fn check_on_spectrum(params: &ModeParams, p_sq: f64) -> Result<()> {
    if (params.p_sq() - p_sq).abs() > SPECTRUM_TOL * p_sq.abs().max(1.0) {
        return Err(Error::OffSpectrum {
            eps: params.eps(),
            expected_eps_sq: p_sq + params.m() * params.m(),
        });
    }
    Ok(())
}

fn check_elimination(params: &ModeParams) -> Result<()> {
    if params.eps() + params.m_eff() == 0.0 {
        return Err(Error::SingularElimination(format!(
            "eps = {}, effective mass = {}",
            params.eps(),
            params.m_eff()
        )));
    }
    Ok(())
}

fn amp(cos_power: u32, sin_power: u32, scale: f64, terms: Vec<HyperTerm>) -> Amplitude {
    Amplitude {
        var: Variable::CosSq,
        cos_power,
        sin_power,
        scale,
        terms,
    }
}

/// `2n(x−1)·c · F(1−n, b; γ)` — dropped when n = 0.
fn lowered_term(n: f64, c: f64, b: f64, gamma: f64) -> Result<Vec<HyperTerm>> {
    if n == 0.0 {
        return Ok(vec![]);
    }
    Ok(vec![HyperTerm::new(vec![-2.0 * n * c, 2.0 * n * c], 1.0 - n, b, gamma)?])
}

impl ModeFunction {
    /// A member of one of the four terminating families, on its spectrum.
    pub fn family(family: Family, qn: QuantumNumbers, params: ModeParams) -> Result<Self> {
        if qn.j == 0 {
            return Err(Error::InvalidQuantumNumbers(format!("family {family} needs j >= 1")));
        }
        let p_sq = family_p_sq(family, qn.j, qn.n)? as f64;
        check_on_spectrum(&params, p_sq)?;
        check_elimination(&params)?;
        let (jf, nf, a) = (qn.j as f64, qn.n as f64, qn.a());
        let (direct, direct_is_k, partner) = match family {
            Family::F1 => {
                let b = jf + 2.0 + nf;
                let k = amp(1, qn.j, 1.0, vec![HyperTerm::new(vec![1.0], -nf, b, 1.5)?]);
                let mut terms = lowered_term(nf, 1.0, b, 1.5)?;
                terms.push(HyperTerm::new(vec![2.0 * nf + 1.0, -(jf + 2.0 * nf + 1.0)], -nf, b, 1.5)?);
                (k, true, amp(0, qn.j, 1.0 / a, terms))
            }
            Family::F2 => {
                let b = jf + 1.0 + nf;
                let k = amp(0, qn.j, 1.0, vec![HyperTerm::new(vec![1.0], -nf, b, 0.5)?]);
                let mut terms = lowered_term(nf, b / 0.5, b + 1.0, 1.5)?;
                terms.push(HyperTerm::new(vec![-jf], -nf, b, 0.5)?);
                (k, true, amp(1, qn.j, 1.0 / a, terms))
            }
            Family::F3 => {
                let nu = nf - 1.0;
                let b = jf + 2.0 + nu;
                let m = amp(1, qn.j, 1.0, vec![HyperTerm::new(vec![1.0], -nu, b, 1.5)?]);
                let mut terms = lowered_term(nu, 1.0, b, 1.5)?;
                terms.push(HyperTerm::new(vec![2.0 * nu + 1.0, -(jf + 2.0 + 2.0 * nu)], -nu, b, 1.5)?);
                (m, false, amp(0, qn.j, 1.0 / a, terms))
            }
            Family::F4 => {
                let b = jf + 1.0 + nf;
                let m = amp(0, qn.j, 1.0, vec![HyperTerm::new(vec![1.0], -nf, b, 0.5)?]);
                let mut terms = lowered_term(nf, b / 0.5, b + 1.0, 1.5)?;
                terms.push(HyperTerm::new(vec![-(jf + 1.0)], -nf, b, 0.5)?);
                (m, false, amp(1, qn.j, 1.0 / a, terms))
            }
            Family::J0 | Family::Dirac => {
                return Err(Error::InvalidQuantumNumbers(format!(
                    "{family} is not one of the four j >= 1 families"
                )))
            }
        };
        Ok(ModeFunction {
            kind: SolutionKind::Family(family),
            j: qn.j,
            radial_n: Some(qn.n),
            params,
            shape: Shape::Coupled {
                direct,
                direct_is_k,
                partner: Some(partner),
            },
        })
    }

    /// Family member built from its spectrum entry with the given branches.
    pub fn on_spectrum(
        family: Family,
        qn: QuantumNumbers,
        m: f64,
        eps_sign: Sign,
        lambda_sign: Sign,
        delta_sign: Sign,
    ) -> Result<Self> {
        let j = if family == Family::J0 { 0 } else { qn.j };
        let p_sq = family_p_sq(family, j, qn.n)? as f64;
        let params = ModeParams::from_p_sq(m, p_sq, eps_sign, lambda_sign, delta_sign)?;
        if family == Family::J0 {
            ModeFunction::j0(qn.n, params)
        } else {
            ModeFunction::family(family, qn, params)
        }
    }

    /// The j = 0 mode with N₀ = 1 and M₀ = −(2/3)(ε + m_eff).
    pub fn j0(n: u32, params: ModeParams) -> Result<Self> {
        let ratio = -2.0 / 3.0 * (params.eps() + params.m_eff());
        ModeFunction::j0_with_ratio(n, params, ratio)
    }

    /// The j = 0 mode with an explicit M₀/N₀ (N₀ = 1).
    pub fn j0_with_ratio(n: u32, params: ModeParams, ratio: f64) -> Result<Self> {
        check_on_spectrum(&params, family_p_sq(Family::J0, 0, n)? as f64)?;
        let nf = n as f64;
        let half = |sin_power, scale, terms| Amplitude {
            var: Variable::HalfVersine,
            cos_power: 0,
            sin_power,
            scale,
            terms,
        };
        let nn = half(1, 0.5, vec![HyperTerm::new(vec![1.0], -nf - 1.0, 3.0 + nf, 1.5)?]);
        let mm = half(2, 0.25 * ratio, vec![HyperTerm::new(vec![1.0], -nf, 4.0 + nf, 2.5)?]);
        Ok(ModeFunction {
            kind: SolutionKind::Family(Family::J0),
            j: 0,
            radial_n: Some(n),
            params,
            shape: Shape::J0 { m: mm, n: nn },
        })
    }

    /// The four independent solutions at arbitrary p (taken from `params`).
    pub fn general_basis(j: u32, params: ModeParams) -> Result<[ModeFunction; 4]> {
        if j == 0 {
            return Err(Error::InvalidQuantumNumbers("general basis needs j >= 1".into()));
        }
        let p_sq = params.p_sq();
        if p_sq <= 0.0 {
            return Err(Error::InvalidParameters(format!("general basis needs p > 0, got p^2 = {p_sq}")));
        }
        check_elimination(&params)?;
        let jf = j as f64;
        let p = p_sq.sqrt();
        let q = (p_sq + 1.0).sqrt();
        // exponent sums: A at x = 0 (0 or 1/2), B = j/2 at x = 1
        let make = |kind, a_exp: f64, root: f64, direct_is_k| -> Result<ModeFunction> {
            let s = a_exp + jf / 2.0 + 0.5;
            let gamma = if a_exp == 0.0 { 0.5 } else { 1.5 };
            let direct = amp(
                (a_exp != 0.0) as u32,
                j,
                1.0,
                vec![HyperTerm::new(vec![1.0], s - root / 2.0, s + root / 2.0, gamma)?],
            );
            Ok(ModeFunction {
                kind: SolutionKind::Basis(kind),
                j,
                radial_n: None,
                params,
                shape: Shape::Coupled {
                    direct,
                    direct_is_k,
                    partner: None,
                },
            })
        };
        Ok([
            make(BasisKind::K1, 0.5, q, true)?,
            make(BasisKind::K2, 0.0, q, true)?,
            make(BasisKind::M3, 0.5, p, false)?,
            make(BasisKind::M4, 0.0, p, false)?,
        ])
    }

    pub fn a(&self) -> f64 {
        ((self.j as f64) * (self.j as f64 + 1.0)).sqrt()
    }

    /// p² of the mode; exact for labelled levels, ε² − m² otherwise.
    pub fn p_sq(&self) -> f64 {
        match (self.kind, self.radial_n) {
            (SolutionKind::Family(f), Some(n)) => family_p_sq(f, self.j, n)
                .map(|p| p as f64)
                .unwrap_or_else(|_| self.params.p_sq()),
            _ => self.params.p_sq(),
        }
    }

    /// Whether K (rather than M) is the directly given amplitude.
    pub fn direct_is_k(&self) -> Option<bool> {
        match &self.shape {
            Shape::Coupled { direct_is_k, .. } => Some(*direct_is_k),
            Shape::J0 { .. } => None,
        }
    }

    /// Independent variable of the closed form at r.
    pub fn x_of_r(&self, r: f64) -> f64 {
        match self.shape {
            Shape::Coupled { .. } => r.cos().powi(2),
            Shape::J0 { .. } => (1.0 - r.cos()) / 2.0,
        }
    }

    /// Partner amplitude obtained from the direct one through the
    /// second-order coupling relation, as a jet in r (valid to degree 5).
    pub fn coupled_partner(&self, r: Jet) -> Result<Jet> {
        let Shape::Coupled { direct, direct_is_k, .. } = &self.shape else {
            return Err(Error::InvalidQuantumNumbers("no K–M coupling at j = 0".into()));
        };
        let d = direct.eval_r(r)?;
        let (s, c) = (r.sin(), r.cos());
        let s2 = s * s;
        let a = self.a();
        let a2 = a * a;
        let p2 = self.p_sq();
        let d2 = d.differentiate().differentiate();
        let bracket = if *direct_is_k {
            d2 + (Jet::constant(p2) - s2.recip() * a2) * d
        } else {
            d2 + (Jet::constant(p2 + 1.0) - s2.recip() * (a2 + 2.0)) * d
        };
        Ok(s2 / (c * (2.0 * a)) * bracket)
    }

    /// The explicit companion formula, if this mode has one.
    pub fn explicit_partner(&self, r: Jet) -> Result<Option<Jet>> {
        match &self.shape {
            Shape::Coupled { partner: Some(p), .. } => Ok(Some(p.eval_r(r)?)),
            _ => Ok(None),
        }
    }

    /// `(K, M)` as jets in r.
    pub fn km_r(&self, r: Jet) -> Result<(Jet, Jet)> {
        match &self.shape {
            Shape::Coupled {
                direct,
                direct_is_k,
                partner,
            } => {
                let d = direct.eval_r(r)?;
                let p = match partner {
                    Some(p) => p.eval_r(r)?,
                    None => self.coupled_partner(r)?,
                };
                Ok(if *direct_is_k { (d, p) } else { (p, d) })
            }
            Shape::J0 { m, .. } => Ok((Jet::zero(), m.eval_r(r)?)),
        }
    }

    /// All four amplitudes at r with their r-derivatives. For j = 0 the K
    /// and L slots are zero.
    pub fn components(&self, r: f64) -> Result<Components> {
        let rj = Jet::variable(r);
        if let Shape::J0 { m, n } = &self.shape {
            return Ok(Components {
                k: Jet::zero(),
                l: Jet::zero(),
                m: m.eval_r(rj)?,
                n: n.eval_r(rj)?,
            });
        }
        let (k, m) = self.km_r(rj)?;
        let ep = self.params.eps() + self.params.m_eff();
        let csc = rj.sin().recip();
        let cot = rj.cos() * csc;
        let a = self.a();
        let l = -(k.differentiate() + csc * m * a) / ep;
        let n = -(m.differentiate() + cot * m + csc * k * a) / ep;
        Ok(Components { k, l, m, n })
    }

    fn amplitude_x(&self, want_k: bool, x: f64, cos_sign: Sign) -> Result<Jet> {
        let Shape::Coupled {
            direct,
            direct_is_k,
            partner,
        } = &self.shape
        else {
            return Err(Error::InvalidQuantumNumbers("x-representation needs j >= 1".into()));
        };
        let xj = Jet::variable(x);
        if want_k == *direct_is_k {
            return direct.eval_x(xj, cos_sign);
        }
        if let Some(p) = partner {
            return p.eval_x(xj, cos_sign);
        }
        let a2 = (self.j as f64) * (self.j as f64 + 1.0);
        let op = if *direct_is_k {
            coupling_operator_k(self.p_sq(), a2)
        } else {
            coupling_operator_m(self.p_sq(), a2)
        };
        let applied = op.apply_jet(xj, direct.eval_x(xj, cos_sign)?);
        let a = a2.sqrt();
        Ok((1.0 - xj) / (xj.sqrt() * (2.0 * a * cos_sign.value())) * applied)
    }

    /// K as a jet in x = cos² r on the hemisphere where sign(cos r) = `cos_sign`.
    pub fn k_x(&self, x: f64, cos_sign: Sign) -> Result<Jet> {
        self.amplitude_x(true, x, cos_sign)
    }

    /// M as a jet in x = cos² r.
    pub fn m_x(&self, x: f64, cos_sign: Sign) -> Result<Jet> {
        self.amplitude_x(false, x, cos_sign)
    }

    pub fn sample(&self, grid: &[f64]) -> Result<RadialSolution> {
        check_grid(grid)?;
        let rows: Vec<[f64; 4]> = crate::par_map(grid, |r| self.components(*r).map(|c| c.values()))
            .into_iter()
            .collect::<Result<_>>()?;
        let pick = |i: usize| rows.iter().map(|v| v[i]).collect::<Vec<_>>();
        let is_j0 = matches!(self.shape, Shape::J0 { .. });
        Ok(RadialSolution {
            kind: self.kind,
            j: self.j,
            radial_n: self.radial_n,
            params: self.params,
            p_sq: self.p_sq(),
            grid: grid.to_vec(),
            x: grid.iter().map(|r| self.x_of_r(*r)).collect(),
            k: if is_j0 { vec![] } else { pick(0) },
            l: if is_j0 { vec![] } else { pick(1) },
            m: pick(2),
            n: pick(3),
        })
    }
}

/// Amplitudes sampled on an r-grid. For j = 0 only `m` and `n` are filled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialSolution {
    pub kind: SolutionKind,
    pub j: u32,
    pub radial_n: Option<u32>,
    pub params: ModeParams,
    pub p_sq: f64,
    pub grid: Vec<f64>,
    pub x: Vec<f64>,
    pub k: Vec<f64>,
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
}

pub fn check_grid(grid: &[f64]) -> Result<()> {
    let pi = std::f64::consts::PI;
    match grid.iter().find(|r| !(r.is_finite() && **r > 0.0 && **r < pi)) {
        Some(r) => Err(Error::InvalidGrid(format!("r = {r} outside the open interval (0, pi)"))),
        None => Ok(()),
    }
}

/// Open-interval grid `r_i = π(i+1)/(count+1)`, i = 0..count.
pub fn open_grid(count: usize) -> Vec<f64> {
    let pi = std::f64::consts::PI;
    (0..count)
        .map(|i| pi * (i as f64 + 1.0) / (count as f64 + 1.0))
        .collect()
}

pub fn wavefunction_j0(n: u32, params: ModeParams, grid: &[f64]) -> Result<RadialSolution> {
    ModeFunction::j0(n, params)?.sample(grid)
}

pub fn wavefunction_family(
    family: Family,
    qn: QuantumNumbers,
    params: ModeParams,
    grid: &[f64],
) -> Result<RadialSolution> {
    ModeFunction::family(family, qn, params)?.sample(grid)
}

pub fn general_basis(j: u32, params: ModeParams, grid: &[f64]) -> Result<[RadialSolution; 4]> {
    let [a, b, c, d] = ModeFunction::general_basis(j, params)?;
    Ok([a.sample(grid)?, b.sample(grid)?, c.sample(grid)?, d.sample(grid)?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn mode(family: Family, j: u32, n: u32, m: f64) -> ModeFunction {
        ModeFunction::on_spectrum(family, QuantumNumbers::new(j, n), m, Sign::Plus, Sign::Plus, Sign::Plus).unwrap()
    }

    #[test]
    fn f1_frozen_values() {
        let f = mode(Family::F1, 1, 0, 0.0);
        // x = cos² r = 1/4 with cos r > 0
        let r = 0.5f64.acos();
        let c = f.components(r).unwrap();
        assert!((c.k.value() - 0.433_012_701_892_219_3).abs() < 1e-14);
        assert!((c.m.value() - 0.306_186_217_847_897_2).abs() < 1e-14);
        let eq = f.components(FRAC_PI_2).unwrap();
        assert!(eq.k.value().abs() < 1e-15);
    }

    #[test]
    fn j0_frozen_values() {
        let params = ModeParams::from_p_sq(1.0, 3.0, Sign::Plus, Sign::Plus, Sign::Plus).unwrap();
        let f = ModeFunction::j0(0, params).unwrap();
        let c = f.components(FRAC_PI_2).unwrap();
        let ratio = -2.0 / 3.0 * 3.0;
        assert!((c.m.value() - ratio / 4.0).abs() < 1e-15);
        assert!(c.n.value().abs() < 1e-15);
        assert!(f.components(1e-7).unwrap().n.value().abs() < 1e-6);
    }

    #[test]
    fn system_residual_small() {
        use crate::model::system_j;
        for family in Family::DK {
            for m in [0.0, 1.3] {
                let n = if family == Family::F3 { 1 } else { 0 };
                let f = mode(family, 2, n, m);
                let sys = system_j(&f.params, &QuantumNumbers::new(2, n)).unwrap();
                for &r in &[0.3, 1.1, 2.0, 2.9] {
                    let c = f.components(r).unwrap();
                    let mut dy = [0.0; 4];
                    sys.rhs(r, &c.values(), &mut dy);
                    let d = c.derivs();
                    let scale = d.iter().chain(dy.iter()).fold(0.0f64, |a, v| a.max(v.abs()));
                    for i in 0..4 {
                        assert!((d[i] - dy[i]).abs() < 1e-10 * scale, "{family} r={r} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_off_spectrum_and_bad_grid() {
        let params = ModeParams::from_p_sq(0.0, 8.5, Sign::Plus, Sign::Plus, Sign::Plus).unwrap();
        let e = ModeFunction::family(Family::F1, QuantumNumbers::new(1, 0), params);
        assert!(matches!(e, Err(Error::OffSpectrum { .. })));
        let f = mode(Family::F1, 1, 0, 0.0);
        assert!(f.sample(&[0.0, 1.0]).is_err());
        assert!(f.sample(&[1.0, std::f64::consts::PI]).is_err());
    }

    #[test]
    fn general_basis_reduces_to_family_on_spectrum() {
        let params = ModeParams::from_p_sq(0.0, 8.0, Sign::Plus, Sign::Plus, Sign::Plus).unwrap();
        let basis = ModeFunction::general_basis(1, params).unwrap();
        let fam = mode(Family::F1, 1, 0, 0.0);
        for &r in &[0.4, 1.0, 2.2] {
            let a = basis[0].components(r).unwrap().k.value();
            let b = fam.components(r).unwrap().k.value();
            assert!((a - b).abs() < 1e-12);
        }
    }
}
