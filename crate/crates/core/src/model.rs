//! Radial systems and differential operators as explicit coefficient data.
//!
//! Operators act in the variable `x = cos² r`; the first-order systems act
//! in `r ∈ (0, π)` with curvature radius 1.

use nalgebra::DMatrix;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, JET_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn from_i32(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::InvalidParameters(format!("sign must be +1 or -1, got {s}"))),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub j: u32,
    pub n: u32,
}

impl QuantumNumbers {
    pub fn new(j: u32, n: u32) -> Self {
        QuantumNumbers { j, n }
    }

    pub fn a_sq(&self) -> i64 {
        let j = self.j as i64;
        j * (j + 1)
    }

    pub fn a(&self) -> f64 {
        (self.a_sq() as f64).sqrt()
    }
}

/// Mass, energy and branch labels of a mode. The energy is the single
/// source of truth; `p_sq` is always derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeParams {
    m: f64,
    eps: f64,
    pub lambda_sign: Sign,
    pub delta_sign: Sign,
}

impl ModeParams {
    pub fn new(m: f64, eps: f64, lambda_sign: Sign, delta_sign: Sign) -> Result<Self> {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::InvalidParameters(format!("mass must be finite and >= 0, got {m}")));
        }
        if !eps.is_finite() {
            return Err(Error::InvalidParameters("energy must be finite".into()));
        }
        Ok(ModeParams {
            m,
            eps,
            lambda_sign,
            delta_sign,
        })
    }

    /// Energy `eps_sign · √(p² + m²)`.
    pub fn from_p_sq(m: f64, p_sq: f64, eps_sign: Sign, lambda_sign: Sign, delta_sign: Sign) -> Result<Self> {
        let e_sq = p_sq + m * m;
        if e_sq < 0.0 {
            return Err(Error::InvalidParameters(format!("p^2 + m^2 = {e_sq} is negative")));
        }
        ModeParams::new(m, eps_sign.value() * e_sq.sqrt(), lambda_sign, delta_sign)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn p_sq(&self) -> f64 {
        self.eps * self.eps - self.m * self.m
    }

    pub fn eps_sign(&self) -> Sign {
        if self.eps < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// The mass entering the radial equations once both branch labels are
    /// realized by the substitution m → −m.
    pub fn m_eff(&self) -> f64 {
        self.lambda_sign.value() * self.delta_sign.value() * self.m
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        ModeParams { eps, ..*self }
    }
}

/// `Σ poly[k] x^k + Σ at_zero[k] x^{-k} + Σ at_one[k] (1−x)^{-k}`;
/// index 0 of the two pole vectors is unused.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleExpansion {
    pub poly: Vec<f64>,
    pub at_zero: Vec<f64>,
    pub at_one: Vec<f64>,
}

impl PoleExpansion {
    pub fn polynomial(poly: Vec<f64>) -> Self {
        PoleExpansion {
            poly,
            ..Default::default()
        }
    }

    pub fn with_zero_poles(mut self, at_zero: Vec<f64>) -> Self {
        self.at_zero = at_zero;
        self
    }

    pub fn with_one_poles(mut self, at_one: Vec<f64>) -> Self {
        self.at_one = at_one;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        let poly = self.poly.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let u = 1.0 / x;
        let v = 1.0 / (1.0 - x);
        let zero = self.at_zero.iter().skip(1).rev().fold(0.0, |acc, c| (acc + c) * u);
        let one = self.at_one.iter().skip(1).rev().fold(0.0, |acc, c| (acc + c) * v);
        poly + zero + one
    }

    pub fn eval_jet(&self, x: Jet) -> Jet {
        let poly = self
            .poly
            .iter()
            .rev()
            .fold(Jet::zero(), |acc, c| acc * x + *c);
        let u = x.recip();
        let v = (1.0 - x).recip();
        let zero = self
            .at_zero
            .iter()
            .skip(1)
            .rev()
            .fold(Jet::zero(), |acc, c| (acc + *c) * u);
        let one = self
            .at_one
            .iter()
            .skip(1)
            .rev()
            .fold(Jet::zero(), |acc, c| (acc + *c) * v);
        poly + zero + one
    }

    /// Highest pole order at x = 0 and x = 1 with a non-zero coefficient.
    pub fn pole_orders(&self) -> (usize, usize) {
        let top = |v: &[f64]| v.iter().rposition(|c| *c != 0.0).unwrap_or(0);
        (top(&self.at_zero), top(&self.at_one))
    }

    /// The dominant term near `x = 0` (if `near_one` is false) or `x = 1`.
    pub fn leading_term(&self, x: f64, near_one: bool) -> f64 {
        let (z, o) = self.pole_orders();
        if near_one {
            if o > 0 {
                return self.at_one[o] * (1.0 - x).powi(-(o as i32));
            }
        } else if z > 0 {
            return self.at_zero[z] * x.powi(-(z as i32));
        }
        self.eval(x)
    }

    pub fn scaled(&self, s: f64) -> Self {
        let m = |v: &Vec<f64>| v.iter().map(|c| c * s).collect();
        PoleExpansion {
            poly: m(&self.poly),
            at_zero: m(&self.at_zero),
            at_one: m(&self.at_one),
        }
    }
}

/// `Σ_k c_k(x) dᵏ/dxᵏ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDifferentialOperator {
    pub coeffs: Vec<PoleExpansion>,
}

impl LinearDifferentialOperator {
    pub fn new(coeffs: Vec<PoleExpansion>) -> Self {
        assert!(coeffs.len() >= 2, "operator needs at least order 1");
        LinearDifferentialOperator { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &PoleExpansion {
        &self.coeffs[k]
    }

    /// Returns `(Σ c_k y^(k), max_k |c_k y^(k)|)` from `derivs = [y, y', …]`.
    pub fn apply(&self, x: f64, derivs: &[f64]) -> (f64, f64) {
        let mut sum = 0.0;
        let mut scale: f64 = 0.0;
        for (c, d) in self.coeffs.iter().zip(derivs) {
            let t = c.eval(x) * d;
            sum += t;
            scale = scale.max(t.abs());
        }
        (sum, scale)
    }

    /// Applies the operator to a jet `y` in the variable `x`; the result is
    /// meaningful up to degree `JET_DEGREE − order`.
    pub fn apply_jet(&self, x: Jet, y: Jet) -> Jet {
        let mut dy = y;
        let mut out = Jet::zero();
        for c in &self.coeffs {
            out = out + c.eval_jet(x) * dy;
            dy = dy.differentiate();
        }
        out
    }

    /// Same as [`Self::apply_jet`] but also returns the per-point term scale.
    pub fn apply_jet_scaled(&self, x: Jet, y: Jet) -> (Jet, f64) {
        let mut dy = y;
        let mut out = Jet::zero();
        let mut scale: f64 = 0.0;
        for c in &self.coeffs {
            let t = c.eval_jet(x) * dy;
            scale = scale.max(t.value().abs());
            out = out + t;
            dy = dy.differentiate();
        }
        (out, scale)
    }

    /// Copy with coefficient `k` multiplied by `1 + rel` (negative controls).
    pub fn perturbed(&self, k: usize, rel: f64) -> Self {
        let mut out = self.clone();
        out.coeffs[k] = out.coeffs[k].scaled(1.0 + rel);
        out
    }
}

fn pe(poly: &[f64], at_zero: &[f64], at_one: &[f64]) -> PoleExpansion {
    PoleExpansion {
        poly: poly.to_vec(),
        at_zero: at_zero.to_vec(),
        at_one: at_one.to_vec(),
    }
}

/// Fourth-order equation for K in x = cos² r.
pub fn operator_k4(p_sq: f64, a_sq: f64) -> LinearDifferentialOperator {
    fourth_order(p_sq, a_sq, 7.0, 0.0)
}

/// Fourth-order equation for M in x = cos² r.
pub fn operator_m4(p_sq: f64, a_sq: f64) -> LinearDifferentialOperator {
    fourth_order(p_sq, a_sq, 6.0, 1.0)
}

/// The K and M equations differ only by a shift in c₁ (7 vs 6) and by a
/// shift `s` in the low-order c₀ numerators.
fn fourth_order(p2: f64, a2: f64, c1_shift: f64, s: f64) -> LinearDifferentialOperator {
    let c4 = pe(&[0.0, 0.0, 1.0], &[], &[]);
    let c3 = pe(&[5.0, 7.0], &[], &[0.0, -5.0]);
    let c2 = pe(
        &[10.0 - p2 / 2.0],
        &[],
        &[0.0, (p2 + a2 - 28.0) / 2.0, (15.0 - 2.0 * a2) / 4.0],
    );
    let c1 = pe(
        &[],
        &[0.0, 0.25],
        &[
            0.0,
            (3.0 * p2 - c1_shift) / 4.0,
            -(3.0 * p2 + a2 - 9.0) / 4.0,
            a2 / 4.0,
        ],
    );
    let low = (p2 - a2 - s) / 8.0;
    let c0 = pe(
        &[],
        &[0.0, low],
        &[
            0.0,
            low,
            (p2 * p2 + 2.0 * p2 - 2.0 * a2 - 3.0 * s) / 16.0,
            -a2 * (p2 - 1.0) / 8.0,
            a2 * (a2 - 2.0) / 16.0,
        ],
    );
    LinearDifferentialOperator::new(vec![c0, c1, c2, c3, c4])
}

/// `d² + ½(u/x − v/(1−x)) d + ¼(q/x + q/(1−x) − w/(1−x)²)`, `q = p² − a² − shift`.
fn second_order(u: f64, v: f64, q: f64, w: f64) -> LinearDifferentialOperator {
    let c2 = PoleExpansion::polynomial(vec![1.0]);
    let c1 = pe(&[], &[0.0, u / 2.0], &[0.0, -v / 2.0]);
    let c0 = pe(&[], &[0.0, q / 4.0], &[0.0, q / 4.0, -w / 4.0]);
    LinearDifferentialOperator::new(vec![c0, c1, c2])
}

/// `(outer, inner)` with `operator_k4 = x² · outer ∘ inner`.
pub fn factor_pair_k(p_sq: f64, a_sq: f64) -> (LinearDifferentialOperator, LinearDifferentialOperator) {
    let d = p_sq - a_sq;
    (
        second_order(3.0, 7.0, d - 10.0, a_sq - 6.0),
        second_order(1.0, 3.0, d, a_sq),
    )
}

/// `(outer, inner)` with `operator_m4 = x² · outer ∘ inner`.
pub fn factor_pair_m(p_sq: f64, a_sq: f64) -> (LinearDifferentialOperator, LinearDifferentialOperator) {
    let d = p_sq - a_sq;
    (
        second_order(3.0, 7.0, d - 9.0, a_sq - 6.0),
        second_order(1.0, 3.0, d - 1.0, a_sq),
    )
}

/// Second-order left-hand side of the K–M coupling,
/// `4x(1−x)K'' + 2(1−2x)K' + (p² − a²/(1−x))K = 2a√x/(1−x) · M`.
pub fn coupling_operator_k(p_sq: f64, a_sq: f64) -> LinearDifferentialOperator {
    coupling(p_sq, a_sq)
}

/// `4x(1−x)M'' + 2(1−2x)M' + (p² + 1 − (a²+2)/(1−x))M = 2a√x/(1−x) · K`.
pub fn coupling_operator_m(p_sq: f64, a_sq: f64) -> LinearDifferentialOperator {
    coupling(p_sq + 1.0, a_sq + 2.0)
}

fn coupling(p2: f64, a2: f64) -> LinearDifferentialOperator {
    LinearDifferentialOperator::new(vec![
        pe(&[p2], &[], &[0.0, -a2]),
        pe(&[2.0, -4.0], &[], &[]),
        pe(&[0.0, 4.0, -4.0], &[], &[]),
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndicialExponents {
    pub all: [Rational64; 4],
    pub bound: [Rational64; 2],
}

/// Local exponents γ of `(1−x)^γ` at x = 1 (r = 0).
pub fn indicial_exponents(j: u32) -> Result<IndicialExponents> {
    if j == 0 {
        return Err(Error::InvalidQuantumNumbers("indicial analysis needs j >= 1".into()));
    }
    let j = j as i64;
    let half = |num: i64| Rational64::new(num, 2);
    Ok(IndicialExponents {
        all: [half(j), half(j + 2), half(1 - j), half(-(j + 1))],
        bound: [half(j), half(j + 2)],
    })
}

/// Determinant of the leading-order algebraic system obtained by
/// substituting `K = K₀(1−x)^γ, M = M₀(1−x)^γ` into the coupling pair.
pub fn indicial_determinant(j: u32, gamma: f64) -> f64 {
    let a2 = (j as f64) * (j as f64 + 1.0);
    let base = 4.0 * gamma * gamma - 2.0 * gamma;
    (base - a2) * (base - a2 - 2.0) - 4.0 * a2
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum SystemKind {
    J0,
    J { a: f64 },
}

/// `dY/dr = A(r) Y` with simple poles at r ∈ {0, π}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderSystem {
    kind: SystemKind,
    eps: f64,
    m: f64,
}

impl FirstOrderSystem {
    pub fn dim(&self) -> usize {
        match self.kind {
            SystemKind::J0 => 2,
            SystemKind::J { .. } => 4,
        }
    }

    pub fn singular_points(&self) -> [f64; 2] {
        [0.0, std::f64::consts::PI]
    }

    /// The mass after branch substitution.
    pub fn mass(&self) -> f64 {
        self.m
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn with_eps(&self, eps: f64) -> Self {
        FirstOrderSystem { eps, ..*self }
    }

    pub fn matrix(&self, r: f64) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        let (s, c) = r.sin_cos();
        self.fill(1.0 / s, c / s, |i, j, v| out[(i, j)] = v);
        out
    }

    /// `lim_{r→0} r·A(r)` (`at_pi = false`) or `lim_{r→π} (r−π)·A(r)`.
    pub fn residue(&self, at_pi: bool) -> DMatrix<f64> {
        let (p, d, _) = self.split();
        if at_pi {
            d - p
        } else {
            p + d
        }
    }

    /// `(P, D, E)` with `A(r) = P/sin r + D·cot r + E`.
    pub fn split(&self) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
        let n = self.dim();
        let mut p = DMatrix::zeros(n, n);
        let mut d = DMatrix::zeros(n, n);
        let mut e = DMatrix::zeros(n, n);
        self.fill(1.0, 0.0, |i, j, v| p[(i, j)] = v);
        self.fill(0.0, 1.0, |i, j, v| d[(i, j)] = v);
        self.fill(0.0, 0.0, |i, j, v| e[(i, j)] = v);
        // the first two calls also pick up the constant part
        p -= &e;
        d -= &e;
        (p, d, e)
    }

    /// Taylor jets in r of the solution through `y` at `r`, obtained from
    /// the recursion `(k+1) y_{k+1} = Σ A_i y_{k−i}`.
    pub fn taylor(&self, r: f64, y: &[f64]) -> Vec<Jet> {
        let n = self.dim();
        let rj = Jet::variable(r);
        let csc = rj.sin().recip();
        let cot = rj.cos() * csc;
        let (p, d, e) = self.split();
        let mut coeffs = vec![vec![0.0; JET_DEGREE + 1]; n];
        for (c, v) in coeffs.iter_mut().zip(y) {
            c[0] = *v;
        }
        for k in 0..JET_DEGREE {
            for i in 0..n {
                let mut acc = 0.0;
                for j in 0..n {
                    for l in 0..=k {
                        let a = p[(i, j)] * csc.taylor()[l]
                            + d[(i, j)] * cot.taylor()[l]
                            + if l == 0 { e[(i, j)] } else { 0.0 };
                        acc += a * coeffs[j][k - l];
                    }
                }
                coeffs[i][k + 1] = acc / (k as f64 + 1.0);
            }
        }
        coeffs.iter().map(|c| Jet::from_taylor(c)).collect()
    }

    /// Writes `A(r)·y` into `dy` without allocating.
    pub fn rhs(&self, r: f64, y: &[f64], dy: &mut [f64]) {
        let (s, c) = r.sin_cos();
        let csc = 1.0 / s;
        let cot = c / s;
        let (e, m) = (self.eps, self.m);
        match self.kind {
            SystemKind::J0 => {
                dy[0] = -cot * y[0] - (e + m) * y[1];
                dy[1] = cot * y[1] + (e - m) * y[0];
            }
            SystemKind::J { a } => {
                let (k, l, mm, nn) = (y[0], y[1], y[2], y[3]);
                dy[0] = -(e + m) * l - a * csc * mm;
                dy[1] = (e - m) * k + a * csc * nn;
                dy[2] = -a * csc * k - cot * mm - (e + m) * nn;
                dy[3] = a * csc * l + (e - m) * mm + cot * nn;
            }
        }
    }

    fn fill(&self, csc: f64, cot: f64, mut set: impl FnMut(usize, usize, f64)) {
        let (e, m) = (self.eps, self.m);
        match self.kind {
            SystemKind::J0 => {
                set(0, 0, -cot);
                set(0, 1, -(e + m));
                set(1, 0, e - m);
                set(1, 1, cot);
            }
            SystemKind::J { a } => {
                set(0, 1, -(e + m));
                set(0, 2, -a * csc);
                set(1, 0, e - m);
                set(1, 3, a * csc);
                set(2, 0, -a * csc);
                set(2, 2, -cot);
                set(2, 3, -(e + m));
                set(3, 1, a * csc);
                set(3, 2, e - m);
                set(3, 3, cot);
            }
        }
    }
}

/// Two-component (M, N) system for j = 0.
pub fn system_j0(params: &ModeParams) -> FirstOrderSystem {
    FirstOrderSystem {
        kind: SystemKind::J0,
        eps: params.eps(),
        m: params.m_eff(),
    }
}

/// Four-component (K, L, M, N) system for j ≥ 1.
pub fn system_j(params: &ModeParams, qn: &QuantumNumbers) -> Result<FirstOrderSystem> {
    if qn.j == 0 {
        return Err(Error::InvalidQuantumNumbers("system_j needs j >= 1; use system_j0".into()));
    }
    Ok(FirstOrderSystem {
        kind: SystemKind::J { a: qn.a() },
        eps: params.eps(),
        m: params.m_eff(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn mode(m: f64, eps: f64, lambda: Sign) -> ModeParams {
        ModeParams::new(m, eps, lambda, Sign::Plus).unwrap()
    }

    #[test]
    fn j0_matrix_at_equator() {
        let z = system_j0(&mode(0.0, 0.0, Sign::Plus)).matrix(FRAC_PI_2);
        assert!(z.iter().all(|v| v.abs() < 1e-15));
        let a = system_j0(&mode(1.0, 2.0, Sign::Plus)).matrix(FRAC_PI_2);
        assert!((a[(0, 1)] + 3.0).abs() < 1e-15 && (a[(1, 0)] - 1.0).abs() < 1e-15);
        assert!(a[(0, 0)].abs() < 1e-15);
        let b = system_j0(&mode(1.0, 2.0, Sign::Minus)).matrix(FRAC_PI_2);
        assert!((b[(0, 1)] + 1.0).abs() < 1e-15 && (b[(1, 0)] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn j_matrix_at_equator() {
        let qn = QuantumNumbers::new(1, 0);
        let a = system_j(&mode(0.0, 0.0, Sign::Plus), &qn).unwrap().matrix(FRAC_PI_2);
        let s2 = 2f64.sqrt();
        for ((i, j), v) in [((0, 2), -s2), ((1, 3), s2), ((2, 0), -s2), ((3, 1), s2)] {
            assert!((a[(i, j)] - v).abs() < 1e-15);
        }
        let nonzero = a.iter().filter(|v| v.abs() > 1e-15).count();
        assert_eq!(nonzero, 4);
        let b = system_j(&mode(1.0, 1.0, Sign::Plus), &qn).unwrap().matrix(FRAC_PI_2);
        assert!((b[(0, 1)] + 2.0).abs() < 1e-15);
        assert!(system_j(&mode(1.0, 1.0, Sign::Plus), &QuantumNumbers::new(0, 0)).is_err());
    }

    #[test]
    fn rhs_agrees_with_matrix() {
        let sys = system_j(&mode(0.7, 2.1, Sign::Minus), &QuantumNumbers::new(2, 0)).unwrap();
        let y = [0.3, -1.2, 0.5, 2.0];
        let mut dy = [0.0; 4];
        sys.rhs(0.9, &y, &mut dy);
        let want = sys.matrix(0.9) * nalgebra::DVector::from_row_slice(&y);
        for i in 0..4 {
            assert!((dy[i] - want[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn k4_frozen_coefficients() {
        let op = operator_k4(8.0, 2.0);
        assert_eq!(op.order(), 4);
        assert!((op.coeff(4).eval(0.3) - 0.09).abs() < 1e-15);
        assert!((op.coeff(3).eval(0.5) + 1.5).abs() < 1e-14);
        let zero = operator_k4(0.0, 0.0);
        for &x in &[0.1, 0.5, 0.9] {
            assert!(zero.coeff(0).eval(x).abs() < 1e-14);
        }
    }

    #[test]
    fn m4_differs_from_k4_by_shifts() {
        let (p2, a2) = (5.3, 6.0);
        let (k, m) = (operator_k4(p2, a2), operator_m4(p2, a2));
        for &x in &[0.2, 0.45, 0.8] {
            let d0 = m.coeff(0).eval(x) - k.coeff(0).eval(x);
            let want = -1.0 / (8.0 * x) - 1.0 / (8.0 * (1.0 - x)) - 3.0 / (16.0 * (1.0 - x).powi(2));
            assert!((d0 - want).abs() < 1e-12);
            assert_eq!(m.coeff(3).eval(x), k.coeff(3).eval(x));
            let d1 = m.coeff(1).eval(x) - k.coeff(1).eval(x);
            assert!((d1 - 0.25 / (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn factor_pair_frozen_coefficients() {
        let a2 = 6.0;
        let (outer, inner) = factor_pair_k(a2, a2);
        let x = 0.37;
        assert!((inner.coeff(1).eval(x) - 0.5 * (1.0 / x - 3.0 / (1.0 - x))).abs() < 1e-14);
        assert!((inner.coeff(0).eval(0.5) + a2).abs() < 1e-13);
        assert_eq!(outer.coeff(0).at_one[2], -(a2 - 6.0) / 4.0);
        let (p2, a2) = (10.0, 2.0);
        let (mo, mi) = factor_pair_m(p2, a2);
        assert_eq!(mi.coeff(0).at_zero[1], (p2 - a2 - 1.0) / 4.0);
        assert_eq!(mo.coeff(0).at_zero[1], (p2 - a2 - 9.0) / 4.0);
        assert_eq!(mo.coeff(1), factor_pair_k(p2, a2).0.coeff(1));
    }

    #[test]
    fn indicial_frozen() {
        let e = indicial_exponents(1).unwrap();
        let r = |a, b| Rational64::new(a, b);
        assert_eq!(e.all, [r(1, 2), r(3, 2), r(0, 1), r(-1, 1)]);
        assert_eq!(e.bound, [r(1, 2), r(3, 2)]);
        let e2 = indicial_exponents(2).unwrap();
        assert_eq!(e2.all, [r(1, 1), r(2, 1), r(-1, 2), r(-3, 2)]);
        assert!(indicial_exponents(0).is_err());
        for j in 1..10 {
            for g in indicial_exponents(j).unwrap().all {
                let g = *g.numer() as f64 / *g.denom() as f64;
                assert!(indicial_determinant(j, g).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn pole_orders_match_structure() {
        let op = operator_k4(3.0, 6.0);
        assert_eq!(op.coeff(0).pole_orders(), (1, 4));
        assert_eq!(op.coeff(1).pole_orders(), (1, 3));
        let x = 1.0 - 1e-6;
        let c0 = op.coeff(0);
        assert!((c0.eval(x) / c0.leading_term(x, true) - 1.0).abs() < 0.01);
    }

    #[test]
    fn jet_evaluation_matches_scalar() {
        let c = operator_k4(8.0, 2.0).coeffs[1].clone();
        let j = c.eval_jet(Jet::variable(0.4));
        assert!((j.value() - c.eval(0.4)).abs() < 1e-13);
        let h = 1e-5;
        let fd = (c.eval(0.4 + h) - c.eval(0.4 - h)) / (2.0 * h);
        assert!((j.deriv(1) - fd).abs() < 1e-6 * fd.abs().max(1.0));
    }
}
