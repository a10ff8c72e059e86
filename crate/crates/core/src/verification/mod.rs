//! Residual, factorization, Wronskian and cross-consistency checks.

pub mod fd;

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix4;
use serde::Serialize;

use crate::closed_form::{Family, ModeFunction};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::model::{
    factor_pair_k, factor_pair_m, operator_k4, operator_m4, system_j, system_j0, LinearDifferentialOperator,
    QuantumNumbers, Sign,
};

const WORST_KEPT: usize = 5;
const ENDPOINT_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorstPoint {
    pub at: f64,
    pub rel_residual: f64,
    pub abs_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check_name: String,
    pub pass: bool,
    pub max_rel_residual: f64,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub worst_points: Vec<WorstPoint>,
}

impl VerificationReport {
    /// Builds a report from per-sample `(location, abs residual, term scale)`.
    pub fn from_samples(name: impl Into<String>, tolerance: f64, samples: &[(f64, f64, f64)]) -> Self {
        let mut pts: Vec<WorstPoint> = samples
            .iter()
            .map(|&(at, abs, scale)| WorstPoint {
                at,
                abs_residual: abs,
                rel_residual: relative(abs, scale),
            })
            .collect();
        let max_rel = pts.iter().map(|p| p.rel_residual).fold(0.0, f64::max);
        let max_abs = pts.iter().map(|p| p.abs_residual).fold(0.0, f64::max);
        pts.sort_by(|a, b| b.rel_residual.total_cmp(&a.rel_residual));
        pts.truncate(WORST_KEPT);
        VerificationReport {
            check_name: name.into(),
            pass: max_rel <= tolerance,
            max_rel_residual: max_rel,
            max_abs_residual: max_abs,
            tolerance,
            samples: samples.len(),
            worst_points: pts,
        }
    }

    /// A check that could not run at all.
    pub fn failed(name: impl Into<String>, tolerance: f64, _err: &Error) -> Self {
        VerificationReport {
            check_name: name.into(),
            pass: false,
            max_rel_residual: f64::INFINITY,
            max_abs_residual: f64::INFINITY,
            tolerance,
            samples: 0,
            worst_points: vec![],
        }
    }
}

fn relative(abs: f64, scale: f64) -> f64 {
    if abs == 0.0 {
        0.0
    } else if scale == 0.0 || !scale.is_finite() {
        f64::INFINITY
    } else {
        abs / scale
    }
}

/// `count` Chebyshev points (first kind) mapped to `[lo, hi]`, ascending.
pub fn chebyshev_grid(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    let n = count as f64;
    let mut out: Vec<f64> = (0..count)
        .map(|k| {
            let t = ((2.0 * k as f64 + 1.0) * std::f64::consts::PI / (2.0 * n)).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * t
        })
        .collect();
    out.reverse();
    out
}

/// 200 Chebyshev points on [0.02, 0.98].
pub fn default_grid() -> Vec<f64> {
    chebyshev_grid(200, 0.02, 0.98)
}

fn check_x_grid(grid: &[f64]) -> Result<()> {
    match grid
        .iter()
        .find(|x| !(x.is_finite() && **x >= ENDPOINT_GUARD && **x <= 1.0 - ENDPOINT_GUARD))
    {
        Some(x) => Err(Error::InvalidGrid(format!("x = {x} is within 1e-6 of a singular endpoint"))),
        None => Ok(()),
    }
}

/// Residual `Σ c_k y^(k)` at each point; `derivs[i]` holds `y, y', …` at `grid[i]`.
pub fn residual_operator(
    name: &str,
    op: &LinearDifferentialOperator,
    grid: &[f64],
    derivs: &[Vec<f64>],
    tolerance: f64,
) -> Result<VerificationReport> {
    check_x_grid(grid)?;
    if derivs.len() != grid.len() {
        return Err(Error::InvalidGrid("one derivative vector per grid point expected".into()));
    }
    if let Some(d) = derivs.iter().find(|d| d.len() <= op.order()) {
        return Err(Error::InvalidParameters(format!(
            "operator of order {} needs {} derivative values, got {}",
            op.order(),
            op.order() + 1,
            d.len()
        )));
    }
    let samples: Vec<(f64, f64, f64)> = grid
        .iter()
        .zip(derivs)
        .map(|(&x, d)| {
            let (sum, scale) = op.apply(x, d);
            (x, sum.abs(), scale)
        })
        .collect();
    Ok(VerificationReport::from_samples(name, tolerance, &samples))
}

/// Residual of `op` (an operator in x = cos² r) applied to a function known
/// only by samples on a uniform r-grid. r-derivatives come from 11-point
/// Fornberg stencils with spacing close to 0.01 and are mapped to x by the
/// chain rule; only points with cos r > 0 and x in [0.02, 0.98] are used.
pub fn tabulated_residual(
    name: &str,
    op: &LinearDifferentialOperator,
    r: &[f64],
    values: &[f64],
    tolerance: f64,
) -> Result<VerificationReport> {
    if r.len() != values.len() || r.len() < 12 {
        return Err(Error::InvalidGrid("need at least 12 matching r/value samples".into()));
    }
    let h = (r[r.len() - 1] - r[0]) / (r.len() - 1) as f64;
    let stride = ((0.01 / h).round() as usize).max(1);
    let half = 5 * stride;
    let order = op.order();
    let mut xs = Vec::new();
    let mut derivs = Vec::new();
    for i in half..r.len().saturating_sub(half) {
        let x = r[i].cos().powi(2);
        if r[i] >= FRAC_PI_2 || !(0.02..=0.98).contains(&x) {
            continue;
        }
        let idx: Vec<usize> = (0..=10).map(|k| i - half + k * stride).collect();
        let pts: Vec<f64> = idx.iter().map(|&k| r[k]).collect();
        let vals: Vec<f64> = idx.iter().map(|&k| values[k]).collect();
        let dr = fd::tabulated_derivatives(r[i], &pts, &vals, order);
        let r_of_x = Jet::variable(x).sqrt().acos();
        xs.push(x);
        derivs.push(r_of_x.compose_derivs(&dr).derivatives(order));
    }
    if xs.is_empty() {
        return Err(Error::InvalidGrid("no usable interior samples".into()));
    }
    residual_operator(name, op, &xs, &derivs, tolerance)
}

/// Which amplitude of a mode a check applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    K,
    M,
}

/// Derivatives in x of K or M of a closed-form mode on the cos r > 0 hemisphere.
pub fn mode_derivatives_x(mode: &ModeFunction, channel: Channel, grid: &[f64], order: usize) -> Result<Vec<Vec<f64>>> {
    crate::par_map(grid, |&x| {
        let jet = match channel {
            Channel::K => mode.k_x(x, Sign::Plus)?,
            Channel::M => mode.m_x(x, Sign::Plus)?,
        };
        Ok(jet.derivatives(order))
    })
    .into_iter()
    .collect()
}

/// The fourth-order operator residual of K (or M) of a j ≥ 1 mode.
pub fn fourth_order_residual(
    mode: &ModeFunction,
    channel: Channel,
    grid: &[f64],
    tolerance: f64,
) -> Result<VerificationReport> {
    let a_sq = (mode.j as f64) * (mode.j as f64 + 1.0);
    let (op, label) = match channel {
        Channel::K => (operator_k4(mode.p_sq(), a_sq), "K"),
        Channel::M => (operator_m4(mode.p_sq(), a_sq), "M"),
    };
    let derivs = mode_derivatives_x(mode, channel, grid, 4)?;
    residual_operator(
        &format!("fourth_order_{label}:{}", mode_label(mode)),
        &op,
        grid,
        &derivs,
        tolerance,
    )
}

pub fn mode_label(mode: &ModeFunction) -> String {
    use crate::closed_form::SolutionKind;
    let kind = match mode.kind {
        SolutionKind::Family(f) => f.to_string(),
        SolutionKind::Basis(b) => format!("basis_{b:?}").to_lowercase(),
    };
    match mode.radial_n {
        Some(n) => format!("{kind}:j={}:n={n}", mode.j),
        None => format!("{kind}:j={}:p2={}", mode.j, mode.p_sq()),
    }
}

/// r-grid on both hemispheres: `acos(±√x)` for each x.
pub fn r_grid_from_x(grid: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = grid
        .iter()
        .flat_map(|x| {
            let c = x.sqrt();
            [c.acos(), (-c).acos()]
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out
}

/// Pointwise residual of the first-order radial system for a closed-form
/// mode, with each component normalized by its largest participating term.
pub fn system_residual(mode: &ModeFunction, r_grid: &[f64], tolerance: f64) -> Result<VerificationReport> {
    let sys = if mode.j == 0 {
        system_j0(&mode.params)
    } else {
        system_j(&mode.params, &QuantumNumbers::new(mode.j, 0))?
    };
    let dim = sys.dim();
    let samples: Vec<(f64, f64, f64)> = crate::par_map(r_grid, |&r| -> Result<(f64, f64, f64)> {
        let c = mode.components(r)?;
        let (y, dy) = if dim == 2 {
            (vec![c.m.value(), c.n.value()], vec![c.m.deriv(1), c.n.deriv(1)])
        } else {
            (c.values().to_vec(), c.derivs().to_vec())
        };
        let a = sys.matrix(r);
        let mut worst = (0.0, 0.0, 1.0);
        for i in 0..dim {
            let mut rhs = 0.0;
            let mut scale = dy[i].abs();
            for j in 0..dim {
                let t = a[(i, j)] * y[j];
                rhs += t;
                scale = scale.max(t.abs());
            }
            let abs = (dy[i] - rhs).abs();
            if relative(abs, scale) >= relative(worst.1, worst.2) {
                worst = (r, abs, scale);
            }
        }
        Ok(worst)
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(VerificationReport::from_samples(
        format!("first_order_system:{}", mode_label(mode)),
        tolerance,
        &samples,
    ))
}

/// Second-order scalar equations of the j = 0 pair:
/// `M'' + (p²+1 − 2/sin² r)M = 0` and `N'' + (p²+1)N = 0`.
pub fn j0_scalar_residuals(mode: &ModeFunction, r_grid: &[f64], tolerance: f64) -> Result<[VerificationReport; 2]> {
    let q = mode.p_sq() + 1.0;
    let mut m_samples = Vec::with_capacity(r_grid.len());
    let mut n_samples = Vec::with_capacity(r_grid.len());
    for &r in r_grid {
        let c = mode.components(r)?;
        let s2 = r.sin().powi(2);
        let (m0, m2) = (c.m.value(), c.m.deriv(2));
        let pot = (q - 2.0 / s2) * m0;
        m_samples.push((r, (m2 + pot).abs(), m2.abs().max(pot.abs())));
        let (n0, n2) = (c.n.value(), c.n.deriv(2));
        n_samples.push((r, (n2 + q * n0).abs(), n2.abs().max((q * n0).abs())));
    }
    let label = mode_label(mode);
    Ok([
        VerificationReport::from_samples(format!("j0_scalar_M:{label}"), tolerance, &m_samples),
        VerificationReport::from_samples(format!("j0_scalar_N:{label}"), tolerance, &n_samples),
    ])
}

/// Test functions for the factorization check, with exact jets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestFunction {
    Monomial(u32),
    Sine(f64),
}

impl TestFunction {
    pub fn eval(&self, x: Jet) -> Jet {
        match *self {
            TestFunction::Monomial(k) => x.powi(k),
            TestFunction::Sine(k) => (x * k).sin(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestFunction::Monomial(k) => format!("x^{k}"),
            TestFunction::Sine(k) => format!("sin({k}x)"),
        }
    }
}

/// Polynomials up to degree 6 and sin(kx), k = 1, 2, 3.
pub fn default_battery() -> Vec<TestFunction> {
    let mut v: Vec<TestFunction> = (0..=6).map(TestFunction::Monomial).collect();
    v.extend([1.0, 2.0, 3.0].map(TestFunction::Sine));
    v
}

/// Compares `direct φ` with `ρ · outer(inner φ)`, where `ρ` is the ratio of
/// leading coefficients (so a factorization up to a multiplier is accepted).
pub fn factorization_identity(
    name: &str,
    outer: &LinearDifferentialOperator,
    inner: &LinearDifferentialOperator,
    direct: &LinearDifferentialOperator,
    battery: &[TestFunction],
    grid: &[f64],
    tolerance: f64,
) -> Result<VerificationReport> {
    check_x_grid(grid)?;
    if outer.order() + inner.order() != direct.order() {
        return Err(Error::InvalidParameters("orders of the factors do not add up".into()));
    }
    let lead = |op: &LinearDifferentialOperator, x: f64| op.coeff(op.order()).eval(x);
    let mut samples = Vec::with_capacity(grid.len() * battery.len());
    for phi in battery {
        for &x in grid {
            let xj = Jet::variable(x);
            let y = phi.eval(xj);
            let (d, d_scale) = direct.apply_jet_scaled(xj, y);
            let f = inner.apply_jet(xj, y);
            let (c, c_scale) = outer.apply_jet_scaled(xj, f);
            let rho = lead(direct, x) / (lead(outer, x) * lead(inner, x));
            let diff = d.value() - rho * c.value();
            samples.push((x, diff.abs(), d_scale.max(rho.abs() * c_scale)));
        }
    }
    Ok(VerificationReport::from_samples(name, tolerance, &samples))
}

/// Both factorizations at one (p², a²) on the standard battery.
pub fn factorization_suite(p_sq: f64, a_sq: f64, tolerance: f64) -> Result<[VerificationReport; 2]> {
    let grid = chebyshev_grid(200, 0.05, 0.95);
    let battery = default_battery();
    let (ko, ki) = factor_pair_k(p_sq, a_sq);
    let (mo, mi) = factor_pair_m(p_sq, a_sq);
    Ok([
        factorization_identity(
            &format!("factorization_K:p2={p_sq}:a2={a_sq}"),
            &ko,
            &ki,
            &operator_k4(p_sq, a_sq),
            &battery,
            &grid,
            tolerance,
        )?,
        factorization_identity(
            &format!("factorization_M:p2={p_sq}:a2={a_sq}"),
            &mo,
            &mi,
            &operator_m4(p_sq, a_sq),
            &battery,
            &grid,
            tolerance,
        )?,
    ])
}

/// `[y, y′, y″, y‴]` of one solution at x.
pub type Derivs3<'a> = dyn Fn(f64) -> Result<[f64; 4]> + Sync + 'a;

/// Determinant of `[y_i^(k)]`, k = 0..3, columns as given.
pub fn wronskian_det(derivs: [[f64; 4]; 4]) -> f64 {
    Matrix4::from_fn(|k, i| derivs[i][k]).determinant()
}

/// Wronskian at `x0` after scaling each solution to unit sup-norm of |y|
/// over [0.05, 0.95] (sampled on 200 Chebyshev points plus `x0`).
pub fn wronskian4(solutions: [&Derivs3<'_>; 4], x0: f64) -> Result<f64> {
    if !(0.05..=0.95).contains(&x0) {
        return Err(Error::InvalidGrid(format!("x0 = {x0} must stay 0.05 away from the endpoints")));
    }
    let mut grid = chebyshev_grid(200, 0.05, 0.95);
    grid.push(x0);
    let mut cols = [[0.0; 4]; 4];
    for (col, y) in cols.iter_mut().zip(solutions) {
        let sup = grid
            .iter()
            .map(|&x| y(x).map(|d| d[0].abs()))
            .try_fold(0.0f64, |acc, v| v.map(|v| acc.max(v)))?;
        let d = y(x0)?;
        *col = if sup > 0.0 { d.map(|v| v / sup) } else { d };
    }
    Ok(wronskian_det(cols))
}

/// Wronskian of the chosen amplitude of four modes at `x0` (cos r > 0).
pub fn wronskian_of_modes(modes: &[ModeFunction; 4], channel: Channel, x0: f64) -> Result<f64> {
    let f = |i: usize| {
        move |x: f64| -> Result<[f64; 4]> {
            let jet = match channel {
                Channel::K => modes[i].k_x(x, Sign::Plus)?,
                Channel::M => modes[i].m_x(x, Sign::Plus)?,
            };
            Ok([jet.deriv(0), jet.deriv(1), jet.deriv(2), jet.deriv(3)])
        }
    };
    let (a, b, c, d) = (f(0), f(1), f(2), f(3));
    wronskian4([&a, &b, &c, &d], x0)
}

/// Explicit companion formula vs the coupling relation, plus the system
/// residual, for an on-spectrum family mode.
pub fn cross_consistency(mode: &ModeFunction, tolerance: f64) -> Result<VerificationReport> {
    let r_grid = r_grid_from_x(&default_grid());
    let mut pairs = Vec::with_capacity(r_grid.len());
    for &r in &r_grid {
        let rj = Jet::constant(r);
        let explicit = mode
            .explicit_partner(rj)?
            .ok_or_else(|| Error::InvalidParameters("mode has no explicit companion formula".into()))?;
        let coupled = mode.coupled_partner(Jet::variable(r))?;
        pairs.push((r, explicit.value(), coupled.value()));
    }
    let sup = pairs.iter().fold(0.0f64, |a, p| a.max(p.1.abs()));
    let mut samples: Vec<(f64, f64, f64)> = pairs.iter().map(|&(r, e, c)| (r, (e - c).abs(), sup)).collect();
    let sys = system_residual(mode, &r_grid, tolerance)?;
    for w in &sys.worst_points {
        samples.push((w.at, w.abs_residual, w.abs_residual / w.rel_residual.max(f64::MIN_POSITIVE)));
    }
    let mut report = VerificationReport::from_samples(
        format!("cross_consistency:{}", mode_label(mode)),
        tolerance,
        &samples,
    );
    report.samples = pairs.len() + sys.samples;
    Ok(report)
}

/// Which groups of checks `run_suite` performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Residuals,
    Factorization,
    Wronskian,
    Consistency,
}

impl std::str::FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "all" => Ok(Suite::All),
            "residuals" => Ok(Suite::Residuals),
            "factorization" => Ok(Suite::Factorization),
            "wronskian" => Ok(Suite::Wronskian),
            "consistency" => Ok(Suite::Consistency),
            other => Err(format!("unknown suite '{other}'")),
        }
    }
}

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const FACTORIZATION_TOL: f64 = 1e-10;
pub const CONSISTENCY_TOL: f64 = 1e-10;
pub const WRONSKIAN_MIN: f64 = 1e-6;

/// Generic momentum used by the Wronskian check.
pub const GENERIC_P: f64 = 2.3;

/// Runs a verification suite for angular momentum `j` (0 selects the j = 0
/// checks) at radial index `n`. Failures to evaluate become failed reports.
pub fn run_suite(
    suite: Suite,
    j: u32,
    n: u32,
    m: f64,
    lambda_sign: Sign,
    delta_sign: Sign,
    eps_sign: Sign,
) -> Vec<VerificationReport> {
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut jobs: Vec<Box<dyn Fn() -> Vec<VerificationReport> + Send + Sync>> = Vec::new();
    if j == 0 {
        if want(Suite::Residuals) || want(Suite::Consistency) {
            jobs.push(Box::new(move || {
                let name = format!("j0:n={n}");
                let r_grid = r_grid_from_x(&default_grid());
                let run = || -> Result<Vec<VerificationReport>> {
                    let mode = ModeFunction::on_spectrum(
                        Family::J0,
                        QuantumNumbers::new(0, n),
                        m,
                        eps_sign,
                        lambda_sign,
                        delta_sign,
                    )?;
                    let mut v = vec![system_residual(&mode, &r_grid, RESIDUAL_TOL)?];
                    v.extend(j0_scalar_residuals(&mode, &r_grid, RESIDUAL_TOL)?);
                    Ok(v)
                };
                run().unwrap_or_else(|e| vec![VerificationReport::failed(name, RESIDUAL_TOL, &e)])
            }));
        }
    } else {
        for family in Family::DK {
            let nn = if family == Family::F3 { n.max(1) } else { n };
            let make = move || {
                ModeFunction::on_spectrum(family, QuantumNumbers::new(j, nn), m, eps_sign, lambda_sign, delta_sign)
            };
            let name = format!("{family}:j={j}:n={nn}");
            if want(Suite::Residuals) {
                let name = name.clone();
                jobs.push(Box::new(move || {
                    let run = || -> Result<Vec<VerificationReport>> {
                        let mode = make()?;
                        let grid = default_grid();
                        Ok(vec![
                            fourth_order_residual(&mode, Channel::K, &grid, RESIDUAL_TOL)?,
                            fourth_order_residual(&mode, Channel::M, &grid, RESIDUAL_TOL)?,
                            system_residual(&mode, &r_grid_from_x(&grid), RESIDUAL_TOL)?,
                        ])
                    };
                    run().unwrap_or_else(|e| vec![VerificationReport::failed(format!("residuals:{name}"), RESIDUAL_TOL, &e)])
                }));
            }
            if want(Suite::Consistency) {
                jobs.push(Box::new(move || {
                    let r = make().and_then(|mode| cross_consistency(&mode, CONSISTENCY_TOL));
                    vec![r.unwrap_or_else(|e| {
                        VerificationReport::failed(format!("cross_consistency:{name}"), CONSISTENCY_TOL, &e)
                    })]
                }));
            }
        }
        if want(Suite::Factorization) {
            jobs.push(Box::new(move || {
                let a_sq = (j as f64) * (j as f64 + 1.0);
                let p_sq = crate::closed_form::family_p_sq(Family::F1, j, n).unwrap_or(8) as f64;
                factorization_suite(p_sq, a_sq, FACTORIZATION_TOL)
                    .map(|r| r.to_vec())
                    .unwrap_or_else(|e| vec![VerificationReport::failed("factorization", FACTORIZATION_TOL, &e)])
            }));
        }
        if want(Suite::Wronskian) {
            jobs.push(Box::new(move || {
                let run = || -> Result<Vec<VerificationReport>> {
                    let params = crate::model::ModeParams::from_p_sq(
                        m,
                        GENERIC_P * GENERIC_P,
                        eps_sign,
                        lambda_sign,
                        delta_sign,
                    )?;
                    let basis = ModeFunction::general_basis(j, params)?;
                    let mut out = Vec::new();
                    for (x0, ch) in [0.3, 0.6].into_iter().flat_map(|x| [(x, Channel::K), (x, Channel::M)]) {
                        let w = wronskian_of_modes(&basis, ch, x0)?.abs();
                        out.push(VerificationReport {
                            check_name: format!("wronskian_{ch:?}:j={j}:p={GENERIC_P}:x0={x0}"),
                            pass: w > WRONSKIAN_MIN,
                            max_rel_residual: w,
                            max_abs_residual: w,
                            tolerance: WRONSKIAN_MIN,
                            samples: 1,
                            worst_points: vec![],
                        });
                    }
                    Ok(out)
                };
                run().unwrap_or_else(|e| vec![VerificationReport::failed("wronskian", WRONSKIAN_MIN, &e)])
            }));
        }
    }
    let mut reports: Vec<VerificationReport> = crate::par_map(&jobs, |job| job()).into_iter().flatten().collect();
    reports.sort_by(|a, b| a.check_name.cmp(&b.check_name));
    reports
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f1() -> ModeFunction {
        ModeFunction::on_spectrum(Family::F1, QuantumNumbers::new(1, 0), 0.0, Sign::Plus, Sign::Plus, Sign::Plus)
            .unwrap()
    }

    #[test]
    fn operator_residual_on_spectrum_and_off() {
        let grid = default_grid();
        let r = fourth_order_residual(&f1(), Channel::K, &grid, 1e-9).unwrap();
        assert!(r.pass, "{r:?}");
        // same K, wrong p²
        let d = mode_derivatives_x(&f1(), Channel::K, &grid, 4).unwrap();
        let bad = residual_operator("neg", &operator_k4(8.5, 2.0), &grid, &d, 1e-9).unwrap();
        assert!(!bad.pass && bad.max_rel_residual > 1e-2);
    }

    #[test]
    fn zero_function_passes() {
        let grid = default_grid();
        let d = vec![vec![0.0; 5]; grid.len()];
        let r = residual_operator("zero", &operator_k4(8.0, 2.0), &grid, &d, 1e-9).unwrap();
        assert!(r.pass && r.max_rel_residual == 0.0);
    }

    #[test]
    fn endpoint_grids_rejected() {
        let d = vec![vec![0.0; 5]];
        assert!(residual_operator("e", &operator_k4(8.0, 2.0), &[1e-7], &d, 1e-9).is_err());
        assert!(residual_operator("e", &operator_k4(8.0, 2.0), &[1.0 - 1e-7], &d, 1e-9).is_err());
    }

    #[test]
    fn factorization_examples() {
        let grid = chebyshev_grid(50, 0.05, 0.95);
        let (o, i) = factor_pair_k(8.0, 2.0);
        let k4 = operator_k4(8.0, 2.0);
        let cube = factorization_identity("x3", &o, &i, &k4, &[TestFunction::Monomial(3)], &grid, 1e-10).unwrap();
        assert!(cube.pass, "{cube:?}");
        let one = factorization_identity("1", &o, &i, &k4, &[TestFunction::Monomial(0)], &grid, 1e-12).unwrap();
        assert!(one.pass, "{one:?}");
        let (mo, mi) = factor_pair_m(8.0, 2.0);
        let m4 = operator_m4(8.0, 2.0);
        let s = factorization_identity("s", &mo, &mi, &m4, &[TestFunction::Sine(2.0)], &grid, 1e-10).unwrap();
        assert!(s.pass, "{s:?}");
    }

    #[test]
    fn wronskian_dependent_and_antisymmetric() {
        let a = |x: f64| Ok([x.sin(), x.cos(), -x.sin(), -x.cos()]);
        let b = |x: f64| Ok([x.exp(), x.exp(), x.exp(), x.exp()]);
        let c = |x: f64| Ok([x * x, 2.0 * x, 2.0, 0.0]);
        let d = |x: f64| Ok([x.powi(3), 3.0 * x * x, 6.0 * x, 6.0]);
        let twice_a = |x: f64| a(x).map(|v: [f64; 4]| v.map(|t| 2.0 * t));
        assert!(wronskian4([&a, &b, &c, &twice_a], 0.4).unwrap().abs() < 1e-12);
        let w1 = wronskian4([&a, &b, &c, &d], 0.4).unwrap();
        let w2 = wronskian4([&b, &a, &c, &d], 0.4).unwrap();
        assert!((w1 + w2).abs() < 1e-12 * w1.abs() && w1.abs() > 1e-3, "{w1} {w2}");
        assert!(wronskian4([&a, &b, &c, &d], 0.99).is_err());
    }

    #[test]
    fn chebyshev_grid_is_ascending_inside() {
        let g = default_grid();
        assert_eq!(g.len(), 200);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        assert!(g[0] > 0.02 && g[199] < 0.98);
    }
}
