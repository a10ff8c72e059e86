//! Eigenvalues straight from the radial ODE systems, by shooting from both
//! poles and matching at an interior point. Nothing here uses the closed
//! forms; they are only brought in by [`compare_spectra`].

pub mod ode;

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::closed_form::{family_p_sq, spectrum_j, Family, LevelRef, SpectrumEntry};
use crate::error::{Error, Result};
use crate::model::{system_j, system_j0, FirstOrderSystem, ModeParams, QuantumNumbers, Sign};
use ode::{integrate, integrate_outputs, Dopri5Options};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub r_start_offset: f64,
    /// Local error tolerance of the integrator.
    pub tolerance: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    pub eps_step: f64,
    pub match_point: f64,
    pub det_tolerance: f64,
    /// Final bracket width of the bisection.
    pub bisection_width: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            r_start_offset: 1e-3,
            tolerance: 1e-10,
            eps_min: 0.1,
            eps_max: 6.0,
            eps_step: 0.01,
            match_point: FRAC_PI_2,
            det_tolerance: 1e-8,
            bisection_width: 1e-12,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.r_start_offset > 0.0
            && self.r_start_offset < self.match_point
            && self.match_point < PI - self.r_start_offset
            && self.tolerance > 0.0
            && self.eps_step > 0.0
            && self.eps_min < self.eps_max
            && self.bisection_width > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("inconsistent shooting configuration {self:?}")))
        }
    }

    fn options(&self) -> Dopri5Options {
        Dopri5Options {
            tolerance: self.tolerance,
            ..Default::default()
        }
    }

    fn scan_points(&self) -> Vec<f64> {
        let count = ((self.eps_max - self.eps_min) / self.eps_step).ceil() as usize;
        (0..=count)
            .map(|i| (self.eps_min + i as f64 * self.eps_step).min(self.eps_max))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleEigenvalue {
    pub eps: f64,
    pub p_sq: f64,
    pub j: u32,
    pub bracket: (f64, f64),
    /// |normalized determinant| at `eps`.
    pub det: f64,
    pub multiplicity: usize,
    /// Nodes of the eigenfunction in (0, π) (scalar j = 0 problem only).
    pub nodes: Option<usize>,
    /// The regular solutions from one pole were numerically dependent.
    pub ill_conditioned: bool,
    pub matched_family_guess: Option<Family>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRun {
    pub eigenvalues: Vec<OracleEigenvalue>,
    pub diagnostics: Vec<String>,
}

/// Match-point data at one energy.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchData {
    pub det: f64,
    /// Singular values of the normalized match matrix, descending.
    pub singular_values: Vec<f64>,
    pub ill_conditioned: bool,
}

impl MatchData {
    fn multiplicity(&self) -> usize {
        let top = self.singular_values[0];
        self.singular_values.iter().filter(|s| **s < 1e-6 * top).count()
    }
}

/// Regular Frobenius data at a pole: exponent and the first three
/// coefficient vectors of `t^s (v0 + v1 t + v2 t²)`, where `t` is the
/// distance from the pole.
#[derive(Debug, Clone)]
struct Frobenius {
    exponent: f64,
    coeffs: [DVector<f64>; 3],
}

impl Frobenius {
    fn start(&self, t: f64) -> DVector<f64> {
        &self.coeffs[0] + &self.coeffs[1] * t + &self.coeffs[2] * (t * t)
    }
}

/// In the local variable `t` (t = r at 0, t = π − r at π) the system reads
/// `dY/dt = (B/t + C0 + C1 t + …) Y`.
fn frobenius(sys: &FirstOrderSystem, at_pi: bool) -> Vec<Frobenius> {
    let (p, d, e) = sys.split();
    let n = sys.dim();
    let (b, c0, c1) = if at_pi {
        (&d - &p, -&e, -&p / 6.0 - &d / 3.0)
    } else {
        (&p + &d, e.clone(), &p / 6.0 - &d / 3.0)
    };
    let eig = SymmetricEigen::new(b.clone());
    let id = DMatrix::<f64>::identity(n, n);
    let solve = |shift: f64, rhs: DVector<f64>| -> DVector<f64> {
        let m = &id * shift - &b;
        let pinv = m.pseudo_inverse(1e-10).expect("pseudo-inverse of a finite matrix");
        pinv * rhs
    };
    let mut out: Vec<Frobenius> = (0..n)
        .filter(|&i| eig.eigenvalues[i] > 0.5)
        .map(|i| {
            let s = eig.eigenvalues[i];
            let mut v0: DVector<f64> = eig.eigenvectors.column(i).into_owned();
            let imax = v0.iamax();
            if v0[imax] < 0.0 {
                v0 = -v0;
            }
            let v1 = solve(s + 1.0, &c0 * &v0);
            let v2 = solve(s + 2.0, &c0 * &v1 + &c1 * &v0);
            Frobenius {
                exponent: s,
                coeffs: [v0, v1, v2],
            }
        })
        .collect();
    out.sort_by(|a, b| a.exponent.total_cmp(&b.exponent));
    out
}

fn column_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Normalized match matrix of the first-order system at one energy.
fn match_system(sys: &FirstOrderSystem, cfg: &ShootingConfig) -> Result<MatchData> {
    let mut last_err = None;
    for shrink in [1.0, 0.5, 0.25] {
        let offset = cfg.r_start_offset * shrink;
        match match_system_at(sys, cfg, offset) {
            Ok(d) => return Ok(d),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Integration("unknown failure".into())))
}

fn match_system_at(sys: &FirstOrderSystem, cfg: &ShootingConfig, offset: f64) -> Result<MatchData> {
    let n = sys.dim();
    let rhs = |r: f64, y: &[f64], dy: &mut [f64]| sys.rhs(r, y, dy);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut ill = false;
    for at_pi in [false, true] {
        let start_r = if at_pi { PI - offset } else { offset };
        let side: Vec<Vec<f64>> = frobenius(sys, at_pi)
            .iter()
            .map(|f| {
                let y0 = f.start(offset);
                let y = integrate(rhs, start_r, y0.as_slice(), cfg.match_point, cfg.options())?;
                let s = column_norm(&y);
                Ok(y.iter().map(|v| v / s).collect())
            })
            .collect::<Result<_>>()?;
        if side.len() >= 2 {
            let m = DMatrix::from_fn(n, side.len(), |i, k| side[k][i]);
            let sv = m.singular_values();
            let (hi, lo) = (sv.max(), sv.min());
            ill |= lo < 1e-12 * hi;
        }
        cols.extend(side);
    }
    if cols.len() != n {
        return Err(Error::Integration(format!(
            "found {} regular solutions for a {n}-dimensional system",
            cols.len()
        )));
    }
    let m = DMatrix::from_fn(n, n, |i, k| cols[k][i]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(MatchData {
        det: m.determinant(),
        singular_values: sv,
        ill_conditioned: ill,
    })
}

fn params_for(m: f64, eps: f64, lambda_sign: Sign) -> Result<ModeParams> {
    ModeParams::new(m, eps, lambda_sign, Sign::Plus)
}

/// Normalized 4×4 match determinant for j ≥ 1 at energy `eps`.
pub fn determinant_j(m: f64, j: u32, lambda_sign: Sign, eps: f64, cfg: &ShootingConfig) -> Result<MatchData> {
    let sys = system_j(&params_for(m, eps, lambda_sign)?, &QuantumNumbers::new(j, 0))?;
    match_system(&sys, cfg)
}

/// Normalized 2×2 match determinant of the j = 0 first-order pair.
pub fn determinant_j0_system(m: f64, lambda_sign: Sign, eps: f64, cfg: &ShootingConfig) -> Result<MatchData> {
    match_system(&system_j0(&params_for(m, eps, lambda_sign)?), cfg)
}

/// Scalar equation `M'' + (p² + 1 − 2/sin² r) M = 0` for j = 0.
fn scalar_rhs(q: f64) -> impl Fn(f64, &[f64], &mut [f64]) {
    move |r: f64, y: &[f64], dy: &mut [f64]| {
        let s = r.sin();
        dy[0] = y[1];
        dy[1] = -(q - 2.0 / (s * s)) * y[0];
    }
}

/// `(M, dM/dt)` at distance t from a pole: `t² + c t⁴`.
fn scalar_start(p_sq: f64, t: f64) -> [f64; 2] {
    let c = -(p_sq + 1.0 / 3.0) / 10.0;
    [t * t + c * t.powi(4), 2.0 * t + 4.0 * c * t.powi(3)]
}

/// Wronskian mismatch of the left and right regular solutions of the
/// scalar j = 0 equation, with both columns normalized.
pub fn determinant_j0(m: f64, eps: f64, cfg: &ShootingConfig) -> Result<MatchData> {
    let p_sq = eps * eps - m * m;
    let rhs = scalar_rhs(p_sq + 1.0);
    let t = cfg.r_start_offset;
    let l0 = scalar_start(p_sq, t);
    let r0 = scalar_start(p_sq, t);
    let left = integrate(&rhs, t, &l0, cfg.match_point, cfg.options())?;
    let right = integrate(&rhs, PI - t, &[r0[0], -r0[1]], cfg.match_point, cfg.options())?;
    let (nl, nr) = (column_norm(&left), column_norm(&right));
    let det = (left[0] * right[1] - left[1] * right[0]) / (nl * nr);
    let m = DMatrix::from_row_slice(2, 2, &[left[0] / nl, right[0] / nr, left[1] / nl, right[1] / nr]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(MatchData {
        det,
        singular_values: sv,
        ill_conditioned: false,
    })
}

/// Nodes of the left regular solution of the scalar j = 0 equation in
/// (0, π − 0.1).
pub fn j0_node_count(m: f64, eps: f64, cfg: &ShootingConfig) -> Result<usize> {
    let p_sq = eps * eps - m * m;
    let t = cfg.r_start_offset;
    let end = PI - 0.1;
    let outputs: Vec<f64> = (1..=800).map(|i| t + (end - t) * i as f64 / 800.0).collect();
    let ys = integrate_outputs(scalar_rhs(p_sq + 1.0), t, &scalar_start(p_sq, t), &outputs, cfg.options())?;
    Ok(ys.windows(2).filter(|w| w[0][0] * w[1][0] < 0.0).count())
}

/// Scan, bracket, bisect. `eval` returns the match data at one energy.
fn find_roots<F>(j: u32, m: f64, cfg: &ShootingConfig, eval: F) -> Result<OracleRun>
where
    F: Fn(f64) -> Result<MatchData> + Sync + Send,
{
    cfg.validate()?;
    let grid = cfg.scan_points();
    let data: Vec<MatchData> = crate::par_map(&grid, |e| eval(*e)).into_iter().collect::<Result<_>>()?;
    let mut brackets = Vec::new();
    for i in 0..grid.len() - 1 {
        if data[i].det == 0.0 {
            brackets.push((grid[i], grid[i]));
        } else if data[i].det * data[i + 1].det < 0.0 {
            brackets.push((grid[i], grid[i + 1]));
        }
    }
    let mut diagnostics = Vec::new();
    let mut found: Vec<OracleEigenvalue> = crate::par_map(&brackets, |&(lo, hi)| bisect(j, m, cfg, &eval, lo, hi))
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    // double roots do not change sign; look for deep local minima instead
    for i in 1..grid.len() - 1 {
        let (a, b, c) = (data[i - 1].det, data[i].det, data[i + 1].det);
        if a * b > 0.0 && b * c > 0.0 && b.abs() < a.abs() && b.abs() < c.abs() {
            if let Some(ev) = refine_double(j, m, &eval, grid[i - 1], grid[i + 1])? {
                found.push(ev);
            }
        }
    }
    found.retain(|ev| {
        let keep = ev.det <= cfg.det_tolerance;
        if !keep {
            diagnostics.push(format!(
                "sign change near eps = {} rejected: |det| = {:e} above tolerance",
                ev.eps, ev.det
            ));
        }
        keep
    });
    found.sort_by(|a, b| a.eps.total_cmp(&b.eps));
    if found.is_empty() {
        diagnostics.push(format!(
            "no sign change of the match determinant in eps range [{}, {}]",
            cfg.eps_min, cfg.eps_max
        ));
    }
    Ok(OracleRun {
        eigenvalues: found,
        diagnostics,
    })
}

fn bisect<F>(j: u32, m: f64, cfg: &ShootingConfig, eval: &F, mut lo: f64, mut hi: f64) -> Result<Option<OracleEigenvalue>>
where
    F: Fn(f64) -> Result<MatchData>,
{
    let bracket = (lo, hi);
    let mut f_lo = eval(lo)?.det;
    while hi - lo > cfg.bisection_width {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = eval(mid)?.det;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    let eps = 0.5 * (lo + hi);
    let at = eval(eps)?;
    Ok(Some(OracleEigenvalue {
        eps,
        p_sq: eps * eps - m * m,
        j,
        bracket,
        det: at.det.abs(),
        multiplicity: at.multiplicity().max(1),
        nodes: None,
        ill_conditioned: at.ill_conditioned,
        matched_family_guess: None,
    }))
}

/// Golden-section search for a double root between `lo` and `hi`; accepted
/// only when two singular values collapse.
fn refine_double<F>(j: u32, m: f64, eval: &F, lo: f64, hi: f64) -> Result<Option<OracleEigenvalue>>
where
    F: Fn(f64) -> Result<MatchData>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let f = |e: f64| eval(e).map(|m| m.det.abs());
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    let eps = 0.5 * (a + b);
    let at = eval(eps)?;
    if at.multiplicity() < 2 {
        return Ok(None);
    }
    Ok(Some(OracleEigenvalue {
        eps,
        p_sq: eps * eps - m * m,
        j,
        bracket: (lo, hi),
        det: at.det.abs(),
        multiplicity: at.multiplicity(),
        nodes: None,
        ill_conditioned: at.ill_conditioned,
        matched_family_guess: None,
    }))
}

/// Levels of the scalar j = 0 problem. It depends on the mass only
/// through p², so the branch sign does not enter.
pub fn shoot_j0(m: f64, _lambda_sign: Sign, cfg: &ShootingConfig) -> Result<OracleRun> {
    let mut run = find_roots(0, m, cfg, |e| determinant_j0(m, e, cfg))?;
    for ev in &mut run.eigenvalues {
        ev.nodes = Some(j0_node_count(m, ev.eps, cfg)?);
    }
    Ok(run)
}

/// Levels of the four-component system at angular momentum j ≥ 1.
pub fn shoot_j(m: f64, j: u32, lambda_sign: Sign, cfg: &ShootingConfig) -> Result<OracleRun> {
    if j == 0 {
        return Err(Error::InvalidQuantumNumbers("shoot_j needs j >= 1; use shoot_j0".into()));
    }
    find_roots(j, m, cfg, |e| determinant_j(m, j, lambda_sign, e, cfg))
}

/// Closed-form levels whose energy (of either sign) lies in `[lo, hi]`.
pub fn expected_levels(j: u32, m: f64, lo: f64, hi: f64) -> Result<Vec<SpectrumEntry>> {
    let families: &[Family] = if j == 0 { &[Family::J0] } else { &Family::DK };
    let mut out = Vec::new();
    for &family in families {
        let mut n = if family == Family::F3 { 1 } else { 0 };
        loop {
            let p_sq = family_p_sq(family, j, n)? as f64;
            let e = (p_sq + m * m).sqrt();
            if e > lo.abs().max(hi.abs()) {
                break;
            }
            let entry = if family == Family::J0 {
                crate::closed_form::spectrum(family, 0.into(), n, m)?
            } else {
                spectrum_j(family, j, n, m)?
            };
            for s in [e, -e] {
                if s >= lo && s <= hi {
                    out.push(entry.clone());
                }
            }
            n += 1;
        }
    }
    out.sort_by(|a, b| a.eps_sq.total_cmp(&b.eps_sq));
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMatch {
    pub oracle_eps: f64,
    pub level: LevelRef,
    pub closed_eps_sq: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub pass: bool,
    pub rel_tol: f64,
    pub matched: Vec<SpectrumMatch>,
    pub unmatched_oracle: Vec<f64>,
    pub unmatched_closed: Vec<LevelRef>,
}

fn level_ref(e: &SpectrumEntry) -> LevelRef {
    LevelRef {
        family: e.family,
        j: e.j_or_j.to_integer().max(0) as u32,
        n: e.n,
    }
}

/// Greedy bijective matching on ε²; an oracle root of multiplicity k may
/// absorb up to k closed-form levels.
pub fn compare_spectra(oracle: &[OracleEigenvalue], closed: &[SpectrumEntry], rel_tol: f64) -> ComparisonReport {
    let slots: Vec<usize> = oracle
        .iter()
        .enumerate()
        .flat_map(|(i, e)| std::iter::repeat_n(i, e.multiplicity.max(1)))
        .collect();
    let mut cands = Vec::new();
    for (si, &oi) in slots.iter().enumerate() {
        let e2 = oracle[oi].eps * oracle[oi].eps;
        for (ci, c) in closed.iter().enumerate() {
            let rel = (e2 - c.eps_sq).abs() / c.eps_sq.abs().max(f64::MIN_POSITIVE);
            if rel <= rel_tol {
                cands.push((rel, si, ci));
            }
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut slot_used = vec![false; slots.len()];
    let mut closed_used = vec![false; closed.len()];
    let mut matched = Vec::new();
    for (rel, si, ci) in cands {
        if slot_used[si] || closed_used[ci] {
            continue;
        }
        slot_used[si] = true;
        closed_used[ci] = true;
        matched.push(SpectrumMatch {
            oracle_eps: oracle[slots[si]].eps,
            level: level_ref(&closed[ci]),
            closed_eps_sq: closed[ci].eps_sq,
            rel_error: rel,
        });
    }
    matched.sort_by(|a, b| a.oracle_eps.total_cmp(&b.oracle_eps));
    let mut unmatched_oracle: Vec<f64> = slots
        .iter()
        .zip(&slot_used)
        .filter(|(_, u)| !**u)
        .map(|(&oi, _)| oracle[oi].eps)
        .collect();
    unmatched_oracle.dedup();
    let unmatched_closed: Vec<LevelRef> = closed
        .iter()
        .zip(&closed_used)
        .filter(|(_, u)| !**u)
        .map(|(c, _)| level_ref(c))
        .collect();
    ComparisonReport {
        pass: unmatched_oracle.is_empty() && unmatched_closed.is_empty(),
        rel_tol,
        matched,
        unmatched_oracle,
        unmatched_closed,
    }
}

/// Copies the family of each match onto the oracle eigenvalues.
pub fn annotate(eigs: &mut [OracleEigenvalue], report: &ComparisonReport) {
    for ev in eigs.iter_mut() {
        ev.matched_family_guess = report
            .matched
            .iter()
            .find(|m| m.oracle_eps == ev.eps)
            .map(|m| m.level.family);
    }
}
