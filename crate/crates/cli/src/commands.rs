use std::fmt::Write as _;

use dksphere::closed_form::{levels_at_j, open_grid, spectrum, spectrum_j, degeneracy_map, Family, ModeFunction, SpectrumEntry};
use dksphere::io::{degeneracy_csv, fmt_f64, spectrum_csv, to_json, wavefunction_csv};
use dksphere::model::{QuantumNumbers, Sign};
use dksphere::oracle::{annotate, compare_spectra, expected_levels, shoot_j, shoot_j0, ComparisonReport, OracleRun, ShootingConfig};
use dksphere::verification::{run_suite, Suite, VerificationReport};
use num_rational::Rational64;
use serde::Serialize;

use crate::config::{Format, RunConfig};

pub enum Failure {
    /// Bad flags, bad config, or a requested energy that is not an eigenvalue.
    Usage(String),
    /// A check or comparison ran and failed; the report is still printed.
    Check(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) | Failure::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<dksphere::Error> for Failure {
    fn from(e: dksphere::Error) -> Self {
        use dksphere::Error::*;
        match e {
            InvalidParameters(_) | InvalidQuantumNumbers(_) | OffSpectrum { .. } | InvalidGrid(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

/// Output text, plus a failure to report after it has been written.
pub type Outcome = (String, Option<Failure>);

fn sign(value: Option<i32>, flag: &str) -> Result<Sign, Failure> {
    Sign::from_i32(value.unwrap_or(1)).map_err(|_| Failure::Usage(format!("--{flag} must be 1 or -1")))
}

fn mass(c: &RunConfig) -> Result<f64, Failure> {
    let m = c.mass.unwrap_or(0.0);
    if !(m.is_finite() && m >= 0.0) {
        return Err(Failure::Usage(format!("--mass must be finite and >= 0, got {m}")));
    }
    Ok(m)
}

enum Selection {
    One(Family),
    AllDk,
}

fn family(c: &RunConfig, default: &str) -> Result<Selection, Failure> {
    let name = c.family.as_deref().unwrap_or(default);
    if name.eq_ignore_ascii_case("all-dk") {
        return Ok(Selection::AllDk);
    }
    name.parse().map(Selection::One).map_err(Failure::Usage)
}

fn j_of(c: &RunConfig) -> u32 {
    c.j.unwrap_or(1)
}

pub fn spectrum_cmd(c: &RunConfig) -> Result<Outcome, Failure> {
    let m = mass(c)?;
    let negative = sign(c.eps_sign, "eps-sign")? == Sign::Minus;
    let n_range = |lo: u32| match c.n {
        Some(n) => n..=n,
        None => lo..=c.n_max.unwrap_or(5),
    };
    let entries: Vec<SpectrumEntry> = match family(c, "all-dk")? {
        Selection::AllDk => {
            let all = levels_at_j(j_of(c), c.n_max.unwrap_or(5).max(c.n.unwrap_or(0)), m)?;
            all.into_iter().filter(|e| c.n.is_none_or(|n| e.n == n)).collect()
        }
        Selection::One(Family::Dirac) => {
            let text = c.big_j.as_deref().unwrap_or("1/2");
            let big_j: Rational64 = text
                .parse()
                .map_err(|_| Failure::Usage(format!("--J expects a fraction such as 3/2, got '{text}'")))?;
            n_range(0).map(|n| spectrum(Family::Dirac, big_j, n, m)).collect::<Result<_, _>>()?
        }
        Selection::One(Family::J0) => n_range(0)
            .map(|n| spectrum(Family::J0, Rational64::from_integer(0), n, m))
            .collect::<Result<_, _>>()?,
        Selection::One(f) => {
            let lo = if f == Family::F3 { 1 } else { 0 };
            n_range(lo).map(|n| spectrum_j(f, j_of(c), n, m)).collect::<Result<_, _>>()?
        }
    };
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => spectrum_csv(&entries, m, negative),
        Format::Json => to_json(&entries),
    };
    Ok((text, None))
}

pub fn wavefunction_cmd(c: &RunConfig) -> Result<Outcome, Failure> {
    let m = mass(c)?;
    let f = match family(c, "f1")? {
        Selection::One(Family::Dirac) | Selection::AllDk => {
            return Err(Failure::Usage("wavefunction needs one of f1, f2, f3, f4, j0".into()))
        }
        Selection::One(f) => f,
    };
    let default_n = if f == Family::F3 { 1 } else { 0 };
    let j = if f == Family::J0 { 0 } else { j_of(c) };
    let qn = QuantumNumbers::new(j, c.n.unwrap_or(default_n));
    let mut eps_sign = sign(c.eps_sign, "eps-sign")?;
    if let Some(eps) = c.eps {
        if c.eps_sign.is_none() && eps < 0.0 {
            eps_sign = Sign::Minus;
        }
    }
    let mode = ModeFunction::on_spectrum(f, qn, m, eps_sign, sign(c.lambda, "lambda")?, sign(c.delta, "delta")?)?;
    if let Some(eps) = c.eps {
        let level = spectrum(f, Rational64::from_integer(j as i64), qn.n, m)?.eps(eps_sign == Sign::Minus);
        if (eps - level).abs() > 1e-9 * level.abs().max(1.0) {
            return Err(Failure::Usage(format!(
                "eps = {eps} is not on the spectrum; {f} j={j} n={} has eps = {}",
                qn.n,
                fmt_f64(level)
            )));
        }
    }
    let count = c.grid.unwrap_or(2001);
    if count == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let sol = mode.sample(&open_grid(count))?;
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => wavefunction_csv(&sol),
        Format::Json => to_json(&sol),
    };
    Ok((text, None))
}

fn reports_csv(reports: &[VerificationReport]) -> String {
    let mut s = String::from("check_name,pass,max_rel_residual,max_abs_residual,tolerance,samples\n");
    for r in reports {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.check_name,
            r.pass,
            fmt_f64(r.max_rel_residual),
            fmt_f64(r.max_abs_residual),
            fmt_f64(r.tolerance),
            r.samples
        );
    }
    s
}

pub fn verify_cmd(c: &RunConfig) -> Result<Outcome, Failure> {
    let suite: Suite = c.suite.as_deref().unwrap_or("all").parse().map_err(Failure::Usage)?;
    let j = match c.family.as_deref() {
        Some(f) if f.eq_ignore_ascii_case("j0") => 0,
        _ => j_of(c),
    };
    let reports = run_suite(
        suite,
        j,
        c.n.unwrap_or(0),
        mass(c)?,
        sign(c.lambda, "lambda")?,
        sign(c.delta, "delta")?,
        sign(c.eps_sign, "eps-sign")?,
    );
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Csv => reports_csv(&reports),
        Format::Json => to_json(&reports),
    };
    let failed = reports.iter().filter(|r| !r.pass).count();
    let failure = (failed > 0).then(|| Failure::Check(format!("{failed} of {} checks failed", reports.len())));
    Ok((text, failure))
}

#[derive(Serialize)]
struct OracleOutput {
    j: u32,
    mass: f64,
    config: ShootingConfig,
    #[serde(flatten)]
    run: OracleRun,
    comparison: Option<ComparisonReport>,
}

pub fn oracle_cmd(c: &RunConfig) -> Result<Outcome, Failure> {
    let m = mass(c)?;
    let j = match c.family.as_deref() {
        Some(f) if f.eq_ignore_ascii_case("j0") => 0,
        _ => j_of(c),
    };
    let d = ShootingConfig::default();
    let cfg = ShootingConfig {
        r_start_offset: c.r_offset.unwrap_or(d.r_start_offset),
        tolerance: c.ode_tol.unwrap_or(d.tolerance),
        eps_min: c.eps_min.unwrap_or(d.eps_min),
        eps_max: c.eps_max.unwrap_or(d.eps_max),
        eps_step: c.eps_step.unwrap_or(d.eps_step),
        match_point: c.match_point.unwrap_or(d.match_point),
        det_tolerance: c.det_tol.unwrap_or(d.det_tolerance),
        ..d
    };
    cfg.validate()?;
    let lambda = sign(c.lambda, "lambda")?;
    let mut run = if j == 0 { shoot_j0(m, lambda, &cfg)? } else { shoot_j(m, j, lambda, &cfg)? };
    let mut failure = None;
    let comparison = if c.compare {
        let closed = expected_levels(j, m, cfg.eps_min, cfg.eps_max)?;
        let report = compare_spectra(&run.eigenvalues, &closed, c.rel_tol.unwrap_or(1e-6));
        annotate(&mut run.eigenvalues, &report);
        if !report.pass {
            failure = Some(Failure::Check(format!(
                "oracle and closed form disagree: {} unmatched oracle roots, {} unmatched levels",
                report.unmatched_oracle.len(),
                report.unmatched_closed.len()
            )));
        }
        Some(report)
    } else {
        None
    };
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&OracleOutput {
            j,
            mass: m,
            config: cfg,
            run,
            comparison,
        }),
        Format::Csv => {
            let mut s = format!("# j={j}\n# mass={}\neps,p_sq,multiplicity,det,nodes,family\n", fmt_f64(m));
            for e in &run.eigenvalues {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    fmt_f64(e.eps),
                    fmt_f64(e.p_sq),
                    e.multiplicity,
                    fmt_f64(e.det),
                    e.nodes.map(|v| v.to_string()).unwrap_or_default(),
                    e.matched_family_guess.map(|f| f.to_string()).unwrap_or_default()
                );
            }
            s
        }
    };
    Ok((text, failure))
}

pub fn degeneracy_cmd(c: &RunConfig) -> Result<Outcome, Failure> {
    let pairs = degeneracy_map(c.j_max.unwrap_or(5), c.n_max.unwrap_or(5))?;
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => degeneracy_csv(&pairs),
        Format::Json => to_json(&pairs),
    };
    Ok((text, None))
}
