//! Browser bindings for the demo page in `www/`. Each operation returns a
//! JSON string; the plain `*_json` functions carry the logic so they can be
//! tested natively.

use dksphere::closed_form::{levels_at_j, open_grid, spectrum, Family, ModeFunction, SpectrumEntry};
use dksphere::io::to_json;
use dksphere::model::{QuantumNumbers, Sign};
use dksphere::oracle::{determinant_j, determinant_j0, expected_levels, shoot_j, shoot_j0, ShootingConfig};
use num_rational::Rational64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn err(e: impl ToString) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Level {
    family: Family,
    n: u32,
    p_sq: String,
    eps: f64,
    partner: Option<String>,
}

fn level(e: &SpectrumEntry) -> Level {
    Level {
        family: e.family,
        n: e.n,
        p_sq: dksphere::io::fmt_rational(e.p_sq),
        eps: e.eps(false),
        partner: e.degenerate_partner.as_ref().map(dksphere::io::fmt_level),
    }
}

/// Closed-form levels: `family` is "all-dk", a single family, or "dirac"
/// (then `j` is read as J = j − 1/2).
pub fn spectrum_json(family: &str, j: u32, n_max: u32, mass: f64) -> Result<String, String> {
    let entries = if family == "all-dk" {
        levels_at_j(j, n_max, mass).map_err(err)?
    } else {
        let f: Family = family.parse()?;
        let label = match f {
            Family::Dirac => Rational64::new(2 * j as i64 - 1, 2),
            Family::J0 => Rational64::from_integer(0),
            _ => Rational64::from_integer(j as i64),
        };
        let lo = if f == Family::F3 { 1 } else { 0 };
        (lo..=n_max).map(|n| spectrum(f, label, n, mass)).collect::<Result<_, _>>().map_err(err)?
    };
    Ok(to_json(&entries.iter().map(level).collect::<Vec<_>>()))
}

#[derive(Serialize)]
struct Samples {
    eps: f64,
    p_sq: f64,
    r: Vec<f64>,
    k: Vec<f64>,
    l: Vec<f64>,
    m: Vec<f64>,
    n: Vec<f64>,
}

/// Radial amplitudes of one level on `points` interior grid points.
pub fn wavefunction_json(family: &str, j: u32, n: u32, mass: f64, points: usize) -> Result<String, String> {
    let f: Family = family.parse()?;
    let j = if f == Family::J0 { 0 } else { j };
    let mode = ModeFunction::on_spectrum(f, QuantumNumbers::new(j, n), mass, Sign::Plus, Sign::Plus, Sign::Plus)
        .map_err(err)?;
    let sol = mode.sample(&open_grid(points.clamp(3, 4000))).map_err(err)?;
    Ok(to_json(&Samples {
        eps: sol.params.eps(),
        p_sq: sol.p_sq,
        r: sol.grid,
        k: sol.k,
        l: sol.l,
        m: sol.m,
        n: sol.n,
    }))
}

#[derive(Serialize)]
struct Scan {
    eps: Vec<f64>,
    log10_det: Vec<f64>,
    roots: Vec<f64>,
    expected: Vec<f64>,
}

/// Match determinant sampled over `[eps_min, eps_max]`, the roots located
/// by the shooting solver, and the closed-form energies in the same window.
pub fn scan_json(j: u32, mass: f64, eps_min: f64, eps_max: f64, samples: usize) -> Result<String, String> {
    let cfg = ShootingConfig {
        eps_min,
        eps_max,
        eps_step: 0.02,
        ..Default::default()
    };
    cfg.validate().map_err(err)?;
    let samples = samples.clamp(2, 2000);
    let mut eps = Vec::with_capacity(samples);
    let mut log10_det = Vec::with_capacity(samples);
    for i in 0..samples {
        let e = eps_min + (eps_max - eps_min) * i as f64 / (samples - 1) as f64;
        let d = if j == 0 {
            determinant_j0(mass, e, &cfg)
        } else {
            determinant_j(mass, j, Sign::Plus, e, &cfg)
        };
        if let Ok(d) = d {
            eps.push(e);
            log10_det.push(d.det.abs().max(1e-16).log10());
        }
    }
    let run = if j == 0 { shoot_j0(mass, Sign::Plus, &cfg) } else { shoot_j(mass, j, Sign::Plus, &cfg) }.map_err(err)?;
    let expected = expected_levels(j, mass, eps_min, eps_max)
        .map_err(err)?
        .iter()
        .map(|e| e.eps(false))
        .filter(|e| *e >= eps_min)
        .collect();
    Ok(to_json(&Scan {
        eps,
        log10_det,
        roots: run.eigenvalues.iter().map(|e| e.eps).collect(),
        expected,
    }))
}

#[wasm_bindgen]
pub fn spectrum_table(family: &str, j: u32, n_max: u32, mass: f64) -> Result<String, JsValue> {
    spectrum_json(family, j, n_max, mass).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn wavefunction(family: &str, j: u32, n: u32, mass: f64, points: usize) -> Result<String, JsValue> {
    wavefunction_json(family, j, n, mass, points).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn determinant_scan(j: u32, mass: f64, eps_min: f64, eps_max: f64, samples: usize) -> Result<String, JsValue> {
    scan_json(j, mass, eps_min, eps_max, samples).map_err(|e| JsValue::from_str(&e))
}
