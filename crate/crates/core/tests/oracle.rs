use std::f64::consts::PI;

use dksphere::closed_form::Family;
use dksphere::model::Sign;
use dksphere::oracle::{annotate, compare_spectra, expected_levels, shoot_j, shoot_j0, ShootingConfig};

fn cfg(lo: f64, hi: f64) -> ShootingConfig {
    ShootingConfig {
        eps_min: lo,
        eps_max: hi,
        ..Default::default()
    }
}

fn eps_values(run: &dksphere::oracle::OracleRun) -> Vec<f64> {
    run.eigenvalues.iter().map(|e| e.eps).collect()
}

#[test]
fn j0_massless_levels() {
    let run = shoot_j0(0.0, Sign::Plus, &cfg(0.1, 4.0)).unwrap();
    let want = [3f64.sqrt(), 8f64.sqrt(), 15f64.sqrt()];
    let got = eps_values(&run);
    assert_eq!(got.len(), 3);
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() / w < 1e-6);
    }
    for (n, ev) in run.eigenvalues.iter().enumerate() {
        assert_eq!(ev.nodes, Some(n));
        assert!(ev.bracket.0 <= ev.eps && ev.eps <= ev.bracket.1);
        assert!(ev.det < 1e-8);
    }
}

#[test]
fn j0_massive_lowest_level() {
    let run = shoot_j0(1.0, Sign::Plus, &cfg(0.1, 2.5)).unwrap();
    assert!((run.eigenvalues[0].eps - 2.0).abs() / 2.0 < 1e-6);
}

#[test]
fn j0_range_below_spectrum_is_empty() {
    let run = shoot_j0(0.0, Sign::Plus, &cfg(0.1, 1.0)).unwrap();
    assert!(run.eigenvalues.is_empty());
    assert!(run.diagnostics[0].contains("no sign change"));
}

#[test]
fn j1_massless_levels_below_4_5() {
    let run = shoot_j(0.0, 1, Sign::Plus, &cfg(0.5, 4.5)).unwrap();
    let p_sq: Vec<f64> = run.eigenvalues.iter().map(|e| e.p_sq).collect();
    let want = [3.0, 4.0, 8.0, 9.0, 15.0, 16.0];
    assert_eq!(p_sq.len(), want.len(), "{p_sq:?}");
    for (g, w) in p_sq.iter().zip(want) {
        assert!((g - w).abs() / w < 1e-6, "{g} vs {w}");
    }
}

#[test]
fn j2_lowest_level() {
    let run = shoot_j(0.0, 2, Sign::Plus, &cfg(0.5, 3.5)).unwrap();
    assert!((run.eigenvalues[0].eps - 8f64.sqrt()).abs() < 1e-8);
}

#[test]
fn mass_branch_irrelevant_when_massless() {
    let plus = shoot_j(0.0, 1, Sign::Plus, &cfg(0.5, 4.0)).unwrap();
    let minus = shoot_j(0.0, 1, Sign::Minus, &cfg(0.5, 4.0)).unwrap();
    assert_eq!(eps_values(&plus), eps_values(&minus));
}

#[test]
fn negative_energies_mirror_positive_ones() {
    let pos = shoot_j(1.0, 1, Sign::Plus, &cfg(0.5, 4.0)).unwrap();
    let neg = shoot_j(1.0, 1, Sign::Plus, &cfg(-4.0, -0.5)).unwrap();
    let mut mirrored: Vec<f64> = eps_values(&neg).iter().map(|e| -e).collect();
    mirrored.sort_by(f64::total_cmp);
    assert_eq!(mirrored.len(), pos.eigenvalues.len());
    for (a, b) in mirrored.iter().zip(eps_values(&pos)) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn comparison_j1_massless() {
    let run = shoot_j(0.0, 1, Sign::Plus, &cfg(0.5, 4.5)).unwrap();
    let closed = expected_levels(1, 0.0, 0.5, 4.5).unwrap();
    let report = compare_spectra(&run.eigenvalues, &closed, 1e-5);
    assert!(report.pass, "{report:?}");
    assert_eq!(report.matched.len(), 6);
    let mut evs = run.eigenvalues.clone();
    annotate(&mut evs, &report);
    let families: Vec<Family> = evs.iter().map(|e| e.matched_family_guess.unwrap()).collect();
    assert_eq!(
        families,
        [Family::F2, Family::F4, Family::F1, Family::F3, Family::F2, Family::F4]
    );
}

#[test]
fn comparison_j3_massive_low_levels() {
    // n ≤ 2 levels of all four families at j = 3 lie below ε ≈ 9.06
    let c = cfg(0.5, 9.1);
    let run = shoot_j(1.0, 3, Sign::Plus, &c).unwrap();
    let closed = expected_levels(3, 1.0, c.eps_min, c.eps_max).unwrap();
    let report = compare_spectra(&run.eigenvalues, &closed, 1e-5);
    assert!(report.pass, "{report:?}");
    for f in Family::DK {
        let lo = if f == Family::F3 { 1 } else { 0 };
        for n in lo..=2 {
            assert!(report.matched.iter().any(|m| m.level.family == f && m.level.n == n), "{f} n={n}");
        }
    }
}

#[test]
fn eigenvalues_independent_of_offset_and_match_point() {
    let base = cfg(0.5, 5.0);
    let moved = ShootingConfig {
        r_start_offset: base.r_start_offset / 2.0,
        match_point: PI / 3.0,
        ..base
    };
    for j in [1, 2] {
        let a = eps_values(&shoot_j(0.7, j, Sign::Plus, &base).unwrap());
        let b = eps_values(&shoot_j(0.7, j, Sign::Plus, &moved).unwrap());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 10.0 * base.tolerance, "{x} vs {y}");
        }
    }
    let a = eps_values(&shoot_j0(0.7, Sign::Plus, &cfg(0.5, 6.0)).unwrap());
    let b = eps_values(&shoot_j0(0.7, Sign::Plus, &ShootingConfig { eps_min: 0.5, eps_max: 6.0, ..moved }).unwrap());
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 10.0 * base.tolerance);
    }
}

#[test]
fn shifted_runs_share_degenerate_levels() {
    // F1(j, n) and F4(j, n) reappear at j + 1 as F2 and F3
    let c = cfg(0.5, 7.0);
    for j in [1u32, 2] {
        let lower = shoot_j(0.0, j, Sign::Plus, &c).unwrap();
        let upper = shoot_j(0.0, j + 1, Sign::Plus, &c).unwrap();
        let closed = expected_levels(j, 0.0, c.eps_min, c.eps_max).unwrap();
        let report = compare_spectra(&lower.eigenvalues, &closed, 1e-5);
        for m in report.matched.iter().filter(|m| matches!(m.level.family, Family::F1 | Family::F4)) {
            if m.level.family == Family::F4 && m.level.n == 0 {
                continue; // its partner would be the missing F3 n = 0 level
            }
            assert!(
                upper.eigenvalues.iter().any(|u| (u.eps - m.oracle_eps).abs() < 1e-6),
                "{:?} at j={j} has no partner at j={}",
                m.level,
                j + 1
            );
        }
    }
}

#[test]
fn invalid_configurations_rejected() {
    let bad = ShootingConfig {
        match_point: 3.5,
        ..Default::default()
    };
    assert!(shoot_j(0.0, 1, Sign::Plus, &bad).is_err());
    assert!(shoot_j(0.0, 0, Sign::Plus, &ShootingConfig::default()).is_err());
}
