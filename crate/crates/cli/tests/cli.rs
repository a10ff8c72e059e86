use std::process::{Command, Output};

fn dksphere(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dksphere")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn spectrum_f1_levels() {
    let out = dksphere(&["spectrum", "--family", "f1", "--j", "1", "--n-max", "2"]);
    assert!(out.status.success());
    let p_sq: Vec<String> = rows(&stdout(&out)).into_iter().map(|r| r[3].clone()).collect();
    assert_eq!(p_sq, ["8", "24", "48"]);
}

#[test]
fn spectrum_dirac_half_integer() {
    let out = dksphere(&["spectrum", "--family", "dirac", "--J", "1/2", "--n-max", "1"]);
    let p_sq: Vec<String> = rows(&stdout(&out)).into_iter().map(|r| r[3].clone()).collect();
    assert_eq!(p_sq, ["9/4", "25/4"]);
    assert_eq!(dksphere(&["spectrum", "--family", "dirac", "--J", "1"]).status.code(), Some(2));
}

#[test]
fn spectrum_j0_massive() {
    let out = dksphere(&["spectrum", "--family", "j0", "--mass", "1", "--n", "0"]);
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][5].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn wavefunction_vanishing_at_equator() {
    let out = dksphere(&["wavefunction", "--family", "f1", "--j", "1", "--grid", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "r,x,K,L,M,N"));
    let mid = &rows(&text)[2];
    assert_eq!(mid[0].parse::<f64>().unwrap(), std::f64::consts::FRAC_PI_2);
    assert!(mid[1].parse::<f64>().unwrap().abs() < 1e-15);
    assert!(mid[2].parse::<f64>().unwrap().abs() < 1e-15);

    let j0 = stdout(&dksphere(&["wavefunction", "--family", "j0", "--grid", "3"]));
    assert!(j0.lines().any(|l| l == "r,x,M,N"));
    assert!(rows(&j0)[1][3].parse::<f64>().unwrap().abs() < 1e-15);
}

#[test]
fn off_spectrum_energy_rejected() {
    let out = dksphere(&["wavefunction", "--family", "f1", "--j", "1", "--eps", "2.0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not on the spectrum"));
    let ok = dksphere(&["wavefunction", "--family", "f1", "--j", "1", "--eps", "-2.8284271247461903", "--grid", "3"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("# eps=-2.8284271247461903"));
}

#[test]
fn verify_suite_passes() {
    let out = dksphere(&["verify", "--suite", "all", "--j", "1", "--n", "0", "--mass", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.trim_start().starts_with('['));
    assert!(!text.contains("\"pass\": false"));
    assert_eq!(dksphere(&["verify", "--suite", "everything"]).status.code(), Some(2));
}

#[test]
fn oracle_agrees_with_closed_form() {
    let out = dksphere(&["oracle", "--j", "1", "--mass", "0", "--eps-min", "0.5", "--eps-max", "4.5", "--compare"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.matches("\"oracle_eps\"").count(), 6);
    assert!(text.contains("\"pass\": true"));
}

#[test]
fn degeneracy_pair_count() {
    let out = dksphere(&["degeneracy", "--j-max", "5", "--n-max", "5"]);
    assert_eq!(rows(&stdout(&out)).len(), 44);
}

#[test]
fn config_file_fills_missing_flags() {
    let dir = std::env::temp_dir().join(format!("dksphere-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    std::fs::write(&path, "# f2 levels\nfamily = f2\nj = 2\nn-max = 1\nmass = 3.0\n").unwrap();
    let p = path.to_str().unwrap();

    let text = stdout(&dksphere(&["spectrum", "--config", p]));
    assert!(text.starts_with("# mass=3.0"));
    assert_eq!(rows(&text).len(), 2);
    assert!(rows(&text).iter().all(|r| r[0] == "f2" && r[1] == "2"));

    let text = stdout(&dksphere(&["spectrum", "--config", p, "--mass", "0", "--family", "f1"]));
    assert!(text.starts_with("# mass=0.0"));
    assert!(rows(&text).iter().all(|r| r[0] == "f1"));

    std::fs::write(&path, "colour = red\n").unwrap();
    assert_eq!(dksphere(&["spectrum", "--config", p]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["spectrum", "--bogus"][..],
        &["spectrum", "--family", "f9"],
        &["wavefunction", "--family", "dirac"],
        &["spectrum", "--eps-sign", "3"],
        &["spectrum", "--mass", "-1"],
        &["oracle", "--match-point", "4"],
        &["degeneracy", "--j-max", "1"],
        &[],
    ] {
        assert_eq!(dksphere(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_and_out_flag_writes_file() {
    let args = ["wavefunction", "--family", "f4", "--j", "2", "--n", "1", "--mass", "0.5", "--grid", "101"];
    let a = stdout(&dksphere(&args));
    assert_eq!(a, stdout(&dksphere(&args)));

    let path = std::env::temp_dir().join(format!("dksphere-out-{}.csv", std::process::id()));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = dksphere(&with_out);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn json_formats_parse_back() {
    let text = stdout(&dksphere(&["spectrum", "--family", "f3", "--j", "1", "--n-max", "2", "--format", "json"]));
    assert!(text.contains("\"family\": \"F3\""));
    assert_eq!(text.matches("\"n\":").count(), 2);
}
