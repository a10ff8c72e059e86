use dksphere::closed_form::{assemble_components, family_p_sq, spectrum, Family};
use dksphere::hypergeo::{gauss_2f1, gauss_2f1_derivative, Hyp2F1Params};
use dksphere::io::fmt_f64;
use dksphere::jet::Jet;
use dksphere::model::{
    indicial_determinant, indicial_exponents, operator_k4, operator_m4, QuantumNumbers, Sign,
};
use dksphere::verification::fd::tabulated_derivatives;
use dksphere::verification::{default_grid, fourth_order_residual, wronskian4, Channel};
use num_rational::Rational64;
use proptest::prelude::*;

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hypergeometric_symmetric_in_upper_parameters(
        a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.3f64..4.0, x in 0.0f64..0.97,
    ) {
        let ab = gauss_2f1(&Hyp2F1Params::new(a, b, c).unwrap(), x);
        let ba = gauss_2f1(&Hyp2F1Params::new(b, a, c).unwrap(), x);
        if let (Ok(ab), Ok(ba)) = (ab, ba) {
            prop_assert!((ab - ba).abs() <= 1e-12 * ab.abs().max(1.0));
        }
    }

    #[test]
    fn gauss_equation_holds(
        a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.3f64..4.0, x in 0.02f64..0.98,
    ) {
        let p = Hyp2F1Params::new(a, b, c).unwrap();
        let d: Result<Vec<f64>, _> = (0..3).map(|k| gauss_2f1_derivative(&p, x, k)).collect();
        if let Ok(d) = d {
            let t = [x * (1.0 - x) * d[2], (c - (a + b + 1.0) * x) * d[1], -a * b * d[0]];
            let scale = t.iter().fold(0.0f64, |s, v| s.max(v.abs()));
            prop_assert!((t[0] + t[1] + t[2]).abs() <= 1e-9 * scale.max(1e-300));
        }
    }

    #[test]
    fn jet_product_rule(x0 in -2.0f64..2.0) {
        let x = Jet::variable(x0);
        let f = x.sin() * (x * x + 1.0);
        let df = x0.cos() * (x0 * x0 + 1.0) + x0.sin() * 2.0 * x0;
        prop_assert!((f.deriv(1) - df).abs() < 1e-12);
    }

    #[test]
    fn assembled_matrix_respects_both_branches(
        k in -5.0f64..5.0, l in -5.0f64..5.0, m in -5.0f64..5.0, n in -5.0f64..5.0,
        lambda in sign(), delta in sign(),
    ) {
        let f = assemble_components(k, l, m, n, lambda, delta);
        prop_assert!(f.parity_violation(delta) < 1e-12);
        prop_assert!(f.constraint_violation(lambda) < 1e-12);
    }

    #[test]
    fn fornberg_exact_on_cubics(c in prop::array::uniform4(-3.0f64..3.0), x0 in -1.0f64..1.0) {
        let pts: Vec<f64> = (0..5).map(|i| x0 - 0.2 + 0.1 * i as f64).collect();
        let vals: Vec<f64> = pts.iter().map(|x| c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x).collect();
        let d = tabulated_derivatives(x0, &pts, &vals, 3);
        prop_assert!((d[1] - (c[1] + 2.0 * c[2] * x0 + 3.0 * c[3] * x0 * x0)).abs() < 1e-9);
        prop_assert!((d[3] - 6.0 * c[3]).abs() < 1e-6);
    }

    #[test]
    fn wronskian_flips_sign_under_swap(s in 0.5f64..3.0, x0 in 0.1f64..0.9) {
        let a = move |x: f64| Ok([(s * x).sin(), s * (s * x).cos(), -s * s * (s * x).sin(), -s * s * s * (s * x).cos()]);
        let b = |x: f64| Ok([x.exp(), x.exp(), x.exp(), x.exp()]);
        let c = |_: f64| Ok([1.0, 0.0, 0.0, 0.0]);
        let d = |x: f64| Ok([x, 1.0, 0.0, 0.0]);
        let w1 = wronskian4([&a, &b, &c, &d], x0).unwrap();
        let w2 = wronskian4([&b, &a, &c, &d], x0).unwrap();
        prop_assert!((w1 + w2).abs() <= 1e-12 * w1.abs().max(1.0));
    }

    #[test]
    fn floats_survive_text(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn indicial_determinant_vanishes_only_at_exponents(j in 1u32..8, g in -6.0f64..6.0) {
        let e = indicial_exponents(j).unwrap();
        for r in e.all {
            let v = *r.numer() as f64 / *r.denom() as f64;
            prop_assert!(indicial_determinant(j, v).abs() < 1e-9);
        }
        let nearest = e.all.iter().map(|r| (g - *r.numer() as f64 / *r.denom() as f64).abs()).fold(f64::INFINITY, f64::min);
        prop_assume!(nearest > 1e-3);
        prop_assert!(indicial_determinant(j, g).abs() > 1e-9);
    }
}

#[test]
fn family_levels_are_integers_and_dirac_levels_quarter_odd_squares() {
    for j in 1..=20u32 {
        for n in 0..=20u32 {
            let f1 = family_p_sq(Family::F1, j, n).unwrap();
            let f2 = family_p_sq(Family::F2, j, n).unwrap();
            assert_eq!(f1, (j as i64 + 2 + 2 * n as i64).pow(2) - 1);
            assert_eq!(f2, (j as i64 + 1 + 2 * n as i64).pow(2) - 1);
        }
    }
    for twice_j in (1..=41).step_by(2) {
        for n in 0..=20 {
            let p = spectrum(Family::Dirac, Rational64::new(twice_j, 2), n, 0.0).unwrap().p_sq;
            assert_eq!(*p.denom(), 4);
            assert_eq!(p.numer() % 2, 1);
        }
    }
}

#[test]
fn operator_coefficients_follow_their_leading_poles() {
    for (p_sq, a_sq) in [(8.0, 2.0), (15.0, 6.0), (5.29, 12.0)] {
        for op in [operator_k4(p_sq, a_sq), operator_m4(p_sq, a_sq)] {
            for c in &op.coeffs {
                for (x, near_one) in [(1e-6, false), (1.0 - 1e-6, true)] {
                    let v = c.eval(x);
                    assert!(v.is_finite());
                    let lead = c.leading_term(x, near_one);
                    if lead != 0.0 {
                        assert!((v - lead).abs() <= 0.01 * lead.abs(), "{v} vs {lead}");
                    }
                }
            }
        }
    }
}

#[test]
fn residual_reports_are_bit_stable() {
    let mode = dksphere::closed_form::ModeFunction::on_spectrum(
        Family::F2,
        QuantumNumbers::new(2, 1),
        0.4,
        Sign::Plus,
        Sign::Plus,
        Sign::Plus,
    )
    .unwrap();
    let a = fourth_order_residual(&mode, Channel::K, &default_grid(), 1e-9).unwrap();
    let b = fourth_order_residual(&mode, Channel::K, &default_grid(), 1e-9).unwrap();
    assert_eq!(a, b);
}

#[test]
fn connection_formula_agrees_with_long_direct_series() {
    // direct series summed far past the usual cutoff
    let long = |a: f64, b: f64, c: f64, x: f64| {
        let (mut sum, mut term) = (1.0, 1.0);
        for k in 0..200_000 {
            let k = k as f64;
            term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
            sum += term;
        }
        sum
    };
    for (a, b, c) in [(0.3, 0.7, 1.6), (-1.2, 2.4, 2.9), (0.5, 0.25, 1.1)] {
        let p = Hyp2F1Params::new(a, b, c).unwrap();
        for x in [0.45, 0.55] {
            let v = gauss_2f1(&p, x).unwrap();
            let w = long(a, b, c, x);
            assert!((v - w).abs() <= 1e-10 * w.abs(), "({a},{b},{c}) x={x}: {v} vs {w}");
        }
    }
}
