//! Lanczos approximation of the gamma function (g = 7, nine terms),
//! good to roughly 15 significant digits on the real line.

use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// True when `z` is 0, -1, -2, ... (to within 1e-12).
pub fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.5 && (z - z.round()).abs() < 1e-12
}

pub fn gamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        return f64::NAN;
    }
    if z < 0.5 {
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * acc
}

/// 1/Γ(z), which is entire: zero at the poles of Γ.
pub fn rgamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        0.0
    } else {
        1.0 / gamma(z)
    }
}
