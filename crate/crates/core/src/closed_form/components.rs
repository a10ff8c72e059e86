use num_complex::Complex64;
use serde::Serialize;

use crate::model::Sign;

/// The 4×4 matrix of radial functions `f_ab` (0-based storage: `f[a-1][b-1]`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeMatrix {
    pub f: [[Complex64; 4]; 4],
}

impl AmplitudeMatrix {
    pub fn get(&self, a: usize, b: usize) -> Complex64 {
        self.f[a - 1][b - 1]
    }

    /// Largest violation of the parity restrictions for branch δ.
    pub fn parity_violation(&self, delta: Sign) -> f64 {
        let d = delta.value();
        let pairs = [
            ((3, 1), (2, 4)),
            ((3, 2), (2, 3)),
            ((3, 3), (2, 2)),
            ((3, 4), (2, 1)),
            ((4, 1), (1, 4)),
            ((4, 2), (1, 3)),
            ((4, 3), (1, 2)),
            ((4, 4), (1, 1)),
        ];
        pairs
            .iter()
            .map(|&((a, b), (c, e))| (self.get(a, b) - self.get(c, e) * d).norm())
            .fold(0.0, f64::max)
    }

    /// Largest violation of the linear constraints for branch λ.
    pub fn constraint_violation(&self, lambda: Sign) -> f64 {
        let l = lambda.value();
        let sums = [
            (self.get(1, 1) + self.get(2, 2), self.get(1, 3) + self.get(2, 4)),
            (self.get(1, 1) - self.get(2, 2), self.get(1, 3) - self.get(2, 4)),
            (self.get(1, 2) + self.get(2, 1), self.get(1, 4) + self.get(2, 3)),
            (self.get(1, 2) - self.get(2, 1), self.get(1, 4) - self.get(2, 3)),
        ];
        sums.iter().map(|(lhs, rhs)| (lhs - rhs * l).norm()).fold(0.0, f64::max)
    }
}

/// Rebuilds the full amplitude matrix from the real radial amplitudes.
pub fn assemble_components(k: f64, l: f64, m: f64, n: f64, lambda: Sign, delta: Sign) -> AmplitudeMatrix {
    let (lv, dv) = (lambda.value(), delta.value());
    let kl_p = Complex64::new(k, l) / 2.0;
    let kl_m = Complex64::new(k, -l) / 2.0;
    let mn_p = Complex64::new(m, n) / 2.0;
    let mn_m = Complex64::new(m, -n) / 2.0;
    let mut f = [[Complex64::new(0.0, 0.0); 4]; 4];
    f[0][2] = kl_p;
    f[1][3] = kl_m;
    f[0][3] = mn_p;
    f[1][2] = mn_m;
    f[0][0] = kl_p * lv;
    f[1][1] = kl_m * lv;
    f[0][1] = mn_p * lv;
    f[1][0] = mn_m * lv;
    f[2][0] = f[1][3] * dv;
    f[2][1] = f[1][2] * dv;
    f[2][2] = f[1][1] * dv;
    f[2][3] = f[1][0] * dv;
    f[3][0] = f[0][3] * dv;
    f[3][1] = f[0][2] * dv;
    f[3][2] = f[0][1] * dv;
    f[3][3] = f[0][0] * dv;
    AmplitudeMatrix { f }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_input_gives_zero_matrix() {
        let z = assemble_components(0.0, 0.0, 0.0, 0.0, Sign::Minus, Sign::Plus);
        assert!(z.f.iter().flatten().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn pure_k_input() {
        let a = assemble_components(2.0, 0.0, 0.0, 0.0, Sign::Plus, Sign::Plus);
        let one = Complex64::new(1.0, 0.0);
        let ones = [(1, 3), (2, 4), (1, 1), (2, 2), (3, 3), (4, 4), (3, 1), (4, 2)];
        for a_ in 1..=4 {
            for b in 1..=4 {
                let want = if ones.contains(&(a_, b)) { one } else { Complex64::new(0.0, 0.0) };
                assert_eq!(a.get(a_, b), want, "f{a_}{b}");
            }
        }
    }
}
