//! Dormand–Prince 5(4) with normwise relative error control.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dopri5Options {
    pub tolerance: f64,
    pub max_steps: usize,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            tolerance: 1e-10,
            max_steps: 200_000,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights are the last row of A; these are 5th minus 4th.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Integrates `y' = f(t, y)` from `t0` and records the state at each of
/// `outputs` (which must be monotone in the direction of integration).
pub fn integrate_outputs<F>(f: F, t0: f64, y0: &[f64], outputs: &[f64], opts: Dopri5Options) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let n = y0.len();
    let Some(&t_end) = outputs.last() else {
        return Ok(vec![]);
    };
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k = vec![vec![0.0; n]; 7];
    let mut tmp = vec![0.0; n];
    let mut err = vec![0.0; n];
    let mut out = Vec::with_capacity(outputs.len());
    let mut next = 0;
    let span = (t_end - t0).abs();
    let mut h_prop = (span * 1e-3).max(1e-8) * dir;
    f(t, &y, &mut k[0]);
    let mut steps = 0;
    while next < outputs.len() {
        let target = outputs[next];
        if (target - t) * dir <= 0.0 {
            out.push(y.clone());
            next += 1;
            continue;
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::Integration(format!("step limit reached at t = {t}")));
        }
        let mut h = h_prop;
        let hit = (t + h - target) * dir >= 0.0;
        if hit {
            h = target - t;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (r, kr) in k.iter().enumerate().take(s) {
                    acc += h * A[s][r] * kr[i];
                }
                tmp[i] = acc;
            }
            let (_, tail) = k.split_at_mut(s);
            f(t + C[s] * h, &tmp, &mut tail[0]);
        }
        // tmp holds the 5th-order solution; k[6] is f there (first same as last)
        for (i, e) in err.iter_mut().enumerate() {
            *e = h * E.iter().zip(&k).map(|(w, kr)| w * kr[i]).sum::<f64>();
        }
        let scale = opts.tolerance * norm(&y).max(norm(&tmp)) + 1e-300;
        let ratio = norm(&err) / scale;
        if !ratio.is_finite() {
            return Err(Error::Integration(format!("non-finite state at t = {t}")));
        }
        if ratio <= 1.0 {
            t = if hit { target } else { t + h };
            y.copy_from_slice(&tmp);
            let last = k[6].clone();
            k[0].copy_from_slice(&last);
            let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            let h_new = h * grow;
            if !hit || h_new.abs() > h_prop.abs() {
                h_prop = h_new;
            }
        } else {
            h_prop = h * (0.9 * ratio.powf(-0.2)).clamp(0.1, 1.0);
            if h_prop.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Integration(format!("step size underflow at t = {t}")));
            }
        }
    }
    Ok(out)
}

/// Integrates to `t1` and returns the final state.
pub fn integrate<F>(f: F, t0: f64, y0: &[f64], t1: f64, opts: Dopri5Options) -> Result<Vec<f64>>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    Ok(integrate_outputs(f, t0, y0, &[t1], opts)?.pop().unwrap_or_else(|| y0.to_vec()))
}
