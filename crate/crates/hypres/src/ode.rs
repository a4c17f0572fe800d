//! Bulirsch–Stoer integration of linear second-order complex ODEs
//! `y'' = p(t) y' + q(t) y`, with the state rescaled as it grows so that
//! exponentially large or small solutions can be followed.

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use num_complex::Complex64 as C64;

type State = [C64; 2];

const SEQ: [usize; 8] = [2, 4, 6, 8, 10, 12, 14, 16];

fn deriv<F: Fn(f64) -> (C64, C64)>(coef: &F, t: f64, y: &State) -> State {
    let (p, q) = coef(t);
    [y[1], p * y[1] + q * y[0]]
}

fn axpy(y: &State, h: f64, d: &State) -> State {
    [y[0] + d[0] * h, y[1] + d[1] * h]
}

fn norm(y: &State) -> f64 {
    y[0].norm().max(y[1].norm())
}

fn midpoint<F: Fn(f64) -> (C64, C64)>(coef: &F, t: f64, y: &State, big_h: f64, n: usize) -> State {
    let h = big_h / n as f64;
    let mut z0 = *y;
    let mut z1 = axpy(y, h, &deriv(coef, t, y));
    for m in 1..n {
        let z2 = axpy(&z0, 2.0 * h, &deriv(coef, t + m as f64 * h, &z1));
        z0 = z1;
        z1 = z2;
    }
    let d = deriv(coef, t + big_h, &z1);
    [
        0.5 * (z0[0] + z1[0] + d[0] * h),
        0.5 * (z0[1] + z1[1] + d[1] * h),
    ]
}

/// One extrapolated step. `Some(y)` if the tableau converged to `tol`.
fn bs_step<F: Fn(f64) -> (C64, C64)>(
    coef: &F,
    t: f64,
    y: &State,
    h: f64,
    tol: f64,
) -> Option<(State, usize)> {
    let mut tab: Vec<State> = Vec::with_capacity(SEQ.len());
    for (k, &nk) in SEQ.iter().enumerate() {
        let mut row = vec![midpoint(coef, t, y, h, nk)];
        for j in 1..=k {
            let ratio = (nk as f64 / SEQ[k - j] as f64).powi(2);
            let prev = &tab[j - 1];
            let cur = row[j - 1];
            let e = [
                cur[0] + (cur[0] - prev[0]) / (ratio - 1.0),
                cur[1] + (cur[1] - prev[1]) / (ratio - 1.0),
            ];
            row.push(e);
        }
        if k >= 2 {
            let a = row[k];
            let b = row[k - 1];
            let err = norm(&[a[0] - b[0], a[1] - b[1]]) / norm(&a).max(1e-300);
            if err <= tol {
                return Some((a, k));
            }
        }
        tab = row;
    }
    None
}

/// Integrate from `t0` (state `y0` = (y, y')) through the sorted `targets`
/// (all on one side of `t0`). Returns `(y, y')` at each target as scaled
/// values sharing one exponent.
pub fn integrate_linear<F: Fn(f64) -> (C64, C64)>(
    coef: F,
    t0: f64,
    y0: [C64; 2],
    targets: &[f64],
    tol: f64,
) -> Result<Vec<(Scaled, Scaled)>> {
    let mut out = Vec::with_capacity(targets.len());
    let mut t = t0;
    let mut y = y0;
    let mut e = 0.0_f64;
    let n0 = norm(&y);
    if !(n0 > 0.0 && n0.is_finite()) {
        return Err(Error::Ode("zero or non-finite initial state".into()));
    }
    let span = targets.iter().map(|x| (x - t0).abs()).fold(0.0, f64::max);
    let mut h = (span / 20.0).max(1e-6);
    for &target in targets {
        let dir = (target - t).signum();
        while (target - t).abs() > 1e-14 * t.abs().max(1.0) {
            let step = dir * h.min((target - t).abs());
            match bs_step(&coef, t, &y, step, tol) {
                Some((ny, k)) => {
                    t += step;
                    y = ny;
                    if k <= 4 {
                        h *= 1.6;
                    } else if k >= 7 {
                        h *= 0.7;
                    }
                    let m = norm(&y);
                    if !m.is_finite() {
                        return Err(Error::Ode(format!("non-finite state at t = {t}")));
                    }
                    if !(1e-50..=1e50).contains(&m) {
                        y = [y[0] / m, y[1] / m];
                        e += m.ln();
                    }
                }
                None => {
                    h *= 0.4;
                    if h < 1e-13 * t.abs().max(1.0) {
                        return Err(Error::Ode(format!("step size underflow at t = {t}")));
                    }
                }
            }
        }
        t = target;
        out.push((Scaled::new(y[0], e), Scaled::new(y[1], e)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_and_exponential() {
        // y'' = -y
        let r = integrate_linear(
            |_| (C64::new(0.0, 0.0), C64::new(-1.0, 0.0)),
            0.0,
            [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            &[1.0, 10.0],
            1e-13,
        )
        .unwrap();
        assert!((r[1].0.to_c64().re - 10f64.sin()).abs() < 1e-10);
        // y'' = 400 y, followed far enough to need rescaling
        let r = integrate_linear(
            |_| (C64::new(0.0, 0.0), C64::new(400.0, 0.0)),
            0.0,
            [C64::new(1.0, 0.0), C64::new(20.0, 0.0)],
            &[60.0],
            1e-13,
        )
        .unwrap();
        assert!((r[0].0.ln_abs() - 1200.0).abs() < 1e-8);
    }
}
