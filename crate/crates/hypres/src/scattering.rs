//! Relative scattering determinant `tau(s)` as a product over modes, the
//! relative scattering phase on the critical line, the Poisson-kernel
//! quantity `lambda_l`, and a numerical check of the relative counting
//! formula.

use crate::error::{Error, Result};
use crate::models::{eta_scaled, mode_weight, poisson_coeff_scaled, ModelKind, ModelSpec};
use crate::quad::{gauss_legendre, integrate};
use crate::resonances::{background_multiplicity, build_set, ResonanceSet};
use crate::scaled::Scaled;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

/// Modes are summed until this many in a row are negligible.
const TAIL_RUN: u32 = 3;
const L_CAP: u32 = 5000;

fn perturbed(model: &ModelSpec) -> Result<()> {
    model.validate()?;
    if model.kind == ModelKind::Background {
        return Err(Error::Config("operation needs a perturbed model".into()));
    }
    Ok(())
}

/// `log(1 + eta)` with care at both ends of the range of `|eta|`.
fn log1p_scaled(eta: Scaled) -> C64 {
    if eta.ln_abs() < -18.0 {
        let e = eta.to_c64();
        return e - 0.5 * e * e;
    }
    if eta.ln_abs() > 40.0 {
        // log eta + log(1 + 1/eta)
        return eta.ln() + Scaled::ONE.ratio(eta);
    }
    (Scaled::ONE + eta).ln()
}

/// `log tau(s) = sum_l h_n(l) log [S_P S_0^{-1}]_l(s)`, principal log per mode.
/// The real part is `log|tau(s)|`; the imaginary part is only defined mod 2 pi.
pub fn log_tau(model: &ModelSpec, s: C64) -> Result<C64> {
    log_tau_capped(model, s, L_CAP)
}

pub fn log_tau_capped(model: &ModelSpec, s: C64, l_cap: u32) -> Result<C64> {
    perturbed(model)?;
    let mut sum = C64::new(0.0, 0.0);
    let mut quiet = 0;
    for l in 0..=l_cap {
        let w = mode_weight(model.n, l) as f64;
        let eta = eta_scaled(model, l, s)?;
        let term = log1p_scaled(eta) * w;
        sum += term;
        if term.norm() < 1e-16 * sum.norm().max(1.0) {
            quiet += 1;
            if quiet >= TAIL_RUN {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence { what: "mode sum for log tau", terms: l_cap as usize, last_ratio: 1.0 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseTrace {
    pub xi_grid: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Number of interval halvings needed to keep every per-mode phase
    /// step below pi/4.
    pub branch_steps: usize,
    /// Highest mode included.
    pub l_max: u32,
}

/// `arg [S_P S_0^{-1}]_l(n/2 + i xi)`; the element is unimodular there.
fn mode_arg(model: &ModelSpec, l: u32, xi: f64) -> Result<C64> {
    let s = C64::new(model.half_n(), xi);
    let rel = Scaled::ONE + eta_scaled(model, l, s)?;
    Ok(rel.m / rel.m.norm())
}

fn phase_step(model: &ModelSpec, l: u32, a: f64, ua: C64, b: f64, ub: C64, depth: u32, steps: &mut usize) -> Result<f64> {
    let d = (ub / ua).arg();
    if d.abs() < PI / 4.0 {
        return Ok(d);
    }
    if depth > 40 {
        return Err(Error::Branch(format!("phase of mode {l} not resolved near xi = {a}")));
    }
    *steps += 1;
    let m = 0.5 * (a + b);
    let um = mode_arg(model, l, m)?;
    Ok(phase_step(model, l, a, ua, m, um, depth + 1, steps)? + phase_step(model, l, m, um, b, ub, depth + 1, steps)?)
}

/// Highest mode whose element differs from 1 by more than rounding
/// anywhere on `[0, xi_max]` (the deviation grows with xi).
fn phase_mode_cutoff(model: &ModelSpec, xi_max: f64) -> Result<u32> {
    let s = C64::new(model.half_n(), xi_max.abs());
    let mut quiet = 0;
    let mut last_live = 0;
    for l in 0..=L_CAP {
        let e = eta_scaled(model, l, s)?;
        if e.ln_abs() + (mode_weight(model.n, l) as f64).ln() < -37.0 {
            quiet += 1;
            if quiet >= TAIL_RUN {
                return Ok(last_live);
            }
        } else {
            quiet = 0;
            last_live = l;
        }
    }
    Err(Error::NonConvergence { what: "mode cutoff for the scattering phase", terms: L_CAP as usize, last_ratio: 1.0 })
}

/// `sigma` at the points `xs`, which must run monotonically away from 0
/// (all nonnegative increasing, or all nonpositive decreasing).
pub fn sigma_at(model: &ModelSpec, xs: &[f64]) -> Result<(Vec<f64>, usize, u32)> {
    perturbed(model)?;
    if xs.is_empty() {
        return Ok((vec![], 0, 0));
    }
    let sign = if xs.iter().all(|&x| x >= 0.0) { 1.0 } else { -1.0 };
    let mono = xs.windows(2).all(|w| sign * w[1] >= sign * w[0]) && xs.iter().all(|&x| sign * x >= 0.0);
    if !mono || xs.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("phase points must move monotonically away from 0".into()));
    }
    let xmax = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let lmax = phase_mode_cutoff(model, xmax)?;
    let per_mode: Vec<Result<(Vec<f64>, usize)>> = (0..=lmax)
        .into_par_iter()
        .map(|l| {
            let mut steps = 0;
            let mut out = Vec::with_capacity(xs.len());
            let mut x0 = 0.0;
            let mut u0 = mode_arg(model, l, 0.0)?;
            let mut acc = u0.arg();
            // the element is real at xi = 0; start from exactly zero phase
            acc -= acc;
            for &x in xs {
                let u = mode_arg(model, l, x)?;
                acc += phase_step(model, l, x0, u0, x, u, 0, &mut steps)?;
                out.push(acc);
                x0 = x;
                u0 = u;
            }
            Ok((out, steps))
        })
        .collect();
    let mut sigma = vec![0.0; xs.len()];
    let mut steps = 0;
    for (l, r) in per_mode.into_iter().enumerate() {
        let (ph, st) = r?;
        steps += st;
        let w = mode_weight(model.n, l as u32) as f64;
        for (s, p) in sigma.iter_mut().zip(ph) {
            *s -= w * p / (2.0 * PI);
        }
    }
    Ok((sigma, steps, lmax))
}

/// Continuous phase on a uniform grid from 0 to `xi_max` (either sign).
pub fn phase_sigma(model: &ModelSpec, xi_max: f64, step: f64) -> Result<PhaseTrace> {
    if !(step > 0.0) || !xi_max.is_finite() {
        return Err(Error::Config(format!("phase grid: xi_max = {xi_max}, step = {step}")));
    }
    let n = (xi_max.abs() / step).ceil() as usize;
    let pts: Vec<f64> = (0..=n).map(|i| xi_max * i as f64 / n.max(1) as f64).collect();
    let (mut sigma, branch_steps, l_max) = sigma_at(model, &pts)?;
    let mut xi_grid = pts;
    if xi_max < 0.0 {
        xi_grid.reverse();
        sigma.reverse();
    }
    Ok(PhaseTrace { xi_grid, sigma, branch_steps, l_max })
}

/// Least-squares fit `sigma ~ A xi^2 + B xi + C` over `[lo, hi]`; returns A.
pub fn weyl_coefficient(trace: &PhaseTrace, lo: f64, hi: f64) -> Result<f64> {
    Ok(weyl_fit(trace, lo, hi)?.coefficient)
}

/// Quadratic least-squares fit of sigma over `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylFit {
    /// Leading coefficient, the large-xi limit of `sigma / xi^2`.
    pub coefficient: f64,
    /// Nominal standard error from the fit residuals.
    pub std_error: f64,
    pub samples: usize,
}

pub fn weyl_fit(trace: &PhaseTrace, lo: f64, hi: f64) -> Result<WeylFit> {
    let pts: Vec<(f64, f64)> = trace
        .xi_grid
        .iter()
        .zip(&trace.sigma)
        .filter(|(x, _)| **x >= lo && **x <= hi)
        .map(|(x, s)| (*x, *s))
        .collect();
    if pts.len() < 4 {
        return Err(Error::Domain(format!("fewer than 4 phase samples in [{lo}, {hi}]")));
    }
    // normal equations in t = (xi - mid)/half for conditioning
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let basis = |x: f64| {
        let t = (x - mid) / half;
        [t * t, t, 1.0]
    };
    let mut m = [[0.0f64; 3]; 3];
    let mut v = [0.0f64; 3];
    for (x, s) in &pts {
        let b = basis(*x);
        for i in 0..3 {
            v[i] += b[i] * s;
            for j in 0..3 {
                m[i][j] += b[i] * b[j];
            }
        }
    }
    let c = solve3(m, v).ok_or_else(|| Error::Domain("singular fit".into()))?;
    let rss: f64 = pts
        .iter()
        .map(|(x, s)| {
            let b = basis(*x);
            (s - b[0] * c[0] - b[1] * c[1] - b[2] * c[2]).powi(2)
        })
        .sum();
    let inv00 = solve3(m, [1.0, 0.0, 0.0]).ok_or_else(|| Error::Domain("singular fit".into()))?[0];
    let var = rss / (pts.len() - 3) as f64 * inv00;
    Ok(WeylFit { coefficient: c[0] / (half * half), std_error: var.max(0.0).sqrt() / (half * half), samples: pts.len() })
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> Option<[f64; 3]> {
    for i in 0..3 {
        let p = (i..3).max_by(|&a, &b| m[a][i].abs().total_cmp(&m[b][i].abs()))?;
        m.swap(i, p);
        v.swap(i, p);
        if m[i][i] == 0.0 {
            return None;
        }
        for r in i + 1..3 {
            let f = m[r][i] / m[i][i];
            for c in i..3 {
                m[r][c] -= f * m[i][c];
            }
            v[r] -= f * v[i];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|j| m[i][j] * x[j]).sum();
        x[i] = (v[i] - s) / m[i][i];
    }
    Some(x)
}

/// `ln` of `int_{lo}^{hi} |a_l(s; r)|^2 sinh^n r dr`, scaled to avoid overflow.
fn ln_poisson_energy(n: u32, l: u32, s: C64, lo: f64, hi: f64) -> Result<f64> {
    let lnf = |r: f64| -> Result<f64> {
        Ok(2.0 * poisson_coeff_scaled(n, l, s, r)?.ln_abs() + n as f64 * r.sinh().ln())
    };
    let mut peak = f64::NEG_INFINITY;
    for i in 0..=16 {
        peak = peak.max(lnf(lo + (hi - lo) * i as f64 / 16.0)?);
    }
    if !peak.is_finite() {
        return Err(Error::Quadrature("Poisson coefficient vanishes on the interval".into()));
    }
    let (v, _) = integrate(|r| Ok((lnf(r)? - peak).exp()), lo, hi, 0.0, 1e-10, 2000)?;
    Ok(peak + v.ln())
}

/// `ln lambda_l(s)`, where
/// `lambda_l = |2s-n| (int_{r1}^{r2} |a_l(n-s)|^2 sinh^n)^{1/2} (int_{r2}^{r3} |a_l(s)|^2 sinh^n)^{1/2}`.
pub fn ln_lambda_l(n: u32, l: u32, s: C64, radii: (f64, f64, f64)) -> Result<f64> {
    let (r1, r2, r3) = radii;
    if !(0.0 < r1 && r1 < r2 && r2 < r3 && r3.is_finite()) {
        return Err(Error::Config(format!("radii must satisfy 0 < r1 < r2 < r3, got {radii:?}")));
    }
    let nf = n as f64;
    if s.re < 0.5 * nf {
        return Err(Error::Domain(format!("lambda_l needs Re s >= n/2, got s = {s}")));
    }
    let a = ln_poisson_energy(n, l, nf - s, r1, r2)?;
    let b = ln_poisson_energy(n, l, s, r2, r3)?;
    Ok((2.0 * s - nf).norm().ln() + 0.5 * (a + b))
}

pub fn lambda_l(n: u32, l: u32, s: C64, radii: (f64, f64, f64)) -> Result<f64> {
    Ok(ln_lambda_l(n, l, s, radii)?.exp())
}

/// `(1/2pi) int_{-pi/2}^{pi/2} log|tau(n/2 + a e^{i theta})| d theta`.
pub fn half_circle_log_tau(model: &ModelSpec, a: f64) -> Result<(f64, f64)> {
    perturbed(model)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Config(format!("radius a = {a} must be positive")));
    }
    let h = model.half_n();
    // even in theta; split [0, pi/2] into panels evaluated in parallel
    let panels = 8;
    let parts: Vec<Result<(f64, f64)>> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let t0 = FRAC_PI_2 * p as f64 / panels as f64;
            let t1 = FRAC_PI_2 * (p + 1) as f64 / panels as f64;
            let f = |t: f64| Ok(log_tau(model, C64::new(h, 0.0) + C64::from_polar(a, t))?.re);
            integrate(f, t0, t1, 1e-9 * a * a, 1e-9, 2000)
        })
        .collect();
    let mut v = 0.0;
    let mut e = 0.0;
    for r in parts {
        let (pv, pe) = r?;
        v += pv;
        e += pe;
    }
    Ok((v / PI, e / PI))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelCount {
    /// Radius actually used (shifted off resonance distances).
    pub a: f64,
    pub lhs: f64,
    pub rhs_phase_term: f64,
    pub rhs_tau_term: f64,
    pub defect: f64,
}

/// `int_0^a (N_P - N_0)(t)/t dt`, exact for step functions.
pub fn counting_integral(set: &ResonanceSet, a: f64) -> Result<f64> {
    if a > set.search_radius {
        return Err(Error::Domain(format!("a = {a} beyond the search radius {}", set.search_radius)));
    }
    let h = set.model.half_n();
    let mut v = 0.0;
    for r in &set.entries {
        let d = (r.s - h).norm();
        if d <= a && d > 0.0 {
            v += r.weight as f64 * (a / d).ln();
        }
    }
    let mut k = 0u64;
    while k as f64 + h <= a {
        v -= background_multiplicity(set.model.n, k) as f64 * (a / (k as f64 + h)).ln();
        k += 1;
    }
    Ok(v)
}

/// `2 int_0^a sigma(t)/t dt` by composite Gauss rules (open at t = 0).
pub fn phase_integral(model: &ModelSpec, a: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(10);
    let panels = (a / 0.5).ceil().max(1.0) as usize;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for p in 0..panels {
        let (t0, t1) = (a * p as f64 / panels as f64, a * (p + 1) as f64 / panels as f64);
        for j in 0..x.len() {
            nodes.push(0.5 * (t0 + t1) + 0.5 * (t1 - t0) * x[j]);
            weights.push(0.5 * (t1 - t0) * w[j]);
        }
    }
    let (sig, _, _) = sigma_at(model, &nodes)?;
    Ok(2.0 * nodes.iter().zip(&weights).zip(&sig).map(|((t, w), s)| w * s / t).sum::<f64>())
}

/// Both sides of the relative counting formula at radius a.
pub fn relcount_check(model: &ModelSpec, a: f64) -> Result<RelCount> {
    perturbed(model)?;
    let set = build_set(model, a + 0.5)?;
    relcount_with_set(&set, a)
}

pub fn relcount_with_set(set: &ResonanceSet, a: f64) -> Result<RelCount> {
    let model = &set.model;
    let h = model.half_n();
    // zeros with Re s > n/2 are eigenvalues; the formula then has a nonzero remainder
    if let Some(r) = set.entries.iter().find(|r| r.s.re > h + set.tolerances.snap_tol) {
        return Err(Error::Config(format!("model has discrete spectrum (s = {} in mode {})", r.s, r.l)));
    }
    let mut a = a;
    // keep the half circle off the reflected resonances
    while set.entries.iter().any(|r| ((r.s - h).norm() - a).abs() < 1e-6) {
        a += 2e-6;
    }
    let lhs = counting_integral(set, a)?;
    let rhs_phase_term = phase_integral(model, a)?;
    let (rhs_tau_term, _) = half_circle_log_tau(model, a)?;
    Ok(RelCount { a, lhs, rhs_phase_term, rhs_tau_term, defect: lhs - rhs_phase_term - rhs_tau_term })
}
