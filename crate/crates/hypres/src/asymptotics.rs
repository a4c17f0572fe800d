//! Sharp constant of the resonance counting bound.
//!
//! `H(alpha, r)` measures the exponential size of the per-mode relative
//! scattering element; `A(theta)` is where it changes sign on the ray
//! `x e^{i theta}`, and `b(theta, r0)` integrates its positive part against
//! `x^{-n-2}`. The x-integral is done in `u = 1/x` over `[0, 1/A]`, which
//! removes the infinite range without a truncation.

use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelSpec};
use crate::quad::{gauss_legendre, integrate};
use crate::specialfn::cgamma;
use num_complex::Complex64 as C64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SharpConstants {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub bp: f64,
    pub n: u32,
    pub r0: f64,
    /// Estimated absolute error of `b2`.
    pub quadrature_error: f64,
}

fn gamma_re(x: f64) -> f64 {
    cgamma(C64::new(x, 0.0)).map(|g| g.re).unwrap_or(f64::INFINITY)
}

/// `H(alpha, r)`, written as
/// `Re[2 alpha log(alpha cosh r + w) + (1 - alpha) log(alpha^2 - 1)] + 2 log sinh r - 2 log|cosh r + w|`
/// with `w = sqrt(1 + alpha^2 sinh^2 r)`; this is the defining expression
/// with the logarithm of `(cosh r - w)/(cosh r + w)` expanded, and has no
/// cancellation at `alpha = 1`.
pub fn h_fn(alpha: C64, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) || !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::Domain(format!("H at alpha = {alpha}, r = {r}")));
    }
    // H is even under conjugation; work with Im alpha >= 0
    let a = if alpha.im < 0.0 { alpha.conj() } else { alpha };
    let (ch, sh) = (r.cosh(), r.sinh());
    let w = (1.0 + a * a * sh * sh).sqrt();
    let m = a * a - 1.0;
    let tail = if m.norm() == 0.0 { 0.0 } else { ((1.0 - a) * m.ln()).re };
    let v = (2.0 * a * (a * ch + w).ln()).re + tail + 2.0 * sh.ln() - 2.0 * (ch + w).norm().ln();
    if !v.is_finite() {
        return Err(Error::Branch(format!("H not finite at alpha = {alpha}, r = {r}")));
    }
    Ok(v)
}

/// The positive root of `H(x e^{i theta}, r) = 0`, or `None` if H stays
/// negative out to `x = 1e8` (then the ray contributes nothing).
pub fn a_theta(theta: f64, r: f64) -> Result<Option<f64>> {
    if theta.abs() > FRAC_PI_2 {
        return Err(Error::Domain(format!("theta = {theta} outside [-pi/2, pi/2]")));
    }
    let dir = C64::from_polar(1.0, theta);
    let f = |x: f64| h_fn(dir * x, r);
    let mut lo = 1e-8;
    if f(lo)? >= 0.0 {
        return Err(Error::RootFinding(format!("H({lo} e^(i{theta}), {r}) is not negative")));
    }
    let mut hi = 1.0;
    while f(hi)? <= 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e8 {
            return Ok(None);
        }
    }
    while hi - lo > 1e-10 * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// `b(theta, r0) = (2/Gamma(n)) int_0^inf [H(x e^{i theta}, r0)]_+ x^{-n-2} dx`
/// with its estimated error.
pub fn b_theta_err(theta: f64, r0: f64, n: u32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::Config("n must be >= 1".into()));
    }
    let a = match a_theta(theta, r0)? {
        Some(a) => a,
        None => return Ok((0.0, 0.0)),
    };
    let dir = C64::from_polar(1.0, theta);
    let nf = n as i32;
    let g = |u: f64| -> Result<f64> { Ok(h_fn(dir / u, r0)?.max(0.0) * u.powi(nf)) };
    let (v, e) = integrate(g, 0.0, 1.0 / a, 1e-13, 1e-11, 4000)?;
    let c = 2.0 / gamma_re(n as f64);
    Ok((c * v, c * e))
}

pub fn b_theta(theta: f64, r0: f64, n: u32) -> Result<f64> {
    Ok(b_theta_err(theta, r0, n)?.0)
}

/// Composite Gauss rule on `[0, pi/2]`, panels graded toward `pi/2` where
/// `A(theta)` grows and b loses smoothness.
fn theta_nodes(panels: usize, m: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(m);
    let edges: Vec<f64> = (0..=panels)
        .map(|i| {
            let t = i as f64 / panels as f64;
            FRAC_PI_2 * (1.0 - (1.0 - t).powi(2))
        })
        .collect();
    let mut out = Vec::with_capacity(panels * m);
    for p in 0..panels {
        let (a, b) = (edges[p], edges[p + 1]);
        for j in 0..m {
            out.push((0.5 * (a + b) + 0.5 * (b - a) * x[j], 0.5 * (b - a) * w[j]));
        }
    }
    out
}

fn theta_integral(r0: f64, n: u32, panels: usize, m: usize) -> Result<(f64, f64)> {
    let nodes = theta_nodes(panels, m);
    let vals: Result<Vec<(f64, f64)>> = nodes.par_iter().map(|&(t, _)| b_theta_err(t, r0, n)).collect();
    let vals = vals?;
    let sum = nodes.iter().zip(&vals).map(|((_, w), (v, _))| w * v).sum::<f64>();
    let err = nodes.iter().zip(&vals).map(|((_, w), (_, e))| w * e).sum::<f64>();
    // b is even in theta
    Ok((2.0 * sum, 2.0 * err))
}

/// `B2 = ((n+1)/2pi) int_{-pi/2}^{pi/2} b(theta, r0) d theta`, with an error estimate.
pub fn b2_const_err(r0: f64, n: u32) -> Result<(f64, f64)> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::Config(format!("r0 = {r0} must be positive")));
    }
    let (coarse, _) = theta_integral(r0, n, 12, 10)?;
    let (fine, inner) = theta_integral(r0, n, 24, 10)?;
    let c = (n as f64 + 1.0) / (2.0 * PI);
    Ok((c * fine, c * ((fine - coarse).abs() + inner)))
}

pub fn b2_const(r0: f64, n: u32) -> Result<f64> {
    Ok(b2_const_err(r0, n)?.0)
}

/// `B0 = 2/(n+1)!` for odd n, zero for even n.
pub fn b0_const(n: u32) -> f64 {
    if n % 2 == 0 {
        0.0
    } else {
        2.0 / (2..=n + 1).map(|j| j as f64).product::<f64>()
    }
}

/// `int_0^r sinh^n t dt` by the reduction formula.
fn sinh_power_integral(n: u32, r: f64) -> f64 {
    match n {
        0 => r,
        1 => r.cosh() - 1.0,
        _ => {
            let nf = n as f64;
            r.sinh().powi(n as i32 - 1) * r.cosh() / nf - (nf - 1.0) / nf * sinh_power_integral(n - 2, r)
        }
    }
}

/// Volume of the geodesic ball of radius r in `H^{n+1}`.
pub fn ball_volume(n: u32, r: f64) -> f64 {
    let sphere = 2.0 * PI.powf(0.5 * (n as f64 + 1.0)) / gamma_re(0.5 * (n as f64 + 1.0));
    sphere * sinh_power_integral(n, r)
}

/// `B1 = 2 (4 pi)^{-(n+1)/2} / Gamma((n+3)/2) [vol(K, g) - vol(K0, g0)]`.
pub fn b1_const(model: &ModelSpec) -> Result<f64> {
    model.validate()?;
    let n = model.n;
    let v0 = ball_volume(n, model.r0);
    let dv = match model.kind {
        ModelKind::Background => 0.0,
        ModelKind::Obstacle => -v0,
        ModelKind::Step => 0.0,
        ModelKind::Transparent => (model.kappa.powi(n as i32 + 1) - 1.0) * v0,
    };
    let nf = n as f64;
    Ok(2.0 * (4.0 * PI).powf(-0.5 * (nf + 1.0)) / gamma_re(0.5 * (nf + 3.0)) * dv)
}

pub fn bp_total(model: &ModelSpec) -> Result<SharpConstants> {
    model.validate()?;
    if model.kind == ModelKind::Background {
        return Err(Error::Config("sharp constant needs a perturbed model".into()));
    }
    let b0 = b0_const(model.n);
    let b1 = b1_const(model)?;
    let (b2, quadrature_error) = b2_const_err(model.r0, model.n)?;
    Ok(SharpConstants { b0, b1, b2, bp: b0 + b1 + b2, n: model.n, r0: model.r0, quadrature_error })
}
