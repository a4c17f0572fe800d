//! Radial perturbations of `H^{n+1}` and their per-mode scattering data.
//!
//! For mode l the order is `k = l + (n-1)/2` and the degree `nu = s - (n+1)/2`.
//! Outside the support every model has the same two exterior solutions; the
//! interior enters through a matching function `X_Q` (Dirichlet value of Q
//! for the obstacle, Wronskian with the interior solution otherwise), and
//! the relative scattering element is `1 + cos(pi nu) Gamma(k-nu) X_P / X_Q`,
//! where `X_P` is the same matching applied to `P^{-k}_nu`.

use crate::error::{Error, Result};
use crate::legendre::{leg_p_scaled, leg_q_scaled, LegValue};
use crate::scaled::Scaled;
use crate::specialfn::{cgamma_scaled, hyp2f1, ln_cos_pi, rgamma_scaled, sinpi};
use num_complex::Complex64 as C64;
use std::f64::consts::{LN_2, PI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Background,
    Obstacle,
    Step,
    Transparent,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    /// Boundary dimension; the space is `H^{n+1}`.
    pub n: u32,
    pub r0: f64,
    /// Step height (Step only).
    pub c: f64,
    /// Conformal factor inside the ball (Transparent only).
    pub kappa: f64,
}

impl ModelSpec {
    pub fn background(n: u32) -> Self {
        ModelSpec { kind: ModelKind::Background, n, r0: 0.0, c: 0.0, kappa: 1.0 }
    }
    pub fn obstacle(n: u32, r0: f64) -> Self {
        ModelSpec { kind: ModelKind::Obstacle, n, r0, c: 0.0, kappa: 1.0 }
    }
    pub fn step(r0: f64, c: f64) -> Self {
        ModelSpec { kind: ModelKind::Step, n: 1, r0, c, kappa: 1.0 }
    }
    pub fn transparent(r0: f64, kappa: f64) -> Self {
        ModelSpec { kind: ModelKind::Transparent, n: 1, r0, c: 0.0, kappa }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be >= 1".into()));
        }
        if self.kind == ModelKind::Background {
            return Ok(());
        }
        if !(self.r0 > 0.0 && self.r0.is_finite()) {
            return Err(Error::Config(format!("r0 = {} must be positive", self.r0)));
        }
        match self.kind {
            ModelKind::Step | ModelKind::Transparent if self.n != 1 => {
                Err(Error::Config("step and transparent models are defined for n = 1 only".into()))
            }
            ModelKind::Step if !self.c.is_finite() => Err(Error::Config("step height must be finite".into())),
            ModelKind::Transparent if !(self.kappa > 0.0 && self.kappa.is_finite()) => {
                Err(Error::Config(format!("kappa = {} must be positive", self.kappa)))
            }
            _ => Ok(()),
        }
    }

    fn require_perturbed(&self) -> Result<()> {
        self.validate()?;
        if self.kind == ModelKind::Background {
            return Err(Error::Config("operation needs a perturbed model".into()));
        }
        Ok(())
    }

    /// Half the boundary dimension, the centre of the critical line.
    pub fn half_n(&self) -> f64 {
        0.5 * self.n as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub l: u32,
    pub k: f64,
    pub weight: u64,
}

fn binom(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut v: u128 = 1;
    for i in 0..k {
        v = v * (n - i) as u128 / (i + 1) as u128;
    }
    v as u64
}

/// Dimension of the degree-l spherical harmonics on `S^n`; for n = 1 the
/// modes `+-l` are merged, giving 1 for l = 0 and 2 otherwise.
pub fn mode_weight(n: u32, l: u32) -> u64 {
    let (n, l) = (n as u64, l as u64);
    if n == 1 {
        return if l == 0 { 1 } else { 2 };
    }
    let a = binom(l + n, n);
    let b = if l >= 2 { binom(l + n - 2, n) } else { 0 };
    a - b
}

pub fn mode(n: u32, l: u32) -> Mode {
    Mode { l, k: l as f64 + 0.5 * (n as f64 - 1.0), weight: mode_weight(n, l) }
}

fn order_degree(n: u32, l: u32, s: C64) -> (f64, C64) {
    (l as f64 + 0.5 * (n as f64 - 1.0), s - 0.5 * (n as f64 + 1.0))
}

/// Diagonal element of the unperturbed scattering matrix,
/// `2^{n-2s} Gamma(n/2-s) Gamma(l+s) / (Gamma(s-n/2) Gamma(l+n-s))`.
pub fn s0_element(n: u32, l: u32, s: C64) -> Result<C64> {
    let h = 0.5 * n as f64;
    let l = l as f64;
    if s == C64::new(h, 0.0) {
        return Ok(C64::new(-1.0, 0.0));
    }
    let g1 = cgamma_scaled(h - s).map_err(|_| Error::Pole { what: "S0 element: Gamma(n/2 - s)", at: s })?;
    let g2 = cgamma_scaled(l + s).map_err(|_| Error::Pole { what: "S0 element: Gamma(l + s)", at: s })?;
    let v = Scaled::from_ln((n as f64 - 2.0 * s) * LN_2) * g1 * g2 * rgamma_scaled(s - h) * rgamma_scaled(l + n as f64 - s);
    if v.ln_abs() > 700.0 {
        return Err(Error::Overflow("S0 element"));
    }
    Ok(v.to_c64())
}

/// `cos(pi nu) Gamma(k - nu)`, finite through the poles when k is a half-integer.
fn cos_gamma(k: f64, nu: C64) -> Result<Scaled> {
    if (k - k.floor() - 0.5).abs() < 1e-12 {
        return Ok(rgamma_scaled(1.0 - k + nu) * (PI * sinpi(k)));
    }
    let g = cgamma_scaled(k - nu).map_err(|_| Error::Pole { what: "Gamma(k - nu)", at: nu })?;
    match ln_cos_pi(nu) {
        Some(lc) => Ok(g.mul_exp(lc)),
        None => Ok(Scaled::ZERO),
    }
}

/// Degree of the interior solution for the step and transparent models.
fn interior_degree(model: &ModelSpec, s: C64) -> C64 {
    let rad = match model.kind {
        ModelKind::Step => (s - 0.5) * (s - 0.5) + model.c,
        _ => model.kappa * model.kappa * s * (s - 1.0) + 0.25,
    };
    rad.sqrt() - 0.5
}

fn wronskian(a: &LegValue, b: &LegValue) -> (Scaled, f64) {
    let t1 = a.value * b.deriv;
    let t2 = a.deriv * b.value;
    let w = t1 - t2;
    let big = t1.ln_abs().max(t2.ln_abs());
    let loss = if w.is_zero() { f64::INFINITY } else { (big - w.ln_abs()).exp() };
    (w, loss.max(1.0) * a.loss.max(b.loss))
}

struct Matching {
    xp: Scaled,
    xq: Scaled,
    /// cancellation in X_Q
    loss_q: f64,
}

fn matching(model: &ModelSpec, l: u32, s: C64, want_p: bool) -> Result<Matching> {
    model.require_perturbed()?;
    let (k, nu) = order_degree(model.n, l, s);
    let z = model.r0.cosh();
    let q = leg_q_scaled(k, nu, z)?;
    match model.kind {
        ModelKind::Obstacle => {
            let xp = if want_p { leg_p_scaled(k, nu, z)?.value } else { Scaled::ZERO };
            Ok(Matching { xp, xq: q.value, loss_q: q.loss })
        }
        _ => {
            let inner = leg_p_scaled(k, interior_degree(model, s), z)?;
            let (xq, loss_q) = wronskian(&q, &inner);
            let xp = if want_p { wronskian(&leg_p_scaled(k, nu, z)?, &inner).0 } else { Scaled::ZERO };
            Ok(Matching { xp, xq, loss_q })
        }
    }
}

/// Entire function of s whose zeros in mode l are the resonances:
/// `Q^k_nu(cosh r0)` for the obstacle, `W[Q^k_nu, P^{-k}_omega](cosh r0)` for
/// the step and transparent models.
pub fn secular(model: &ModelSpec, l: u32, s: C64) -> Result<Scaled> {
    Ok(matching(model, l, s, false)?.xq)
}

/// `eta = cos(pi nu) Gamma(k-nu) X_P / X_Q`; the relative element is `1 + eta`.
pub fn eta_scaled(model: &ModelSpec, l: u32, s: C64) -> Result<Scaled> {
    let m = matching(model, l, s, true)?;
    if m.xq.is_zero() || m.loss_q > 1e14 {
        return Err(Error::MatchingSingularity(s));
    }
    let (k, nu) = order_degree(model.n, l, s);
    Ok(cos_gamma(k, nu)? * m.xp / m.xq)
}

/// `[S_P S_0^{-1}]_l` in scaled form.
pub fn rel_element_scaled(model: &ModelSpec, l: u32, s: C64) -> Result<Scaled> {
    Ok(Scaled::ONE + eta_scaled(model, l, s)?)
}

pub fn rel_element(model: &ModelSpec, l: u32, s: C64) -> Result<C64> {
    let v = rel_element_scaled(model, l, s)?;
    if v.ln_abs() > 700.0 {
        return Err(Error::Overflow("relative scattering element"));
    }
    Ok(v.to_c64())
}

/// `[S_P(s)]_l`.
pub fn sp_element(model: &ModelSpec, l: u32, s: C64) -> Result<C64> {
    let rel = rel_element_scaled(model, l, s)?;
    let v = rel * Scaled::from_c64(s0_element(model.n, l, s)?);
    if v.ln_abs() > 700.0 {
        return Err(Error::Overflow("scattering element"));
    }
    Ok(v.to_c64())
}

/// Obstacle element from the quotient `Gamma(l+n-s)/Gamma(l+s) Q^k_{-nu-1}/Q^k_nu`.
pub fn rel_element_quotient(n: u32, r0: f64, l: u32, s: C64) -> Result<Scaled> {
    let (k, nu) = order_degree(n, l, s);
    let z = r0.cosh();
    let num = leg_q_scaled(k, -nu - 1.0, z)?.value;
    let den = leg_q_scaled(k, nu, z)?.value;
    if den.is_zero() {
        return Err(Error::MatchingSingularity(s));
    }
    let g = cgamma_scaled(l as f64 + n as f64 - s).map_err(|_| Error::Pole { what: "Gamma(l + n - s)", at: s })?;
    Ok(g * rgamma_scaled(l as f64 + s) * num / den)
}

/// `sin(pi k alpha) Gamma(k(1-alpha)+1/2) P^{-k}_{-1/2+k alpha}(cosh r0) / Q^k_{-1/2+k alpha}(cosh r0)`.
pub fn eta_k(k: f64, alpha: C64, r0: f64) -> Result<Scaled> {
    let nu = k * alpha - 0.5;
    let z = r0.cosh();
    let p = leg_p_scaled(k, nu, z)?;
    let q = leg_q_scaled(k, nu, z)?;
    if q.value.is_zero() {
        return Err(Error::MatchingSingularity(k * alpha));
    }
    Ok(cos_gamma(k, nu)? * p.value / q.value)
}

/// Poisson-kernel coefficient
/// `2^{(n-1)/2-s} pi^{1/2} Gamma(l+s)/Gamma(s-n/2+1) sinh(r)^{-(n-1)/2} P^{-k}_nu(cosh r)`.
pub fn poisson_coeff_scaled(n: u32, l: u32, s: C64, r: f64) -> Result<Scaled> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("Poisson coefficient at r = {r}")));
    }
    let (k, nu) = order_degree(n, l, s);
    let nf = n as f64;
    let g = cgamma_scaled(l as f64 + s).map_err(|_| Error::Pole { what: "Gamma(l + s)", at: s })?;
    let pre = Scaled::from_ln((0.5 * (nf - 1.0) - s) * LN_2 + 0.5 * PI.ln() - 0.5 * (nf - 1.0) * r.sinh().ln());
    Ok(pre * g * rgamma_scaled(s - 0.5 * nf + 1.0) * leg_p_scaled(k, nu, r.cosh())?.value)
}

pub fn poisson_coeff(n: u32, l: u32, s: C64, r: f64) -> Result<C64> {
    let v = poisson_coeff_scaled(n, l, s, r)?;
    if v.ln_abs() > 700.0 {
        return Err(Error::Overflow("Poisson coefficient"));
    }
    Ok(v.to_c64())
}

/// Free resolvent kernel at geodesic distance d > 0.
pub fn resolvent_kernel(n: u32, s: C64, d: f64) -> Result<C64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Domain(format!("resolvent kernel at distance {d}")));
    }
    let nf = n as f64;
    let sigma = (0.5 * d).cosh().powi(2);
    let g = cgamma_scaled(s).map_err(|_| Error::Pole { what: "resolvent kernel: Gamma(s)", at: s })?;
    let f = hyp2f1(s, s - 0.5 * (nf - 1.0), 2.0 * s - nf + 1.0, C64::new(1.0 / sigma, 0.0))?;
    let pre = Scaled::from_ln((-2.0 * s - 1.0) * LN_2 - 0.5 * nf * PI.ln() - s * sigma.ln());
    let v = pre * g * rgamma_scaled(s - 0.5 * nf + 1.0) * f;
    Ok(v.to_c64())
}
