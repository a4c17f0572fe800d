//! Turning-point quantities for `P^{-k}_{-1/2+k alpha}(cosh r)` and
//! `Q^k_{-1/2+k alpha}(cosh r)` at large k: the Liouville variable phi, its
//! Airy-uniform counterpart zeta, the endpoint constants p and q, the
//! coefficients f, g of the reduced equation in z = cosh r, the
//! perturbation psi, and the resulting uniform approximations.
//!
//! Principal branches throughout, for `arg alpha in [0, pi/2]`. On the
//! positive real axis the values are the limits from above; numerically
//! alpha is lifted by `1e-14 |alpha|` into the upper half-plane.

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use crate::specialfn::{airy_ai_scaled, cgamma_scaled};
use num_complex::Complex64 as C64;
use std::f64::consts::{FRAC_PI_2, LN_2, PI};

/// Radius of the disk around alpha = 1 where the closed forms are replaced
/// by their limits.
pub const ALPHA_ONE_DISK: f64 = 1e-6;

#[derive(Clone, Copy, Debug)]
pub struct TurningData {
    pub alpha: C64,
    pub r: f64,
    pub phi: C64,
    pub zeta: C64,
    pub f: C64,
    pub g: C64,
    pub psi: C64,
    pub p: C64,
    pub q: C64,
}

fn lift(a: C64) -> C64 {
    let m = a.norm();
    if a.im < 1e-14 * m {
        C64::new(a.re, 1e-14 * m)
    } else {
        a
    }
}

/// `a log y`, zero when `a = 0` whatever y is.
fn xlog(a: C64, y: C64) -> C64 {
    if a.norm() == 0.0 {
        C64::new(0.0, 0.0)
    } else {
        a * y.ln()
    }
}

fn check_sector(alpha: C64) -> Result<()> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::Domain("non-finite alpha".into()));
    }
    if alpha.norm() > 0.0 && (alpha.im < -1e-12 * alpha.norm() || alpha.re < -1e-12 * alpha.norm()) {
        return Err(Error::Domain(format!("alpha = {alpha} outside arg in [0, pi/2]")));
    }
    Ok(())
}

fn near_one(alpha: C64) -> bool {
    (alpha - 1.0).norm() < ALPHA_ONE_DISK
}

fn branch_guard(alpha: C64) -> Result<()> {
    if near_one(alpha) {
        return Err(Error::Branch(format!(
            "alpha = {alpha} is within {ALPHA_ONE_DISK:e} of 1; use the limit values"
        )));
    }
    Ok(())
}

/// `sqrt(1 + alpha^2 sinh^2 r)` and the cancellation-free
/// `(cosh r - w)/(cosh r + w) = sinh^2 r (1 - alpha^2)/(cosh r + w)^2`.
fn w_and_ratio(a: C64, r: f64) -> (C64, C64) {
    let (ch, sh) = (r.cosh(), r.sinh());
    let w = (1.0 + a * a * sh * sh).sqrt();
    let s = ch + w;
    (w, sh * sh * (1.0 - a * a) / (s * s))
}

/// phi from its closed form (errors inside the disk around alpha = 1).
pub fn phi_formula(alpha: C64, r: f64) -> Result<C64> {
    check_sector(alpha)?;
    branch_guard(alpha)?;
    let a = lift(alpha);
    let (w, ratio) = w_and_ratio(a, r);
    Ok(xlog(a, (a * r.cosh() + w) / (a * a - 1.0).sqrt()) + 0.5 * ratio.ln())
}

pub fn p_alpha(alpha: C64) -> Result<C64> {
    check_sector(alpha)?;
    branch_guard(alpha)?;
    let a = lift(alpha);
    Ok(xlog(0.5 * a, (a + 1.0) / (a - 1.0)) + 0.5 * (1.0 - a * a).ln())
}

pub fn q_alpha(alpha: C64) -> Result<C64> {
    check_sector(alpha)?;
    branch_guard(alpha)?;
    let a = lift(alpha);
    Ok(xlog(a, a / (a * a - 1.0).sqrt()) + 0.5 * ((1.0 - a) / (1.0 + a)).ln())
}

/// (phi, p, q), with the limit values inside the disk around alpha = 1.
fn phi_p_q(alpha: C64, r: f64) -> Result<(C64, C64, C64)> {
    check_sector(alpha)?;
    if near_one(alpha) {
        let i = C64::new(0.0, FRAC_PI_2);
        return Ok((r.sinh().ln() - i, LN_2 - i, -LN_2 - i));
    }
    Ok((phi_formula(alpha, r)?, p_alpha(alpha)?, q_alpha(alpha)?))
}

/// zeta with `(2/3) zeta^{3/2} = phi`, taking `arg phi` in `[-pi, pi/2]`.
fn zeta_of(phi: C64) -> C64 {
    let mut a = phi.arg();
    if a > FRAC_PI_2 + 1e-12 {
        a -= 2.0 * PI;
    }
    C64::from_polar((1.5 * phi.norm()).powf(2.0 / 3.0), 2.0 * a / 3.0)
}

pub fn turning_data(alpha: C64, r: f64) -> Result<TurningData> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("turning data at r = {r}")));
    }
    let (phi, p, q) = phi_p_q(alpha, r)?;
    let zeta = zeta_of(phi);
    let a = lift(alpha);
    let z = r.cosh();
    let u = z * z - 1.0;
    let a2 = a * a;
    let f = (1.0 + a2 * u) / (u * u);
    let g = C64::new(-(u + 4.0) / (4.0 * u * u), 0.0);
    let inner = -2.0 / (u * u * u) - a2 / (u * u);
    let fz = inner * (2.0 * z);
    let fzz = inner * 2.0 + (6.0 / (u * u * u * u) + a2 * 2.0 / (u * u * u)) * (4.0 * z * z);
    let psi = zeta * (4.0 * f * fzz - 5.0 * fz * fz) / (16.0 * f * f * f) + zeta * g / f + 5.0 / (16.0 * zeta * zeta);
    Ok(TurningData { alpha, r, phi, zeta, f, g, psi, p, q })
}

/// Same as [`turning_data`] for any `Re alpha >= 0`, by conjugation.
pub fn turning_data_any(alpha: C64, r: f64) -> Result<TurningData> {
    if alpha.im >= 0.0 {
        return turning_data(alpha, r);
    }
    let t = turning_data(alpha.conj(), r)?;
    Ok(TurningData {
        alpha,
        r,
        phi: t.phi.conj(),
        zeta: t.zeta.conj(),
        f: t.f.conj(),
        g: t.g.conj(),
        psi: t.psi.conj(),
        p: t.p.conj(),
        q: t.q.conj(),
    })
}

/// psi from the closed-form combination for `psi f^{1/2} zeta^{-1/2}`.
pub fn psi_rearranged(alpha: C64, r: f64) -> Result<C64> {
    let t = turning_data(alpha, r)?;
    let a = lift(alpha);
    let (ch, sh) = (r.cosh(), r.sinh());
    let d = 1.0 + a * a * sh * sh;
    let sd = d.sqrt();
    let sz = t.zeta.sqrt();
    let a2 = a * a;
    let combo = -sz * (a2 * a2 * sh * sh - 4.0 * a2 * ch * ch + 1.0) / (4.0 * d * d * sd)
        + 5.0 / 16.0 * sd / (t.zeta * t.zeta * sz * sh * sh);
    Ok(combo * sz * sh * sh / sd)
}

/// Airy-uniform approximations of `(P^{-k}_{-1/2+k alpha}(cosh r), Q^k_{-1/2+k alpha}(cosh r))`.
pub fn uniform_pq(k: f64, alpha: C64, r: f64) -> Result<(Scaled, Scaled)> {
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("uniform approximation needs k >= 1, got {k}")));
    }
    let t = turning_data(alpha, r)?;
    let a = lift(alpha);
    let d = 1.0 + a * a * r.sinh().powi(2);
    let common = k.ln() / 6.0 + 0.25 * t.zeta.ln() - 0.25 * d.ln();
    let k23 = k.powf(2.0 / 3.0);
    let rot = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let lp = (2.0 * PI.sqrt()).ln() + common + C64::new(0.0, PI / 6.0) - k * t.p;
    let p = Scaled::from_ln(lp) * airy_ai_scaled(k23 * rot * t.zeta)? / cgamma_scaled(C64::new(k + 1.0, 0.0))?;
    let lq = (2.0 * PI).ln() + common + 0.5 * (a / 2.0).ln() + k * t.q;
    let q = Scaled::from_ln(lq) * airy_ai_scaled(k23 * t.zeta)? / cgamma_scaled(k * a + 1.0)?;
    Ok((p, q))
}

/// Logarithm of `|Gamma(k alpha+1)/(alpha^{1/2} Gamma(k+1))| exp(k Re[2 phi - p - q])`,
/// the size of `|P/Q|` up to k-independent factors.
pub fn ln_ratio_estimate(k: f64, alpha: C64, r: f64, eps: f64) -> Result<f64> {
    check_sector(alpha)?;
    if alpha.arg() > FRAC_PI_2 - eps {
        return Err(Error::Domain(format!("arg alpha = {} exceeds pi/2 - {eps}", alpha.arg())));
    }
    if (k * alpha).norm() < 1.0 {
        return Err(Error::Domain("ratio estimate needs |k alpha| >= 1".into()));
    }
    let (phi, p, q) = phi_p_q(alpha, r)?;
    let lg = cgamma_scaled(k * alpha + 1.0)?.ln_abs();
    let lk = cgamma_scaled(C64::new(k + 1.0, 0.0))?.ln_abs();
    Ok(lg - 0.5 * alpha.norm().ln() - lk + k * (2.0 * phi - p - q).re)
}

pub fn ratio_estimate(k: f64, alpha: C64, r: f64, eps: f64) -> Result<f64> {
    Ok(ln_ratio_estimate(k, alpha, r, eps)?.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_at_alpha_one() {
        for r in [0.2, 1.0, 3.0] {
            let t = turning_data(C64::new(1.0, 0.0), r).unwrap();
            assert!((t.phi.re - r.sinh().ln()).abs() < 1e-14);
            // continuity with the closed form just outside the disk
            let near = phi_formula(C64::new(1.0 + 1e-5, 0.0), r).unwrap();
            assert!((near - t.phi).norm() < 1e-3);
        }
        assert!(matches!(phi_formula(C64::new(1.0, 0.0), 1.0), Err(Error::Branch(_))));
    }

    #[test]
    fn zeta_branch_identity() {
        for (a, r) in [(C64::new(0.8, 0.0), 0.5), (C64::from_polar(2.0, 1.2), 1.7), (C64::new(0.0, 0.7), 0.3)] {
            let t = turning_data(a, r).unwrap();
            let back = 2.0 / 3.0 * t.zeta.powf(1.5);
            assert!((back - t.phi).norm() < 1e-12 * t.phi.norm().max(1.0));
        }
    }

    #[test]
    fn psi_two_ways() {
        for (a, r) in [(C64::new(0.8, 0.0), 0.5), (C64::from_polar(2.0, 1.2), 1.7), (C64::from_polar(0.3, 0.4), 2.2)] {
            let t = turning_data(a, r).unwrap();
            let v = psi_rearranged(a, r).unwrap();
            assert!((t.psi - v).norm() < 1e-9 * t.psi.norm());
        }
    }
}
