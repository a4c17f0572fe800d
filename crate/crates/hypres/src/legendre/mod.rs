//! Legendre functions `P^{-mu}_nu(z)` and Olver's `Q^mu_nu(z)` (the
//! entire-in-nu normalisation `e^{-mu pi i} Q^mu_nu / Gamma(nu+mu+1)`) on
//! `z > 1`, for complex degree and real order `mu >= 0`.
//!
//! Evaluation is by regularized Gauss series in one of three variables,
//! chosen by measured cancellation; the radial ODE covers what the series
//! cannot. Values and z-derivatives come back in scaled form.

mod oracle;
mod series;
mod turning;

pub use oracle::{ode_oracle, oracle_p, oracle_q, radial_coefficients};
pub use turning::{
    ln_ratio_estimate, p_alpha, phi_formula, psi_rearranged, q_alpha, ratio_estimate, turning_data,
    turning_data_any, uniform_pq, TurningData,
};

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use crate::specialfn::{ln_cos_pi, rgamma_scaled};
use num_complex::Complex64 as C64;
use series::reg_series;
use std::f64::consts::PI;

/// Below this z the 1/z^2 series for Q converges too slowly; the ODE takes over.
pub const Q_SERIES_MIN_Z: f64 = 1.02;
/// The `(1-z)/2` series for P is used only below this z.
pub const P_NEAR_ONE_MAX_Z: f64 = 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Series in `(1-z)/2`.
    NearOne,
    /// Series in `(z-1)/(z+1)`.
    Pfaff,
    /// P from two Q values by the connection formula.
    Connection,
    /// Series in `1/z^2`.
    InverseSquare,
    /// Radial ODE integration from a point where a series is reliable.
    Ode,
}

#[derive(Clone, Copy, Debug)]
pub struct LegValue {
    pub value: Scaled,
    /// d/dz of the value.
    pub deriv: Scaled,
    /// Cancellation factor of the method used (1 = none).
    pub loss: f64,
    pub method: Method,
}

fn check_args(mu: f64, nu: C64, z: f64) -> Result<()> {
    if !(z > 1.0 && z.is_finite()) {
        return Err(Error::Domain(format!("Legendre argument z = {z} must be > 1")));
    }
    if !(mu >= 0.0 && mu.is_finite()) {
        return Err(Error::Domain(format!("Legendre order {mu} must be >= 0")));
    }
    if !(nu.re.is_finite() && nu.im.is_finite()) {
        return Err(Error::Domain("non-finite Legendre degree".into()));
    }
    Ok(())
}

fn q_series(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    let a = nu * 0.5 + mu * 0.5 + 1.0;
    let b = a - 0.5;
    let c = nu + 1.5;
    let s = reg_series(a, b, c, 1.0 / (z * z))?;
    let lnc = 0.5 * PI.ln() + 0.5 * mu * (z * z - 1.0).ln()
        - (nu + 1.0) * std::f64::consts::LN_2
        - (nu + mu + 1.0) * z.ln();
    let cs = Scaled::from_ln(lnc);
    let fac = mu * z / (z * z - 1.0) - (nu + mu + 1.0) / z;
    Ok(LegValue {
        value: cs * s.sum,
        deriv: cs * (s.sum * fac - s.dsum * (2.0 / (z * z * z))),
        loss: s.loss,
        method: Method::InverseSquare,
    })
}

fn p_near_one(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    let s = reg_series(-nu, nu + 1.0, C64::new(mu + 1.0, 0.0), 0.5 * (1.0 - z))?;
    let pre = Scaled::from_ln(C64::new(0.5 * mu * ((z - 1.0) / (z + 1.0)).ln(), 0.0));
    let fac = mu / (z * z - 1.0);
    Ok(LegValue {
        value: pre * s.sum,
        deriv: pre * (s.sum * fac - s.dsum * 0.5),
        loss: s.loss,
        method: Method::NearOne,
    })
}

fn reflect(nu: C64) -> C64 {
    if nu.re < -0.5 {
        -1.0 - nu
    } else {
        nu
    }
}

fn p_pfaff(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    let nu = reflect(nu);
    let x = (z - 1.0) / (z + 1.0);
    let s = reg_series(nu + 1.0, nu + mu + 1.0, C64::new(mu + 1.0, 0.0), x)?;
    let lnpre = 0.5 * mu * x.ln() - (nu + 1.0) * (0.5 * (z + 1.0)).ln();
    let pre = Scaled::from_ln(lnpre);
    let fac = mu / (z * z - 1.0) - (nu + 1.0) / (z + 1.0);
    Ok(LegValue {
        value: pre * s.sum,
        deriv: pre * (s.sum * fac + s.dsum * (2.0 / ((z + 1.0) * (z + 1.0)))),
        loss: s.loss,
        method: Method::Pfaff,
    })
}

/// `cos(pi nu) P^{-mu}_nu = Q^mu_{-nu-1}/Gamma(mu+nu+1) - Q^mu_nu/Gamma(mu-nu)`.
fn p_connection(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    let lc = ln_cos_pi(nu).ok_or_else(|| Error::EvaluationRegion("connection formula at cos(pi nu) = 0".into()))?;
    let q1 = q_eval(mu, -nu - 1.0, z)?;
    let q2 = q_eval(mu, nu, z)?;
    let g1 = rgamma_scaled(nu + mu + 1.0);
    let g2 = rgamma_scaled(mu - nu);
    let t1 = q1.value * g1;
    let t2 = q2.value * g2;
    let d1 = q1.deriv * g1;
    let d2 = q2.deriv * g2;
    let inv_c = Scaled::from_ln(-lc);
    let v = t1 - t2;
    let dv = d1 - d2;
    let big = t1.ln_abs().max(t2.ln_abs());
    let dbig = d1.ln_abs().max(d2.ln_abs());
    let loss_v = if v.is_zero() { f64::INFINITY } else { (big - v.ln_abs()).exp() };
    let loss_d = if dv.is_zero() { f64::INFINITY } else { (dbig - dv.ln_abs()).exp() };
    Ok(LegValue {
        value: v * inv_c,
        deriv: dv * inv_c,
        loss: loss_v.max(loss_d).max(1.0) * q1.loss.max(q2.loss),
        method: Method::Connection,
    })
}

/// Integrate the radial ODE from `(r_from, value, d/dz)` to `r_to`.
fn ode_transfer(mu: f64, nu: C64, r_from: f64, v: &LegValue, r_to: f64) -> Result<LegValue> {
    let sh = r_from.sinh();
    let w = v.value;
    let wr = v.deriv * sh;
    // normalise the seed and restore the scale afterwards
    let scale = w.ln_abs().max(wr.ln_abs());
    let y0 = [w.mul_exp(C64::new(-scale, 0.0)).to_c64(), wr.mul_exp(C64::new(-scale, 0.0)).to_c64()];
    let out = crate::ode::integrate_linear(radial_coefficients(mu, nu), r_from, y0, &[r_to], 1e-13)?;
    let (val, dr) = out[0];
    Ok(LegValue {
        value: val.mul_exp(C64::new(scale, 0.0)),
        deriv: dr.mul_exp(C64::new(scale, 0.0)) * (1.0 / r_to.sinh()),
        loss: v.loss,
        method: Method::Ode,
    })
}

fn q_eval(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    if z >= Q_SERIES_MIN_Z {
        return q_series(mu, nu, z);
    }
    let seed = q_series(mu, nu, Q_SERIES_MIN_Z)?;
    ode_transfer(mu, nu, Q_SERIES_MIN_Z.acosh(), &seed, z.acosh())
}

/// `Q^mu_nu(z)` (Olver normalisation) with its z-derivative.
pub fn leg_q_scaled(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    check_args(mu, nu, z)?;
    q_eval(mu, nu, z)
}

const GOOD_LOSS: f64 = 1e2;

/// `P^{-mu}_nu(z)` with its z-derivative; the method of least cancellation wins.
pub fn leg_p_scaled(mu: f64, nu: C64, z: f64) -> Result<LegValue> {
    check_args(mu, nu, z)?;
    let mut best = p_pfaff(mu, nu, z).ok();
    let better = |b: &Option<LegValue>, c: LegValue| b.map_or(true, |b| c.loss < b.loss);
    if best.map_or(true, |b| b.loss > GOOD_LOSS) && z < P_NEAR_ONE_MAX_Z {
        if let Ok(c) = p_near_one(mu, nu, z) {
            if better(&best, c) {
                best = Some(c);
            }
        }
    }
    if best.map_or(true, |b| b.loss > GOOD_LOSS) && z >= Q_SERIES_MIN_Z {
        if let Ok(c) = p_connection(mu, nu, z) {
            if better(&best, c) {
                best = Some(c);
            }
        }
    }
    if best.map_or(true, |b| b.loss > 1e6) {
        // outward from small r, where the near-one series is benign
        let nr = reflect(nu);
        let r = z.acosh();
        let r_seed = (0.5 * r).min(0.02);
        if let Ok(seed) = p_near_one(mu, nr, r_seed.cosh()) {
            if seed.loss < 10.0 {
                if let Ok(c) = ode_transfer(mu, nr, r_seed, &seed, r) {
                    if better(&best, c) {
                        best = Some(c);
                    }
                }
            }
        }
    }
    best.ok_or_else(|| Error::EvaluationRegion(format!("P^-{mu}_{nu}({z})")))
}

fn finish(v: LegValue, derivative: bool, what: &'static str) -> Result<C64> {
    let s = if derivative { v.deriv } else { v.value };
    if s.ln_abs() > 700.0 {
        return Err(Error::Overflow(what));
    }
    if v.loss > 1e13 {
        return Err(Error::EvaluationRegion(format!("{what}: cancellation {:.1e}", v.loss)));
    }
    Ok(s.to_c64())
}

/// `P^{-k}_nu(z)` or, with `derivative`, its z-derivative.
pub fn leg_p(k: f64, nu: C64, z: f64, derivative: bool) -> Result<C64> {
    finish(leg_p_scaled(k, nu, z)?, derivative, "Legendre P")
}

/// Olver's `Q^k_nu(z)` or, with `derivative`, its z-derivative.
pub fn leg_q(k: f64, nu: C64, z: f64, derivative: bool) -> Result<C64> {
    finish(leg_q_scaled(k, nu, z)?, derivative, "Legendre Q")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn elementary_cases() {
        for z in [1.01, 1.5, 4.0, 30.0] {
            assert!((leg_p(0.0, c(1.0, 0.0), z, false).unwrap() - z).norm() < 1e-13 * z);
            assert!((leg_p(0.0, c(1.0, 0.0), z, true).unwrap() - 1.0).norm() < 1e-12);
            let q0 = 0.5 * ((z + 1.0) / (z - 1.0)).ln();
            assert!((leg_q(0.0, c(0.0, 0.0), z, false).unwrap() - q0).norm() < 1e-12 * q0.abs());
            let dq0 = -1.0 / (z * z - 1.0);
            assert!((leg_q(0.0, c(0.0, 0.0), z, true).unwrap() - dq0).norm() < 1e-11 * dq0.abs());
        }
        for r in [0.3_f64, 1.2, 2.5] {
            let v = leg_p(1.0, c(1.0, 0.0), r.cosh(), false).unwrap();
            assert!((v - r.sinh() / 2.0).norm() < 1e-13 * r.sinh());
        }
    }

    #[test]
    fn methods_agree() {
        let z = 1.7;
        for (mu, nu) in [(0.0, c(0.3, 2.0)), (3.0, c(-2.2, 0.7)), (5.5, c(4.0, -6.0)), (2.0, c(-0.5, 9.0))] {
            let a = p_near_one(mu, nu, z).unwrap();
            let b = p_pfaff(mu, nu, z).unwrap();
            let cc = p_connection(mu, nu, z).unwrap();
            for o in [b, cc] {
                assert!((o.value.ratio(a.value) - 1.0).norm() < 1e-10, "{mu} {nu} {:?}", o.method);
                assert!((o.deriv.ratio(a.deriv) - 1.0).norm() < 1e-9, "{mu} {nu} {:?}", o.method);
            }
        }
    }

    #[test]
    fn q_asymptotic_large_z() {
        let (z, k, nu) = (50.0, 2.0, c(1.5, 0.0));
        let q = leg_q(k, nu, z, false).unwrap();
        let lead = PI.sqrt() * crate::specialfn::rgamma(nu + 1.5) * C64::new(2.0 * z, 0.0).powc(-nu - 1.0);
        assert!((q / lead - 1.0).norm() <= 10.0 / (z * z));
    }

    #[test]
    fn q_below_series_threshold() {
        // the ODE path must join the series continuously
        let (mu, nu) = (2.0, c(0.7, 1.3));
        let a = leg_q_scaled(mu, nu, 1.019_999).unwrap();
        let b = leg_q_scaled(mu, nu, 1.020_001).unwrap();
        assert_eq!(a.method, Method::Ode);
        assert!((a.value.ratio(b.value) - 1.0).norm() < 1e-4);
    }
}
