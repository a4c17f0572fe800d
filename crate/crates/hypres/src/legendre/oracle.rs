//! Independent reference values from direct integration of the radial
//! Legendre equation `w'' + coth(r) w' = (nu(nu+1) + mu^2/sinh^2 r) w`.
//! Slow; meant for cross-validation only.

use crate::error::{Error, Result};
use crate::ode::integrate_linear;
use crate::scaled::Scaled;
use crate::specialfn::{cgamma_scaled, cos_pi, rgamma_scaled};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const TOL: f64 = 1e-13;

/// `(p, q)` with `w'' = p w' + q w` in the variable r.
pub fn radial_coefficients(mu: f64, nu: C64) -> impl Fn(f64) -> (C64, C64) {
    let lam = nu * (nu + 1.0);
    move |r: f64| {
        let sh = r.sinh();
        (C64::new(-r.cosh() / sh, 0.0), lam + mu * mu / (sh * sh))
    }
}

/// Integrate from a seed `r -> (w, dw/dr)` given near `r_seed` to the radii
/// `r_out` (all on one side of `r_seed`). Returns `(w, dw/dr)` per radius.
pub fn ode_oracle(
    mu: f64,
    nu: C64,
    r_seed: f64,
    seed: &dyn Fn(f64) -> Result<(Scaled, Scaled)>,
    r_out: &[f64],
) -> Result<Vec<(Scaled, Scaled)>> {
    if !(r_seed > 0.0) || r_out.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Domain("oracle radii must be positive".into()));
    }
    let up = r_out.iter().all(|&r| r >= r_seed);
    let down = r_out.iter().all(|&r| r <= r_seed);
    if !(up || down) {
        return Err(Error::Domain("oracle radii must lie on one side of the seed".into()));
    }
    let (w, wr) = seed(r_seed)?;
    let scale = w.ln_abs().max(wr.ln_abs());
    if !scale.is_finite() {
        return Err(Error::Ode("zero or non-finite seed".into()));
    }
    let norm = |v: Scaled| v.mul_exp(C64::new(-scale, 0.0)).to_c64();
    // the seed must satisfy the ODE
    let h = 1e-2 * r_seed.min(1.0) / (1.0 + nu.norm() + mu);
    let wr_at = |d: f64| seed(r_seed + d).map(|v| norm(v.1));
    let coef = radial_coefficients(mu, nu);
    let (p, q) = coef(r_seed);
    let wrr = (8.0 * (wr_at(h)? - wr_at(-h)?) - (wr_at(2.0 * h)? - wr_at(-2.0 * h)?)) / (12.0 * h);
    let resid = (wrr - p * norm(wr) - q * norm(w)).norm();
    let size = (p * norm(wr)).norm() + (q * norm(w)).norm() + wrr.norm();
    if resid > 1e-5 * size {
        return Err(Error::Ode(format!("seed inconsistent with the ODE (relative residual {:.1e})", resid / size)));
    }
    let mut order: Vec<usize> = (0..r_out.len()).collect();
    order.sort_by(|&a, &b| (r_out[a] - r_seed).abs().total_cmp(&(r_out[b] - r_seed).abs()));
    let targets: Vec<f64> = order.iter().map(|&i| r_out[i]).collect();
    let sol = integrate_linear(coef, r_seed, [norm(w), norm(wr)], &targets, TOL)?;
    let mut out = vec![(Scaled::ZERO, Scaled::ZERO); r_out.len()];
    for (j, &i) in order.iter().enumerate() {
        let (a, b) = sol[j];
        out[i] = (a.mul_exp(C64::new(scale, 0.0)), b.mul_exp(C64::new(scale, 0.0)));
    }
    Ok(out)
}

/// Frobenius series of `P^{-mu}_nu(cosh r)` and its r-derivative at small r.
fn p_small_r(mu: f64, nu: C64, r: f64) -> Result<(Scaled, Scaled)> {
    let z = r.cosh();
    let x = 0.5 * (1.0 - z);
    let mut t = C64::new(1.0, 0.0);
    let mut s = t;
    let mut ds = C64::new(0.0, 0.0);
    for j in 0..200 {
        let jf = j as f64;
        t *= (jf - nu) * (nu + jf + 1.0) * x / ((jf + 1.0) * (mu + 1.0 + jf));
        s += t;
        ds += t * (jf + 1.0) / x;
        if t.norm() < 1e-18 * s.norm() {
            break;
        }
    }
    let pre = Scaled::from_ln(C64::new(0.5 * mu * ((z - 1.0) / (z + 1.0)).ln(), 0.0)) * rgamma_scaled(C64::new(mu + 1.0, 0.0));
    let sh = r.sinh();
    let dz = s * (mu / (z * z - 1.0)) - ds * 0.5;
    Ok((pre * s, pre * dz * sh))
}

/// `P^{-mu}_nu(cosh r)` and its r-derivative by outward integration from r = 0.02.
pub fn oracle_p(mu: f64, nu: C64, r_out: &[f64]) -> Result<Vec<(Scaled, Scaled)>> {
    let r_seed = r_out.iter().fold(0.02_f64, |m, &r| m.min(0.5 * r));
    ode_oracle(mu, nu, r_seed, &|r| p_small_r(mu, nu, r), r_out)
}

const FAR_Z: f64 = 1e9;

/// Olver's `Q^mu_nu(cosh r)` and its r-derivative. For `Re nu >= -1/2` by
/// inward integration from the large-z asymptote; otherwise through the
/// connection formula with the other two oracle solutions.
pub fn oracle_q(mu: f64, nu: C64, r_out: &[f64]) -> Result<Vec<(Scaled, Scaled)>> {
    if nu.re >= -0.5 {
        let seed = |r: f64| -> Result<(Scaled, Scaled)> {
            let z = r.cosh();
            let l = 0.5 * PI.ln() - (nu + 1.0) * (2.0 * z).ln() + 0.5 * mu * (1.0 - 1.0 / (z * z)).ln();
            let w = Scaled::from_ln(l) * rgamma_scaled(nu + 1.5);
            // d/dr of the leading terms
            let d = -(nu + 1.0) * r.tanh() + mu / (z * z * r.tanh());
            Ok((w, w * d))
        };
        return ode_oracle(mu, nu, FAR_Z.acosh(), &seed, r_out);
    }
    // Q_nu = Gamma(mu-nu) [Q_{-nu-1}/Gamma(mu+nu+1) - cos(pi nu) P_nu]
    let qm = oracle_q(mu, -nu - 1.0, r_out)?;
    let pv = oracle_p(mu, nu, r_out)?;
    let g = cgamma_scaled(mu - nu)?;
    let rg = rgamma_scaled(nu + mu + 1.0);
    let cs = cos_pi(nu);
    Ok(qm
        .iter()
        .zip(&pv)
        .map(|(q, p)| ((q.0 * rg - p.0 * cs) * g, (q.1 * rg - p.1 * cs) * g))
        .collect())
}
