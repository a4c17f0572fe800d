//! Gauss hypergeometric function 2F1(a, b; c; z).
//!
//! Certified region: |z| <= 0.7 by the direct series, and any z reachable
//! from there by the Pfaff map z -> z/(z-1) and/or the reflection
//! z -> 1-z (this covers the whole real axis below 1). Where the reflection
//! is degenerate or nearly so (c-a-b within 1e-3 of an integer) the direct
//! series is used instead out to |z| <= 0.97; beyond that such points are
//! rejected rather than evaluated with the logarithmic formulas.

use super::gamma::{is_nonpositive_integer, rgamma};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

const SERIES_RADIUS: f64 = 0.7;
const MAX_TERMS: usize = 5000;
const FALLBACK_RADIUS: f64 = 0.97;

/// Plain Gauss series; caller guarantees |z| < 1.
pub fn hyp2f1_series(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let mut sum = C64::new(1.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let hump = a.norm().max(b.norm()).max(c.norm());
    let mut ratio = 0.0;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        let q = (a + jf) * (b + jf) / ((c + jf) * (jf + 1.0));
        ratio = q.norm() * z.norm();
        term *= q * z;
        sum += term;
        if term.norm() == 0.0 {
            return Ok(sum);
        }
        if jf > hump && term.norm() <= 1e-17 * sum.norm() && ratio < 1.0 {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence { what: "hyp2f1 series", terms: MAX_TERMS, last_ratio: ratio })
}

fn is_integer(w: C64) -> bool {
    w.im.abs() < 1e-14 && (w.re - w.re.round()).abs() < 1e-12
}

fn near_integer(w: C64) -> bool {
    w.im.abs() < 1e-3 && (w.re - w.re.round()).abs() < 1e-3
}

/// Reflection z -> 1 - z (non-degenerate case only).
fn via_one_minus(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    let d = c - a - b;
    if is_integer(d) {
        return Err(Error::Domain(format!(
            "hyp2f1: degenerate transformation (c-a-b = {d} is an integer)"
        )));
    }
    let w = 1.0 - z;
    let g1 = rgamma(c - a) * rgamma(c - b) / rgamma(d);
    let g2 = rgamma(a) * rgamma(b) / rgamma(-d);
    let mut out = C64::new(0.0, 0.0);
    if g1.norm() != 0.0 {
        out += g1 * hyp2f1_series(a, b, 1.0 - d, w)?;
    }
    if g2.norm() != 0.0 {
        out += g2 * w.powc(d) * hyp2f1_series(c - a, c - b, d + 1.0, w)?;
    }
    Ok(out / rgamma(c))
}

pub fn hyp2f1(a: C64, b: C64, c: C64, z: C64) -> Result<C64> {
    for v in [a, b, c, z] {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Domain("hyp2f1 with non-finite input".into()));
        }
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { what: "hyp2f1 (c)", at: c });
    }
    if z.norm() <= SERIES_RADIUS {
        return hyp2f1_series(a, b, c, z);
    }
    let w = z / (z - 1.0);
    if w.norm() <= SERIES_RADIUS {
        return Ok((1.0 - z).powc(-a) * hyp2f1_series(a, c - b, c, w)?);
    }
    if z.norm() <= FALLBACK_RADIUS && (near_integer(c - a - b) || near_integer(b - a)) {
        return hyp2f1_series(a, b, c, z);
    }
    if (1.0 - z).norm() <= SERIES_RADIUS {
        return via_one_minus(a, b, c, z);
    }
    if (1.0 - w).norm() <= SERIES_RADIUS {
        return Ok((1.0 - z).powc(-a) * via_one_minus(a, c - b, c, w)?);
    }
    Err(Error::Domain(format!("hyp2f1: z = {z} outside the certified region")))
}
