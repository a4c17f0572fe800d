//! Regularized Gauss series `sum_j (a)_j (b)_j x^j / (j! Gamma(c+j))` in
//! scaled arithmetic, with its x-derivative and a cancellation measure.

use crate::error::{Error, Result};
use crate::scaled::Scaled;
use crate::specialfn::rgamma_scaled;
use num_complex::Complex64 as C64;

const MAX_TERMS: usize = 40_000;

#[derive(Clone, Copy, Debug)]
pub(crate) struct SeriesOut {
    pub sum: Scaled,
    /// d/dx of the sum.
    pub dsum: Scaled,
    /// max |term| / |sum|, over both sums (1 means no cancellation).
    pub loss: f64,
}

pub(crate) fn reg_series(a: C64, b: C64, c: C64, x: f64) -> Result<SeriesOut> {
    if x.abs() >= 1.0 || x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("regularized series at x = {x}")));
    }
    // terms up to j0 go through 1/Gamma(c+j) directly
    let j0 = if c.re < 0.5 { (-c.re).ceil().max(0.0) as usize + 1 } else { 0 };
    let hump = a.norm().max(b.norm()).max(c.norm()) + 2.0;
    let mut pre = Scaled::ONE; // (a)_j (b)_j x^j / j!
    let mut term = Scaled::ZERO;
    let mut sum = Scaled::ZERO;
    let mut dsum = Scaled::ZERO; // sum of j * term_j
    let mut max_ln = f64::NEG_INFINITY;
    let mut max_dln = f64::NEG_INFINITY;
    let mut ratio: f64;
    for j in 0..MAX_TERMS {
        let jf = j as f64;
        if j <= j0 {
            term = pre * rgamma_scaled(c + jf);
        } else {
            let q = (a + jf - 1.0) * (b + jf - 1.0) * x / (jf * (c + jf - 1.0));
            term = term * q;
        }
        if !term.is_zero() {
            sum = sum + term;
            max_ln = max_ln.max(term.ln_abs());
            if j > 0 {
                let dt = term * jf;
                dsum = dsum + dt;
                max_dln = max_dln.max(dt.ln_abs());
            }
        }
        pre = pre * ((a + jf) * (b + jf) * x / (jf + 1.0));
        ratio = ((a + jf) * (b + jf) * x / ((c + jf) * (jf + 1.0))).norm();
        if j > j0 {
            if term.is_zero() {
                break;
            }
            if jf > hump && ratio < 1.0 && term.ln_abs() < sum.ln_abs() - 39.2 {
                break;
            }
        }
        if j + 1 == MAX_TERMS {
            return Err(Error::NonConvergence {
                what: "regularized Gauss series",
                terms: MAX_TERMS,
                last_ratio: ratio,
            });
        }
    }
    let loss_s = if sum.is_zero() { f64::INFINITY } else { (max_ln - sum.ln_abs()).exp() };
    let loss_d = if dsum.is_zero() {
        if max_dln == f64::NEG_INFINITY { 1.0 } else { f64::INFINITY }
    } else {
        (max_dln - dsum.ln_abs()).exp()
    };
    Ok(SeriesOut {
        sum,
        dsum: dsum * (1.0 / x),
        loss: loss_s.max(loss_d).max(1.0),
    })
}
