//! Gamma, Airy Ai and Gauss 2F1 for complex arguments.

mod airy;
mod gamma;
mod hyp2f1;

pub use airy::{airy_ai, airy_ai_leading, airy_ai_scaled, AIRY_GUARD};
pub use gamma::{
    cgamma, cgamma_scaled, clgamma, cos_pi, cospi, is_nonpositive_integer, ln_cos_pi, ln_sin_pi,
    rgamma, rgamma_scaled, sin_pi, sinpi,
};
pub use hyp2f1::{hyp2f1, hyp2f1_series};
