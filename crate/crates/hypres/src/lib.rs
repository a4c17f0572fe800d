//! Numerics for scattering resonances of radial perturbations of the
//! hyperbolic space `H^{n+1}`: Legendre functions of complex degree, mode
//! secular functions and their zeros, the relative scattering phase and
//! determinant, and the sharp constants of the resonance counting law.

pub mod error;
pub mod scaled;
pub mod specialfn;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
pub mod ode;
pub mod quad;
pub mod legendre;
pub mod models;
pub mod resonances;
pub mod asymptotics;
pub mod scattering;
