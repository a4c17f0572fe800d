use clap::{Args, ValueEnum};
use hypres::models::ModelSpec;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Obstacle,
    Step,
    Transparent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[arg(long, value_enum, default_value = "obstacle", global = true)]
    pub model: ModelArg,
    /// Boundary dimension; the space is H^{n+1}.
    #[arg(long, default_value_t = 1, global = true)]
    pub n: u32,
    /// Radius of the perturbed ball.
    #[arg(long, default_value_t = 1.0, global = true)]
    pub r0: f64,
    /// Potential height inside the ball (step model).
    #[arg(long, default_value_t = 1.0, global = true, allow_negative_numbers = true)]
    pub c: f64,
    /// Conformal factor inside the ball (transparent model).
    #[arg(long, default_value_t = 0.5, global = true)]
    pub kappa: f64,
    /// Radius of the resonance search and counting range.
    #[arg(long, default_value_t = 10.0, global = true)]
    pub tmax: f64,
    /// End of the phase trace on the critical line.
    #[arg(long = "xi-max", default_value_t = 40.0, global = true)]
    pub xi_max: f64,
    /// Output spacing of the phase trace.
    #[arg(long = "xi-step", default_value_t = 0.1, global = true)]
    pub xi_step: f64,
    /// Sampling step of the counting functions (jump points are always added).
    #[arg(long = "t-step", default_value_t = 0.05, global = true)]
    pub t_step: f64,
    /// Radius of the relative counting check.
    #[arg(long, default_value_t = 8.0, global = true)]
    pub a: f64,
    /// Newton step tolerance when polishing resonances.
    #[arg(long, default_value_t = 1e-10, global = true)]
    pub tol: f64,
    /// Keep resonances shared with the unperturbed background in the listing.
    #[arg(long = "with-background", global = true)]
    pub with_background: bool,
    /// Order of the Legendre functions (legendre-eval).
    #[arg(long, default_value_t = 0.0, global = true)]
    pub mu: f64,
    /// Real part of the degree (legendre-eval).
    #[arg(long = "nu-re", default_value_t = 0.5, global = true, allow_negative_numbers = true)]
    pub nu_re: f64,
    /// Imaginary part of the degree (legendre-eval).
    #[arg(long = "nu-im", default_value_t = 0.0, global = true, allow_negative_numbers = true)]
    pub nu_im: f64,
    /// Argument z > 1 (legendre-eval).
    #[arg(long, default_value_t = 2.0, global = true)]
    pub z: f64,
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: Format,
    /// Output file; standard output if absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("--{name} must be positive and finite, got {v}"))
    }
}

impl RunConfig {
    pub fn model_spec(&self) -> ModelSpec {
        match self.model {
            ModelArg::Obstacle => ModelSpec::obstacle(self.n, self.r0),
            ModelArg::Step => ModelSpec { n: self.n, ..ModelSpec::step(self.r0, self.c) },
            ModelArg::Transparent => ModelSpec { n: self.n, ..ModelSpec::transparent(self.r0, self.kappa) },
        }
    }

    /// Checks that need no computation; run before any subcommand starts.
    pub fn validate(&self) -> Result<(), String> {
        self.model_spec().validate().map_err(|e| e.to_string())?;
        positive("tmax", self.tmax)?;
        positive("xi-max", self.xi_max)?;
        positive("xi-step", self.xi_step)?;
        positive("t-step", self.t_step)?;
        positive("a", self.a)?;
        positive("tol", self.tol)?;
        positive("z", self.z - 1.0).map_err(|_| format!("--z must exceed 1, got {}", self.z))?;
        if self.tmax > 200.0 {
            return Err(format!("--tmax {} is beyond the supported range (200)", self.tmax));
        }
        if self.xi_step > self.xi_max {
            return Err("--xi-step exceeds --xi-max".into());
        }
        if self.t_step > self.tmax {
            return Err("--t-step exceeds --tmax".into());
        }
        if self.tol > 1e-4 {
            return Err(format!("--tol {} is too loose (at most 1e-4)", self.tol));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(format!("--mu must be non-negative, got {}", self.mu));
        }
        if !(self.nu_re.is_finite() && self.nu_im.is_finite()) {
            return Err("degree must be finite".into());
        }
        Ok(())
    }
}
