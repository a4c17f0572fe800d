use num_complex::Complex64 as C64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pole of {what} at {at}")]
    Pole { what: &'static str, at: C64 },

    #[error("overflow in {0}")]
    Overflow(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} did not converge after {terms} terms (last ratio {last_ratio:.3e})")]
    NonConvergence {
        what: &'static str,
        terms: usize,
        last_ratio: f64,
    },

    #[error("no certified evaluation method: {0}")]
    EvaluationRegion(String),

    #[error("branch ambiguity: {0}")]
    Branch(String),

    #[error("ode integration: {0}")]
    Ode(String),

    #[error("quadrature: {0}")]
    Quadrature(String),

    #[error("root finding: {0}")]
    RootFinding(String),

    /// `B_l(s) = 0`: the requested point is itself a resonance of the mode.
    #[error("matching singularity (resonance) at s = {0}")]
    MatchingSingularity(C64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
