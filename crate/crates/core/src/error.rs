use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma pole at argument {0}")]
    GammaPole(f64),

    #[error("energy {energy} sits on an oscillator pole")]
    EnergyPole { energy: f64 },

    #[error("{function}({a}, {b}, {x}) did not converge")]
    NonConvergence {
        function: &'static str,
        a: f64,
        b: f64,
        x: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate null space at E = {energy}")]
    Degenerate {
        energy: f64,
        directions: Vec<Vec<f64>>,
    },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error("ill-conditioned basis: min overlap eigenvalue {0:e}")]
    Basis(f64),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("parse error: {0}")]
    Parse(String),
}
