use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("asymmetric dipole matrix: mu[{r},{s}] != mu[{s},{r}] (max deviation {deviation:e})")]
    AsymmetricDipoles { r: usize, s: usize, deviation: f64 },

    #[error("rotation matrix is not proper orthogonal: {0}")]
    NotRotation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An undamped energy denominator vanished.
    #[error(
        "resonance singularity at level {level} with multiple {multiple:+} of hbar*omega (|denominator| = {value:e})"
    )]
    Resonance { level: usize, multiple: i32, value: f64 },

    #[error("frequency mismatch: tensor evaluated at omega = {tensor}, mode has c|k| = {mode}")]
    FrequencyMismatch { tensor: f64, mode: f64 },

    #[error("separation {distance:e} between sites {a} and {b} is below cutoff {cutoff:e}")]
    Cutoff {
        a: usize,
        b: usize,
        distance: f64,
        cutoff: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
