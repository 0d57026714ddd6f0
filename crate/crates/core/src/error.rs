use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument violates a precondition. The message names the bound.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `z` is a pole of the gamma function.
    #[error("gamma pole at z = {re} + {im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("hypergeometric series did not converge after {terms} terms (last term {residual:e})")]
    SeriesDivergence { terms: usize, residual: f64 },

    #[error("value overflowed in {0}")]
    Overflow(&'static str),

    #[error("step size underflow at r = {r} (h = {h:e})")]
    StepUnderflow { r: f64, h: f64 },

    #[error("no sign change of {what} in [{lo}, {hi}]")]
    NoSignChange { what: &'static str, lo: f64, hi: f64 },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("eigensolver did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    /// Near-singular linear system; `estimate` is the smallest pivot seen.
    #[error("near-singular system (smallest pivot {estimate:e})")]
    Singular { estimate: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
