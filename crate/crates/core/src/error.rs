use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A norm description that does not define an absolute normalised norm.
    #[error("invalid norm spec: {0}")]
    Spec(String),

    /// Mini-language parse failure; `pos` is a byte offset into the input.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// Difference quotients crossed by more than the root-finding allowance,
    /// which a concave boundary curve cannot produce.
    #[error("concavity violation at x = {x}: right quotient {lo} exceeds left quotient {hi}")]
    ConcavityViolation { x: f64, lo: f64, hi: f64 },

    #[error("degenerate support functional: denominator {0:e} is numerically zero")]
    Degenerate(f64),

    /// Endpoint case analysis could not separate two candidate cases.
    #[error("undecided endpoint case: candidates {candidates:?} ({reason})")]
    UndecidedCase {
        candidates: Vec<String>,
        reason: String,
    },

    /// A hypothesis required by the operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub(crate) fn ensure_finite(v: &[f64], what: &str) -> Result<()> {
    if v.iter().all(|c| c.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be finite, got {v:?}")))
    }
}
