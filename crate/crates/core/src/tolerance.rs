//! Numerical thresholds shared by the boundary, support and sum modules.

use crate::error::{Error, Result};
use serde::Serialize;

/// Error bound on a root-found boundary value: bisection stops at width
/// `1e-15`, plus headroom for rounding in the membership test. Difference
/// quotients are widened by `2 * ROOT / h` to stay certified.
pub const ROOT: f64 = 1e-14;

/// Step ladder for derivative brackets, coarse to fine.
pub const H_LADDER: [f64; 6] = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7];

/// Thresholds that callers may override (the CLI exposes them as `--tol`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Bracket width below which a point counts as smooth.
    pub smooth: f64,
    /// Bracket width above which a point counts as a corner.
    pub corner: f64,
    /// Midpoint excess / decrement needed to call concavity or decrease strict.
    pub strict: f64,
    /// Excess at or below which a sampled triple counts as collinear.
    pub flat: f64,
    /// `f(1)` at or below this is treated as zero by the convexity classifier.
    pub endpoint_zero: f64,
    /// `f(1)` above this is treated as nonzero by the convexity classifier.
    pub endpoint_nonzero: f64,
    /// Slack for the mean-value certificate.
    pub mvt: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            smooth: 1e-6,
            corner: 1e-4,
            strict: 1e-9,
            flat: 1e-11,
            endpoint_zero: 1e-9,
            endpoint_nonzero: 1e-6,
            mvt: 1e-6,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 7] = [
        "smooth",
        "corner",
        "strict",
        "flat",
        "endpoint_zero",
        "endpoint_nonzero",
        "mvt",
    ];

    /// Overrides one named threshold.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value >= 0.0) {
            return Err(Error::Domain(format!(
                "tolerance {name} must be finite and non-negative, got {value}"
            )));
        }
        let slot = match name {
            "smooth" => &mut self.smooth,
            "corner" => &mut self.corner,
            "strict" => &mut self.strict,
            "flat" => &mut self.flat,
            "endpoint_zero" => &mut self.endpoint_zero,
            "endpoint_nonzero" => &mut self.endpoint_nonzero,
            "mvt" => &mut self.mvt,
            _ => {
                return Err(Error::Domain(format!(
                    "unknown tolerance `{name}` (known: {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}
