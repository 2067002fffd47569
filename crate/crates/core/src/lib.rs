//! Numerical toolkit for absolute, normalised norms on the plane.
//!
//! A norm `‖·‖_E` on ℝ² is *absolute* when it only depends on the absolute
//! values of the coordinates and *normalised* when `‖(1,0)‖ = ‖(0,1)‖ = 1`.
//! Such a norm is determined by the upper boundary curve `f_E` of its unit
//! ball, and most questions about the norm (strict convexity, smoothness,
//! support functionals) reduce to questions about that concave curve.
//!
//! The crate is organised bottom-up:
//!
//! * [`norm`] builds and validates norms ([`NormSpec`]) and evaluates dual norms.
//! * [`boundary`] extracts `f_E`, its endpoint limits and certified one-sided
//!   derivative brackets.
//! * [`support`] computes support-functional sets and Gâteaux verdicts.
//! * [`sum`] checks the asymptotic ball conditions that govern whether the
//!   ball generated property passes to `X ⊕_E Y`, and verifies the metric
//!   inclusions behind that argument on finite-dimensional sums.
//!
//! Sampling loops run on rayon when the `parallel` feature is enabled (the
//! default); results are identical with and without it.

pub mod boundary;
pub mod error;
pub mod exec;
pub mod format;
pub mod norm;
pub mod sum;
pub mod support;
pub mod tolerance;
pub mod tri;

pub use boundary::{BoundaryCurve, ConvexityClass, DerivativeBracket};
pub use error::{Error, Result};
pub use exec::Exec;
pub use norm::{Functional, NormSpec, ValidationReport};
pub use sum::{BgpVerdict, ConditionWitness, Coordinate, FiniteSpace, InclusionReport};
pub use support::{GateauxVerdict, Side, SupportSet};
pub use tolerance::Tolerances;
pub use tri::Tri;
