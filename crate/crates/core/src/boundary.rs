//! The upper boundary curve `f_E` of the unit ball.
//!
//! For `|x| < 1`, `f_E(x)` is the unique `y ∈ (0, 1]` with `‖(x, y)‖_E = 1`.
//! It is found here as `sup{t ∈ [0,1] : (x, t) ∈ B_E}` by bisection on the
//! membership predicate, which also behaves on flat pieces of the sphere
//! where `t ↦ ‖(x,t)‖_E` is locally constant. The values at `x = ±1` are the
//! limits from inside.
//!
//! `f_E` is concave, so difference quotients give certified enclosures of
//! the one-sided derivatives:
//!
//! ```text
//! (f(x+h) - f(x)) / h  <=  f′₊(x)  <=  f′₋(x)  <=  (f(x) - f(x-h)) / h
//! ```

use crate::error::{ensure_finite, Error, Result};
use crate::format::fmt17;
use crate::norm::NormSpec;
use crate::tolerance::{Tolerances, H_LADDER, ROOT};
use crate::tri::Tri;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

/// Width at which predicate bisection stops.
const BISECT_WIDTH: f64 = 1e-15;
/// Deepest dyadic level `1 - 2^-k` used for the endpoint limit.
const ENDPOINT_MAX_LEVEL: i32 = 40;
/// Successive endpoint estimates closer than this count as converged.
const ENDPOINT_STAGNATION: f64 = 1e-11;

#[derive(Debug, Clone, Copy)]
struct Key(f64);

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.0.total_cmp(&other.0) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Enclosure `[lo, hi]` of `f_E(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Enclosure {
    lo: f64,
    hi: f64,
}

impl Enclosure {
    fn value(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Endpoint limit `f_E(1) = f_E(-1)` together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointEstimate {
    pub value: f64,
    pub lower: f64,
    /// Dyadic level at which the estimate stopped.
    pub level: i32,
    pub stagnated: bool,
}

/// Certified enclosure `[lo, hi] ⊇ [f′₊(x), f′₋(x)]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeBracket {
    pub x: f64,
    pub lo: f64,
    pub hi: f64,
    /// Step used; zero for closed-form brackets.
    pub h_used: f64,
}

impl DerivativeBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, a: f64) -> bool {
        self.lo <= a && a <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConvexityClass {
    pub strictly_convex: Tri,
    pub strictly_monotone: Tri,
}

/// One row of a curve tabulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveRow {
    pub x: f64,
    pub f: f64,
    pub flo: f64,
    pub fhi: f64,
}

/// `f_E` for one norm, with a memo of computed values.
///
/// The memo is keyed by the exact bits of `x`; concurrent readers may both
/// compute a missing value, but the inserted value is always a complete one.
#[derive(Debug)]
pub struct BoundaryCurve {
    spec: NormSpec,
    tol: Tolerances,
    cache: RwLock<BTreeMap<Key, Enclosure>>,
    endpoint: OnceLock<EndpointEstimate>,
}

impl BoundaryCurve {
    pub fn new(spec: NormSpec) -> Self {
        BoundaryCurve::with_tolerances(spec, Tolerances::default())
    }

    pub fn with_tolerances(spec: NormSpec, tol: Tolerances) -> Self {
        BoundaryCurve {
            spec,
            tol,
            cache: RwLock::new(BTreeMap::new()),
            endpoint: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &NormSpec {
        &self.spec
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// Number of memoised abscissae.
    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    /// `f_E(x)` for `x ∈ [-1, 1]`, the endpoints taken as limits.
    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.enclosure(x)?.value())
    }

    /// `(flo, f, fhi)`: the value together with an enclosure.
    pub fn value_with_enclosure(&self, x: f64) -> Result<(f64, f64, f64)> {
        let e = self.enclosure(x)?;
        Ok((e.lo, e.value(), e.hi))
    }

    fn enclosure(&self, x: f64) -> Result<Enclosure> {
        ensure_finite(&[x], "x")?;
        if x.abs() > 1.0 {
            return Err(Error::Domain(format!(
                "boundary curve is defined on [-1, 1], got x = {x}"
            )));
        }
        if let Some(a) = self.spec.analytic_boundary() {
            let v = a.at(x).value;
            return Ok(Enclosure { lo: v, hi: v });
        }
        if x.abs() == 1.0 {
            let e = self.endpoint();
            return Ok(Enclosure {
                lo: e.lower,
                hi: e.value,
            });
        }
        Ok(self.interior(x))
    }

    fn interior(&self, x: f64) -> Enclosure {
        if let Some(e) = self.cache.read().expect("cache lock").get(&Key(x)) {
            return *e;
        }
        let e = self.bisect(x);
        self.cache.write().expect("cache lock").insert(Key(x), e);
        e
    }

    /// `sup{t ∈ [0,1] : (x, t) ∈ B_E}` by bisection.
    fn bisect(&self, x: f64) -> Enclosure {
        if self.spec.contains([x, 1.0]) {
            return Enclosure { lo: 1.0, hi: 1.0 };
        }
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while hi - lo > BISECT_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.spec.contains([x, mid]) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Enclosure { lo, hi }
    }

    /// Limit of `f_E` at `±1` (the curve is even).
    ///
    /// Walks `x_k = 1 - 2^-k`. By concavity the chord through two
    /// consecutive samples, extended to `x = 1`, overestimates the limit;
    /// the walk stops once that upper estimate stagnates. The result is
    /// further capped by the largest `t` with `(1, t)` still in the ball.
    pub fn endpoint(&self) -> EndpointEstimate {
        *self.endpoint.get_or_init(|| {
            if let Some(a) = self.spec.analytic_boundary() {
                let v = a.at(1.0).value;
                return EndpointEstimate {
                    value: v,
                    lower: v,
                    level: 0,
                    stagnated: true,
                };
            }
            let mut prev_f = self.interior(0.5).value();
            let mut prev_est = prev_f;
            let mut level = 1;
            let mut stagnated = false;
            for k in 2..=ENDPOINT_MAX_LEVEL {
                let f = self.interior(1.0 - (-k as f64).exp2()).value();
                let est = f.min(2.0 * f - prev_f).clamp(0.0, 1.0);
                level = k;
                if k > 2 && (est - prev_est).abs() < ENDPOINT_STAGNATION {
                    prev_est = est;
                    stagnated = true;
                    break;
                }
                prev_f = f;
                prev_est = est;
            }
            let direct = self.bisect(1.0);
            let value = prev_est.min(direct.hi);
            EndpointEstimate {
                value,
                lower: direct.lo.min(value),
                level,
                stagnated,
            }
        })
    }

    /// Difference-quotient bracket at step `h`, widened by the root-finding
    /// allowance `2·ROOT/h`.
    pub fn derivative_bracket(&self, x: f64, h: f64) -> Result<DerivativeBracket> {
        ensure_finite(&[x, h], "x and h")?;
        if h <= 0.0 || h.is_nan() || x - h <= -1.0 || x + h >= 1.0 {
            return Err(Error::Domain(format!(
                "derivative bracket needs x ± h inside (-1, 1), got x = {x}, h = {h}"
            )));
        }
        let f0 = self.value(x)?;
        let allowance = 2.0 * ROOT / h;
        let lo = (self.value(x + h)? - f0) / h - allowance;
        let hi = (f0 - self.value(x - h)?) / h + allowance;
        if lo > hi {
            return Err(Error::ConcavityViolation { x, lo, hi });
        }
        Ok(DerivativeBracket {
            x,
            lo,
            hi,
            h_used: h,
        })
    }

    /// Tightest available bracket at `x ∈ (-1, 1)`.
    ///
    /// Exact when the norm carries a closed-form boundary; otherwise the
    /// intersection of the brackets over the step ladder `1e-2 … 1e-7`
    /// (steps that would leave `(-1, 1)` are skipped).
    pub fn slope_bracket(&self, x: f64) -> Result<DerivativeBracket> {
        ensure_finite(&[x], "x")?;
        if x.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "slope bracket needs |x| < 1, got {x}"
            )));
        }
        if let Some(a) = self.spec.analytic_boundary() {
            let p = a.at(x);
            return Ok(DerivativeBracket {
                x,
                lo: p.right_derivative,
                hi: p.left_derivative,
                h_used: 0.0,
            });
        }
        let margin = 1.0 - x.abs();
        let mut steps: Vec<f64> = H_LADDER.iter().copied().filter(|&h| h < margin).collect();
        if steps.is_empty() {
            steps.push(0.5 * margin);
        }
        let mut acc: Option<DerivativeBracket> = None;
        for h in steps {
            let b = self.derivative_bracket(x, h)?;
            acc = Some(match acc {
                None => b,
                Some(a) => DerivativeBracket {
                    x,
                    lo: a.lo.max(b.lo),
                    hi: a.hi.min(b.hi),
                    h_used: h,
                },
            });
        }
        let b = acc.expect("at least one step");
        if b.lo > b.hi {
            return Err(Error::ConcavityViolation {
                x,
                lo: b.lo,
                hi: b.hi,
            });
        }
        Ok(b)
    }

    /// Smoothness of `f_E` at `x` from the bracket width: `Yes` below the
    /// smooth threshold, `No` above the corner threshold.
    pub fn differentiable_at(&self, x: f64) -> Result<(Tri, DerivativeBracket)> {
        let b = self.slope_bracket(x)?;
        Ok((self.width_verdict(&b), b))
    }

    pub(crate) fn width_verdict(&self, b: &DerivativeBracket) -> Tri {
        let w = b.width();
        if w < self.tol.smooth {
            Tri::Yes
        } else if w > self.tol.corner {
            Tri::No
        } else {
            Tri::Undecided
        }
    }

    /// Number of separate places where `t ↦ ‖(x,t)‖_E − 1` meets zero on a
    /// grid over `(0, 1]`. Samples within `1e-10` of zero are merged into
    /// one cluster, and a direct sign change between neighbours counts as
    /// one more. A valid norm yields exactly one.
    pub fn uniqueness_probe(&self, x: f64, grid: usize) -> Result<usize> {
        ensure_finite(&[x], "x")?;
        if x.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "uniqueness probe needs |x| < 1, got {x}"
            )));
        }
        if grid < 100 {
            return Err(Error::Domain(format!(
                "uniqueness probe needs grid >= 100, got {grid}"
            )));
        }
        let sign = |t: f64| {
            let g = self.spec.eval_unchecked([x, t]) - 1.0;
            if g.abs() <= 1e-10 {
                0
            } else {
                g.signum() as i32
            }
        };
        let signs: Vec<i32> = (1..=grid).map(|j| sign(j as f64 / grid as f64)).collect();
        let zero_runs = signs
            .iter()
            .enumerate()
            .filter(|&(i, &s)| s == 0 && (i == 0 || signs[i - 1] != 0))
            .count();
        let crossings = signs.windows(2).filter(|w| w[0] * w[1] == -1).count();
        Ok(zero_runs + crossings)
    }

    /// Checks that the difference quotient of `f_E` over `[a, b]` lies in
    /// the range spanned by the derivative brackets at `grid` interior
    /// points, widened by the mean-value tolerance.
    pub fn mvt_check(&self, a: f64, b: f64, grid: usize) -> Result<bool> {
        ensure_finite(&[a, b], "a and b")?;
        if !(-1.0 < a && a < b && b < 1.0) {
            return Err(Error::Domain(format!(
                "mean-value check needs -1 < a < b < 1, got [{a}, {b}]"
            )));
        }
        if grid == 0 {
            return Err(Error::Domain("grid must be positive".into()));
        }
        let quotient = (self.value(b)? - self.value(a)?) / (b - a);
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 1..=grid {
            let x = a + (b - a) * i as f64 / (grid + 1) as f64;
            let br = self.slope_bracket(x)?;
            lo = lo.min(br.lo);
            hi = hi.max(br.hi);
        }
        Ok(lo - self.tol.mvt <= quotient && quotient <= hi + self.tol.mvt)
    }

    /// `ψ(t) = ‖(1 − t, t)‖_E`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        psi_curve(&self.spec, t)
    }

    /// Strict convexity of the norm (strictly concave `f_E` and
    /// `f_E(1) = 0`) and strict monotonicity (strictly decreasing on
    /// `[0, 1)` and `f_E(1) = 0`).
    ///
    /// Concavity is probed on adjacent triples of `grid` equispaced points
    /// in `(-1, 1)`, decrease on `grid` equispaced points of `[0, 1)`.
    pub fn classify_convexity(&self, grid: usize) -> Result<ConvexityClass> {
        if grid < 3 {
            return Err(Error::Domain(format!(
                "classification needs grid >= 3, got {grid}"
            )));
        }
        let tol = self.tol;
        let xs: Vec<f64> = (1..=grid)
            .map(|i| -1.0 + 2.0 * i as f64 / (grid + 1) as f64)
            .collect();
        let fs = xs
            .iter()
            .map(|&x| self.value(x))
            .collect::<Result<Vec<_>>>()?;
        let min_excess = (1..grid - 1)
            .map(|i| fs[i] - 0.5 * (fs[i - 1] + fs[i + 1]))
            .fold(f64::INFINITY, f64::min);
        let polygonal = matches!(
            self.spec.kind(),
            crate::norm::Kind::Curve(_) | crate::norm::Kind::Transposed(_)
        );
        let strictly_concave = if polygonal || min_excess <= tol.flat {
            Tri::No
        } else if min_excess > tol.strict {
            Tri::Yes
        } else {
            Tri::Undecided
        };

        let ys: Vec<f64> = (0..grid).map(|i| i as f64 / grid as f64).collect();
        let gs = ys
            .iter()
            .map(|&x| self.value(x))
            .collect::<Result<Vec<_>>>()?;
        let min_drop = gs
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min);
        let strictly_decreasing = if min_drop <= tol.flat {
            Tri::No
        } else if min_drop > tol.strict {
            Tri::Yes
        } else {
            Tri::Undecided
        };

        let f1 = self.value(1.0)?;
        let vanishes = if f1 <= tol.endpoint_zero {
            Tri::Yes
        } else if f1 > tol.endpoint_nonzero {
            Tri::No
        } else {
            Tri::Undecided
        };

        Ok(ConvexityClass {
            strictly_convex: strictly_concave.and(vanishes),
            strictly_monotone: strictly_decreasing.and(vanishes),
        })
    }

    /// `n` equispaced rows over `[-1, 1]`.
    pub fn tabulate(&self, n: usize) -> Result<Vec<CurveRow>> {
        if n < 2 {
            return Err(Error::Domain(format!("tabulation needs n >= 2, got {n}")));
        }
        (0..n)
            .map(|i| {
                let x = if i == n - 1 {
                    1.0
                } else {
                    -1.0 + 2.0 * i as f64 / (n - 1) as f64
                };
                let (flo, f, fhi) = self.value_with_enclosure(x)?;
                Ok(CurveRow { x, f, flo, fhi })
            })
            .collect()
    }
}

/// `ψ(t) = ‖(1 − t, t)‖_E` for `t ∈ [0, 1]`.
pub fn psi_curve(spec: &NormSpec, t: f64) -> Result<f64> {
    ensure_finite(&[t], "t")?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "psi is defined on [0, 1], got t = {t}"
        )));
    }
    spec.eval([1.0 - t, t])
}

/// `f_E(x)` with a fresh curve; prefer a shared [`BoundaryCurve`] for
/// repeated queries.
pub fn boundary_value(spec: &NormSpec, x: f64) -> Result<f64> {
    BoundaryCurve::new(spec.clone()).value(x)
}

/// CSV with header `x,f,flo,fhi`, 17 significant digits per value.
pub fn rows_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("x,f,flo,fhi\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt17(r.x),
            fmt17(r.f),
            fmt17(r.flo),
            fmt17(r.fhi)
        ));
    }
    out
}

/// JSON array mirroring [`rows_to_csv`].
pub fn rows_to_json(rows: &[CurveRow]) -> String {
    serde_json::to_string_pretty(rows).expect("rows serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn curve(s: &str) -> BoundaryCurve {
        BoundaryCurve::new(s.parse().unwrap())
    }

    fn numeric(s: &str) -> BoundaryCurve {
        BoundaryCurve::new(s.parse::<NormSpec>().unwrap().without_analytic_boundary())
    }

    #[test]
    fn known_values() {
        assert_abs_diff_eq!(numeric("p:2").value(0.6).unwrap(), 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(curve("p:2").value(0.6).unwrap(), 0.8, epsilon = 1e-15);
        assert_eq!(numeric("p:inf").value(0.99).unwrap(), 1.0);
        assert_eq!(curve("p:1").value(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(numeric("p:1").value(1.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_eq!(numeric("p:inf").value(-1.0).unwrap(), 1.0);
        for s in ["p:1.5", "mix:0.5:p:1:p:inf", "curve:0,1;0.5,0.9;1,0"] {
            assert_abs_diff_eq!(numeric(s).value(0.0).unwrap(), 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn out_of_range_x() {
        assert!(matches!(curve("p:2").value(1.5), Err(Error::Domain(_))));
        assert!(matches!(
            numeric("p:2").value(f64::NAN),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn mixture_closed_form() {
        let c = curve("mix:0.5:p:1:p:inf");
        for x in [0.0, 0.2, 0.5, 0.66] {
            assert_abs_diff_eq!(c.value(x).unwrap(), 1.0 - x / 2.0, epsilon = 1e-13);
        }
        for x in [0.7, 0.9, 0.999] {
            assert_abs_diff_eq!(c.value(x).unwrap(), 2.0 * (1.0 - x), epsilon = 1e-13);
        }
        assert!(c.value(1.0).unwrap() <= 1e-12);
    }

    #[test]
    fn derivative_bracket_examples() {
        let b = numeric("p:2").derivative_bracket(0.0, 1e-4).unwrap();
        assert!(b.contains(0.0) && b.width() < 1e-3, "{b:?}");
        let b = numeric("p:1").derivative_bracket(0.0, 1e-4).unwrap();
        assert_abs_diff_eq!(b.lo, -1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(b.hi, 1.0, epsilon = 1e-6);
        let b = numeric("p:2").derivative_bracket(0.6, 1e-5).unwrap();
        assert!(b.contains(-0.75) && b.width() < 1e-3, "{b:?}");
        assert!(numeric("p:2").derivative_bracket(0.99, 0.02).is_err());
    }

    #[test]
    fn ladder_brackets_nest() {
        let c = numeric("p:3");
        for x in [-0.8, -0.3, 0.0, 0.45, 0.9] {
            let bs: Vec<_> = H_LADDER
                .iter()
                .map(|&h| c.derivative_bracket(x, h).unwrap())
                .collect();
            for w in bs.windows(2) {
                let slack = 2.0 * ROOT / w[1].h_used;
                assert!(
                    w[1].lo >= w[0].lo - slack && w[1].hi <= w[0].hi + slack,
                    "{w:?}"
                );
            }
        }
    }

    #[test]
    fn analytic_slope_bracket_is_exact() {
        let b = curve("p:1").slope_bracket(0.0).unwrap();
        assert_eq!((b.lo, b.hi), (-1.0, 1.0));
        let b = curve("p:2").slope_bracket(0.6).unwrap();
        assert_abs_diff_eq!(b.lo, -0.75, epsilon = 1e-15);
        assert_eq!(b.width(), 0.0);
    }

    #[test]
    fn numeric_flat_segment_is_smooth_and_kink_is_corner() {
        let c = numeric("curve:0,1;0.5,1;1,0");
        let (v, b) = c.differentiable_at(0.0).unwrap();
        assert_eq!(v, Tri::Yes, "{b:?}");
        let (v, b) = c.differentiable_at(0.5).unwrap();
        assert_eq!(v, Tri::No, "{b:?}");
        assert!(b.contains(-2.0) && b.contains(0.0));
    }

    #[test]
    fn uniqueness_examples() {
        assert_eq!(curve("p:2").uniqueness_probe(0.3, 1000).unwrap(), 1);
        assert_eq!(curve("p:inf").uniqueness_probe(0.5, 1000).unwrap(), 1);
        assert_eq!(curve("p:1.5").uniqueness_probe(-0.7, 1000).unwrap(), 1);
        assert!(curve("p:2").uniqueness_probe(0.3, 10).is_err());
    }

    #[test]
    fn mvt_examples() {
        assert!(curve("p:2").mvt_check(-0.5, 0.5, 101).unwrap());
        assert!(curve("p:1").mvt_check(0.1, 0.9, 101).unwrap());
        assert!(numeric("mix:0.5:p:1:p:inf")
            .mvt_check(0.1, 0.5, 101)
            .unwrap());
        assert!(curve("p:2").mvt_check(0.5, -0.5, 101).is_err());
    }

    #[test]
    fn psi_examples() {
        let c = curve("p:1");
        assert_eq!(c.psi(0.5).unwrap(), 1.0);
        assert_eq!(c.psi(0.0).unwrap(), 1.0);
        assert_eq!(
            curve("p:2").psi(0.5).unwrap(),
            std::f64::consts::FRAC_1_SQRT_2
        );
        assert!(c.psi(1.5).is_err());
    }

    #[test]
    fn convexity_examples() {
        let check = |s: &str, convex: Tri, monotone: Tri| {
            let got = curve(s).classify_convexity(101).unwrap();
            assert_eq!(got.strictly_convex, convex, "{s}");
            assert_eq!(got.strictly_monotone, monotone, "{s}");
        };
        check("p:2", Tri::Yes, Tri::Yes);
        check("p:1", Tri::No, Tri::Yes);
        check("p:inf", Tri::No, Tri::No);
        check("mix:0.5:p:1:p:inf", Tri::No, Tri::Yes);
        check("curve:0,1;0.5,1;1,0", Tri::No, Tri::No);
    }

    #[test]
    fn tabulation_and_export() {
        let rows = curve("p:2").tabulate(5).unwrap();
        let xs: Vec<f64> = rows.iter().map(|r| r.x).collect();
        assert_eq!(xs, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_abs_diff_eq!(rows[1].f, 0.75f64.sqrt(), epsilon = 1e-15);
        let csv = rows_to_csv(&rows);
        assert!(csv.starts_with("x,f,flo,fhi\n-1,0,0,0\n"), "{csv}");
        let json: serde_json::Value = serde_json::from_str(&rows_to_json(&rows)).unwrap();
        assert_eq!(json[2]["f"], 1.0);
        assert!(curve("p:2").tabulate(1).is_err());
    }

    #[test]
    fn cache_is_shared_across_threads() {
        let c = numeric("p:1.5");
        std::thread::scope(|s| {
            for _ in 0..4 {
                s.spawn(|| {
                    for i in 0..50 {
                        let x = -0.9 + 0.036 * i as f64;
                        let v = c.value(x).unwrap();
                        assert_abs_diff_eq!(
                            v,
                            (1.0 - x.abs().powf(1.5)).powf(1.0 / 1.5),
                            epsilon = 1e-12
                        );
                    }
                });
            }
        });
        assert_eq!(c.cached_len(), 50);
    }
}
