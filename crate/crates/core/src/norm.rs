//! Absolute normalised norms on ℝ².
//!
//! A [`NormSpec`] is either a member of a built-in family (`p`-norms and
//! convex mixtures of specs) or the Minkowski gauge of a polygonal unit
//! ball described by its upper-right profile. Specs are immutable once
//! built and can be shared freely between threads.
//!
//! Specs have a compact text form used by the CLI:
//!
//! ```text
//! p:<float|inf>              ℓ^p norm, p >= 1
//! mix:<λ>:<spec>:<spec>      λ‖·‖_L + (1-λ)‖·‖_R
//! curve:x1,y1;x2,y2;...      gauge of the symmetrised region under the profile
//! swap:<spec>                ‖(x,y)‖ := ‖(y,x)‖_spec
//! ```

use crate::boundary::BoundaryCurve;
use crate::error::{ensure_finite, Error, Result};
use crate::exec::{self, Exec};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

/// Gauge bisection steps.
const GAUGE_ITERS: usize = 60;
/// Vertices closer than this are merged.
const DEDUP_TOL: f64 = 1e-14;
/// Slope slack when checking profile concavity.
const CONCAVITY_SLACK: f64 = 1e-12;

/// Exponent of an `ℓ^p` norm, with `∞` as its own tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Spec(format!(
                "p-norm exponent must be in [1, inf], got {p}"
            )))
        }
    }

    /// `ℓ^p` norm of an arbitrary vector.
    pub fn norm(self, v: &[f64]) -> f64 {
        let max = v.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        match self {
            Exponent::Infinity => max,
            Exponent::Finite(1.0) => v.iter().map(|c| c.abs()).sum(),
            Exponent::Finite(p) if p == 2.0 && v.len() == 2 => v[0].hypot(v[1]),
            Exponent::Finite(p) => {
                if max == 0.0 {
                    return 0.0;
                }
                let s: f64 = v.iter().map(|c| (c.abs() / max).powf(p)).sum();
                max * s.powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

/// Closed-form boundary data at one abscissa: `f_E(x)`, `f′_{E+}(x)`, `f′_{E−}(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub value: f64,
    pub right_derivative: f64,
    pub left_derivative: f64,
}

/// Closed-form evaluator for the boundary curve on `[-1, 1]`.
#[derive(Clone)]
pub struct AnalyticBoundary(Arc<dyn Fn(f64) -> BoundaryPoint + Send + Sync>);

impl AnalyticBoundary {
    pub fn new(f: impl Fn(f64) -> BoundaryPoint + Send + Sync + 'static) -> Self {
        AnalyticBoundary(Arc::new(f))
    }

    pub fn at(&self, x: f64) -> BoundaryPoint {
        (self.0)(x)
    }

    /// Boundary of the `ℓ^p` unit ball, `(1 - |x|^p)^{1/p}`.
    pub fn p_norm(p: Exponent) -> Self {
        match p {
            Exponent::Infinity => AnalyticBoundary::new(|_| BoundaryPoint {
                value: 1.0,
                right_derivative: 0.0,
                left_derivative: 0.0,
            }),
            Exponent::Finite(1.0) => AnalyticBoundary::new(|x: f64| {
                let right = if x >= 0.0 { -1.0 } else { 1.0 };
                let left = if x > 0.0 { -1.0 } else { 1.0 };
                BoundaryPoint {
                    value: 1.0 - x.abs(),
                    right_derivative: right,
                    left_derivative: left,
                }
            }),
            Exponent::Finite(p) => AnalyticBoundary::new(move |x: f64| {
                let ax = x.abs();
                // 1 - |x|^p without cancellation near |x| = 1
                let rest = -(p * (ax - 1.0).ln_1p()).exp_m1();
                let value = rest.max(0.0).powf(1.0 / p);
                let d = if ax == 0.0 {
                    0.0
                } else if rest <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    -ax.powf(p - 1.0) * rest.powf(1.0 / p - 1.0)
                };
                let d = if x < 0.0 { -d } else { d };
                BoundaryPoint {
                    value,
                    right_derivative: d,
                    left_derivative: d,
                }
            }),
        }
    }
}

impl fmt::Debug for AnalyticBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("AnalyticBoundary(..)")
    }
}

/// Polygonal profile `0 = x_0 < … < x_n = 1` with `y_0 = 1`, concave and
/// nonincreasing. The unit ball is `{(a,b) : |a| <= 1, |b| <= profile(|a|)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGauge {
    vertices: Vec<(f64, f64)>,
}

impl CurveGauge {
    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    /// Piecewise-linear profile at `u ∈ [0, 1]`.
    pub fn profile(&self, u: f64) -> f64 {
        let v = &self.vertices;
        let i = v.partition_point(|&(x, _)| x < u).clamp(1, v.len() - 1);
        let (x0, y0) = v[i - 1];
        let (x1, y1) = v[i];
        if u >= x1 {
            return y1;
        }
        y0 + (y1 - y0) * ((u - x0) / (x1 - x0))
    }

    fn contains(&self, a: f64, b: f64) -> bool {
        let (a, b) = (a.abs(), b.abs());
        a <= 1.0 && b <= self.profile(a)
    }
}

#[derive(Debug, Clone)]
pub enum Kind {
    P(Exponent),
    Mixture {
        lambda: f64,
        left: Box<NormSpec>,
        right: Box<NormSpec>,
    },
    Curve(CurveGauge),
    /// Coordinates exchanged: `‖(x,y)‖ = ‖(y,x)‖_inner`.
    Transposed(Box<NormSpec>),
}

/// An absolute, normalised norm on ℝ².
#[derive(Debug, Clone)]
pub struct NormSpec {
    kind: Kind,
    analytic: Option<AnalyticBoundary>,
    label: String,
}

impl NormSpec {
    /// `ℓ^p` norm carrying its closed-form boundary curve.
    pub fn p(p: f64) -> Result<Self> {
        let exp = Exponent::new(p)?;
        Ok(NormSpec {
            kind: Kind::P(exp),
            analytic: Some(AnalyticBoundary::p_norm(exp)),
            label: format!("p:{exp}"),
        })
    }

    pub fn p_inf() -> Self {
        NormSpec::p(f64::INFINITY).expect("infinity is a valid exponent")
    }

    /// `λ‖·‖_left + (1-λ)‖·‖_right`.
    pub fn mixture(lambda: f64, left: NormSpec, right: NormSpec) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Spec(format!(
                "mixture weight must lie in [0, 1], got {lambda}"
            )));
        }
        let label = format!("mix:{lambda}:{}:{}", left.label, right.label);
        Ok(NormSpec {
            kind: Kind::Mixture {
                lambda,
                left: Box::new(left),
                right: Box::new(right),
            },
            analytic: None,
            label,
        })
    }

    /// Gauge of the region under a concave, nonincreasing polygonal profile.
    ///
    /// Points may come in any order; they are sorted by `x` and vertices
    /// closer than `1e-14` are merged. The profile must start at `(0, 1)` and
    /// end at `x = 1`.
    pub fn curve(points: &[(f64, f64)]) -> Result<Self> {
        for &(x, y) in points {
            ensure_finite(&[x, y], "curve point")
                .map_err(|_| Error::Spec(format!("curve point ({x}, {y}) is not finite")))?;
            if !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y) {
                return Err(Error::Spec(format!(
                    "curve point ({x}, {y}) lies outside [0,1]^2"
                )));
            }
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
        let mut vertices: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            match vertices.last() {
                Some(&(x, y)) if (p.0 - x).abs() <= DEDUP_TOL => {
                    if (p.1 - y).abs() > DEDUP_TOL {
                        return Err(Error::Spec(format!(
                            "curve has two heights {y} and {} at x = {x}",
                            p.1
                        )));
                    }
                }
                _ => vertices.push(p),
            }
        }
        if vertices.len() < 2 {
            return Err(Error::Spec(
                "curve needs at least two distinct points".into(),
            ));
        }
        let (x0, y0) = vertices[0];
        if x0.abs() > DEDUP_TOL || (y0 - 1.0).abs() > DEDUP_TOL {
            return Err(Error::Spec(format!(
                "curve must start at (0, 1), starts at ({x0}, {y0})"
            )));
        }
        vertices[0] = (0.0, 1.0);
        let last = vertices.len() - 1;
        if (vertices[last].0 - 1.0).abs() > DEDUP_TOL {
            return Err(Error::Spec(format!(
                "curve must end at x = 1, ends at x = {}",
                vertices[last].0
            )));
        }
        vertices[last].0 = 1.0;

        for w in vertices.windows(2) {
            if w[1].1 > w[0].1 + DEDUP_TOL {
                return Err(Error::Spec(format!(
                    "curve increases between ({}, {}) and ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        let slope = |a: (f64, f64), b: (f64, f64)| (b.1 - a.1) / (b.0 - a.0);
        for w in vertices.windows(3) {
            if slope(w[1], w[2]) > slope(w[0], w[1]) + CONCAVITY_SLACK {
                return Err(Error::Spec(format!(
                    "curve is not concave at the triple ({}, {}), ({}, {}), ({}, {})",
                    w[0].0, w[0].1, w[1].0, w[1].1, w[2].0, w[2].1
                )));
            }
        }

        let label = format!(
            "curve:{}",
            vertices
                .iter()
                .map(|(x, y)| format!("{x},{y}"))
                .collect::<Vec<_>>()
                .join(";")
        );
        Ok(NormSpec {
            kind: Kind::Curve(CurveGauge { vertices }),
            analytic: None,
            label,
        })
    }

    /// The norm `‖(x,y)‖ := ‖(y,x)‖_self`.
    pub fn transposed(&self) -> NormSpec {
        match &self.kind {
            Kind::P(_) => self.clone(),
            Kind::Mixture {
                lambda,
                left,
                right,
            } => NormSpec::mixture(*lambda, left.transposed(), right.transposed())
                .expect("weight already validated"),
            Kind::Transposed(inner) => (**inner).clone(),
            Kind::Curve(_) => NormSpec {
                label: format!("swap:{}", self.label),
                kind: Kind::Transposed(Box::new(self.clone())),
                analytic: None,
            },
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Attaches closed-form boundary data. The caller vouches that it
    /// describes this norm's unit sphere.
    pub fn with_analytic_boundary(mut self, analytic: AnalyticBoundary) -> Self {
        self.analytic = Some(analytic);
        self
    }

    /// Drops closed-form boundary data so that every boundary query goes
    /// through root finding.
    pub fn without_analytic_boundary(mut self) -> Self {
        self.analytic = None;
        self
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn analytic_boundary(&self) -> Option<&AnalyticBoundary> {
        self.analytic.as_ref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `‖v‖_E`.
    pub fn eval(&self, v: [f64; 2]) -> Result<f64> {
        ensure_finite(&v, "point")?;
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: [f64; 2]) -> f64 {
        match &self.kind {
            Kind::P(p) => p.norm(&v),
            Kind::Mixture {
                lambda,
                left,
                right,
            } => lambda * left.eval_unchecked(v) + (1.0 - lambda) * right.eval_unchecked(v),
            Kind::Transposed(inner) => inner.eval_unchecked([v[1], v[0]]),
            Kind::Curve(c) => gauge(c, v),
        }
    }

    /// Closed unit ball membership. Exact for polygonal gauges.
    pub fn contains(&self, v: [f64; 2]) -> bool {
        match &self.kind {
            Kind::Curve(c) => c.contains(v[0], v[1]),
            Kind::Transposed(inner) => inner.contains([v[1], v[0]]),
            _ => self.eval_unchecked(v) <= 1.0,
        }
    }

    /// Checks the defining properties on fixed corner cases plus
    /// `sample_count` pseudorandom samples drawn from `seed`.
    pub fn validate(&self, sample_count: usize, seed: u64) -> Result<ValidationReport> {
        validate_norm(self, sample_count, seed, Exec::default())
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            Kind::P(p) => write!(f, "p:{p}"),
            Kind::Mixture {
                lambda,
                left,
                right,
            } => write!(f, "mix:{lambda}:{left}:{right}"),
            Kind::Transposed(inner) => write!(f, "swap:{inner}"),
            Kind::Curve(c) => {
                f.write_str("curve:")?;
                for (i, (x, y)) in c.vertices.iter().enumerate() {
                    if i > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{x},{y}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = Parser { src: s, pos: 0 };
        let spec = parser.spec()?;
        if parser.pos != s.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn expect(&mut self, lit: &str) -> Result<()> {
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`")))
        }
    }

    /// Token up to the next `:` (or end of input).
    fn atom(&mut self) -> &'a str {
        let src = self.src;
        let end = src[self.pos..]
            .find(':')
            .map_or(src.len(), |i| self.pos + i);
        let tok = &src[self.pos..end];
        self.pos = end;
        tok
    }

    fn number(&self, tok: &str, at: usize) -> Result<f64> {
        tok.parse::<f64>().map_err(|_| Error::Parse {
            pos: at,
            msg: format!("invalid number `{tok}`"),
        })
    }

    fn spec(&mut self) -> Result<NormSpec> {
        let start = self.pos;
        let tag_end = self
            .rest()
            .find(':')
            .ok_or_else(|| self.error("expected `<kind>:`"))?;
        let tag = &self.src[start..start + tag_end];
        self.pos += tag_end + 1;
        let at = self.pos;
        let located = |e: Error| match e {
            Error::Spec(msg) => Error::Parse { pos: at, msg },
            other => other,
        };
        match tag {
            "p" => {
                let tok = self.atom();
                let p = if tok == "inf" {
                    f64::INFINITY
                } else {
                    self.number(tok, at)?
                };
                NormSpec::p(p).map_err(located)
            }
            "mix" => {
                let tok = self.atom();
                let lambda = self.number(tok, at)?;
                self.expect(":")?;
                let left = self.spec()?;
                self.expect(":")?;
                let right = self.spec()?;
                NormSpec::mixture(lambda, left, right).map_err(located)
            }
            "curve" => {
                let tok = self.atom();
                let mut points = Vec::new();
                let mut offset = at;
                for pair in tok.split(';') {
                    let (xs, ys) = pair.split_once(',').ok_or(Error::Parse {
                        pos: offset,
                        msg: format!("expected `x,y`, got `{pair}`"),
                    })?;
                    points.push((
                        self.number(xs, offset)?,
                        self.number(ys, offset + xs.len() + 1)?,
                    ));
                    offset += pair.len() + 1;
                }
                NormSpec::curve(&points).map_err(located)
            }
            "swap" => Ok(self.spec()?.transposed()),
            _ => Err(Error::Parse {
                pos: start,
                msg: format!("unknown norm kind `{tag}:` (expected p:, mix:, curve: or swap:)"),
            }),
        }
    }
}

/// Minkowski gauge by bisection on the scale, bracketed by `[‖v‖_∞, ‖v‖_1]`.
fn gauge(c: &CurveGauge, v: [f64; 2]) -> f64 {
    let (a, b) = (v[0].abs(), v[1].abs());
    let mut lo = a.max(b);
    let mut hi = a + b;
    if lo == 0.0 {
        return 0.0;
    }
    if c.contains(a / lo, b / lo) {
        return lo;
    }
    for _ in 0..GAUGE_ITERS {
        let mid = 0.5 * (lo + hi);
        if c.contains(a / mid, b / mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Builds the gauge norm of a polygonal profile; see [`NormSpec::curve`].
pub fn gauge_from_curve(points: &[(f64, f64)]) -> Result<NormSpec> {
    NormSpec::curve(points)
}

/// Linear functional `g(x,y) = A x + B y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Functional {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
}

impl Functional {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        ensure_finite(&[a, b], "functional coefficients")?;
        Ok(Functional { a, b })
    }

    pub fn apply(&self, v: [f64; 2]) -> f64 {
        self.a * v[0] + self.b * v[1]
    }

    /// `(A, B) ↦ (−A, B)`, the image under the reflection `x ↦ −x`.
    pub fn reflect_x(self) -> Self {
        Functional {
            a: -self.a,
            b: self.b,
        }
    }
}

/// Dual norm `‖g‖_{E*} = max_{‖v‖=1} |g(v)|`.
///
/// Over the unit sphere `|Ax + By|` peaks at `|A| x + |B| f_E(x)` for some
/// `x ∈ [0, 1]`; that function is concave, so the grid maximum brackets
/// the true maximiser and a golden-section pass finishes the job.
pub fn dual_norm(curve: &BoundaryCurve, g: Functional, grid: usize) -> Result<f64> {
    let (a, b) = (g.a.abs(), g.b.abs());
    if a == 0.0 && b == 0.0 {
        return Ok(0.0);
    }
    let n = grid.max(3);
    let objective = |x: f64| -> Result<f64> { Ok(a * x + b * curve.value(x)?) };
    let mut best = (0usize, f64::NEG_INFINITY);
    for i in 0..n {
        let x = i as f64 / (n - 1) as f64;
        let v = objective(x)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    let lo = best.0.saturating_sub(1) as f64 / (n - 1) as f64;
    let hi = (best.0 + 1).min(n - 1) as f64 / (n - 1) as f64;
    let refined = golden_max(lo, hi, &objective)?;
    Ok(best.1.max(refined))
}

fn golden_max(mut lo: f64, mut hi: f64, f: &dyn Fn(f64) -> Result<f64>) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > 1e-12 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(f1.max(f2).max(f(lo)?).max(f(hi)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub property: String,
    pub points: Vec<[f64; 2]>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub seed: u64,
    pub sample_count: usize,
    pub violations: Vec<Violation>,
}

const EXACT_SLACK: f64 = 1e-12;
const STRICT_MARGIN: f64 = 0.01;

/// Samples the norm axioms and the absolute-norm properties: sign
/// symmetry, normalisation, triangle inequality, homogeneity, the
/// `ℓ^∞ <= E <= ℓ^1` sandwich, monotonicity under coordinatewise
/// domination and strict monotonicity under strict double domination.
pub fn validate_norm(
    spec: &NormSpec,
    sample_count: usize,
    seed: u64,
    exec: Exec,
) -> Result<ValidationReport> {
    if sample_count == 0 {
        return Err(Error::Domain("sample_count must be positive".into()));
    }
    let n = |v: [f64; 2]| spec.eval_unchecked(v);
    let mut violations = Vec::new();

    for axis in [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]] {
        let gap = (n(axis) - 1.0).abs();
        if gap > EXACT_SLACK {
            violations.push(Violation {
                property: "normalisation".into(),
                points: vec![axis],
                magnitude: gap,
            });
        }
    }
    let corners = [
        [1.0, 1.0],
        [-1.0, 1.0],
        [0.5, 0.5],
        [1e-300, 1e-300],
        [1e-12, 0.0],
        [0.0, -1e-12],
        [0.0, 0.0],
    ];
    for v in corners {
        violations.extend(point_checks(&n, v));
    }

    let sampled = exec::run_chunks(exec, sample_count, |chunk, range| {
        let mut rng = exec::chunk_rng(seed, chunk);
        let mut out = Vec::new();
        for _ in range {
            let v = random_point(&mut rng);
            let w = random_point(&mut rng);
            out.extend(point_checks(&n, v));

            let (nv, nw, ns) = (n(v), n(w), n([v[0] + w[0], v[1] + w[1]]));
            let excess = ns - (nv + nw);
            if excess > EXACT_SLACK * (nv + nw).max(1.0) {
                out.push(Violation {
                    property: "triangle".into(),
                    points: vec![v, w],
                    magnitude: excess,
                });
            }

            let lambda = 10f64.powf(rng.gen_range(-3.0..=3.0));
            let scaled = n([lambda * v[0], lambda * v[1]]);
            let rel = (scaled - lambda * nv).abs() / (lambda * nv).max(f64::MIN_POSITIVE);
            if nv > 0.0 && rel > EXACT_SLACK {
                out.push(Violation {
                    property: "homogeneity".into(),
                    points: vec![v, [lambda, lambda]],
                    magnitude: rel,
                });
            }

            let dom = [
                v[0].signum() * (v[0].abs() + rng.gen_range(0.0..1.0)),
                v[1].signum() * (v[1].abs() + rng.gen_range(0.0..1.0)),
            ];
            let drop = nv - n(dom);
            if drop > EXACT_SLACK * nv.max(1.0) {
                out.push(Violation {
                    property: "monotonicity".into(),
                    points: vec![v, dom],
                    magnitude: drop,
                });
            }

            let strict = [
                v[0].abs() + rng.gen_range(STRICT_MARGIN..1.0),
                -(v[1].abs() + rng.gen_range(STRICT_MARGIN..1.0)),
            ];
            let gap = n(strict) - nv;
            if gap <= 0.0 {
                out.push(Violation {
                    property: "strict_monotonicity".into(),
                    points: vec![v, strict],
                    magnitude: -gap,
                });
            }
        }
        out
    });
    violations.extend(sampled);

    Ok(ValidationReport {
        passed: violations.is_empty(),
        seed,
        sample_count,
        violations,
    })
}

fn random_point(rng: &mut impl Rng) -> [f64; 2] {
    let scale = 10f64.powf(rng.gen_range(-3.0..=3.0));
    [
        scale * rng.gen_range(-1.0..=1.0),
        scale * rng.gen_range(-1.0..=1.0),
    ]
}

fn point_checks(n: &impl Fn([f64; 2]) -> f64, v: [f64; 2]) -> Vec<Violation> {
    let mut out = Vec::new();
    let nv = n(v);
    let slack = EXACT_SLACK * nv.max(1.0);
    let flips = [[-v[0], v[1]], [v[0], -v[1]], [-v[0], -v[1]]];
    let asym = flips.iter().map(|&f| (n(f) - nv).abs()).fold(0.0, f64::max);
    if asym > slack {
        out.push(Violation {
            property: "absoluteness".into(),
            points: vec![v],
            magnitude: asym,
        });
    }
    let inf = v[0].abs().max(v[1].abs());
    let one = v[0].abs() + v[1].abs();
    let below = (inf - nv).max(nv - one);
    if below > slack {
        out.push(Violation {
            property: "sandwich".into(),
            points: vec![v],
            magnitude: below,
        });
    }
    out
}
