//! Support functionals and Gâteaux differentiability.
//!
//! At an interior boundary point `(x₀, f_E(x₀))` the support functionals are
//! exactly
//!
//! ```text
//! g_a(x, y) = (a x − y) / (a x₀ − f_E(x₀)),    a ∈ [f′₊(x₀), f′₋(x₀)],
//! ```
//!
//! so the norm is Gâteaux differentiable there iff `f_E` is differentiable
//! at `x₀`. At the endpoint `(1, f_E(1))` the set depends on `f_E(1)` and
//! on `a = inf_{[0,1)} f′₋`, which splits into five cases.

use crate::boundary::{BoundaryCurve, DerivativeBracket};
use crate::error::{ensure_finite, Error, Result};
use crate::norm::{Functional, NormSpec};
use crate::tri::Tri;
use serde::{Serialize, Serializer};

/// Representatives emitted for infinite support sets.
pub const REPRESENTATIVES: usize = 33;
/// Slope estimates below this are only trusted as `−∞` with divergence evidence.
const NEG_INFINITY_THRESHOLD: f64 = -1e6;
/// Denominators `a x₀ − f(x₀)` smaller than this are rejected.
const DEGENERATE: f64 = 1e-14;
/// `f(x₀) ≥ a x₀ + 1` is certified with this slack.
const SIDE_SLACK: f64 = 1e-10;
/// `f(1)` at or below this counts as zero in the endpoint analysis.
const ENDPOINT_ZERO: f64 = 1e-12;
/// `f(1)` at or above this counts as positive in the endpoint analysis.
const ENDPOINT_POSITIVE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Location {
    Interior { x0: f64 },
    Endpoint { side: Side },
}

/// The five endpoint cases, in the order they are tested: (ii), (iii), then
/// (iv) or (v). Case (i) concerns the points of a vertical edge and is
/// answered by [`gateaux_at_edge`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EndpointCase {
    I,
    Ii,
    Iii,
    Iv,
    V,
}

/// `inf f′₋` on `[0, 1)`, possibly `−∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slope {
    Finite(f64),
    NegInfinity,
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Slope::Finite(a) => s.serialize_f64(*a),
            Slope::NegInfinity => s.serialize_str("-inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EndpointParams {
    pub a: Slope,
    pub f1: f64,
}

/// A support-functional set `S_E` at one boundary point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportSet {
    pub location: Location,
    /// The boundary point the functionals support.
    pub point: [f64; 2],
    #[serde(rename = "case")]
    pub case_label: Option<EndpointCase>,
    /// `[a_lo, a_hi]` for interior points.
    pub slope_interval: Option<[f64; 2]>,
    pub parameters: Option<EndpointParams>,
    pub representatives: Vec<Functional>,
    /// Whether `f(x₀) ≥ a·x₀ + 1` held for every sampled slope.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_condition: Option<bool>,
}

impl SupportSet {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("support set serialises")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothness {
    Smooth,
    Corner,
    Undecided,
}

impl From<Tri> for Smoothness {
    fn from(t: Tri) -> Self {
        match t {
            Tri::Yes => Smoothness::Smooth,
            Tri::No => Smoothness::Corner,
            Tri::Undecided => Smoothness::Undecided,
        }
    }
}

impl From<Smoothness> for Tri {
    fn from(s: Smoothness) -> Self {
        match s {
            Smoothness::Smooth => Tri::Yes,
            Smoothness::Corner => Tri::No,
            Smoothness::Undecided => Tri::Undecided,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateauxVerdict {
    pub point: [f64; 2],
    pub verdict: Smoothness,
    /// The Gâteaux derivative; present exactly when the verdict is smooth.
    pub derivative: Option<Functional>,
    pub bracket: Option<DerivativeBracket>,
}

fn supporting_functional(a: f64, x0: f64, f0: f64) -> Result<Functional> {
    let denom = a * x0 - f0;
    if denom.abs() < DEGENERATE {
        return Err(Error::Degenerate(denom));
    }
    Functional::new(a / denom, -1.0 / denom)
}

fn interior_x(x0: f64) -> Result<()> {
    ensure_finite(&[x0], "x0")?;
    if x0.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "interior point needs |x0| < 1, got {x0}"
        )));
    }
    Ok(())
}

/// `S_E(x₀)` for `|x₀| < 1`.
///
/// At a smooth point a single functional (built from the bracket
/// midpoint) is returned; otherwise [`REPRESENTATIVES`] slopes spread
/// evenly over the bracket.
pub fn support_set_interior(curve: &BoundaryCurve, x0: f64) -> Result<SupportSet> {
    interior_x(x0)?;
    let f0 = curve.value(x0)?;
    let (smooth, br) = curve.differentiable_at(x0)?;
    let slopes: Vec<f64> = if smooth == Tri::Yes {
        vec![br.midpoint()]
    } else {
        let n = REPRESENTATIVES - 1;
        (0..=n)
            .map(|i| br.lo + (br.hi - br.lo) * i as f64 / n as f64)
            .collect()
    };
    let side_condition = slopes.iter().all(|&a| f0 >= a * x0 + 1.0 - SIDE_SLACK);
    let representatives = slopes
        .iter()
        .map(|&a| supporting_functional(a, x0, f0))
        .collect::<Result<Vec<_>>>()?;
    Ok(SupportSet {
        location: Location::Interior { x0 },
        point: [x0, f0],
        case_label: None,
        slope_interval: Some([br.lo, br.hi]),
        parameters: None,
        representatives,
        side_condition: Some(side_condition),
    })
}

/// Gâteaux verdict at `(x₀, f_E(x₀))`, with the derivative
/// `(a x − y)/(a x₀ − f(x₀))`, `a = f′(x₀)`, when smooth.
pub fn gateaux_at(curve: &BoundaryCurve, x0: f64) -> Result<GateauxVerdict> {
    interior_x(x0)?;
    let f0 = curve.value(x0)?;
    let (smooth, br) = curve.differentiable_at(x0)?;
    let verdict = Smoothness::from(smooth);
    let derivative = match verdict {
        Smoothness::Smooth => Some(supporting_functional(br.midpoint(), x0, f0)?),
        _ => None,
    };
    Ok(GateauxVerdict {
        point: [x0, f0],
        verdict,
        derivative,
        bracket: Some(br),
    })
}

/// Gâteaux verdict at a point `(1, b)` of a vertical edge, `|b| < f_E(1)`.
/// Such points are smooth with derivative `(1, 0)`.
pub fn gateaux_at_edge(curve: &BoundaryCurve, b: f64) -> Result<GateauxVerdict> {
    ensure_finite(&[b], "b")?;
    let f1 = curve.value(1.0)?;
    if f1 < ENDPOINT_POSITIVE {
        return Err(Error::Precondition(format!(
            "the unit sphere has no vertical edge at x = 1 (f(1) = {f1})"
        )));
    }
    if b.abs() >= f1 {
        return Err(Error::Domain(format!(
            "edge point needs |b| < f(1) = {f1}, got {b}"
        )));
    }
    Ok(GateauxVerdict {
        point: [1.0, b],
        verdict: Smoothness::Smooth,
        derivative: Some(Functional { a: 1.0, b: 0.0 }),
        bracket: None,
    })
}

/// Estimate of `a = inf_{[0,1)} f′₋` from upper bounds on `f′₋` at
/// `x_k = 1 − 2^-k`, `k = 2..30`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    /// Running minimum of the upper bounds.
    pub estimate: f64,
    /// Whether the bound at `k = 30` is at least twice the bound at `k = 20`.
    pub diverging: bool,
}

pub fn endpoint_slope(curve: &BoundaryCurve) -> Result<SlopeEstimate> {
    let mut estimate = f64::INFINITY;
    let (mut at20, mut at30) = (f64::NAN, f64::NAN);
    for k in 2..=30 {
        let step = (-(k as f64)).exp2();
        let x = 1.0 - step;
        let hi = match curve.spec().analytic_boundary() {
            Some(a) => a.at(x).left_derivative,
            None => curve.derivative_bracket(x, 0.5 * step)?.hi,
        };
        estimate = estimate.min(hi);
        if k == 20 {
            at20 = estimate;
        }
        if k == 30 {
            at30 = estimate;
        }
    }
    Ok(SlopeEstimate {
        estimate,
        diverging: at20 < 0.0 && at30 <= 2.0 * at20,
    })
}

/// Support functionals at `(±1, f_E(±1))`.
///
/// The right endpoint is classified as
///
/// * (ii) `f(1) = 1`: `{(A, B) : A, B ≥ 0, A + B = 1}`,
/// * (iii) `a = −∞`: `{(1, 0)}`,
/// * (iv) `f(1) > 0`, `a` finite: `{(c/(c − f(1)), −1/(c − f(1))) : c ≤ a} ∪ {(1, 0)}`,
/// * (v) `f(1) = 0`, `a` finite: `{(1, ±1/c) : c ≤ a} ∪ {(1, 0)}`.
///
/// `a` counts as `−∞` only when its upper bounds keep diverging (they at
/// least double between `k = 20` and `k = 30`). The left endpoint is the
/// mirror image under `(A, B) ↦ (−A, B)`.
pub fn support_set_endpoint(curve: &BoundaryCurve, side: Side) -> Result<SupportSet> {
    let f1 = curve.value(1.0)?;
    let n = REPRESENTATIVES - 1;
    let (case, a, mut reps) = if f1 >= 1.0 - 1e-9 {
        let reps = (0..=n)
            .map(|j| {
                let t = j as f64 / n as f64;
                Functional { a: t, b: 1.0 - t }
            })
            .collect();
        (EndpointCase::Ii, Slope::Finite(0.0), reps)
    } else {
        let slope = endpoint_slope(curve)?;
        if slope.diverging {
            (
                EndpointCase::Iii,
                Slope::NegInfinity,
                vec![Functional { a: 1.0, b: 0.0 }],
            )
        } else if slope.estimate < NEG_INFINITY_THRESHOLD || slope.estimate >= 0.0 {
            return Err(Error::UndecidedCase {
                candidates: vec!["iii".into(), "iv".into(), "v".into()],
                reason: format!(
                    "slope estimate {} without divergence evidence",
                    slope.estimate
                ),
            });
        } else {
            let a = slope.estimate;
            // c = a/u for u ∈ (0, 1]; u → 0 is the (1, 0) limit, listed separately.
            let cs = (1..=n).map(|j| a * n as f64 / j as f64);
            if f1 <= ENDPOINT_ZERO {
                let mut reps = vec![Functional { a: 1.0, b: 0.0 }];
                for c in cs {
                    reps.push(Functional::new(1.0, 1.0 / c)?);
                    reps.push(Functional::new(1.0, -1.0 / c)?);
                }
                reps.sort_by(|p, q| p.b.total_cmp(&q.b));
                reps.dedup();
                let reps = thin(reps, REPRESENTATIVES);
                (EndpointCase::V, Slope::Finite(a), reps)
            } else if f1 >= ENDPOINT_POSITIVE {
                let mut reps = vec![Functional { a: 1.0, b: 0.0 }];
                for c in cs {
                    reps.push(Functional::new(c / (c - f1), -1.0 / (c - f1))?);
                }
                (EndpointCase::Iv, Slope::Finite(a), reps)
            } else {
                return Err(Error::UndecidedCase {
                    candidates: vec!["iv".into(), "v".into()],
                    reason: format!("f(1) = {f1:e} is between zero and positive thresholds"),
                });
            }
        }
    };
    let mut point = [1.0, f1];
    if side == Side::Left {
        point[0] = -1.0;
        reps = reps.into_iter().map(Functional::reflect_x).collect();
    }
    Ok(SupportSet {
        location: Location::Endpoint { side },
        point,
        case_label: Some(case),
        slope_interval: None,
        parameters: Some(EndpointParams { a, f1 }),
        representatives: reps,
        side_condition: None,
    })
}

/// Keeps `k` evenly spaced items including both ends.
fn thin<T: Clone>(v: Vec<T>, k: usize) -> Vec<T> {
    if v.len() <= k {
        return v;
    }
    (0..k)
        .map(|i| v[i * (v.len() - 1) / (k - 1)].clone())
        .collect()
}

/// `(‖p + h d‖_E − ‖p‖_E) / h`, the forward difference of the norm at a
/// unit vector `p` in direction `d`.
pub fn directional_derivative_probe(
    spec: &NormSpec,
    point: [f64; 2],
    direction: [f64; 2],
    h: f64,
) -> Result<f64> {
    ensure_finite(
        &[point[0], point[1], direction[0], direction[1], h],
        "probe input",
    )?;
    let np = spec.eval(point)?;
    if (np - 1.0).abs() > 1e-10 {
        return Err(Error::Domain(format!(
            "probe point must lie on the unit sphere, has norm {np}"
        )));
    }
    if !(h > 0.0 && h <= 1e-3) {
        return Err(Error::Domain(format!(
            "probe step must lie in (0, 1e-3], got {h}"
        )));
    }
    let moved = spec.eval([point[0] + h * direction[0], point[1] + h * direction[1]])?;
    Ok((moved - np) / h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm::dual_norm;
    use approx::assert_abs_diff_eq;

    fn curve(s: &str) -> BoundaryCurve {
        BoundaryCurve::new(s.parse().unwrap())
    }

    #[test]
    fn interior_examples() {
        let s = support_set_interior(&curve("p:2"), 0.6).unwrap();
        assert_eq!(s.representatives.len(), 1);
        assert_abs_diff_eq!(s.representatives[0].a, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(s.representatives[0].b, 0.8, epsilon = 1e-15);

        let s = support_set_interior(&curve("p:1"), 0.0).unwrap();
        assert_eq!(s.slope_interval, Some([-1.0, 1.0]));
        assert_eq!(s.representatives.len(), REPRESENTATIVES);
        for g in &s.representatives {
            assert_eq!(g.b, 1.0);
            assert!(g.a.abs() <= 1.0);
        }
        assert_eq!(s.side_condition, Some(true));

        let s = support_set_interior(&curve("p:inf"), 0.0).unwrap();
        assert_eq!(s.representatives, vec![Functional { a: 0.0, b: 1.0 }]);
    }

    #[test]
    fn interior_functionals_have_unit_dual_norm() {
        for spec in ["mix:0.5:p:1:p:inf", "curve:0,1;0.5,0.9;1,0"] {
            let c = curve(spec);
            for x0 in [-0.7, -0.5, 0.0, 0.3, 0.5, 2.0 / 3.0] {
                let s = support_set_interior(&c, x0).unwrap();
                for g in &s.representatives {
                    let d = dual_norm(&c, *g, 64).unwrap();
                    assert_abs_diff_eq!(d, 1.0, epsilon = 1e-8);
                    assert_abs_diff_eq!(g.apply(s.point), 1.0, epsilon = 1e-8);
                }
                assert_eq!(s.side_condition, Some(true), "{spec} at {x0}");
            }
        }
    }

    #[test]
    fn gateaux_examples() {
        let g = gateaux_at(&curve("p:2"), 0.6).unwrap();
        assert_eq!(g.verdict, Smoothness::Smooth);
        let d = g.derivative.unwrap();
        assert_abs_diff_eq!(d.a, 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(d.b, 0.8, epsilon = 1e-15);
        assert_eq!(
            gateaux_at(&curve("p:1"), 0.0).unwrap().verdict,
            Smoothness::Corner
        );
        let g = gateaux_at(&curve("mix:0.5:p:1:p:inf"), 0.0).unwrap();
        assert_eq!(g.verdict, Smoothness::Corner);
        assert!(g.derivative.is_none());
    }

    #[test]
    fn endpoint_examples() {
        let s = support_set_endpoint(&curve("p:inf"), Side::Right).unwrap();
        assert_eq!(s.case_label, Some(EndpointCase::Ii));
        assert!(s
            .representatives
            .iter()
            .all(|g| g.a >= 0.0 && g.b >= 0.0 && (g.a + g.b - 1.0).abs() < 1e-15));

        let s = support_set_endpoint(&curve("p:2"), Side::Right).unwrap();
        assert_eq!(s.case_label, Some(EndpointCase::Iii));
        assert_eq!(s.representatives, vec![Functional { a: 1.0, b: 0.0 }]);
        assert_eq!(s.parameters.unwrap().a, Slope::NegInfinity);

        let s = support_set_endpoint(&curve("p:1"), Side::Right).unwrap();
        assert_eq!(s.case_label, Some(EndpointCase::V));
        assert_eq!(s.parameters.unwrap().a, Slope::Finite(-1.0));
        let bmax = s
            .representatives
            .iter()
            .map(|g| g.b)
            .fold(f64::MIN, f64::max);
        let bmin = s
            .representatives
            .iter()
            .map(|g| g.b)
            .fold(f64::MAX, f64::min);
        assert_abs_diff_eq!(bmax, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(bmin, -1.0, epsilon = 1e-12);
        assert!(s.representatives.contains(&Functional { a: 1.0, b: 0.0 }));
    }

    #[test]
    fn case_iv_on_a_vertical_edge() {
        // Sphere with a vertical edge of half-height 0.4 at x = 1.
        let c = curve("curve:0,1;0.5,0.8;1,0.4");
        let s = support_set_endpoint(&c, Side::Right).unwrap();
        assert_eq!(s.case_label, Some(EndpointCase::Iv));
        let p = s.parameters.unwrap();
        assert_abs_diff_eq!(p.f1, 0.4, epsilon = 1e-12);
        match p.a {
            Slope::Finite(a) => assert_abs_diff_eq!(a, -0.8, epsilon = 1e-6),
            other => panic!("{other:?}"),
        }
        for g in &s.representatives {
            assert_abs_diff_eq!(dual_norm(&c, *g, 64).unwrap(), 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(g.apply(s.point), 1.0, epsilon = 1e-8);
        }
        let e = gateaux_at_edge(&c, 0.1).unwrap();
        assert_eq!(e.derivative, Some(Functional { a: 1.0, b: 0.0 }));
        assert!(gateaux_at_edge(&c, 0.5).is_err());
        assert!(gateaux_at_edge(&curve("p:2"), 0.0).is_err());
    }

    #[test]
    fn left_endpoint_mirrors_right() {
        let c = curve("curve:0,1;0.5,0.8;1,0.4");
        let r = support_set_endpoint(&c, Side::Right).unwrap();
        let l = support_set_endpoint(&c, Side::Left).unwrap();
        assert_eq!(l.point, [-1.0, r.point[1]]);
        for (gl, gr) in l.representatives.iter().zip(&r.representatives) {
            assert_eq!(*gl, gr.reflect_x());
            assert_abs_diff_eq!(gl.apply(l.point), 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn probe_examples() {
        let p2: NormSpec = "p:2".parse().unwrap();
        assert_abs_diff_eq!(
            directional_derivative_probe(&p2, [0.6, 0.8], [1.0, 0.0], 1e-6).unwrap(),
            0.6,
            epsilon = 1e-5
        );
        for s in ["p:1.5", "mix:0.25:p:1:p:inf", "curve:0,1;0.5,0.9;1,0"] {
            let spec: NormSpec = s.parse().unwrap();
            assert_abs_diff_eq!(
                directional_derivative_probe(&spec, [1.0, 0.0], [1.0, 0.0], 1e-6).unwrap(),
                1.0,
                epsilon = 1e-9
            );
        }
        let p1: NormSpec = "p:1".parse().unwrap();
        assert_abs_diff_eq!(
            directional_derivative_probe(&p1, [0.0, 1.0], [1.0, 0.0], 1e-6).unwrap(),
            1.0,
            epsilon = 1e-9
        );
        assert!(directional_derivative_probe(&p1, [0.5, 0.0], [1.0, 0.0], 1e-6).is_err());
        assert!(directional_derivative_probe(&p1, [1.0, 0.0], [1.0, 0.0], 0.1).is_err());
    }

    #[test]
    fn json_shape() {
        let s = support_set_endpoint(&curve("p:2"), Side::Right).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["case"], "iii");
        assert_eq!(v["parameters"]["a"], "-inf");
        assert_eq!(v["representatives"][0]["A"], 1.0);
        assert_eq!(v["location"]["side"], "right");
        let s = support_set_interior(&curve("p:1"), 0.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["slope_interval"][0], -1.0);
        assert!(v["case"].is_null());
    }
}
