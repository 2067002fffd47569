//! Direct sums `X ⊕_E Y` and the asymptotic ball conditions.
//!
//! For `ε > 0` the *first condition* asks for `s₀` with
//! `‖(1, s − ε)‖_E < s` for all `s ≥ s₀`; the *second* is the same with the
//! coordinates swapped. The first holds for every `ε` exactly when the norm
//! is Gâteaux differentiable at `(0, 1)`, the second when it is at `(1, 0)`,
//! and smoothness at both points lets the ball generated property pass from
//! `X` and `Y` to `X ⊕_E Y`.
//!
//! The conditions are universally quantified in `ε` and `s`, so they are
//! only sampled here; [`equivalence_crosscheck`] compares the sampled
//! verdicts with the smoothness verdicts from the boundary curve.

use crate::boundary::BoundaryCurve;
use crate::error::{ensure_finite, Error, Result};
use crate::exec::{chunk_rng, run_chunks, Exec};
use crate::format::fmt17;
use crate::norm::{Exponent, Kind, NormSpec};
use crate::support::gateaux_at;
use crate::tolerance::Tolerances;
use crate::tri::Tri;
use rand::Rng;
use serde::Serialize;
use std::fmt;

/// Default `ε` grid: `2^-6, …, 2^1` and `8`.
pub const DEFAULT_EPSILONS: [f64; 9] = [0.015625, 0.03125, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 8.0];
/// Points on the geometric `s` grid.
pub const S_GRID: usize = 512;
/// Maximum nesting depth of [`FiniteSpace::Sum`].
pub const MAX_DEPTH: usize = 4;
/// Times the default `s_max` is multiplied by 8 while a verdict is undecided.
const ESCALATIONS: usize = 4;
/// Spot re-check points on `[s_max, 2 s_max]`.
const RECHECK: usize = 8;
/// A condition fails when the tail margins rise by no more than this.
const FLAT_TAIL: f64 = 1e-9;
/// Rejection-sampling attempts allowed per accepted point.
const MAX_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    /// `‖(1, s − ε)‖_E < s`, tied to the point `(0, 1)`.
    First,
    /// `‖(s − ε, 1)‖_E < s`, tied to the point `(1, 0)`.
    Second,
}

impl Coordinate {
    fn point(self, s: f64, eps: f64) -> [f64; 2] {
        match self {
            Coordinate::First => [1.0, s - eps],
            Coordinate::Second => [s - eps, 1.0],
        }
    }
}

/// Sampled evidence for one `ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionWitness {
    pub epsilon: f64,
    /// Smallest grid `s` from which every sampled margin is positive.
    pub s0: Option<f64>,
    pub s_max: f64,
    pub s_samples: Vec<f64>,
    /// `s − ‖(1, s − ε)‖_E` (or the swapped form) at each sample.
    pub margins: Vec<f64>,
    pub holds: Tri,
}

fn margin_tol(s: f64) -> f64 {
    1e-12 * s.max(1.0)
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let mut g: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    g[n - 1] = hi;
    g
}

fn witness_on(
    spec: &NormSpec,
    coord: Coordinate,
    eps: f64,
    s_max: f64,
    grid: usize,
) -> ConditionWitness {
    let margin = |s: f64| s - spec.eval_unchecked(coord.point(s, eps));
    let s_samples = geometric_grid(eps + (-10f64).exp2(), s_max, grid);
    let margins: Vec<f64> = s_samples.iter().map(|&s| margin(s)).collect();

    let mut first_ok = grid;
    for i in (0..grid).rev() {
        if margins[i] > margin_tol(s_samples[i]) {
            first_ok = i;
        } else {
            break;
        }
    }
    let tail = grid - grid / 4;
    let holds = if first_ok < grid {
        let recheck_ok = (1..=RECHECK).all(|j| {
            let s = s_max * (1.0 + j as f64 / RECHECK as f64);
            margin(s) > margin_tol(s)
        });
        if recheck_ok {
            Tri::Yes
        } else {
            Tri::Undecided
        }
    } else {
        let tail_negative = (tail..grid).all(|i| margins[i] <= -margin_tol(s_samples[i]));
        let rise = margins[grid - 1] - margins[tail];
        if tail_negative && rise <= FLAT_TAIL {
            Tri::No
        } else {
            Tri::Undecided
        }
    };
    ConditionWitness {
        epsilon: eps,
        s0: (holds == Tri::Yes).then(|| s_samples[first_ok]),
        s_max,
        s_samples,
        margins,
        holds,
    }
}

/// Samples the first or second condition at each `ε`.
///
/// Margins are evaluated on a geometric grid of `grid` points on
/// `[ε + 2^-10, s_max]`. The verdict is `yes` when the margins are
/// positive from some grid point on and stay positive at a few points of
/// `[s_max, 2 s_max]`, `no` when the last quarter of the grid is negative
/// and flat, and `undecided` otherwise. Without an explicit `s_max` the
/// search starts at `64 (1 + ε)` and widens eightfold while undecided.
pub fn check_condition(
    spec: &NormSpec,
    coord: Coordinate,
    epsilons: &[f64],
    s_max: Option<f64>,
    grid: usize,
) -> Result<Vec<ConditionWitness>> {
    ensure_finite(epsilons, "epsilon")?;
    if grid < 8 {
        return Err(Error::Domain(format!(
            "s grid needs at least 8 points, got {grid}"
        )));
    }
    epsilons
        .iter()
        .map(|&eps| {
            if eps <= 0.0 {
                return Err(Error::Domain(format!(
                    "epsilon must be positive, got {eps}"
                )));
            }
            match s_max {
                Some(m) => {
                    if !m.is_finite() || m <= eps + 1.0 {
                        return Err(Error::Domain(format!(
                            "s_max must exceed epsilon + 1 = {}, got {m}",
                            eps + 1.0
                        )));
                    }
                    Ok(witness_on(spec, coord, eps, m, grid))
                }
                None => {
                    let mut m = 64.0 * (1.0 + eps);
                    let mut w = witness_on(spec, coord, eps, m, grid);
                    for _ in 0..ESCALATIONS {
                        if w.holds.is_decided() {
                            break;
                        }
                        m *= 8.0;
                        w = witness_on(spec, coord, eps, m, grid);
                    }
                    Ok(w)
                }
            }
        })
        .collect()
}

/// Combined verdict over an `ε` grid: any failure fails, all successes hold.
pub fn aggregate(witnesses: &[ConditionWitness]) -> Tri {
    if witnesses.iter().any(|w| w.holds == Tri::No) {
        Tri::No
    } else if witnesses.iter().all(|w| w.holds == Tri::Yes) {
        Tri::Yes
    } else {
        Tri::Undecided
    }
}

/// Margins as CSV with header `epsilon,s,margin`.
pub fn margins_to_csv(witnesses: &[ConditionWitness]) -> String {
    let mut out = String::from("epsilon,s,margin\n");
    for w in witnesses {
        for (s, m) in w.s_samples.iter().zip(&w.margins) {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt17(w.epsilon),
                fmt17(*s),
                fmt17(*m)
            ));
        }
    }
    out
}

/// Gâteaux verdicts at `(0, 1)` and `(1, 0)`. The second is read off the
/// transposed norm `‖(x, y)‖_F = ‖(y, x)‖_E` at `(0, 1)`.
pub fn smooth_at_basis(spec: &NormSpec) -> Result<(Tri, Tri)> {
    smooth_at_basis_with(spec, Tolerances::default())
}

pub fn smooth_at_basis_with(spec: &NormSpec, tol: Tolerances) -> Result<(Tri, Tri)> {
    let at01 = gateaux_at(&BoundaryCurve::with_tolerances(spec.clone(), tol), 0.0)?.verdict;
    let at10 = gateaux_at(&BoundaryCurve::with_tolerances(spec.transposed(), tol), 0.0)?.verdict;
    Ok((at01.into(), at10.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoordinateCheck {
    pub coordinate: Coordinate,
    pub smooth: Tri,
    pub condition: Tri,
    pub consistent: Tri,
    pub witnesses: Vec<ConditionWitness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Crosscheck {
    pub norm: String,
    pub consistent: Tri,
    pub detail: Vec<CoordinateCheck>,
}

fn agreement(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Tri::Undecided, _) | (_, Tri::Undecided) => Tri::Undecided,
        (a, b) => Tri::from_bool(a == b),
    }
}

/// Compares smoothness at each basis point with the sampled condition for
/// the same coordinate.
pub fn equivalence_crosscheck(
    spec: &NormSpec,
    epsilons: &[f64],
    s_max: Option<f64>,
    tol: Tolerances,
) -> Result<Crosscheck> {
    let (s01, s10) = smooth_at_basis_with(spec, tol)?;
    let mut detail = Vec::with_capacity(2);
    for (coordinate, smooth) in [(Coordinate::First, s01), (Coordinate::Second, s10)] {
        let witnesses = check_condition(spec, coordinate, epsilons, s_max, S_GRID)?;
        let condition = aggregate(&witnesses);
        detail.push(CoordinateCheck {
            coordinate,
            smooth,
            condition,
            consistent: agreement(smooth, condition),
            witnesses,
        });
    }
    let consistent = if detail.iter().any(|d| d.consistent == Tri::No) {
        Tri::No
    } else {
        detail.iter().fold(Tri::Yes, |acc, d| acc.and(d.consistent))
    };
    Ok(Crosscheck {
        norm: spec.to_string(),
        consistent,
        detail,
    })
}

/// A finite-dimensional normed space.
#[derive(Debug, Clone)]
pub enum FiniteSpace {
    Lp {
        dim: usize,
        p: Exponent,
    },
    /// ℝ² under an absolute normalised norm.
    Plane(NormSpec),
    /// `X ⊕_E Y` on `ℝ^(dim X + dim Y)`.
    Sum {
        outer: NormSpec,
        x: Box<FiniteSpace>,
        y: Box<FiniteSpace>,
    },
}

impl FiniteSpace {
    pub fn lp(dim: usize, p: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("space dimension must be positive".into()));
        }
        Ok(FiniteSpace::Lp {
            dim,
            p: Exponent::new(p)?,
        })
    }

    pub fn sum(outer: NormSpec, x: FiniteSpace, y: FiniteSpace) -> Result<Self> {
        let depth = 1 + x.depth().max(y.depth());
        if depth > MAX_DEPTH {
            return Err(Error::Domain(format!(
                "direct sums nest at most {MAX_DEPTH} levels deep, got {depth}"
            )));
        }
        Ok(FiniteSpace::Sum {
            outer,
            x: Box::new(x),
            y: Box::new(y),
        })
    }

    /// Parses `<norm>,<dim>`. `p:` norms live on any `ℝⁿ`; other norms
    /// need `dim = 2`.
    pub fn parse(text: &str) -> Result<Self> {
        let (spec, dim) = text.rsplit_once(',').ok_or_else(|| Error::Parse {
            pos: text.len(),
            msg: "expected `<norm>,<dim>`".into(),
        })?;
        let dim: usize = dim.trim().parse().map_err(|_| Error::Parse {
            pos: spec.len() + 1,
            msg: format!("bad dimension `{dim}`"),
        })?;
        let spec: NormSpec = spec.parse()?;
        match spec.kind() {
            Kind::P(p) => {
                if dim == 0 {
                    return Err(Error::Domain("space dimension must be positive".into()));
                }
                Ok(FiniteSpace::Lp { dim, p: *p })
            }
            _ if dim == 2 => Ok(FiniteSpace::Plane(spec)),
            _ => Err(Error::Domain(format!(
                "norm `{spec}` is defined on the plane only, got dimension {dim}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            FiniteSpace::Lp { dim, .. } => *dim,
            FiniteSpace::Plane(_) => 2,
            FiniteSpace::Sum { x, y, .. } => x.dim() + y.dim(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            FiniteSpace::Sum { x, y, .. } => 1 + x.depth().max(y.depth()),
            _ => 0,
        }
    }

    pub fn label(&self) -> String {
        self.to_string()
    }

    /// Norm of `v`, which must have length [`dim`](Self::dim).
    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim() {
            return Err(Error::Domain(format!(
                "vector of length {} in a space of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        ensure_finite(v, "vector")?;
        Ok(self.norm_unchecked(v))
    }

    fn norm_unchecked(&self, v: &[f64]) -> f64 {
        match self {
            FiniteSpace::Lp { p, .. } => p.norm(v),
            FiniteSpace::Plane(spec) => spec.eval_unchecked([v[0], v[1]]),
            FiniteSpace::Sum { outer, x, y } => {
                let (vx, vy) = v.split_at(x.dim());
                outer.eval_unchecked([x.norm_unchecked(vx), y.norm_unchecked(vy)])
            }
        }
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteSpace::Lp { dim, p } => write!(f, "p:{p},{dim}"),
            FiniteSpace::Plane(spec) => write!(f, "{spec},2"),
            FiniteSpace::Sum { outer, x, y } => write!(f, "({x}) +[{outer}] ({y})"),
        }
    }
}

/// `‖(‖x‖_X, ‖y‖_Y)‖_E`.
pub fn sum_norm(
    e: &NormSpec,
    x_space: &FiniteSpace,
    y_space: &FiniteSpace,
    x: &[f64],
    y: &[f64],
) -> Result<f64> {
    let nx = x_space.norm(x)?;
    let ny = y_space.norm(y)?;
    Ok(e.eval_unchecked([nx, ny]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InclusionKind {
    /// `B_r(y) ⊆ B_{s−ε}(c)`.
    Shift,
    /// `B_X × B_{s−ε}(c) ⊆ B_t((0, c))`.
    Product,
    /// `B_X × B_r(y) ⊆ B_t((0, c))`, the composition of the two.
    Chain,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionViolation {
    pub index: usize,
    pub kind: InclusionKind,
    pub point: Vec<f64>,
    /// Distance minus radius.
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub norm: String,
    pub x_space: String,
    pub y_space: String,
    pub y_center: Vec<f64>,
    pub r: f64,
    pub epsilon: f64,
    pub s0: f64,
    pub s: f64,
    pub t: f64,
    pub samples_checked: usize,
    pub violations: Vec<InclusionViolation>,
    /// `‖(0, c)‖_Z = s > t`, so the ball `B_t((0, c))` misses the origin.
    pub zero_excluded: bool,
    pub seed: u64,
}

impl InclusionReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.zero_excluded && self.t < self.s
    }
}

/// Sampling parameters for [`lemma_inclusion_verify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

/// Uniform point of `center + radius · B` by rejection from the enclosing cube.
fn sample_ball<R: Rng>(
    rng: &mut R,
    space: &FiniteSpace,
    center: &[f64],
    radius: f64,
) -> Option<Vec<f64>> {
    let mut off = vec![0.0; center.len()];
    for _ in 0..MAX_ATTEMPTS {
        for o in off.iter_mut() {
            *o = rng.gen_range(-1.0..=1.0);
        }
        if space.norm_unchecked(&off) <= 1.0 {
            return Some(
                center
                    .iter()
                    .zip(&off)
                    .map(|(c, o)| c + radius * o)
                    .collect(),
            );
        }
    }
    None
}

/// Checks the metric inclusions that place a ball `B_r(y)` with `0 ∉ B_r(y)`
/// inside a larger ball `B_t((0, c))` of `X ⊕_E Y` which still misses the
/// origin.
///
/// With `ε = ‖y‖ − r`, an `s > max(ε, ‖y‖)` with `t = ‖(1, s − ε)‖_E < s`
/// is taken from a first-condition witness and `c = s y / ‖y‖`. Each
/// sample draws `w ∈ B_r(y)`, `u ∈ B_X`, `v ∈ B_{s−ε}(c)` and checks
/// `‖w − c‖ ≤ s − ε`, `‖(u, v − c)‖_Z ≤ t` and `‖(u, w − c)‖_Z ≤ t`
/// with slack `1e-12 · max(1, s)`.
pub fn lemma_inclusion_verify(
    e: &NormSpec,
    x_space: &FiniteSpace,
    y_space: &FiniteSpace,
    y_center: &[f64],
    r: f64,
    cfg: SamplingConfig,
) -> Result<InclusionReport> {
    ensure_finite(&[r], "r")?;
    let ny = y_space.norm(y_center)?;
    if !(r > 0.0 && ny > r) {
        return Err(Error::Domain(format!(
            "need ‖y‖ > r > 0, got ‖y‖ = {ny}, r = {r}"
        )));
    }
    let eps = ny - r;
    let witness = check_condition(e, Coordinate::First, &[eps], None, S_GRID)?
        .pop()
        .expect("one witness per epsilon");
    let s0 = match (witness.holds, witness.s0) {
        (Tri::Yes, Some(s0)) => s0,
        (holds, _) => {
            return Err(Error::Precondition(format!(
                "condition ‖(1, s − ε)‖_E < s for all large s {} at ε = {}",
                if holds == Tri::No {
                    "fails"
                } else {
                    "is not established (margins neither positive nor bounded below zero)"
                },
                fmt17(eps)
            )))
        }
    };
    let mut s = s0.max(ny) + 1.0;
    let mut t = e.eval_unchecked([1.0, s - eps]);
    for _ in 0..64 {
        if t < s {
            break;
        }
        s *= 2.0;
        t = e.eval_unchecked([1.0, s - eps]);
    }
    if t >= s {
        return Err(Error::Precondition(format!(
            "no s with t < s found at ε = {}",
            fmt17(eps)
        )));
    }
    let c: Vec<f64> = y_center.iter().map(|v| s * v / ny).collect();
    let slack = margin_tol(s);
    let z = |u: &[f64], v: &[f64]| {
        e.eval_unchecked([x_space.norm_unchecked(u), y_space.norm_unchecked(v)])
    };
    let diff = |a: &[f64]| -> Vec<f64> { a.iter().zip(&c).map(|(p, q)| p - q).collect() };
    let origin_x = vec![0.0; x_space.dim()];

    let results = run_chunks(cfg.exec, cfg.samples, |chunk, range| {
        let mut rng = chunk_rng(cfg.seed, chunk);
        let mut out = Vec::new();
        for index in range {
            let drawn = sample_ball(&mut rng, y_space, y_center, r).and_then(|w| {
                let u = sample_ball(&mut rng, x_space, &origin_x, 1.0)?;
                let v = sample_ball(&mut rng, y_space, &c, s - eps)?;
                Some((w, u, v))
            });
            let Some((w, u, v)) = drawn else {
                out.push(Err(index));
                continue;
            };
            let wc = diff(&w);
            let checks = [
                (
                    InclusionKind::Shift,
                    y_space.norm_unchecked(&wc) - (s - eps),
                    w.clone(),
                ),
                (
                    InclusionKind::Product,
                    z(&u, &diff(&v)) - t,
                    [u.clone(), v].concat(),
                ),
                (InclusionKind::Chain, z(&u, &wc) - t, [u, w].concat()),
            ];
            for (kind, excess, point) in checks {
                if excess > slack {
                    out.push(Ok(InclusionViolation {
                        index,
                        kind,
                        point,
                        excess,
                    }));
                }
            }
        }
        out
    });
    let mut violations = Vec::new();
    for r in results {
        match r {
            Ok(v) => violations.push(v),
            Err(index) => {
                return Err(Error::Domain(format!(
                    "rejection sampling gave up at sample {index}"
                )))
            }
        }
    }
    let zero_norm = z(&origin_x, &c);
    Ok(InclusionReport {
        norm: e.to_string(),
        x_space: x_space.to_string(),
        y_space: y_space.to_string(),
        y_center: y_center.to_vec(),
        r,
        epsilon: eps,
        s0,
        s,
        t,
        samples_checked: cfg.samples,
        violations,
        zero_excluded: zero_norm > t,
        seed: cfg.seed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preservation {
    Preserved,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BgpVerdict {
    pub norm: String,
    pub smooth_at_01: Tri,
    pub smooth_at_10: Tri,
    pub condition_first: Tri,
    pub condition_second: Tri,
    pub verdict: Preservation,
    pub notes: Vec<String>,
}

/// Whether `‖·‖_E` agrees with `ℓ¹` within `1e-9` on 64 unit directions.
pub fn is_near_l1(spec: &NormSpec) -> bool {
    (0..64).all(|i| {
        let th = std::f64::consts::FRAC_PI_2 * i as f64 / 63.0;
        let (sn, cs) = th.sin_cos();
        (spec.eval_unchecked([cs, sn]) - (cs.abs() + sn.abs())).abs() <= 1e-9
    })
}

/// Whether the ball generated property is known to pass from `X` and `Y`
/// to `X ⊕_E Y`: it does when the norm is smooth at both basis points.
/// Sampled condition verdicts are attached for corroboration.
pub fn bgp_sum_verdict(spec: &NormSpec, tol: Tolerances) -> Result<BgpVerdict> {
    let (s01, s10) = smooth_at_basis_with(spec, tol)?;
    let c1 = aggregate(&check_condition(
        spec,
        Coordinate::First,
        &DEFAULT_EPSILONS,
        None,
        S_GRID,
    )?);
    let c2 = aggregate(&check_condition(
        spec,
        Coordinate::Second,
        &DEFAULT_EPSILONS,
        None,
        S_GRID,
    )?);
    let verdict = if s01 == Tri::Yes && s10 == Tri::Yes {
        Preservation::Preserved
    } else {
        Preservation::Unknown
    };
    let mut notes = Vec::new();
    if verdict == Preservation::Unknown {
        notes.push(format!(
            "smoothness at (0,1): {s01}, at (1,0): {s10}; the sufficient criterion does not apply"
        ));
    }
    if is_near_l1(spec) {
        notes.push("it is open whether the l1-sum of two spaces with the BGP has the BGP".into());
    }
    Ok(BgpVerdict {
        norm: spec.to_string(),
        smooth_at_01: s01,
        smooth_at_10: s10,
        condition_first: c1,
        condition_second: c2,
        verdict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn spec(s: &str) -> NormSpec {
        s.parse().unwrap()
    }

    fn one(s: &str, coord: Coordinate, eps: f64) -> ConditionWitness {
        check_condition(&spec(s), coord, &[eps], None, S_GRID)
            .unwrap()
            .pop()
            .unwrap()
    }

    #[test]
    fn condition_examples() {
        let w = one("p:1", Coordinate::First, 0.5);
        assert_eq!(w.holds, Tri::No);
        for m in &w.margins {
            assert_abs_diff_eq!(*m, -0.5, epsilon = 1e-12);
        }

        let w = one("p:2", Coordinate::First, 0.5);
        assert_eq!(w.holds, Tri::Yes);
        let s0 = w.s0.unwrap();
        assert!(s0 > 1.25 && s0 < 1.25 * 1.011, "{s0}");

        let w = one("p:inf", Coordinate::First, 0.5);
        assert_eq!(w.holds, Tri::Yes);
        let s0 = w.s0.unwrap();
        assert!(s0 > 1.0 && s0 <= 1.02, "{s0}");
    }

    #[test]
    fn witnesses_are_valid() {
        for s in ["p:1.5", "p:2", "p:3", "p:inf", "curve:0,1;0.5,1;1,0"] {
            for w in check_condition(&spec(s), Coordinate::First, &DEFAULT_EPSILONS, None, S_GRID)
                .unwrap()
            {
                assert_eq!(w.holds, Tri::Yes, "{s} at {}", w.epsilon);
                let s0 = w.s0.unwrap();
                assert!(s0 > w.epsilon);
                for (x, m) in w.s_samples.iter().zip(&w.margins) {
                    if *x >= s0 {
                        assert!(*m > 0.0);
                    }
                }
                let n = spec(s);
                for k in 1..=16 {
                    let x = 2.0 * w.s_max * k as f64 / 16.0;
                    if x >= s0 {
                        assert!(x - n.eval([1.0, x - w.epsilon]).unwrap() > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn small_epsilon_needs_a_wider_search() {
        // ‖(1, t)‖_{1.5} ≈ t + (2/3) t^{-1/2}, so s₀ ≈ (2 / 3ε)² ≈ 1820 at ε = 2^-6.
        let w = one("p:1.5", Coordinate::First, 0.015625);
        assert_eq!(w.holds, Tri::Yes);
        assert!(w.s0.unwrap() > 1500.0 && w.s0.unwrap() < 2200.0);
    }

    #[test]
    fn rejects_bad_input() {
        let p2 = spec("p:2");
        assert!(check_condition(&p2, Coordinate::First, &[0.0], None, S_GRID).is_err());
        assert!(check_condition(&p2, Coordinate::First, &[0.5], Some(1.2), S_GRID).is_err());
        assert!(check_condition(&p2, Coordinate::First, &[0.5], None, 4).is_err());
    }

    #[test]
    fn mixture_condition_depends_on_epsilon() {
        // ‖(1, t)‖ = t + 1/2 for t ≥ 1, so the margin is ε − 1/2.
        assert_eq!(
            one("mix:0.5:p:1:p:inf", Coordinate::First, 0.25).holds,
            Tri::No
        );
        assert_eq!(
            one("mix:0.5:p:1:p:inf", Coordinate::First, 1.0).holds,
            Tri::Yes
        );
        assert_eq!(
            one("mix:0.5:p:1:p:inf", Coordinate::First, 0.5).holds,
            Tri::Undecided
        );
    }

    #[test]
    fn crosscheck_examples() {
        for s in ["p:2", "p:1", "mix:0.5:p:1:p:inf"] {
            let c =
                equivalence_crosscheck(&spec(s), &DEFAULT_EPSILONS, None, Tolerances::default())
                    .unwrap();
            assert_eq!(c.consistent, Tri::Yes, "{s}");
        }
        let c =
            equivalence_crosscheck(&spec("p:1"), &DEFAULT_EPSILONS, None, Tolerances::default())
                .unwrap();
        assert!(c
            .detail
            .iter()
            .all(|d| d.smooth == Tri::No && d.condition == Tri::No));
    }

    #[test]
    fn basis_smoothness() {
        assert_eq!(smooth_at_basis(&spec("p:2")).unwrap(), (Tri::Yes, Tri::Yes));
        assert_eq!(smooth_at_basis(&spec("p:1")).unwrap(), (Tri::No, Tri::No));
        assert_eq!(
            smooth_at_basis(&spec("curve:0,1;0.5,0.9;1,0")).unwrap(),
            (Tri::No, Tri::No)
        );
        assert_eq!(
            smooth_at_basis(&spec("curve:0,1;0.5,1;1,0")).unwrap(),
            (Tri::Yes, Tri::No)
        );
    }

    #[test]
    fn sum_norm_examples() {
        let l1 = FiniteSpace::lp(2, 1.0).unwrap();
        let linf = FiniteSpace::lp(2, f64::INFINITY).unwrap();
        let v = sum_norm(&spec("p:2"), &l1, &linf, &[0.3, 0.3], &[0.8, 0.1]).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-15);
        assert_eq!(
            sum_norm(&spec("p:3"), &l1, &linf, &[0.0, 0.0], &[0.0, 0.0]).unwrap(),
            0.0
        );
        let r = FiniteSpace::lp(1, 2.0).unwrap();
        assert_eq!(
            sum_norm(&spec("p:1"), &r, &r, &[0.25], &[0.5]).unwrap(),
            0.75
        );
        assert!(sum_norm(&spec("p:1"), &r, &r, &[0.25, 1.0], &[0.5]).is_err());
    }

    #[test]
    fn sum_norm_is_symmetric_under_swapping() {
        let e = spec("curve:0,1;0.5,0.9;1,0");
        let x = FiniteSpace::lp(2, 3.0).unwrap();
        let y = FiniteSpace::parse("mix:0.25:p:1:p:inf,2").unwrap();
        let (a, b) = ([0.3, -0.7], [1.1, 0.2]);
        let lhs = sum_norm(&e, &x, &y, &a, &b).unwrap();
        let rhs = sum_norm(&e.transposed(), &y, &x, &b, &a).unwrap();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
    }

    #[test]
    fn finite_space_parsing_and_nesting() {
        assert_eq!(FiniteSpace::parse("p:2,3").unwrap().dim(), 3);
        assert_eq!(FiniteSpace::parse("mix:0.5:p:1:p:inf,2").unwrap().dim(), 2);
        assert!(FiniteSpace::parse("mix:0.5:p:1:p:inf,3").is_err());
        assert!(FiniteSpace::parse("p:2").is_err());
        assert!(FiniteSpace::parse("p:2,0").is_err());
        assert!(matches!(
            FiniteSpace::parse("q:2,1"),
            Err(Error::Parse { .. })
        ));

        let mut s = FiniteSpace::lp(1, 2.0).unwrap();
        for depth in 1..=MAX_DEPTH {
            s = FiniteSpace::sum(spec("p:2"), s, FiniteSpace::lp(1, 1.0).unwrap()).unwrap();
            assert_eq!(s.depth(), depth);
        }
        assert!(
            FiniteSpace::sum(spec("p:2"), s.clone(), FiniteSpace::lp(1, 1.0).unwrap()).is_err()
        );
        // Nested Euclidean sums of real lines are Euclidean.
        let v = [0.1, 0.2, 0.3, 0.4, 0.5];
        let e = FiniteSpace::sum(
            spec("p:2"),
            FiniteSpace::sum(
                spec("p:2"),
                FiniteSpace::lp(2, 2.0).unwrap(),
                FiniteSpace::lp(1, 2.0).unwrap(),
            )
            .unwrap(),
            FiniteSpace::lp(2, 2.0).unwrap(),
        )
        .unwrap();
        let l2 = v.iter().map(|c| c * c).sum::<f64>().sqrt();
        assert_abs_diff_eq!(e.norm(&v).unwrap(), l2, epsilon = 1e-15);
    }

    fn cfg(samples: usize, seed: u64) -> SamplingConfig {
        SamplingConfig {
            samples,
            seed,
            exec: Exec::default(),
        }
    }

    #[test]
    fn lemma_hand_checked_instance() {
        let r1 = FiniteSpace::lp(1, 2.0).unwrap();
        let rep =
            lemma_inclusion_verify(&spec("p:2"), &r1, &r1, &[2.0], 1.0, cfg(20_000, 7)).unwrap();
        assert_eq!(rep.epsilon, 1.0);
        assert_eq!(rep.s, 3.0);
        assert_abs_diff_eq!(rep.t, 5f64.sqrt(), epsilon = 1e-15);
        assert!(rep.violations.is_empty());
        assert!(rep.zero_excluded);
        assert!(rep.s > rep.epsilon.max(2.0));
    }

    #[test]
    fn lemma_sup_sum_instance() {
        let l2 = FiniteSpace::lp(2, 2.0).unwrap();
        let rep =
            lemma_inclusion_verify(&spec("p:inf"), &l2, &l2, &[0.0, 2.0], 1.0, cfg(10_000, 3))
                .unwrap();
        assert_eq!(rep.epsilon, 1.0);
        assert_eq!(rep.t, rep.s - 1.0);
        assert!(rep.is_clean());
    }

    #[test]
    fn lemma_needs_the_condition() {
        let r1 = FiniteSpace::lp(1, 2.0).unwrap();
        let err =
            lemma_inclusion_verify(&spec("p:1"), &r1, &r1, &[2.0], 1.0, cfg(100, 0)).unwrap_err();
        assert!(
            matches!(err, Error::Precondition(ref m) if m.contains("ε = 1")),
            "{err}"
        );
        assert!(matches!(
            lemma_inclusion_verify(&spec("p:2"), &r1, &r1, &[0.5], 1.0, cfg(100, 0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn lemma_is_deterministic_across_exec_modes() {
        let x = FiniteSpace::lp(2, 1.0).unwrap();
        let y = FiniteSpace::lp(3, 3.0).unwrap();
        let run = |exec| {
            lemma_inclusion_verify(
                &spec("p:3"),
                &x,
                &y,
                &[0.5, 1.0, -1.5],
                0.8,
                SamplingConfig {
                    samples: 9000,
                    seed: 11,
                    exec,
                },
            )
            .unwrap()
        };
        assert_eq!(run(Exec::Sequential), run(Exec::Parallel));
    }

    #[test]
    fn bgp_verdicts() {
        let v = bgp_sum_verdict(&spec("p:2"), Tolerances::default()).unwrap();
        assert_eq!(v.verdict, Preservation::Preserved);
        assert!(v.notes.is_empty());
        assert_eq!(
            bgp_sum_verdict(&spec("p:inf"), Tolerances::default())
                .unwrap()
                .verdict,
            Preservation::Preserved
        );
        let v = bgp_sum_verdict(&spec("p:1"), Tolerances::default()).unwrap();
        assert_eq!(v.verdict, Preservation::Unknown);
        assert!(v.notes.iter().any(|n| n.contains("open")));
        assert_eq!((v.condition_first, v.condition_second), (Tri::No, Tri::No));
    }

    #[test]
    fn margins_csv() {
        let w = check_condition(&spec("p:1"), Coordinate::First, &[0.5], Some(4.0), 8).unwrap();
        let csv = margins_to_csv(&w);
        assert!(csv.starts_with("epsilon,s,margin\n0.5,"));
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.lines().nth(8).unwrap().starts_with("0.5,4,-0.5"));
    }
}
