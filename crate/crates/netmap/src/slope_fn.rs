//! The slope function `σ_f`, evaluated by the spin-mirror zigzag algorithm.
//!
//! For an essential slope `p/q` with `c₂ ≠ c₃` the algorithm
//!
//! 1. picks a line `L` of direction `λ = (q, p)` through a postcritical class
//!    whose coset number is `c₂` (or `c₃`), and on it two consecutive points
//!    `v`, `w` of the marked classes `P₁ ∪ P₂` that both lie in `P₂`
//!    ([`find_segment`]);
//! 2. lists the midpoints `λ₀, …, λ_{n+1}` of the mirrors containing `v`,
//!    crossed by the open segment, and containing `w` ([`mirror_crossings`]);
//! 3. forms the alternating sum `Σ (−1)ⁱ (λ_{i+1} − λ_i) ∈ Λ₁` and reads off
//!    its slope in the correspondence basis `(λ₁, μ₁)` ([`sigma`]).
//!
//! All incidence tests are exact.  [`sigma_main_closed_form`] is an
//! independent closed-form evaluation for the bundled degree-10 example and
//! serves as a test oracle.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::core_lattice::{IntVec2, Slope};
use crate::geometry::{
    cross3, intersect_segments, point_on_segment, qi, sign, BBox, RatPoint, SegmentHit, Q,
};
use crate::presentation::NetMapPresentation;
use crate::pullback::{analyze_slope, coset_number, PullbackError};

/// Errors from slope-function evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeFnError {
    /// The input is `o` rather than a slope.
    #[error(transparent)]
    Pullback(#[from] PullbackError),
    /// `c₂ = c₃`, so the pullback has no essential, nonperipheral component.
    #[error("slope {0} has no essential nonperipheral preimage (sigma = o)")]
    NonEssential(Slope),
    /// A segment touches a mirror endpoint or midpoint, runs along a mirror
    /// edge, or touches a mirror without crossing it.
    #[error("segment {v} -> {w} meets a spin mirror non-transversally")]
    NonTransverse { v: String, w: String },
    /// The open segment passes through a degenerate mirror.
    #[error("segment {v} -> {w} passes through the degenerate mirror at {at}")]
    DegenerateIncidence { v: String, w: String, at: IntVec2 },
    /// Inconsistent presentation data (e.g. a vanishing alternating sum).
    #[error("internal error: {0}")]
    Internal(String),
}

/// Full record of one zigzag evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZigzagTrace {
    pub slope: Slope,
    /// Start of the segment, in a postcritical class.
    pub v: IntVec2,
    /// End of the segment; `w − v` is a positive multiple of `(q, p)`.
    pub w: IntVec2,
    /// Mirror midpoints `λ₀, …, λ_{n+1}`.
    pub midpoints: Vec<IntVec2>,
    /// `Σ_{i=0}^{n} (−1)ⁱ (λ_{i+1} − λ_i)`.
    pub delta: IntVec2,
    /// Slope of `delta` in the correspondence basis.
    pub result: Slope,
}

impl ZigzagTrace {
    /// Number `n` of interior mirror crossings.
    pub fn interior_crossings(&self) -> usize {
        self.midpoints.len() - 2
    }
}

/// All admissible segments `(v, w)` for `slope`, in retry order: the
/// postcritical representatives `h₁, −h₁, …, h₄, −h₄` whose lines have coset
/// number `c₂` or `c₃`, in turn, and along each line the consecutive pairs of
/// marked points starting from the representative.
pub fn candidate_segments(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<Vec<(IntVec2, IntVec2)>, SlopeFnError> {
    let summary = analyze_slope(pres, slope)?;
    if summary.essential == 0 {
        return Err(SlopeFnError::NonEssential(slope));
    }
    let lambda = slope.direction().expect("essential slope");
    let [_, c2, c3, _] = summary.coset_numbers;
    let mut out: Vec<(IntVec2, IntVec2)> = Vec::new();
    for &h in pres.postcritical() {
        for eta in [h, -h] {
            let c = coset_number(eta, slope, summary.d_prime)?;
            if c != c2 && c != c3 {
                continue;
            }
            let stops: Vec<i64> = (0..=2 * summary.d)
                .filter(|&t| pres.is_marked_class(eta + t * lambda))
                .collect();
            for pair in stops.windows(2) {
                let (a, b) = (eta + pair[0] * lambda, eta + pair[1] * lambda);
                if pres.is_postcritical_class(a)
                    && pres.is_postcritical_class(b)
                    && !out.contains(&(a, b))
                {
                    out.push((a, b));
                }
            }
        }
    }
    if out.is_empty() {
        return Err(SlopeFnError::Internal(format!(
            "no pair of consecutive postcritical points on a c2/c3 line for slope {slope}"
        )));
    }
    Ok(out)
}

/// The first admissible segment `(v, w)` for `slope`; see
/// [`candidate_segments`].
pub fn find_segment(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<(IntVec2, IntVec2), SlopeFnError> {
    candidate_segments(pres, slope).map(|c| c[0])
}

/// Translates of the `2Λ₁` lattice that may move `shape` onto some part of
/// the segment `a0a1`: a superset of those that do, without repetitions.
///
/// The admissible translations form the Minkowski sum of the segment and the
/// reflected bounding box of `shape`, a convex polygon.  In lattice
/// coordinates `(a, b)` each integer column `a` meets it in an interval,
/// obtained from the segments between pairs of its eight corner points.
/// Floating point only bounds these intervals, padded by a small tolerance,
/// so no translate meeting the segment is missed; exact tests decide
/// afterwards.
fn translates_near_segment(
    pres: &NetMapPresentation,
    shape: &BBox,
    a0: RatPoint,
    a1: RatPoint,
) -> Vec<IntVec2> {
    const EPS: f64 = 1e-7;
    let f = |q: Q| *q.numer() as f64 / *q.denom() as f64;
    let twice = pres.double_lambda1();
    let (u, v) = (twice.u, twice.v);
    let det = twice.det() as f64;
    let to_coords = |x: f64, y: f64| {
        (
            (x * v.y as f64 - y * v.x as f64) / det,
            (u.x as f64 * y - u.y as f64 * x) / det,
        )
    };
    let mut corners = Vec::with_capacity(8);
    for end in [a0, a1] {
        for sx in [shape.min_x, shape.max_x] {
            for sy in [shape.min_y, shape.max_y] {
                corners.push(to_coords(f(end.x) - f(sx), f(end.y) - f(sy)));
            }
        }
    }
    let a_min = corners.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let a_max = corners
        .iter()
        .map(|c| c.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    for a in (a_min - EPS).floor() as i64..=(a_max + EPS).ceil() as i64 {
        let af = a as f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (i, p) in corners.iter().enumerate() {
            for q in &corners[i..] {
                let (l, r) = if p.0 <= q.0 { (p, q) } else { (q, p) };
                if af < l.0 - EPS || af > r.0 + EPS {
                    continue;
                }
                let (b1, b2) = if r.0 - l.0 < EPS {
                    (l.1, r.1)
                } else {
                    let t = ((af - l.0) / (r.0 - l.0)).clamp(0.0, 1.0);
                    let b = l.1 + t * (r.1 - l.1);
                    (b, b)
                };
                lo = lo.min(b1.min(b2));
                hi = hi.max(b1.max(b2));
            }
        }
        if lo > hi {
            continue;
        }
        for b in (lo - EPS).floor() as i64..=(hi + EPS).ceil() as i64 {
            out.push(twice.combine(a, b));
        }
    }
    out
}

fn non_transverse(a0: RatPoint, a1: RatPoint) -> SlopeFnError {
    SlopeFnError::NonTransverse {
        v: a0.to_string(),
        w: a1.to_string(),
    }
}

/// Integer prefilter for [`interior_crossings`]: a translate of a polyline
/// whose vertices all lie strictly on one side of the line through the
/// segment cannot meet it.  Coordinates are scaled by a common denominator so
/// the orientation test needs no rational arithmetic.
struct SideTest {
    /// Scaled vertices of the untranslated polyline.
    vertices: Vec<(i128, i128)>,
    scale: i128,
    origin: (i128, i128),
    dir: (i128, i128),
}

impl SideTest {
    fn new(poly: &[RatPoint], a0: RatPoint, a1: RatPoint) -> Self {
        let scale = poly.iter().chain([&a0, &a1]).fold(1i128, |acc, p| {
            num_integer::lcm(acc, num_integer::lcm(*p.x.denom(), *p.y.denom()))
        });
        let scaled = |p: &RatPoint| {
            (
                (p.x * Q::from_integer(scale)).to_integer(),
                (p.y * Q::from_integer(scale)).to_integer(),
            )
        };
        let origin = scaled(&a0);
        let end = scaled(&a1);
        SideTest {
            vertices: poly.iter().map(scaled).collect(),
            scale,
            origin,
            dir: (end.0 - origin.0, end.1 - origin.1),
        }
    }

    fn strictly_one_side(&self, t: IntVec2) -> bool {
        let (tx, ty) = (t.x as i128 * self.scale, t.y as i128 * self.scale);
        let mut seen = 0i32;
        for &(x, y) in &self.vertices {
            let (rx, ry) = (x + tx - self.origin.0, y + ty - self.origin.1);
            let c = (self.dir.0 * ry - self.dir.1 * rx).signum() as i32;
            if c == 0 || (seen != 0 && c != seen) {
                return false;
            }
            seen = c;
        }
        true
    }
}

/// Midpoints of the mirror translates crossed by the open segment `a0a1`,
/// ordered along the segment.
///
/// `end_mirrors` names the midpoints of mirrors allowed to touch the segment
/// at `a0` and at `a1` respectively.
fn interior_crossings(
    pres: &NetMapPresentation,
    a0: RatPoint,
    a1: RatPoint,
    end_mirrors: (Option<IntVec2>, Option<IntVec2>),
) -> Result<Vec<IntVec2>, SlopeFnError> {
    let zero = Q::zero();
    let one = qi(1);
    let mut hits: Vec<(Q, IntVec2)> = Vec::new();
    for mirror in pres.mirrors() {
        let poly = mirror.full_polyline();
        let shape = BBox::of(&poly);
        let mid_index = mirror.half_path.len().saturating_sub(1);
        let side = SideTest::new(&poly, a0, a1);
        for t in translates_near_segment(pres, &shape, a0, a1) {
            if side.strictly_one_side(t) {
                continue;
            }
            let midpoint = mirror.midpoint + t;
            let shift = RatPoint::from(t);
            let pts: Vec<RatPoint> = poly.iter().map(|&p| p + shift).collect();
            let end_ok = |s: Q| {
                (s == zero && end_mirrors.0 == Some(midpoint))
                    || (s == one && end_mirrors.1 == Some(midpoint))
            };
            if pts.len() == 1 {
                if let Some(s) = point_on_segment(pts[0], a0, a1) {
                    if !end_ok(s) {
                        let at = pts[0].to_int().unwrap_or(midpoint);
                        return Err(SlopeFnError::DegenerateIncidence {
                            v: a0.to_string(),
                            w: a1.to_string(),
                            at,
                        });
                    }
                }
                continue;
            }
            let mut vertex_hits: BTreeSet<usize> = BTreeSet::new();
            for (i, edge) in pts.windows(2).enumerate() {
                match intersect_segments(a0, a1, edge[0], edge[1]) {
                    SegmentHit::Disjoint => {}
                    SegmentHit::Overlap => return Err(non_transverse(a0, a1)),
                    SegmentHit::Point { t: s, u } => {
                        if s == zero || s == one {
                            if end_ok(s) {
                                continue;
                            }
                            return Err(non_transverse(a0, a1));
                        }
                        if u == zero {
                            vertex_hits.insert(i);
                        } else if u == one {
                            vertex_hits.insert(i + 1);
                        } else {
                            hits.push((s, midpoint));
                        }
                    }
                }
            }
            for j in vertex_hits {
                if j == 0 || j == pts.len() - 1 || j == mid_index {
                    return Err(non_transverse(a0, a1));
                }
                let before = sign(cross3(a0, a1, pts[j - 1]));
                let after = sign(cross3(a0, a1, pts[j + 1]));
                if before * after >= 0 {
                    return Err(non_transverse(a0, a1));
                }
                let s = point_on_segment(pts[j], a0, a1).expect("vertex lies on the segment");
                hits.push((s, midpoint));
            }
        }
    }
    hits.sort();
    if hits.windows(2).any(|h| h[0].0 == h[1].0) {
        return Err(non_transverse(a0, a1));
    }
    Ok(hits.into_iter().map(|(_, m)| m).collect())
}

/// Midpoints `λ₀, …, λ_{n+1}`: the mirror through `v`, the mirrors crossed
/// by the open segment from `v` to `w` in order, and the mirror through `w`.
pub fn mirror_crossings(
    pres: &NetMapPresentation,
    v: IntVec2,
    w: IntVec2,
) -> Result<Vec<IntVec2>, SlopeFnError> {
    let first = pres
        .mirror_midpoint_at(v)
        .ok_or_else(|| SlopeFnError::Internal(format!("{v} is not in a postcritical class")))?;
    let last = pres
        .mirror_midpoint_at(w)
        .ok_or_else(|| SlopeFnError::Internal(format!("{w} is not in a postcritical class")))?;
    let inner = interior_crossings(pres, v.into(), w.into(), (Some(first), Some(last)))?;
    let mut out = Vec::with_capacity(inner.len() + 2);
    out.push(first);
    out.extend(inner);
    out.push(last);
    Ok(out)
}

/// `Σ_{i=0}^{n} (−1)ⁱ (λ_{i+1} − λ_i)`.
pub fn alternating_sum(midpoints: &[IntVec2]) -> IntVec2 {
    midpoints
        .windows(2)
        .enumerate()
        .fold(IntVec2::ZERO, |acc, (i, pair)| {
            let step = pair[1] - pair[0];
            if i % 2 == 0 {
                acc + step
            } else {
                acc - step
            }
        })
}

/// Slope of an element of `Λ₁` relative to the correspondence basis: if
/// `x = a·λ₁ + b·μ₁` then the slope is `b/a`.
pub fn slope_in_correspondence(
    pres: &NetMapPresentation,
    x: IntVec2,
) -> Result<Slope, SlopeFnError> {
    let (a, b) = pres
        .correspondence()
        .coords(x)
        .ok_or_else(|| SlopeFnError::Internal(format!("{x} is not in lambda1")))?;
    Slope::new(b, a).map_err(|_| SlopeFnError::Internal("alternating sum vanishes".into()))
}

/// Evaluate the zigzag algorithm, retrying other segments when a segment
/// meets a mirror non-transversally.
pub fn zigzag(pres: &NetMapPresentation, slope: Slope) -> Result<ZigzagTrace, SlopeFnError> {
    let mut last_err = None;
    for (v, w) in candidate_segments(pres, slope)? {
        match mirror_crossings(pres, v, w) {
            Ok(midpoints) => {
                let delta = alternating_sum(&midpoints);
                let result = slope_in_correspondence(pres, delta)?;
                return Ok(ZigzagTrace {
                    slope,
                    v,
                    w,
                    midpoints,
                    delta,
                    result,
                });
            }
            Err(
                e @ (SlopeFnError::NonTransverse { .. } | SlopeFnError::DegenerateIncidence { .. }),
            ) => {
                last_err = Some(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one candidate segment"))
}

/// `σ_f(slope)`: `o` when the pullback has no essential, nonperipheral
/// component, otherwise the slope produced by [`zigzag`].  The symbol `o`
/// itself is mapped to `o`.
pub fn sigma(pres: &NetMapPresentation, slope: Slope) -> Result<Slope, SlopeFnError> {
    if !slope.is_essential() {
        return Ok(Slope::NonEssential);
    }
    match zigzag(pres, slope) {
        Ok(trace) => Ok(trace.result),
        Err(SlopeFnError::NonEssential(_)) => Ok(Slope::NonEssential),
        Err(e) => Err(e),
    }
}

/// Closed-form slope function of the bundled degree-10 example
/// (`Λ₁ = ⟨(2,−1),(0,5)⟩`, vertical mirrors of half-length 1 centred at the
/// points of `Λ₁` with first coordinate `≡ 2 (mod 4)`).
///
/// The segment endpoints come from a residue table in `q mod 4` and
/// `2p + q mod 5`; crossed mirrors are located by writing
/// `x + 2y = 10·Q_x + R_x` with `−5 < R_x ≤ 5` along the segment, and the
/// result is `N/D` with `N = Σ (−1)ⁱ (Q_{x_{i+1}} − Q_{x_i})` and
/// `D = ½ Σ (−1)ⁱ (x_{i+1} − x_i)`.
pub fn sigma_main_closed_form(slope: Slope) -> Slope {
    let Some((p, q)) = slope.parts() else {
        return Slope::NonEssential;
    };
    let q4 = q.rem_euclid(4);
    let r5 = (2 * p + q).rem_euclid(5);
    let (v, mult): ((i64, i64), i64) = match (q4, r5) {
        (0, 0) => ((0, 0), 1),
        (0, _) => ((0, 0), 5),
        (2, 0) => ((2, 0), 2),
        (2, 1 | 4) => ((0, 0), 3),
        (2, _) => ((0, 0), 1),
        (_, 0) => ((2, 0), 4),
        (_, 1 | 4) => ((0, 0), 2),
        (_, _) => ((0, 0), 6),
    };
    let w = (v.0 + mult * q, v.1 + mult * p);

    // Q for a value of x + 2y, normalized so that −5 < R ≤ 5.
    let q_of = |val: Ratio<i64>| -> (i64, Ratio<i64>) {
        let qx = ((val - 5) / 10).ceil().to_integer();
        (qx, val - 10 * qx)
    };
    let mut xs = vec![v.0];
    let mut qs = vec![q_of(Ratio::from_integer(v.0 + 2 * v.1)).0];
    if q > 0 {
        // Points of the line: y = (p/q)(x − v₁) since v₂ = 0.
        let start = v.0 + 1;
        let first = start + (2 - start).rem_euclid(4);
        let mut x = first;
        while x < w.0 {
            let y = Ratio::new(p * (x - v.0), q);
            let (qx, rx) = q_of(Ratio::from_integer(x) + y * 2);
            if rx.abs() < Ratio::from_integer(2) {
                xs.push(x);
                qs.push(qx);
            }
            x += 4;
        }
    }
    xs.push(w.0);
    qs.push(q_of(Ratio::from_integer(w.0 + 2 * w.1)).0);

    let mut n = 0i64;
    let mut twice_d = 0i64;
    for i in 0..xs.len() - 1 {
        let sgn = if i % 2 == 0 { 1 } else { -1 };
        n += sgn * (qs[i + 1] - qs[i]);
        twice_d += sgn * (xs[i + 1] - xs[i]);
    }
    // N/D with D = twice_d / 2, i.e. slope (2N)/(twice_d).
    Slope::new(2 * n, twice_d).expect("nonzero alternating sum")
}

/// Result of iterating `σ_f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Visited slopes, starting with the initial slope.  When a cycle is
    /// detected the first repeated slope is included once more at the end.
    pub trajectory: Vec<Slope>,
    /// `(start index, length)` of the detected cycle.
    pub cycle: Option<(usize, usize)>,
}

/// Iterate `σ_f` from `slope` until `o`, a repeated slope, or `max_iter`
/// applications.
pub fn orbit(
    pres: &NetMapPresentation,
    slope: Slope,
    max_iter: usize,
) -> Result<Orbit, SlopeFnError> {
    let mut trajectory = vec![slope];
    let mut seen: HashMap<Slope, usize> = HashMap::from([(slope, 0)]);
    let mut current = slope;
    for _ in 0..max_iter {
        if !current.is_essential() {
            break;
        }
        let next = sigma(pres, current)?;
        trajectory.push(next);
        if let Some(&start) = seen.get(&next) {
            let len = trajectory.len() - 1 - start;
            return Ok(Orbit {
                trajectory,
                cycle: Some((start, len)),
            });
        }
        seen.insert(next, trajectory.len() - 1);
        current = next;
    }
    Ok(Orbit {
        trajectory,
        cycle: None,
    })
}

/// Cross-check of the zigzag construction using a single long segment that
/// starts off every mirror.
///
/// With `μ` completing `λ = (q, p)` to a basis of `ℤ²`, the segment runs from
/// `v = (c₂ + ½)·μ` to `w = v + d·λ`.  If `λ_1, …, λ_n` are the midpoints of
/// the mirrors it crosses, then `σ_f(p/q)` is the slope of `w′ − v` with
/// `w′ = (−1)ⁿ w + 2 Σ (−1)^{i+1} λ_i`, measured in the correspondence basis.
/// This shortcut (`d·λ` instead of `2d·λ`) is only valid when the mirror
/// pattern is compatible with it.  For the bundled degree-10 example the
/// mirror union is not invariant under all of `Λ₁`, and the shortcut already
/// disagrees with [`sigma`] at slope `−1`; it is kept only as an oracle for
/// individual worked slopes.
pub fn sigma_single_segment(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<SingleSegmentTrace, SlopeFnError> {
    let summary = analyze_slope(pres, slope)?;
    if summary.essential == 0 {
        return Err(SlopeFnError::NonEssential(slope));
    }
    let (p, q) = slope.parts().expect("essential slope");
    let lambda = IntVec2::new(q, p);
    let g = q.extended_gcd(&p);
    // q·x + p·y = 1, so μ = (y, −x) satisfies det(λ, μ) = −1 (for λ = (4,1)
    // this is μ = (1, 0)).
    let mu = IntVec2::new(g.y, -g.x);
    debug_assert_eq!(lambda.det(mu), -1);
    let c2 = summary.coset_numbers[1];
    let half = Q::new(1, 2);
    let v = RatPoint::from(mu).scale(qi(c2) + half);
    let w = v + RatPoint::from(summary.d * lambda);
    let crossed = interior_crossings(pres, v, w, (None, None))?;
    let n = crossed.len();
    let mut w_prime = if n % 2 == 0 { w } else { w.scale(qi(-1)) };
    for (i, &m) in crossed.iter().enumerate() {
        let factor = if i % 2 == 0 { qi(2) } else { qi(-2) };
        w_prime = w_prime + RatPoint::from(m).scale(factor);
    }
    let diff = w_prime - v;
    let basis = pres.correspondence();
    let det = qi(basis.det());
    let (u, vv) = (basis.u, basis.v);
    let a = (diff.x * qi(vv.y) - diff.y * qi(vv.x)) / det;
    let b = (qi(u.x) * diff.y - qi(u.y) * diff.x) / det;
    // Slope b/a for rationals: (b.numer·a.denom) / (a.numer·b.denom).
    let num = *b.numer() * *a.denom();
    let den = *a.numer() * *b.denom();
    let result = Slope::new(
        i64::try_from(num).map_err(|_| SlopeFnError::Internal("overflow".into()))?,
        i64::try_from(den).map_err(|_| SlopeFnError::Internal("overflow".into()))?,
    )
    .map_err(|_| SlopeFnError::Internal("vanishing displacement".into()))?;
    Ok(SingleSegmentTrace {
        v,
        w,
        crossed,
        w_prime,
        result,
    })
}

/// Record of [`sigma_single_segment`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleSegmentTrace {
    pub v: RatPoint,
    pub w: RatPoint,
    /// Midpoints of the crossed mirrors, in order.
    pub crossed: Vec<IntVec2>,
    pub w_prime: RatPoint,
    pub result: Slope,
}
