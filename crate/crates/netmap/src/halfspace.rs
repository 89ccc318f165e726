//! Exact hyperbolic-boundary computations: moduli of curve families,
//! horoball values, the half-spaces that exclude obstruction slopes, and
//! certificates that a family of half-spaces covers the boundary `ℝ̂`.
//!
//! A half-space comes from a slope `p/q` with image `p′/q′ = σ_f(p/q) ≠ p/q`
//! and multiplier `δ = δ_f(p/q)`.  It is the set of `τ ∈ ℍ` closer to the
//! horoball at `−q/p` than to its image horoball at `−q′/p′`; its boundary at
//! infinity is bounded by a Euclidean circle with centre
//! `C = (−pq + δp′q′)/(p² − δp′²)` and radius
//! `R = |(pq′ − p′q)√δ / (p² − δp′²)|`, or by a vertical line when
//! `δp′² = p²`.  A boundary point `x` lying in the open boundary set of some
//! half-space is not the point `−s/r` of an obstruction slope `r/s`.
//!
//! All comparisons are exact: radii live in `ℚ(√k)` and points of different
//! quadratic fields are compared with a sign algorithm, never with floating
//! point.

use std::cmp::Ordering;
use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex;
use num_traits::{Signed, Zero};

use crate::core_lattice::Slope;
use crate::geometry::{qi, Q};
use crate::presentation::NetMapPresentation;
use crate::pullback::multiplier;
use crate::slope_fn::{sigma, SlopeFnError};

/// Gaussian-rational point of the upper half-plane.
pub type GaussQ = Complex<Q>;

fn sign_q(x: Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Sign of `a + b√k`.
fn sign2(a: Q, b: Q, k: i128) -> i32 {
    let (sa, sb) = (sign_q(a), if k == 0 { 0 } else { sign_q(b) });
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    match (a * a).cmp(&(b * b * Q::from_integer(k))) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => 0,
    }
}

/// Sign of `a + b√j + c√k`.
fn sign3(a: Q, b: Q, j: i128, c: Q, k: i128) -> i32 {
    let sx = sign2(a, b, j);
    let sc = if k == 0 { 0 } else { sign_q(c) };
    if sc == 0 {
        return sx;
    }
    if sx == 0 || sx == sc {
        return sc;
    }
    // Opposite signs: compare (a + b√j)² with c²k.
    let jq = Q::from_integer(j);
    let t = sign2(
        a * a + b * b * jq - c * c * Q::from_integer(k),
        qi(2) * a * b,
        j,
    );
    match t {
        1 => sx,
        -1 => sc,
        _ => 0,
    }
}

/// Split `n > 0` as `s²·k` with `k` squarefree.
fn squarefree_split(n: i128) -> (i128, i128) {
    let (mut s, mut k, mut f) = (1i128, n, 2i128);
    while f * f <= k {
        while k % (f * f) == 0 {
            k /= f * f;
            s *= f;
        }
        f += 1;
    }
    (s, k)
}

/// An element `a + b·√k` of a real quadratic field, `k` squarefree.
///
/// Rational values are normalized to `b = 0, k = 0`, so equality is
/// structural.  Values from different fields compare exactly through
/// [`Ord`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExt {
    pub a: Q,
    pub b: Q,
    pub k: i128,
}

impl QuadExt {
    /// The rational number `a`.
    pub fn rational(a: Q) -> Self {
        QuadExt {
            a,
            b: Q::zero(),
            k: 0,
        }
    }

    /// `a + b√k` for any `k ≥ 0`, normalized.
    ///
    /// # Panics
    /// If `k < 0`.
    pub fn new(a: Q, b: Q, k: i128) -> Self {
        assert!(k >= 0, "negative radicand");
        if k == 0 || b.is_zero() {
            return Self::rational(a);
        }
        let (s, k) = squarefree_split(k);
        let b = b * Q::from_integer(s);
        if k == 1 {
            Self::rational(a + b)
        } else {
            QuadExt { a, b, k }
        }
    }

    /// `√x` for a rational `x ≥ 0`.
    ///
    /// # Panics
    /// If `x < 0`.
    pub fn sqrt(x: Q) -> Self {
        assert!(!x.is_negative(), "square root of a negative number");
        // √(n/d) = √(n·d) / d.
        Self::new(Q::zero(), Q::new(1, *x.denom()), *x.numer() * *x.denom())
    }

    pub fn is_rational(&self) -> bool {
        self.k == 0
    }

    /// The value as a rational, if it is one.
    pub fn as_rational(&self) -> Option<Q> {
        self.is_rational().then_some(self.a)
    }

    /// Multiply by a rational.
    pub fn scale(self, c: Q) -> Self {
        Self::new(self.a * c, self.b * c, self.k)
    }

    /// Add a rational.
    pub fn shift(self, c: Q) -> Self {
        Self::new(self.a + c, self.b, self.k)
    }

    /// `x²`, which is rational when `a = 0`.
    pub fn square(self) -> Self {
        let kq = Q::from_integer(self.k);
        Self::new(
            self.a * self.a + self.b * self.b * kq,
            qi(2) * self.a * self.b,
            self.k,
        )
    }

    /// Sign of the value.
    pub fn signum(&self) -> i32 {
        sign2(self.a, self.b, self.k)
    }

    /// Floating-point approximation, for display and plotting only.
    pub fn to_f64(&self) -> f64 {
        let f = |x: Q| *x.numer() as f64 / *x.denom() as f64;
        f(self.a) + f(self.b) * (self.k as f64).sqrt()
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        let s = if self.k == other.k {
            sign2(self.a - other.a, self.b - other.b, self.k)
        } else {
            sign3(self.a - other.a, self.b, self.k, -other.b, other.k)
        };
        s.cmp(&0)
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            return write!(f, "{}", self.a);
        }
        let coeff = self.b.abs();
        let radical = if coeff == Q::from_integer(1) {
            format!("√{}", self.k)
        } else if coeff.is_integer() {
            format!("{coeff}√{}", self.k)
        } else {
            format!("({coeff})√{}", self.k)
        };
        match (self.a.is_zero(), self.b.is_negative()) {
            (true, false) => write!(f, "{radical}"),
            (true, true) => write!(f, "-{radical}"),
            (false, false) => write!(f, "{} + {radical}", self.a),
            (false, true) => write!(f, "{} - {radical}", self.a),
        }
    }
}

/// A point of `ℝ̂ = ℝ ∪ {∞}` with exact coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Finite(QuadExt),
    Infinity,
}

impl BoundaryPoint {
    /// Whether the point is rational (including `∞`), hence of the form
    /// `−s/r` for a slope `r/s`.
    pub fn is_rational(&self) -> bool {
        match self {
            BoundaryPoint::Finite(x) => x.is_rational(),
            BoundaryPoint::Infinity => true,
        }
    }

    /// The slope `r/s` whose point is `−s/r`: `x ↦ −1/x`, with `0 ↦ ∞` and
    /// `∞ ↦ 0`.  `None` for irrational points.
    pub fn excluded_slope(&self) -> Option<Slope> {
        match self {
            BoundaryPoint::Infinity => Some(Slope::ZERO),
            BoundaryPoint::Finite(x) => {
                let x = x.as_rational()?;
                if x.is_zero() {
                    return Some(Slope::INFINITY);
                }
                let (n, m) = (*x.numer(), *x.denom());
                Slope::new(i64::try_from(-m).ok()?, i64::try_from(n).ok()?).ok()
            }
        }
    }

    /// The boundary point `−s/r` of a slope `r/s`; `None` for `o`.
    pub fn of_slope(slope: Slope) -> Option<BoundaryPoint> {
        let (r, s) = slope.parts()?;
        Some(if r == 0 {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Finite(QuadExt::rational(Q::new(-(s as i128), r as i128)))
        })
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Modulus of the curve family of slope `p/q` for the conformal structure
/// `τ`: `Im(τ) / |pτ + q|²`.
///
/// # Panics
/// If `slope` is `o` or `Im(τ) ≤ 0`.
pub fn modulus(tau: GaussQ, slope: Slope) -> Q {
    assert!(tau.im.is_positive(), "τ must lie in the upper half-plane");
    let (p, q) = slope.parts().expect("modulus of an essential slope");
    let w = tau * qi(p) + qi(q);
    tau.im / w.norm_sqr()
}

/// Horoball height function `Im(z) / |qz − p|²` centred at the boundary point
/// `p/q` (the point `∞` for `q = 0`).  Its superlevel sets are the horoballs
/// at `p/q`.
///
/// # Panics
/// If `slope` is `o`.
pub fn horoball_value(z: GaussQ, slope: Slope) -> Q {
    let (p, q) = slope.parts().expect("horoball at an essential slope");
    let w = z * qi(q) - qi(p);
    z.im / w.norm_sqr()
}

/// Shape of a half-space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HalfSpaceKind {
    /// The points inside a Euclidean circle (a bounded region).
    InsideCircle,
    /// The points outside a Euclidean circle.
    OutsideCircle,
    /// `Re τ < x`.
    LeftOfVertical,
    /// `Re τ > x`.
    RightOfVertical,
}

impl HalfSpaceKind {
    pub fn is_bounded(self) -> bool {
        self == HalfSpaceKind::InsideCircle
    }
}

/// The data a half-space was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfSpaceSource {
    /// The slope `p/q`.
    pub slope: Slope,
    /// Its image `p′/q′ = σ_f(p/q)`.
    pub image: Slope,
    /// The multiplier `δ_f(p/q)`.
    pub delta: Q,
}

/// An open hyperbolic half-space whose boundary set contains no obstruction
/// points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfSpace {
    pub kind: HalfSpaceKind,
    /// Circle centre `C`, or the abscissa of the vertical line.
    pub center: Q,
    /// Circle radius `R`; `None` for the vertical kinds.
    pub radius: Option<QuadExt>,
    pub source: HalfSpaceSource,
}

impl HalfSpace {
    /// Build the half-space for `p/q ↦ p′/q′` with multiplier `δ > 0`.
    /// Returns `None` if the slopes coincide, either is `o`, or `δ ≤ 0`.
    pub fn from_data(slope: Slope, image: Slope, delta: Q) -> Option<HalfSpace> {
        let (p, q) = slope.parts()?;
        let (pp, qp) = image.parts()?;
        if slope == image || !delta.is_positive() {
            return None;
        }
        let (p, q, pp, qp) = (qi(p), qi(q), qi(pp), qi(qp));
        let source = HalfSpaceSource {
            slope,
            image,
            delta,
        };
        let denom = p * p - delta * pp * pp;
        if denom.is_zero() {
            // Equal Euclidean radii; p and p′ are both nonzero here.
            let x = -(q / p + qp / pp) / qi(2);
            let kind = if slope.cmp_value(image) == Some(Ordering::Less) {
                HalfSpaceKind::LeftOfVertical
            } else {
                HalfSpaceKind::RightOfVertical
            };
            return Some(HalfSpace {
                kind,
                center: x,
                radius: None,
                source,
            });
        }
        let center = (-p * q + delta * pp * qp) / denom;
        let radius = QuadExt::sqrt(delta).scale(((p * qp - pp * q) / denom).abs());
        let kind = if denom.is_positive() {
            HalfSpaceKind::InsideCircle
        } else {
            HalfSpaceKind::OutsideCircle
        };
        Some(HalfSpace {
            kind,
            center,
            radius: Some(radius),
            source,
        })
    }

    /// `R²`, rational for circle kinds.
    pub fn radius_squared(&self) -> Option<Q> {
        self.radius.and_then(|r| r.square().as_rational())
    }

    /// The open subset of `ℝ̂` this half-space certifies as obstruction-free.
    pub fn boundary(&self) -> BoundarySet {
        boundary_interval(self)
    }
}

impl fmt::Display for HalfSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let src = &self.source;
        write!(f, "{} -> {} delta={}: ", src.slope, src.image, src.delta)?;
        match (self.kind, self.radius) {
            (HalfSpaceKind::InsideCircle, Some(r)) => write!(f, "inside C={} R={r}", self.center),
            (HalfSpaceKind::OutsideCircle, Some(r)) => write!(f, "outside C={} R={r}", self.center),
            (HalfSpaceKind::LeftOfVertical, _) => write!(f, "Re < {}", self.center),
            (HalfSpaceKind::RightOfVertical, _) => write!(f, "Re > {}", self.center),
            _ => write!(f, "malformed"),
        }
    }
}

/// The half-space attached to `slope` by the presentation, or `None` when
/// `σ_f(slope)` is `o` or equal to `slope`.
pub fn halfspace_for(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<Option<HalfSpace>, SlopeFnError> {
    let image = sigma(pres, slope)?;
    if image == Slope::NonEssential || image == slope {
        return Ok(None);
    }
    let delta = multiplier(pres, slope)?;
    let delta = Q::new(*delta.numer() as i128, *delta.denom() as i128);
    Ok(HalfSpace::from_data(slope, image, delta))
}

/// An open subset of `ℝ̂` bounded by at most two exact points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundarySet {
    /// `(lo, hi)`.
    Interval { lo: QuadExt, hi: QuadExt },
    /// `ℝ̂ ∖ [lo, hi]`, containing `∞`.
    Exterior { lo: QuadExt, hi: QuadExt },
    /// `(−∞, x)`; `∞` itself is an endpoint and is not included.
    LeftRay(QuadExt),
    /// `(x, +∞)`; `∞` itself is an endpoint and is not included.
    RightRay(QuadExt),
}

/// The open boundary set of a half-space.
///
/// Endpoints are never included: an obstruction point can only be shown to
/// lie in the closed set, so tangency points must be checked separately.  For
/// the vertical kinds this also applies to `∞`, where the two horoballs have
/// a common tangent horoball.
pub fn boundary_interval(h: &HalfSpace) -> BoundarySet {
    let c = QuadExt::rational(h.center);
    match (h.kind, h.radius) {
        (HalfSpaceKind::InsideCircle, Some(r)) => BoundarySet::Interval {
            lo: r.scale(qi(-1)).shift(h.center),
            hi: r.shift(h.center),
        },
        (HalfSpaceKind::OutsideCircle, Some(r)) => BoundarySet::Exterior {
            lo: r.scale(qi(-1)).shift(h.center),
            hi: r.shift(h.center),
        },
        (HalfSpaceKind::LeftOfVertical, _) => BoundarySet::LeftRay(c),
        (HalfSpaceKind::RightOfVertical, _) => BoundarySet::RightRay(c),
        _ => unreachable!("circle half-space without radius"),
    }
}

impl BoundarySet {
    /// Finite endpoints.
    pub fn endpoints(&self) -> Vec<QuadExt> {
        match *self {
            BoundarySet::Interval { lo, hi } | BoundarySet::Exterior { lo, hi } => vec![lo, hi],
            BoundarySet::LeftRay(x) | BoundarySet::RightRay(x) => vec![x],
        }
    }

    /// Whether the point lies in this open set.
    pub fn contains(&self, pt: &BoundaryPoint) -> bool {
        match (self, pt) {
            (BoundarySet::Exterior { .. }, BoundaryPoint::Infinity) => true,
            (_, BoundaryPoint::Infinity) => false,
            (BoundarySet::Interval { lo, hi }, BoundaryPoint::Finite(x)) => lo < x && x < hi,
            (BoundarySet::Exterior { lo, hi }, BoundaryPoint::Finite(x)) => x < lo || x > hi,
            (BoundarySet::LeftRay(r), BoundaryPoint::Finite(x)) => x < r,
            (BoundarySet::RightRay(l), BoundaryPoint::Finite(x)) => x > l,
        }
    }

    /// Whether the open gap `(a, b)` lies in this set; `None` stands for
    /// `−∞` (as `a`) or `+∞` (as `b`).  Meaningful when no endpoint of this
    /// set lies strictly inside the gap.
    pub fn contains_gap(&self, a: Option<&QuadExt>, b: Option<&QuadExt>) -> bool {
        match self {
            BoundarySet::Interval { lo, hi } => {
                matches!((a, b), (Some(a), Some(b)) if lo <= a && b <= hi)
            }
            BoundarySet::Exterior { lo, hi } => {
                b.is_some_and(|b| b <= lo) || a.is_some_and(|a| a >= hi)
            }
            BoundarySet::LeftRay(x) => b.is_some_and(|b| b <= x),
            BoundarySet::RightRay(x) => a.is_some_and(|a| a >= x),
        }
    }
}

impl BoundarySet {
    /// Whether this set is contained in `other`.
    pub fn is_subset_of(&self, other: &BoundarySet) -> bool {
        use BoundarySet::*;
        match (*self, *other) {
            (Interval { lo, hi }, Interval { lo: l, hi: r }) => l <= lo && hi <= r,
            (Interval { lo, hi }, Exterior { lo: l, hi: r }) => hi <= l || lo >= r,
            (Interval { hi, .. }, LeftRay(x)) => hi <= x,
            (Interval { lo, .. }, RightRay(x)) => lo >= x,
            (Exterior { lo, hi }, Exterior { lo: l, hi: r }) => lo <= l && r <= hi,
            (LeftRay(x), LeftRay(y)) => x <= y,
            (RightRay(x), RightRay(y)) => x >= y,
            (LeftRay(x), Exterior { lo, .. }) => x <= lo,
            (RightRay(x), Exterior { hi, .. }) => x >= hi,
            _ => false,
        }
    }
}

impl fmt::Display for BoundarySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySet::Interval { lo, hi } => write!(f, "({lo}, {hi})"),
            BoundarySet::Exterior { lo, hi } => write!(f, "R^ \\ [{lo}, {hi}]"),
            BoundarySet::LeftRay(x) => write!(f, "(-inf, {x})"),
            BoundarySet::RightRay(x) => write!(f, "({x}, +inf)"),
        }
    }
}

/// An open gap `(a, b)` of `ℝ` not covered by any boundary set; `None`
/// means `−∞` / `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    pub lo: Option<QuadExt>,
    pub hi: Option<QuadExt>,
}

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lo {
            Some(a) => write!(f, "({a}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.hi {
            Some(b) => write!(f, "{b})"),
            None => write!(f, "+inf)"),
        }
    }
}

/// Outcome of a boundary-cover check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverVerdict {
    /// Everything is covered except possibly finitely many irrational
    /// points, which are not points of slopes.
    Covered { irrational_leftovers: Vec<QuadExt> },
    /// Everything is covered except finitely many points, some of them
    /// rational; those need an individual fixed-slope check.
    Leftover { points: Vec<BoundaryPoint> },
    /// Some open gaps are uncovered.
    Uncovered {
        gaps: Vec<Gap>,
        points: Vec<BoundaryPoint>,
    },
}

impl CoverVerdict {
    pub fn is_covered(&self) -> bool {
        matches!(self, CoverVerdict::Covered { .. })
    }

    /// Rational leftover points (empty for [`CoverVerdict::Covered`]).
    pub fn rational_leftovers(&self) -> Vec<BoundaryPoint> {
        match self {
            CoverVerdict::Covered { .. } => Vec::new(),
            CoverVerdict::Leftover { points } | CoverVerdict::Uncovered { points, .. } => points
                .iter()
                .copied()
                .filter(BoundaryPoint::is_rational)
                .collect(),
        }
    }
}

/// Decide whether the union of the open boundary sets of `spaces` covers
/// `ℝ̂`, up to a finite set of leftover points.
///
/// All endpoints are sorted exactly; each endpoint, each open gap between
/// consecutive endpoints, and the point `∞` is then tested for membership.
pub fn cover_certificate(spaces: &[HalfSpace]) -> CoverVerdict {
    let sets: Vec<BoundarySet> = spaces.iter().map(boundary_interval).collect();
    let mut ends: Vec<QuadExt> = sets.iter().flat_map(BoundarySet::endpoints).collect();
    ends.sort();
    ends.dedup();

    let mut points: Vec<BoundaryPoint> = Vec::new();
    let mut candidates: Vec<BoundaryPoint> =
        ends.iter().map(|&x| BoundaryPoint::Finite(x)).collect();
    candidates.push(BoundaryPoint::Infinity);
    for pt in candidates {
        if !sets.iter().any(|s| s.contains(&pt)) {
            points.push(pt);
        }
    }

    let mut gaps = Vec::new();
    let mut bounds: Vec<Option<&QuadExt>> = vec![None];
    bounds.extend(ends.iter().map(Some));
    bounds.push(None);
    for w in bounds.windows(2) {
        if !sets.iter().any(|s| s.contains_gap(w[0], w[1])) {
            gaps.push(Gap {
                lo: w[0].copied(),
                hi: w[1].copied(),
            });
        }
    }

    if !gaps.is_empty() {
        CoverVerdict::Uncovered { gaps, points }
    } else if points.iter().any(BoundaryPoint::is_rational) {
        CoverVerdict::Leftover { points }
    } else {
        let irrational_leftovers = points
            .into_iter()
            .filter_map(|p| match p {
                BoundaryPoint::Finite(x) => Some(x),
                BoundaryPoint::Infinity => None,
            })
            .collect();
        CoverVerdict::Covered {
            irrational_leftovers,
        }
    }
}

/// One end of a piece of `ℝ`: a finite point (open or closed) or an
/// infinite end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct End {
    at: Option<QuadExt>,
    closed: bool,
}

/// A connected piece `lo..hi` of `ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Piece {
    lo: End,
    hi: End,
}

impl Piece {
    fn is_empty(&self) -> bool {
        match (&self.lo.at, &self.hi.at) {
            (Some(a), Some(b)) => a > b || (a == b && !(self.lo.closed && self.hi.closed)),
            _ => false,
        }
    }

    /// Intersection with `[x, +∞)`.
    fn at_least(self, x: QuadExt) -> Piece {
        let lo = match self.lo.at {
            Some(a) if a > x || (a == x && !self.lo.closed) => self.lo,
            _ => End {
                at: Some(x),
                closed: true,
            },
        };
        Piece { lo, hi: self.hi }
    }

    /// Intersection with `(−∞, x]`.
    fn at_most(self, x: QuadExt) -> Piece {
        let hi = match self.hi.at {
            Some(b) if b < x || (b == x && !self.hi.closed) => self.hi,
            _ => End {
                at: Some(x),
                closed: true,
            },
        };
        Piece { lo: self.lo, hi }
    }
}

/// Points of `ℝ̂` left after removing every open boundary set, computed by
/// successive set subtraction.  Independent of [`cover_certificate`].
///
/// Returns `Ok(points)` when only finitely many points remain, and
/// `Err(description)` of a remaining non-degenerate piece otherwise.
pub fn uncovered_by_subtraction(spaces: &[HalfSpace]) -> Result<Vec<BoundaryPoint>, String> {
    let unbounded = End {
        at: None,
        closed: false,
    };
    let mut pieces = vec![Piece {
        lo: unbounded,
        hi: unbounded,
    }];
    let mut infinity_left = true;
    for h in spaces {
        let set = boundary_interval(h);
        let mut next = Vec::new();
        for piece in pieces {
            match set {
                BoundarySet::Interval { lo, hi } => {
                    next.push(piece.at_most(lo));
                    next.push(piece.at_least(hi));
                }
                BoundarySet::Exterior { lo, hi } => next.push(piece.at_least(lo).at_most(hi)),
                BoundarySet::LeftRay(x) => next.push(piece.at_least(x)),
                BoundarySet::RightRay(x) => next.push(piece.at_most(x)),
            }
        }
        next.retain(|p| !p.is_empty());
        pieces = next;
        if matches!(set, BoundarySet::Exterior { .. }) {
            infinity_left = false;
        }
    }
    let mut points = Vec::new();
    for piece in &pieces {
        match (piece.lo.at, piece.hi.at) {
            (Some(a), Some(b)) if a == b => points.push(BoundaryPoint::Finite(a)),
            (a, b) => {
                let show =
                    |e: Option<QuadExt>, inf: &str| e.map_or(inf.to_string(), |x| x.to_string());
                return Err(format!(
                    "uncovered piece from {} to {}",
                    show(a, "-inf"),
                    show(b, "+inf")
                ));
            }
        }
    }
    points.sort_by(|x, y| match (x, y) {
        (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => a.cmp(b),
        _ => Ordering::Equal,
    });
    points.dedup();
    if infinity_left {
        points.push(BoundaryPoint::Infinity);
    }
    Ok(points)
}

/// Render half-spaces as an SVG picture of the upper half-plane over the
/// real interval `[x_min, x_max]`.  Each boundary circle or line is drawn,
/// and the region outside every half-space is shaded.
pub fn render_svg(spaces: &[HalfSpace], x_min: f64, x_max: f64) -> String {
    let (width, height) = (800.0_f64, 400.0_f64);
    let scale = width / (x_max - x_min);
    let sx = |x: f64| (x - x_min) * scale;
    let base = height - 20.0;
    let mut mask = String::new();
    let mut outlines = String::new();
    for h in spaces {
        let c = *h.center.numer() as f64 / *h.center.denom() as f64;
        match (h.kind, h.radius) {
            (HalfSpaceKind::InsideCircle, Some(r)) => {
                let r = r.to_f64() * scale;
                let _ = write!(
                    mask,
                    r#"<circle cx="{:.3}" cy="{base:.3}" r="{r:.3}" fill="black"/>"#,
                    sx(c)
                );
                let _ = write!(
                    outlines,
                    r#"<circle cx="{:.3}" cy="{base:.3}" r="{r:.3}"/>"#,
                    sx(c)
                );
            }
            (HalfSpaceKind::OutsideCircle, Some(r)) => {
                let r = r.to_f64() * scale;
                let cx = sx(c);
                let _ = write!(
                    mask,
                    r#"<path fill-rule="evenodd" fill="black" d="M0,0 H{width} V{height} H0 Z M{:.3},{base:.3} a{r:.3},{r:.3} 0 1,0 {:.3},0 a{r:.3},{r:.3} 0 1,0 {:.3},0 Z"/>"#,
                    cx - r,
                    2.0 * r,
                    -2.0 * r
                );
                let _ = write!(
                    outlines,
                    r#"<circle cx="{cx:.3}" cy="{base:.3}" r="{r:.3}"/>"#
                );
            }
            (HalfSpaceKind::LeftOfVertical, _) => {
                let _ = write!(
                    mask,
                    r#"<rect x="0" y="0" width="{:.3}" height="{height}" fill="black"/>"#,
                    sx(c).max(0.0)
                );
                let _ = write!(
                    outlines,
                    r#"<line x1="{0:.3}" y1="0" x2="{0:.3}" y2="{base:.3}"/>"#,
                    sx(c)
                );
            }
            (HalfSpaceKind::RightOfVertical, _) => {
                let x = sx(c).clamp(0.0, width);
                let _ = write!(
                    mask,
                    r#"<rect x="{x:.3}" y="0" width="{:.3}" height="{height}" fill="black"/>"#,
                    width - x
                );
                let _ = write!(
                    outlines,
                    r#"<line x1="{0:.3}" y1="0" x2="{0:.3}" y2="{base:.3}"/>"#,
                    sx(c)
                );
            }
            _ => {}
        }
    }
    let mut svg = String::new();
    let _ = write!(
        svg,
        concat!(
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            r#"<defs><mask id="free"><rect x="0" y="0" width="{w}" height="{b}" fill="white"/>{mask}</mask></defs>"#,
            r##"<rect x="0" y="0" width="{w}" height="{b}" fill="#bbbbbb" mask="url(#free)"/>"##,
            r#"<g fill="none" stroke="black" stroke-width="1">{outlines}</g>"#,
            r#"<line x1="0" y1="{b}" x2="{w}" y2="{b}" stroke="black"/>"#,
            "</svg>\n"
        ),
        w = width,
        h = height,
        b = base,
        mask = mask,
        outlines = outlines
    );
    svg
}
