//! Exact planar geometry over `ℚ`: points, bounding boxes, segment
//! intersection predicates and enumeration of lattice translates.
//!
//! Coordinates are `Ratio<i128>` so that products of the moderately sized
//! rationals appearing in presentations never overflow.

use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::core_lattice::{Basis2, IntVec2};

/// Exact rational scalar used for geometry.
pub type Q = Ratio<i128>;

/// Rational integer shorthand.
pub fn qi(n: i64) -> Q {
    Q::from_integer(n as i128)
}

/// A point of `ℚ²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: Q,
    pub y: Q,
}

impl std::ops::Add for RatPoint {
    type Output = RatPoint;

    fn add(self, o: RatPoint) -> RatPoint {
        RatPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for RatPoint {
    type Output = RatPoint;

    fn sub(self, o: RatPoint) -> RatPoint {
        RatPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl RatPoint {
    pub fn new(x: Q, y: Q) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint::new(qi(x), qi(y))
    }

    pub fn scale(self, k: Q) -> RatPoint {
        RatPoint::new(self.x * k, self.y * k)
    }

    /// Point reflection through `center`: `2·center − self`.
    pub fn reflect_through(self, center: RatPoint) -> RatPoint {
        let two = qi(2);
        RatPoint::new(two * center.x - self.x, two * center.y - self.y)
    }

    /// The lattice point equal to `self`, if both coordinates are integers.
    pub fn to_int(self) -> Option<IntVec2> {
        if self.x.is_integer() && self.y.is_integer() {
            Some(IntVec2::new(
                i64::try_from(self.x.to_integer()).ok()?,
                i64::try_from(self.y.to_integer()).ok()?,
            ))
        } else {
            None
        }
    }
}

impl From<IntVec2> for RatPoint {
    fn from(v: IntVec2) -> Self {
        RatPoint::from_ints(v.x, v.y)
    }
}

fn fmt_q(q: &Q, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        fmt_q(&self.x, f)?;
        write!(f, ",")?;
        fmt_q(&self.y, f)?;
        write!(f, ")")
    }
}

/// `(b − a) × (c − a)`.
pub fn cross3(a: RatPoint, b: RatPoint, c: RatPoint) -> Q {
    let u = b - a;
    let v = c - a;
    u.x * v.y - u.y * v.x
}

fn cross(u: RatPoint, v: RatPoint) -> Q {
    u.x * v.y - u.y * v.x
}

fn dot(u: RatPoint, v: RatPoint) -> Q {
    u.x * v.x + u.y * v.y
}

/// Closed axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BBox {
    pub min_x: Q,
    pub max_x: Q,
    pub min_y: Q,
    pub max_y: Q,
}

impl BBox {
    /// Bounding box of a nonempty point list.
    pub fn of(points: &[RatPoint]) -> BBox {
        let first = points[0];
        let mut b = BBox {
            min_x: first.x,
            max_x: first.x,
            min_y: first.y,
            max_y: first.y,
        };
        for p in &points[1..] {
            b.min_x = b.min_x.min(p.x);
            b.max_x = b.max_x.max(p.x);
            b.min_y = b.min_y.min(p.y);
            b.max_y = b.max_y.max(p.y);
        }
        b
    }

    pub fn intersects(&self, o: &BBox) -> bool {
        self.min_x <= o.max_x
            && o.min_x <= self.max_x
            && self.min_y <= o.max_y
            && o.min_y <= self.max_y
    }

    pub fn translated(&self, t: IntVec2) -> BBox {
        BBox {
            min_x: self.min_x + qi(t.x),
            max_x: self.max_x + qi(t.x),
            min_y: self.min_y + qi(t.y),
            max_y: self.max_y + qi(t.y),
        }
    }
}

/// Outcome of intersecting two closed segments `a0a1` and `b0b1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentHit {
    /// The segments are disjoint.
    Disjoint,
    /// The segments meet in exactly one point, at parameter `t` along the
    /// first segment and `u` along the second (both in `[0, 1]`).
    Point { t: Q, u: Q },
    /// The segments are collinear and overlap in a segment of positive length.
    Overlap,
}

/// Intersect two closed segments of positive length.
pub fn intersect_segments(a0: RatPoint, a1: RatPoint, b0: RatPoint, b1: RatPoint) -> SegmentHit {
    let d1 = a1 - a0;
    let d2 = b1 - b0;
    let w = b0 - a0;
    let denom = cross(d1, d2);
    let zero = Q::zero();
    let one = qi(1);
    if !denom.is_zero() {
        let t = cross(w, d2) / denom;
        let u = cross(w, d1) / denom;
        if t >= zero && t <= one && u >= zero && u <= one {
            SegmentHit::Point { t, u }
        } else {
            SegmentHit::Disjoint
        }
    } else if !cross(w, d1).is_zero() {
        SegmentHit::Disjoint
    } else {
        let len = dot(d1, d1);
        let tb0 = dot(w, d1) / len;
        let tb1 = dot(b1 - a0, d1) / len;
        let lo = tb0.min(tb1).max(zero);
        let hi = tb0.max(tb1).min(one);
        if lo < hi {
            SegmentHit::Overlap
        } else if lo == hi {
            // Touching at a single shared point.
            let u = if tb1 == tb0 {
                zero
            } else {
                (lo - tb0) / (tb1 - tb0)
            };
            SegmentHit::Point { t: lo, u }
        } else {
            SegmentHit::Disjoint
        }
    }
}

/// Parameter of `p` along segment `a0a1` if `p` lies on the closed segment.
pub fn point_on_segment(p: RatPoint, a0: RatPoint, a1: RatPoint) -> Option<Q> {
    if !cross3(a0, a1, p).is_zero() {
        return None;
    }
    let d = a1 - a0;
    let t = dot(p - a0, d) / dot(d, d);
    (t >= Q::zero() && t <= qi(1)).then_some(t)
}

/// Whether two polylines (a single point counts as a polyline) meet.
pub fn polylines_meet(a: &[RatPoint], b: &[RatPoint]) -> bool {
    match (a.len(), b.len()) {
        (1, 1) => a[0] == b[0],
        (1, _) => b
            .windows(2)
            .any(|e| point_on_segment(a[0], e[0], e[1]).is_some()),
        (_, 1) => polylines_meet(b, a),
        _ => a.windows(2).any(|e| {
            b.windows(2)
                .any(|g| intersect_segments(e[0], e[1], g[0], g[1]) != SegmentHit::Disjoint)
        }),
    }
}

/// Whether a polyline is a simple arc: consecutive edges meet only in their
/// shared vertex and nonconsecutive edges are disjoint.
pub fn is_simple_polyline(points: &[RatPoint]) -> bool {
    if points.windows(2).any(|e| e[0] == e[1]) {
        return false;
    }
    let edges: Vec<_> = points.windows(2).collect();
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let hit = intersect_segments(edges[i][0], edges[i][1], edges[j][0], edges[j][1]);
            if j == i + 1 {
                match hit {
                    SegmentHit::Point { t, u } if t == qi(1) && u.is_zero() => {}
                    _ => return false,
                }
            } else if hit != SegmentHit::Disjoint {
                return false;
            }
        }
    }
    true
}

fn floor_q(q: Q) -> i64 {
    i64::try_from(q.floor().to_integer()).expect("coordinate range")
}

fn ceil_q(q: Q) -> i64 {
    i64::try_from(q.ceil().to_integer()).expect("coordinate range")
}

/// All vectors `t` of the lattice spanned by `lattice` such that
/// `shape + t` meets `target` (as closed bounding boxes).
///
/// The admissible translations form the Minkowski box
/// `[target.min − shape.max, target.max − shape.min]`; its corners are mapped
/// to lattice coordinates and the integer range between their floor and
/// ceiling is scanned and filtered exactly.
pub fn lattice_translates_meeting(lattice: &Basis2, shape: &BBox, target: &BBox) -> Vec<IntVec2> {
    let lo_x = target.min_x - shape.max_x;
    let hi_x = target.max_x - shape.min_x;
    let lo_y = target.min_y - shape.max_y;
    let hi_y = target.max_y - shape.min_y;
    let det = qi(lattice.det());
    let (u, v) = (lattice.u, lattice.v);
    let coords = |x: Q, y: Q| -> (Q, Q) {
        // t = a·u + b·v with a = det(t, v)/D and b = det(u, t)/D.
        let a = (x * qi(v.y) - y * qi(v.x)) / det;
        let b = (qi(u.x) * y - qi(u.y) * x) / det;
        (a, b)
    };
    let corners = [
        coords(lo_x, lo_y),
        coords(lo_x, hi_y),
        coords(hi_x, lo_y),
        coords(hi_x, hi_y),
    ];
    let a_min = corners.iter().map(|c| c.0).min().expect("four corners");
    let a_max = corners.iter().map(|c| c.0).max().expect("four corners");
    let b_min = corners.iter().map(|c| c.1).min().expect("four corners");
    let b_max = corners.iter().map(|c| c.1).max().expect("four corners");
    let mut out = Vec::new();
    for a in floor_q(a_min)..=ceil_q(a_max) {
        for b in floor_q(b_min)..=ceil_q(b_max) {
            let t = lattice.combine(a, b);
            if shape.translated(t).intersects(target) {
                out.push(t);
            }
        }
    }
    out
}

/// Remove interior vertices at which the polyline does not turn.
pub fn remove_collinear_vertices(points: &[RatPoint]) -> Vec<RatPoint> {
    let mut out: Vec<RatPoint> = Vec::with_capacity(points.len());
    for &p in points {
        while out.len() >= 2 {
            let n = out.len();
            let (a, b) = (out[n - 2], out[n - 1]);
            let straight = cross3(a, b, p).is_zero() && dot(b - a, p - b) > Q::zero();
            if straight {
                out.pop();
            } else {
                break;
            }
        }
        out.push(p);
    }
    out
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(q: Q) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

/// Greatest common divisor of two `i128` values (always nonnegative).
pub fn gcd128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> RatPoint {
        RatPoint::from_ints(x, y)
    }

    #[test]
    fn crossing_segments() {
        let hit = intersect_segments(p(0, 0), p(2, 2), p(0, 2), p(2, 0));
        assert_eq!(
            hit,
            SegmentHit::Point {
                t: Q::new(1, 2),
                u: Q::new(1, 2)
            }
        );
    }

    #[test]
    fn parallel_and_collinear_segments() {
        assert_eq!(
            intersect_segments(p(0, 0), p(2, 0), p(0, 1), p(2, 1)),
            SegmentHit::Disjoint
        );
        assert_eq!(
            intersect_segments(p(0, 0), p(2, 0), p(1, 0), p(3, 0)),
            SegmentHit::Overlap
        );
        assert_eq!(
            intersect_segments(p(0, 0), p(2, 0), p(2, 0), p(3, 0)),
            SegmentHit::Point { t: qi(1), u: qi(0) }
        );
        assert_eq!(
            intersect_segments(p(0, 0), p(1, 0), p(2, 0), p(3, 0)),
            SegmentHit::Disjoint
        );
    }

    #[test]
    fn simple_polylines() {
        assert!(is_simple_polyline(&[p(0, 0), p(1, 0), p(1, 1)]));
        assert!(!is_simple_polyline(&[p(0, 0), p(2, 0), p(1, 0)]));
        assert!(!is_simple_polyline(&[p(0, 0), p(2, 0), p(2, 2), p(1, -1)]));
    }

    #[test]
    fn translates_cover_box() {
        let lat = Basis2::new(IntVec2::new(4, -2), IntVec2::new(0, 10)).unwrap();
        let shape = BBox::of(&[p(2, -2), p(2, 0)]);
        let target = BBox::of(&[p(0, 0), p(20, 5)]);
        let ts = lattice_translates_meeting(&lat, &shape, &target);
        // Brute force over a generous range.
        let mut brute = Vec::new();
        for a in -20..20 {
            for b in -20..20 {
                let t = lat.combine(a, b);
                if shape.translated(t).intersects(&target) {
                    brute.push(t);
                }
            }
        }
        let mut ts_sorted = ts.clone();
        ts_sorted.sort();
        brute.sort();
        assert_eq!(ts_sorted, brute);
    }

    #[test]
    fn collinear_vertices_removed() {
        let pts = [p(0, 0), p(1, 0), p(2, 0), p(2, 1)];
        assert_eq!(
            remove_collinear_vertices(&pts),
            vec![p(0, 0), p(2, 0), p(2, 1)]
        );
    }
}
