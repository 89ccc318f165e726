//! Thurston obstructions: fixed slopes with multiplier at least one, and
//! certificates of their absence built from half-space covers.
//!
//! A curve of slope `s` is an obstruction exactly when `σ_f(s) = s` and
//! `δ_f(s) ≥ 1`.  Enumerating slopes can find obstructions but can never rule
//! them out, since `σ_f` may have infinitely many fixed points.  Absence is
//! certified instead by half-spaces whose open boundary sets cover `ℝ̂`,
//! with any rational leftover points checked one at a time.

use std::fmt;

use num_rational::Ratio;
use num_traits::One;

use crate::core_lattice::Slope;
use crate::halfspace::{
    boundary_interval, cover_certificate, halfspace_for, uncovered_by_subtraction, BoundaryPoint,
    BoundarySet, CoverVerdict, HalfSpace,
};
use crate::presentation::NetMapPresentation;
use crate::pullback::multiplier;
use crate::slope_fn::{sigma, SlopeFnError};

/// All slopes `p/q` with `|p|, |q| ≤ height` in lowest terms, plus `∞`, each
/// once.  Ordered by height, then by value with `∞` last.
pub fn enumerate_slopes(height: i64) -> Vec<Slope> {
    let mut out = vec![Slope::INFINITY];
    for q in 1..=height {
        for p in -height..=height {
            if num_integer::gcd(p, q) == 1 {
                out.push(Slope::Essential { p, q });
            }
        }
    }
    out.sort_by(|a, b| {
        a.height()
            .cmp(&b.height())
            .then(a.cmp_value(*b).expect("essential slopes"))
    });
    out
}

/// Enumerated slopes fixed by `σ_f`, with their multipliers.
pub fn find_fixed_slopes(
    pres: &NetMapPresentation,
    height: i64,
) -> Result<Vec<(Slope, Ratio<i64>)>, SlopeFnError> {
    let mut out = Vec::new();
    for s in enumerate_slopes(height) {
        if sigma(pres, s)? == s {
            out.push((s, multiplier(pres, s)?));
        }
    }
    Ok(out)
}

/// Half-spaces of the enumerated slopes up to `height` whose boundary sets
/// are maximal: a half-space is dropped when its boundary set lies inside
/// that of another one (for equal sets the earlier slope is kept).  The
/// survivors are returned in enumeration order.
pub fn maximal_halfspaces(
    pres: &NetMapPresentation,
    height: i64,
) -> Result<Vec<HalfSpace>, SlopeFnError> {
    let mut all = Vec::new();
    for slope in enumerate_slopes(height) {
        if let Some(h) = halfspace_for(pres, slope)? {
            all.push(h);
        }
    }
    let sets: Vec<BoundarySet> = all.iter().map(boundary_interval).collect();
    let keep = |i: usize| {
        !sets.iter().enumerate().any(|(j, other)| {
            j != i && sets[i].is_subset_of(other) && (j < i || !other.is_subset_of(&sets[i]))
        })
    };
    Ok(all
        .iter()
        .enumerate()
        .filter(|&(i, _)| keep(i))
        .map(|(_, h)| *h)
        .collect())
}

/// Why a leftover boundary point is not the point of an obstruction slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeftoverReason {
    /// The point is irrational, so it is not `−s/r` for any slope `r/s`.
    Irrational,
    /// The slope is not fixed; carries its image.
    NotFixed(Slope),
    /// The slope is fixed but its multiplier is below one.
    SmallMultiplier(Ratio<i64>),
}

/// A leftover point of a cover together with the reason it is harmless.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LeftoverDisposition {
    pub point: BoundaryPoint,
    pub slope: Option<Slope>,
    pub reason: LeftoverReason,
}

impl fmt::Display for LeftoverDisposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "point {}", self.point)?;
        match (self.slope, self.reason) {
            (_, LeftoverReason::Irrational) => write!(f, ": irrational"),
            (Some(s), LeftoverReason::NotFixed(img)) => write!(f, " (slope {s}): sigma = {img}"),
            (Some(s), LeftoverReason::SmallMultiplier(d)) => {
                write!(f, " (slope {s}): fixed, delta = {d} < 1")
            }
            _ => Ok(()),
        }
    }
}

/// A machine-checkable proof that there is no obstruction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub spaces: Vec<HalfSpace>,
    pub leftovers: Vec<LeftoverDisposition>,
}

/// Outcome of an obstruction search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObstructionVerdict {
    /// `σ_f(slope) = slope` with multiplier `≥ 1`.
    Obstructed {
        slope: Slope,
        multiplier: Ratio<i64>,
    },
    /// A verified half-space cover.
    Unobstructed(Certificate),
    /// Neither found; `uncovered` describes what the best cover missed.
    Inconclusive {
        height: i64,
        spaces_tried: usize,
        uncovered: String,
    },
}

impl fmt::Display for ObstructionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObstructionVerdict::Obstructed { slope, multiplier } => {
                write!(f, "OBSTRUCTED {slope} {multiplier}")
            }
            ObstructionVerdict::Unobstructed(cert) => {
                write!(f, "UNOBSTRUCTED ({} half-spaces)", cert.spaces.len())
            }
            ObstructionVerdict::Inconclusive {
                height,
                spaces_tried,
                uncovered,
            } => write!(
                f,
                "INCONCLUSIVE (height {height}, {spaces_tried} half-spaces; {uncovered})"
            ),
        }
    }
}

/// Decide the status of a leftover point: `Ok(disposition)` if harmless,
/// `Err((slope, δ))` if it is an obstruction.
fn dispose(
    pres: &NetMapPresentation,
    point: BoundaryPoint,
) -> Result<Result<LeftoverDisposition, (Slope, Ratio<i64>)>, SlopeFnError> {
    let Some(slope) = point.excluded_slope() else {
        return Ok(Ok(LeftoverDisposition {
            point,
            slope: None,
            reason: LeftoverReason::Irrational,
        }));
    };
    let image = sigma(pres, slope)?;
    if image != slope {
        return Ok(Ok(LeftoverDisposition {
            point,
            slope: Some(slope),
            reason: LeftoverReason::NotFixed(image),
        }));
    }
    let delta = multiplier(pres, slope)?;
    if delta >= Ratio::one() {
        return Ok(Err((slope, delta)));
    }
    Ok(Ok(LeftoverDisposition {
        point,
        slope: Some(slope),
        reason: LeftoverReason::SmallMultiplier(delta),
    }))
}

enum Attempt {
    Certified(Certificate),
    Obstructed(Slope, Ratio<i64>),
    Open(String),
}

fn attempt(pres: &NetMapPresentation, spaces: &[HalfSpace]) -> Result<Attempt, SlopeFnError> {
    if spaces.is_empty() {
        return Ok(Attempt::Open("no half-spaces".into()));
    }
    let points = match cover_certificate(spaces) {
        CoverVerdict::Uncovered { gaps, .. } => {
            let list: Vec<String> = gaps.iter().map(ToString::to_string).collect();
            return Ok(Attempt::Open(format!("uncovered {}", list.join(" "))));
        }
        CoverVerdict::Covered {
            irrational_leftovers,
        } => irrational_leftovers
            .into_iter()
            .map(BoundaryPoint::Finite)
            .collect(),
        CoverVerdict::Leftover { points } => points,
    };
    let mut leftovers = Vec::new();
    for point in points {
        match dispose(pres, point)? {
            Ok(d) => leftovers.push(d),
            Err((s, delta)) => return Ok(Attempt::Obstructed(s, delta)),
        }
    }
    Ok(Attempt::Certified(Certificate {
        spaces: spaces.to_vec(),
        leftovers,
    }))
}

/// Drop half-spaces one at a time, in order, whenever the rest still certify.
fn prune(pres: &NetMapPresentation, cert: Certificate) -> Result<Certificate, SlopeFnError> {
    let mut best = cert;
    let mut i = 0;
    while i < best.spaces.len() {
        let mut rest = best.spaces.clone();
        rest.remove(i);
        match attempt(pres, &rest)? {
            Attempt::Certified(c) => best = c,
            _ => i += 1,
        }
    }
    Ok(best)
}

/// Arcs of `ℝ̂` covered by a boundary set, in the angle coordinate
/// `θ = atan(x) ∈ [−π/2, π/2]` (both ends are `∞`).  Used only to rank
/// candidates; certificates are checked exactly.
fn arcs(set: &BoundarySet) -> Vec<(f64, f64)> {
    let half = std::f64::consts::FRAC_PI_2;
    let t = |x: &crate::halfspace::QuadExt| x.to_f64().atan();
    match set {
        BoundarySet::Interval { lo, hi } => vec![(t(lo), t(hi))],
        BoundarySet::Exterior { lo, hi } => vec![(-half, t(lo)), (t(hi), half)],
        BoundarySet::LeftRay(x) => vec![(-half, t(x))],
        BoundarySet::RightRay(x) => vec![(t(x), half)],
    }
}

fn covered_measure(mut arcs: Vec<(f64, f64)>) -> f64 {
    arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (mut total, mut reach) = (0.0, f64::NEG_INFINITY);
    for (a, b) in arcs {
        if b > reach {
            total += b - a.max(reach);
            reach = b;
        }
    }
    total
}

/// Search for an obstruction among slopes up to `height`, then try to
/// certify absence with at most `budget` half-spaces.
///
/// Candidates are the maximal half-spaces of the enumerated slopes; they are
/// added greedily, each time taking the one that enlarges the covered part
/// of `ℝ̂` the most (ties go to the lower slope in enumeration order).  A
/// successful cover is pruned and re-verified before it is returned.
pub fn obstruction_report(
    pres: &NetMapPresentation,
    height: i64,
    budget: usize,
) -> Result<ObstructionVerdict, SlopeFnError> {
    for (slope, delta) in find_fixed_slopes(pres, height)? {
        if delta >= Ratio::one() {
            return Ok(ObstructionVerdict::Obstructed {
                slope,
                multiplier: delta,
            });
        }
    }
    let mut pool = maximal_halfspaces(pres, height)?;
    let mut spaces: Vec<HalfSpace> = Vec::new();
    let mut covered: Vec<(f64, f64)> = Vec::new();
    let mut last = String::from("no half-spaces");
    while spaces.len() < budget && !pool.is_empty() {
        let base = covered_measure(covered.clone());
        let mut best: Option<(usize, f64)> = None;
        for (i, h) in pool.iter().enumerate() {
            let mut with = covered.clone();
            with.extend(arcs(&boundary_interval(h)));
            let gain = covered_measure(with) - base;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((i, gain));
            }
        }
        let (i, _) = best.expect("nonempty pool");
        let h = pool.remove(i);
        covered.extend(arcs(&boundary_interval(&h)));
        spaces.push(h);
        match attempt(pres, &spaces)? {
            Attempt::Certified(cert) => return finish(pres, cert),
            Attempt::Obstructed(slope, multiplier) => {
                return Ok(ObstructionVerdict::Obstructed { slope, multiplier })
            }
            Attempt::Open(why) => last = why,
        }
    }
    Ok(ObstructionVerdict::Inconclusive {
        height,
        spaces_tried: spaces.len(),
        uncovered: last,
    })
}

/// Try to certify absence of obstructions with the half-spaces of the given
/// slopes (slopes without a half-space are skipped).
pub fn obstruction_report_for_slopes(
    pres: &NetMapPresentation,
    slopes: &[Slope],
) -> Result<ObstructionVerdict, SlopeFnError> {
    let mut spaces = Vec::new();
    for &slope in slopes {
        if let Some(h) = halfspace_for(pres, slope)? {
            spaces.push(h);
        }
    }
    Ok(match attempt(pres, &spaces)? {
        Attempt::Certified(cert) => return finish(pres, cert),
        Attempt::Obstructed(slope, multiplier) => {
            ObstructionVerdict::Obstructed { slope, multiplier }
        }
        Attempt::Open(uncovered) => {
            let height = slopes.iter().filter_map(|s| s.height()).max().unwrap_or(0);
            ObstructionVerdict::Inconclusive {
                height,
                spaces_tried: spaces.len(),
                uncovered,
            }
        }
    })
}

fn finish(
    pres: &NetMapPresentation,
    cert: Certificate,
) -> Result<ObstructionVerdict, SlopeFnError> {
    let cert = prune(pres, cert)?;
    verify_certificate(pres, &cert).map_err(SlopeFnError::Internal)?;
    Ok(ObstructionVerdict::Unobstructed(cert))
}

/// Re-verify a certificate from scratch: rebuild every half-space from the
/// presentation, recompute the uncovered points by set subtraction, and
/// recheck each leftover slope.
pub fn verify_certificate(pres: &NetMapPresentation, cert: &Certificate) -> Result<(), String> {
    for h in &cert.spaces {
        let rebuilt = halfspace_for(pres, h.source.slope).map_err(|e| e.to_string())?;
        if rebuilt.as_ref() != Some(h) {
            return Err(format!(
                "half-space for {} does not match the presentation",
                h.source.slope
            ));
        }
    }
    let points = uncovered_by_subtraction(&cert.spaces)?;
    let claimed: Vec<BoundaryPoint> = cert.leftovers.iter().map(|d| d.point).collect();
    if points.len() != claimed.len() || points.iter().any(|p| !claimed.contains(p)) {
        return Err("leftover points do not match the cover".into());
    }
    for point in points {
        let Some(slope) = point.excluded_slope() else {
            continue;
        };
        let image = sigma(pres, slope).map_err(|e| e.to_string())?;
        if image == slope {
            let delta = multiplier(pres, slope).map_err(|e| e.to_string())?;
            if delta >= Ratio::one() {
                return Err(format!("leftover slope {slope} is an obstruction"));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_enumerations() {
        let strs = |h| {
            enumerate_slopes(h)
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
        };
        assert_eq!(strs(1), ["-1", "0", "1", "inf"]);
        assert_eq!(strs(2), ["-1", "0", "1", "inf", "-2", "-1/2", "1/2", "2"]);
    }

    #[test]
    fn brute_force_count() {
        let mut count = 0;
        for p in -10i64..=10 {
            for q in -10i64..=10 {
                if num_integer::gcd(p, q) == 1 {
                    count += 1;
                }
            }
        }
        // Every slope has two primitive representatives (p, q) and (−p, −q).
        assert_eq!(enumerate_slopes(10).len(), count / 2);
    }
}
