//! NET map presentations: the lattice pair `Λ₁ ⊆ Λ₂ = ℤ²`, the four
//! postcritical coset representatives, the spin mirrors and the
//! correspondence basis of `Λ₁`.
//!
//! A presentation is parsed from a small line-oriented text format (see
//! [`NetMapPresentation::parse`]) and fully validated on construction, so every
//! value of type [`NetMapPresentation`] satisfies the structural invariants
//! the rest of the crate relies on.

use std::collections::HashSet;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::core_lattice::{quotient_presentation, Basis2, FiniteAbelianPres, GroupElem, IntVec2};
use crate::geometry::{
    is_simple_polyline, lattice_translates_meeting, polylines_meet, BBox, RatPoint, Q,
};

/// The bundled presentation files shipped with the crate.
pub mod bundled {
    /// The degree-10 running example with `Λ₁ = ⟨(2,−1),(0,5)⟩`.
    pub const MAIN: &str = include_str!("../data/main.net");
    /// A degree-4 map with `Λ₁ = 2ℤ²` whose Teichmüller map is constant.
    pub const DOUBLE: &str = include_str!("../data/double.net");
    /// A degree-4 Euclidean map with `Λ₁ = 2ℤ²` and degenerate mirrors.
    pub const EUCLIDEAN: &str = include_str!("../data/euclidean.net");
}

/// The structural invariant that a rejected presentation violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    /// A required field is missing or given twice.
    Fields,
    /// `|Λ₂/Λ₁| ≥ 2`.
    DegreeAtLeastTwo,
    /// The classes `±h_k + 2Λ₁` form four distinct inverse pairs.
    DistinctInversePairs,
    /// The correspondence vectors form a basis of `Λ₁`.
    CorrespondenceBasis,
    /// Mirror midpoints lie in `Λ₁` and represent the four classes of `Λ₁/2Λ₁`.
    MirrorMidpoints,
    /// A mirror is degenerate exactly when its postcritical point is its
    /// midpoint class; a nondegenerate mirror ends at `±h_k` outside `Λ₁`.
    MirrorEndpoints,
    /// Every full mirror is a simple arc.
    MirrorSimple,
    /// Distinct `2Λ₁`-translates of mirrors are disjoint.
    MirrorsDisjoint,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Fields => "required fields",
            Invariant::DegreeAtLeastTwo => "degree < 2",
            Invariant::DistinctInversePairs => "inverse pairs not distinct",
            Invariant::CorrespondenceBasis => "correspondence is not a basis of lambda1",
            Invariant::MirrorMidpoints => "mirror midpoints",
            Invariant::MirrorEndpoints => "mirror endpoints",
            Invariant::MirrorSimple => "mirror is not a simple arc",
            Invariant::MirrorsDisjoint => "mirror translates intersect",
        })
    }
}

/// Errors from parsing or validating a presentation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    /// A malformed line.
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
    /// A violated structural invariant.
    #[error("validation error: {invariant}: {detail}")]
    Validation {
        invariant: Invariant,
        detail: String,
    },
}

fn invalid(invariant: Invariant, detail: impl Into<String>) -> PresentationError {
    PresentationError::Validation {
        invariant,
        detail: detail.into(),
    }
}

/// A spin mirror, stored as its midpoint and one half of the arc.
///
/// The full mirror is the half-path together with its image under the
/// 180° rotation about the midpoint.  An empty half-path denotes a
/// degenerate mirror consisting of the midpoint alone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorArc {
    /// Midpoint, an element of `Λ₁`.
    pub midpoint: IntVec2,
    /// Polyline from the midpoint to the endpoint (empty when degenerate).
    pub half_path: Vec<RatPoint>,
}

impl MirrorArc {
    /// A degenerate mirror at `midpoint`.
    pub fn degenerate(midpoint: IntVec2) -> Self {
        MirrorArc {
            midpoint,
            half_path: Vec::new(),
        }
    }

    /// A mirror through `midpoint` whose half-path continues through `rest`
    /// (the midpoint is prepended if absent).
    pub fn with_path(midpoint: IntVec2, rest: Vec<RatPoint>) -> Self {
        let m = RatPoint::from(midpoint);
        let mut half_path = Vec::with_capacity(rest.len() + 1);
        if rest.first() != Some(&m) {
            half_path.push(m);
        }
        half_path.extend(rest);
        if half_path.len() == 1 {
            half_path.clear();
        }
        MirrorArc {
            midpoint,
            half_path,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.half_path.len() < 2
    }

    /// The terminal point of the half-path.
    pub fn endpoint(&self) -> Option<RatPoint> {
        if self.is_degenerate() {
            None
        } else {
            self.half_path.last().copied()
        }
    }

    /// The full mirror as a polyline from one endpoint through the midpoint
    /// to the other; a single point when degenerate.
    pub fn full_polyline(&self) -> Vec<RatPoint> {
        let m = RatPoint::from(self.midpoint);
        if self.is_degenerate() {
            return vec![m];
        }
        let mut pts: Vec<RatPoint> = self
            .half_path
            .iter()
            .rev()
            .map(|p| p.reflect_through(m))
            .collect();
        pts.extend(self.half_path.iter().skip(1).copied());
        pts
    }
}

/// Tag of a class of `Λ₂/2Λ₁` in the preimage coset table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CosetTag {
    /// Both a branch point class and a postcritical class.
    P1AndP2,
    /// A branch point class that is not postcritical.
    P1Only,
    /// A postcritical class that is not a branch point class.
    P2Only,
}

impl fmt::Display for CosetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CosetTag::P1AndP2 => "P1&P2",
            CosetTag::P1Only => "P1-P2",
            CosetTag::P2Only => "P2-P1",
        })
    }
}

/// A validated NET map presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetMapPresentation {
    name: String,
    lambda1: Basis2,
    postcritical: [IntVec2; 4],
    mirrors: [MirrorArc; 4],
    correspondence: Basis2,
    quotient: FiniteAbelianPres,
}

impl NetMapPresentation {
    /// Assemble and validate a presentation.
    pub fn new(
        name: impl Into<String>,
        lambda1: Basis2,
        postcritical: [IntVec2; 4],
        mirrors: [MirrorArc; 4],
        correspondence: Basis2,
    ) -> Result<Self, PresentationError> {
        let quotient = quotient_presentation(&lambda1, 2).expect("scale 2 is supported");
        let pres = NetMapPresentation {
            name: name.into(),
            lambda1,
            postcritical,
            mirrors,
            correspondence,
            quotient,
        };
        pres.validate()?;
        Ok(pres)
    }

    /// The bundled degree-10 running example.
    pub fn main_example() -> Self {
        Self::parse(bundled::MAIN).expect("bundled presentation is valid")
    }

    /// The bundled degree-4 presentation with constant Teichmüller map.
    pub fn double_example() -> Self {
        Self::parse(bundled::DOUBLE).expect("bundled presentation is valid")
    }

    /// The bundled degree-4 Euclidean presentation.
    pub fn euclidean_example() -> Self {
        Self::parse(bundled::EUCLIDEAN).expect("bundled presentation is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Basis of `Λ₁`.
    pub fn lambda1(&self) -> &Basis2 {
        &self.lambda1
    }

    /// The four postcritical representatives `h₁, …, h₄`.
    pub fn postcritical(&self) -> &[IntVec2; 4] {
        &self.postcritical
    }

    /// The four representative mirrors, aligned with the postcritical points.
    pub fn mirrors(&self) -> &[MirrorArc; 4] {
        &self.mirrors
    }

    /// The correspondence basis `(λ₁, μ₁)` of `Λ₁`.
    pub fn correspondence(&self) -> &Basis2 {
        &self.correspondence
    }

    /// The presentation of `Λ₂/2Λ₁`.
    pub fn quotient(&self) -> &FiniteAbelianPres {
        &self.quotient
    }

    /// Basis of `2Λ₁`.
    pub fn double_lambda1(&self) -> Basis2 {
        self.lambda1.scaled(2)
    }

    /// `deg f = |Λ₂/Λ₁|`.
    pub fn degree(&self) -> i64 {
        self.lambda1.index()
    }

    /// Class of `v` in `Λ₂/2Λ₁`.
    pub fn class_of(&self, v: IntVec2) -> GroupElem {
        self.quotient.reduce(v)
    }

    /// Whether `v` lies in `Λ₁`.
    pub fn in_lambda1(&self, v: IntVec2) -> bool {
        self.lambda1.contains(v)
    }

    /// The four classes of `Λ₁/2Λ₁` (the branch point classes `P₁`).
    pub fn p1_classes(&self) -> [GroupElem; 4] {
        let (u, v) = (self.lambda1.u, self.lambda1.v);
        [IntVec2::ZERO, u, v, u + v].map(|w| self.class_of(w))
    }

    /// Index `k` and sign such that `v ≡ sign·h_k (mod 2Λ₁)`, if any.
    pub fn postcritical_index(&self, v: IntVec2) -> Option<(usize, i64)> {
        let c = self.class_of(v);
        self.postcritical.iter().enumerate().find_map(|(k, &h)| {
            if self.class_of(h) == c {
                Some((k, 1))
            } else if self.class_of(-h) == c {
                Some((k, -1))
            } else {
                None
            }
        })
    }

    /// Whether `v` lies in a postcritical class `±h_k + 2Λ₁`.
    pub fn is_postcritical_class(&self, v: IntVec2) -> bool {
        self.postcritical_index(v).is_some()
    }

    /// Whether `v` lies in a class of `P₁ ∪ P₂`.
    pub fn is_marked_class(&self, v: IntVec2) -> bool {
        self.in_lambda1(v) || self.is_postcritical_class(v)
    }

    /// The midpoint of the mirror translate containing the lattice point `v`,
    /// which must lie in a postcritical class.
    pub fn mirror_midpoint_at(&self, v: IntVec2) -> Option<IntVec2> {
        let (k, _) = self.postcritical_index(v)?;
        let mirror = &self.mirrors[k];
        let twice = self.double_lambda1();
        match mirror.endpoint().and_then(RatPoint::to_int) {
            None => {
                // Degenerate: the mirror is the point itself.
                twice.contains(v - mirror.midpoint).then_some(v)
            }
            Some(e) => {
                let other = 2 * mirror.midpoint - e;
                [e, other]
                    .into_iter()
                    .find(|&end| twice.contains(v - end))
                    .map(|end| mirror.midpoint + (v - end))
            }
        }
    }

    /// Whether the map is Euclidean: every `h_k` lies in `Λ₁` and the classes
    /// `h_k + 2Λ₁` are exactly the four classes of `Λ₁/2Λ₁`.
    pub fn is_euclidean(&self) -> bool {
        if !self.postcritical.iter().all(|&h| self.in_lambda1(h)) {
            return false;
        }
        let ours: HashSet<GroupElem> = self
            .postcritical
            .iter()
            .map(|&h| self.class_of(h))
            .collect();
        let p1: HashSet<GroupElem> = self.p1_classes().into_iter().collect();
        ours == p1
    }

    /// Representatives of all classes of `Λ₂/2Λ₁` meeting the preimage of
    /// `P₁ ∪ P₂`, each tagged by membership.
    ///
    /// Classes in `P₁` are represented by mirror midpoints (or by `h_k` when
    /// `h_k ∈ Λ₁`); the inverse class `−h_k` is represented by
    /// `2·m_k − h_k`, where `m_k` is the midpoint of the `k`-th mirror.
    pub fn preimage_coset_table(&self) -> Vec<(IntVec2, CosetTag)> {
        let mut both = Vec::new();
        let mut p1_only = Vec::new();
        let mut p2_only = Vec::new();
        let mut seen = HashSet::new();
        for (k, &h) in self.postcritical.iter().enumerate() {
            if self.in_lambda1(h) {
                if seen.insert(self.class_of(h)) {
                    both.push((h, CosetTag::P1AndP2));
                }
            } else {
                let inverse = 2 * self.mirrors[k].midpoint - h;
                for rep in [h, inverse] {
                    if seen.insert(self.class_of(rep)) {
                        p2_only.push((rep, CosetTag::P2Only));
                    }
                }
            }
        }
        for mirror in &self.mirrors {
            if seen.insert(self.class_of(mirror.midpoint)) {
                p1_only.push((mirror.midpoint, CosetTag::P1Only));
            }
        }
        both.into_iter().chain(p1_only).chain(p2_only).collect()
    }

    fn validate(&self) -> Result<(), PresentationError> {
        if self.degree() < 2 {
            return Err(invalid(
                Invariant::DegreeAtLeastTwo,
                format!("|det lambda1| = {}", self.degree()),
            ));
        }

        // Four distinct inverse pairs.
        let pairs: Vec<[GroupElem; 2]> = self
            .postcritical
            .iter()
            .map(|&h| [self.class_of(h), self.class_of(-h)])
            .collect();
        for i in 0..4 {
            for j in i + 1..4 {
                if pairs[i].iter().any(|c| pairs[j].contains(c)) {
                    return Err(invalid(
                        Invariant::DistinctInversePairs,
                        format!(
                            "h{} = {} and h{} = {} give the same pair",
                            i + 1,
                            self.postcritical[i],
                            j + 1,
                            self.postcritical[j]
                        ),
                    ));
                }
            }
        }

        // Correspondence basis.
        let c = &self.correspondence;
        if !self.lambda1.same_lattice(c) {
            return Err(invalid(
                Invariant::CorrespondenceBasis,
                format!("({c}) does not span lambda1 = ({})", self.lambda1),
            ));
        }

        // Mirror midpoints.
        let mut mid_classes = HashSet::new();
        for (k, mirror) in self.mirrors.iter().enumerate() {
            if !self.in_lambda1(mirror.midpoint) {
                return Err(invalid(
                    Invariant::MirrorMidpoints,
                    format!(
                        "mirror {} midpoint {} is not in lambda1",
                        k + 1,
                        mirror.midpoint
                    ),
                ));
            }
            if !mid_classes.insert(self.class_of(mirror.midpoint)) {
                return Err(invalid(
                    Invariant::MirrorMidpoints,
                    format!(
                        "mirror {} midpoint repeats a class of lambda1/2lambda1",
                        k + 1
                    ),
                ));
            }
        }

        // Mirror endpoints and degeneracy.
        let twice = self.double_lambda1();
        for (k, (mirror, &h)) in self.mirrors.iter().zip(&self.postcritical).enumerate() {
            match mirror.endpoint() {
                None => {
                    if !twice.contains(h - mirror.midpoint) {
                        return Err(invalid(
                            Invariant::MirrorEndpoints,
                            format!(
                                "degenerate mirror {} at {} but h{} = {} is not in its class",
                                k + 1,
                                mirror.midpoint,
                                k + 1,
                                h
                            ),
                        ));
                    }
                }
                Some(end) => {
                    let Some(e) = end.to_int() else {
                        return Err(invalid(
                            Invariant::MirrorEndpoints,
                            format!("mirror {} ends at non-lattice point {end}", k + 1),
                        ));
                    };
                    if self.in_lambda1(e) {
                        return Err(invalid(
                            Invariant::MirrorEndpoints,
                            format!("mirror {} ends at {e}, which lies in lambda1", k + 1),
                        ));
                    }
                    if !twice.contains(e - h) && !twice.contains(e + h) {
                        return Err(invalid(
                            Invariant::MirrorEndpoints,
                            format!(
                                "mirror {} ends at {e}, which is not congruent to +-h{}",
                                k + 1,
                                k + 1
                            ),
                        ));
                    }
                }
            }
        }

        // Simple arcs.
        let polylines: Vec<Vec<RatPoint>> =
            self.mirrors.iter().map(MirrorArc::full_polyline).collect();
        for (k, poly) in polylines.iter().enumerate() {
            if poly.len() > 1 && !is_simple_polyline(poly) {
                return Err(invalid(
                    Invariant::MirrorSimple,
                    format!("mirror {}", k + 1),
                ));
            }
        }

        // Pairwise disjoint translates.
        for i in 0..4 {
            let box_i = BBox::of(&polylines[i]);
            for j in i..4 {
                let box_j = BBox::of(&polylines[j]);
                for t in lattice_translates_meeting(&twice, &box_j, &box_i) {
                    if i == j && t.is_zero() {
                        continue;
                    }
                    let tr = RatPoint::from(t);
                    let moved: Vec<RatPoint> = polylines[j].iter().map(|&p| p + tr).collect();
                    if polylines_meet(&polylines[i], &moved) {
                        return Err(invalid(
                            Invariant::MirrorsDisjoint,
                            format!("mirror {} meets mirror {} translated by {t}", i + 1, j + 1),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse and validate the text format:
    ///
    /// ```text
    /// name = <string>
    /// lambda1 = (a,b) (c,d)
    /// postcritical = (x1,y1) (x2,y2) (x3,y3) (x4,y4)
    /// correspondence = (a,b) (c,d)
    /// mirror <k> = (mx,my) : (p1x,p1y) ... (pnx,pny)
    /// mirror <k> = (mx,my) : degenerate
    /// ```
    ///
    /// `#` starts a comment; mirror coordinates may be rationals `r/s`.
    pub fn parse(text: &str) -> Result<Self, PresentationError> {
        let mut name: Option<String> = None;
        let mut lambda1: Option<Basis2> = None;
        let mut postcritical: Option<[IntVec2; 4]> = None;
        let mut correspondence: Option<Basis2> = None;
        let mut mirrors: [Option<MirrorArc>; 4] = Default::default();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let syntax = |message: String| PresentationError::Syntax {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| syntax("expected `key = value`".into()))?;
            let key = key.trim();
            let value = value.trim();
            let once = |present: bool| {
                if present {
                    Err(syntax(format!("duplicate `{key}`")))
                } else {
                    Ok(())
                }
            };
            match key {
                "name" => {
                    once(name.is_some())?;
                    name = Some(value.to_string());
                }
                "lambda1" | "correspondence" => {
                    let pts = parse_int_points(value).map_err(syntax)?;
                    if pts.len() != 2 {
                        return Err(syntax(format!("`{key}` needs exactly two vectors")));
                    }
                    let basis = Basis2::new(pts[0], pts[1]).map_err(|e| syntax(e.to_string()))?;
                    if key == "lambda1" {
                        once(lambda1.is_some())?;
                        lambda1 = Some(basis);
                    } else {
                        once(correspondence.is_some())?;
                        correspondence = Some(basis);
                    }
                }
                "postcritical" => {
                    once(postcritical.is_some())?;
                    let pts = parse_int_points(value).map_err(syntax)?;
                    let arr: [IntVec2; 4] = pts
                        .try_into()
                        .map_err(|_| syntax("`postcritical` needs exactly four points".into()))?;
                    postcritical = Some(arr);
                }
                _ if key.starts_with("mirror") => {
                    let k: usize = key["mirror".len()..]
                        .trim()
                        .parse()
                        .map_err(|_| syntax(format!("bad mirror index in `{key}`")))?;
                    if !(1..=4).contains(&k) {
                        return Err(syntax(format!("mirror index {k} out of range 1..4")));
                    }
                    once(mirrors[k - 1].is_some())?;
                    let (mid, path) = value
                        .split_once(':')
                        .ok_or_else(|| syntax("mirror needs `midpoint : path`".into()))?;
                    let mids = parse_int_points(mid).map_err(syntax)?;
                    if mids.len() != 1 {
                        return Err(syntax("mirror needs exactly one midpoint".into()));
                    }
                    let path = path.trim();
                    mirrors[k - 1] = Some(if path == "degenerate" {
                        MirrorArc::degenerate(mids[0])
                    } else {
                        let pts = parse_rat_points(path).map_err(syntax)?;
                        if pts.is_empty() {
                            return Err(syntax("empty mirror path (use `degenerate`)".into()));
                        }
                        MirrorArc::with_path(mids[0], pts)
                    });
                }
                _ => return Err(syntax(format!("unknown key `{key}`"))),
            }
        }

        let missing = |what: &str| invalid(Invariant::Fields, format!("missing `{what}`"));
        let [m1, m2, m3, m4] = mirrors;
        let mirrors = [
            m1.ok_or_else(|| missing("mirror 1"))?,
            m2.ok_or_else(|| missing("mirror 2"))?,
            m3.ok_or_else(|| missing("mirror 3"))?,
            m4.ok_or_else(|| missing("mirror 4"))?,
        ];
        NetMapPresentation::new(
            name.unwrap_or_default(),
            lambda1.ok_or_else(|| missing("lambda1"))?,
            postcritical.ok_or_else(|| missing("postcritical"))?,
            mirrors,
            correspondence.ok_or_else(|| missing("correspondence"))?,
        )
    }

    /// Render in the text format accepted by [`NetMapPresentation::parse`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("name = {}\n", self.name));
        s.push_str(&format!("lambda1 = {}\n", self.lambda1));
        let pc: Vec<String> = self.postcritical.iter().map(|p| p.to_string()).collect();
        s.push_str(&format!("postcritical = {}\n", pc.join(" ")));
        s.push_str(&format!("correspondence = {}\n", self.correspondence));
        for (k, m) in self.mirrors.iter().enumerate() {
            if m.is_degenerate() {
                s.push_str(&format!("mirror {} = {} : degenerate\n", k + 1, m.midpoint));
            } else {
                let rest: Vec<String> = m.half_path.iter().skip(1).map(|p| p.to_string()).collect();
                s.push_str(&format!(
                    "mirror {} = {} : {}\n",
                    k + 1,
                    m.midpoint,
                    rest.join(" ")
                ));
            }
        }
        s
    }
}

/// Split `"(a,b) (c,d) ..."` into coordinate string pairs.
fn parse_tuples(s: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = open
            .find(')')
            .ok_or_else(|| format!("unclosed `(` in `{s}`"))?;
        let inner = &open[..close];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| format!("expected `x,y` in `({inner})`"))?;
        out.push((a.trim().to_string(), b.trim().to_string()));
        rest = open[close + 1..].trim_start();
    }
    Ok(out)
}

fn parse_int_points(s: &str) -> Result<Vec<IntVec2>, String> {
    parse_tuples(s)?
        .into_iter()
        .map(|(a, b)| {
            let x = a.parse::<i64>().map_err(|_| format!("bad integer `{a}`"))?;
            let y = b.parse::<i64>().map_err(|_| format!("bad integer `{b}`"))?;
            Ok(IntVec2::new(x, y))
        })
        .collect()
}

fn parse_rational(s: &str) -> Result<Q, String> {
    let bad = || format!("bad rational `{s}`");
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().map_err(|_| bad())?;
            let d: i128 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn parse_rat_points(s: &str) -> Result<Vec<RatPoint>, String> {
    parse_tuples(s)?
        .into_iter()
        .map(|(a, b)| Ok(RatPoint::new(parse_rational(&a)?, parse_rational(&b)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: i64, y: i64) -> IntVec2 {
        IntVec2::new(x, y)
    }

    #[test]
    fn main_example_parses() {
        let p = NetMapPresentation::main_example();
        assert_eq!(p.degree(), 10);
        assert!(!p.is_euclidean());
        assert_eq!(p.postcritical(), &[v(0, 0), v(0, 5), v(2, 0), v(2, 3)]);
    }

    #[test]
    fn main_coset_table() {
        let p = NetMapPresentation::main_example();
        let table = p.preimage_coset_table();
        let expected = vec![
            (v(0, 0), CosetTag::P1AndP2),
            (v(0, 5), CosetTag::P1AndP2),
            (v(2, -1), CosetTag::P1Only),
            (v(2, 4), CosetTag::P1Only),
            (v(2, 0), CosetTag::P2Only),
            (v(2, -2), CosetTag::P2Only),
            (v(2, 3), CosetTag::P2Only),
            (v(2, 5), CosetTag::P2Only),
        ];
        assert_eq!(table, expected);
    }

    #[test]
    fn degrees_of_bundled_examples() {
        assert_eq!(NetMapPresentation::double_example().degree(), 4);
        let e = NetMapPresentation::euclidean_example();
        assert_eq!(e.degree(), 4);
        assert!(e.is_euclidean());
        assert_eq!(e.preimage_coset_table().len(), 4);
        assert!(e
            .preimage_coset_table()
            .iter()
            .all(|(_, t)| *t == CosetTag::P1AndP2));
    }

    #[test]
    fn double_coset_table_counts() {
        let p = NetMapPresentation::double_example();
        let table = p.preimage_coset_table();
        let m = p
            .postcritical()
            .iter()
            .filter(|&&h| p.in_lambda1(h))
            .count();
        let n = 4 - m;
        assert_eq!((m, n), (2, 2));
        let p2_side = table.iter().filter(|(_, t)| *t != CosetTag::P1Only).count();
        assert_eq!(p2_side, m + 2 * n);
        assert_eq!(table.len(), m + 2 * n + (4 - m));
    }

    #[test]
    fn round_trip() {
        for text in [bundled::MAIN, bundled::DOUBLE, bundled::EUCLIDEAN] {
            let p = NetMapPresentation::parse(text).unwrap();
            let again = NetMapPresentation::parse(&p.to_text()).unwrap();
            assert_eq!(p, again);
        }
    }

    #[test]
    fn mirror_midpoints_of_postcritical_points() {
        let p = NetMapPresentation::main_example();
        assert_eq!(p.mirror_midpoint_at(v(2, 3)), Some(v(2, 4)));
        assert_eq!(p.mirror_midpoint_at(v(2, 5)), Some(v(2, 4)));
        assert_eq!(p.mirror_midpoint_at(v(2, 0)), Some(v(2, -1)));
        assert_eq!(p.mirror_midpoint_at(v(6, 1)), Some(v(6, 2)));
        assert_eq!(p.mirror_midpoint_at(v(0, 5)), Some(v(0, 5)));
        assert_eq!(p.mirror_midpoint_at(v(4, -2)), Some(v(4, -2)));
        assert_eq!(p.mirror_midpoint_at(v(1, 0)), None);
    }

    fn replace_line(text: &str, prefix: &str, new_line: &str) -> String {
        text.lines()
            .map(|l| {
                if l.starts_with(prefix) {
                    new_line.to_string()
                } else {
                    l.to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    }

    fn validation_invariant(text: &str) -> Invariant {
        match NetMapPresentation::parse(text) {
            Err(PresentationError::Validation { invariant, .. }) => invariant,
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_degree_one() {
        let text = "name = trivial\nlambda1 = (1,0) (0,1)\npostcritical = (0,0) (1,0) (0,1) (1,1)\n\
                    correspondence = (1,0) (0,1)\nmirror 1 = (0,0) : degenerate\n\
                    mirror 2 = (1,0) : degenerate\nmirror 3 = (0,1) : degenerate\nmirror 4 = (1,1) : degenerate\n";
        assert_eq!(validation_invariant(text), Invariant::DegreeAtLeastTwo);
        assert!(NetMapPresentation::parse(text)
            .unwrap_err()
            .to_string()
            .contains("degree < 2"));
    }

    #[test]
    fn rejects_colliding_pairs() {
        // (2,-2) ≡ -(2,0) modulo 2Λ₁.
        let text = replace_line(
            bundled::MAIN,
            "postcritical",
            "postcritical = (0,0) (0,5) (2,0) (2,-2)",
        );
        assert_eq!(validation_invariant(&text), Invariant::DistinctInversePairs);
    }

    #[test]
    fn rejects_bad_correspondence() {
        let text = replace_line(
            bundled::MAIN,
            "correspondence",
            "correspondence = (4,-2) (0,5)",
        );
        assert_eq!(validation_invariant(&text), Invariant::CorrespondenceBasis);
    }

    #[test]
    fn rejects_intersecting_mirrors() {
        // A long mirror overlaps its own translate by (0, 10).
        let text = replace_line(
            bundled::MAIN,
            "mirror 3",
            "mirror 3 = (2,-1) : (2,0) (2,10)",
        );
        let err = NetMapPresentation::parse(&text).unwrap_err();
        assert!(matches!(err, PresentationError::Validation { .. }), "{err}");
    }

    #[test]
    fn rejects_syntax_errors() {
        let text = replace_line(bundled::MAIN, "lambda1", "lambda1 = (2,-1) (0,five)");
        assert!(matches!(
            NetMapPresentation::parse(&text),
            Err(PresentationError::Syntax { .. })
        ));
        assert!(matches!(
            NetMapPresentation::parse("bogus line"),
            Err(PresentationError::Syntax { line: 1, .. })
        ));
    }
}
