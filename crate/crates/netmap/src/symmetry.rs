//! Functional equations for the Teichmüller map `Σ_f`: Dehn-twist
//! equations, reflection equations and equations induced by affine
//! symmetries of the lattice data.
//!
//! `Σ_f` itself is never evaluated.  Every equation is symbolic, and its
//! executable shadow is an identity for the slope function `σ_f`: an
//! (anti-)Möbius map `z ↦ (az + b)/(cz + d)` acts on the boundary point
//! `−q/p` of a slope `p/q`, which gives the slope action
//! `p/q ↦ (dp − cq)/(aq − bp)`.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::core_lattice::{mat_det, mat_mul, order_in_quotient, IntVec2, Mat2, Slope};
use crate::geometry::{qi, RatPoint, Q};
use crate::presentation::NetMapPresentation;
use crate::pullback::analyze_slope;
use crate::slope_fn::{sigma, SlopeFnError};

/// A map `z ↦ (az + b)/(cz + d)` with integer entries and `ad − bc = ±1`;
/// when `conjugating` it is `z ↦ (az̄ + b)/(cz̄ + d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mobius {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
    pub conjugating: bool,
}

impl Mobius {
    pub const IDENTITY: Mobius = Mobius {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
        conjugating: false,
    };

    /// The map of a matrix with determinant `±1`; orientation-reversing
    /// exactly when the determinant is `−1`.
    ///
    /// # Panics
    /// If the determinant is not `±1`.
    pub fn from_matrix(m: Mat2) -> Mobius {
        let det = mat_det(&m);
        assert!(det == 1 || det == -1, "determinant must be ±1, got {det}");
        Mobius {
            a: m[0][0],
            b: m[0][1],
            c: m[1][0],
            d: m[1][1],
            conjugating: det == -1,
        }
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Mobius) -> Mobius {
        let m = mat_mul(&self.matrix(), &other.matrix());
        Mobius {
            a: m[0][0],
            b: m[0][1],
            c: m[1][0],
            d: m[1][1],
            conjugating: self.conjugating != other.conjugating,
        }
    }

    pub fn inverse(&self) -> Mobius {
        let det = self.det();
        Mobius {
            a: self.d * det,
            b: -self.b * det,
            c: -self.c * det,
            d: self.a * det,
            conjugating: self.conjugating,
        }
    }

    /// `self^n` for `n ≥ 0`.
    pub fn pow(&self, n: u32) -> Mobius {
        (0..n).fold(Mobius::IDENTITY, |acc, _| acc.compose(self))
    }

    /// Equality as maps (matrices up to sign).
    pub fn same_map(&self, other: &Mobius) -> bool {
        self.conjugating == other.conjugating
            && (self.matrix() == other.matrix() || self.matrix() == other.scaled(-1).matrix())
    }

    fn scaled(&self, k: i64) -> Mobius {
        Mobius {
            a: k * self.a,
            b: k * self.b,
            c: k * self.c,
            d: k * self.d,
            ..*self
        }
    }

    /// Action on slopes through the boundary points `−q/p`.
    pub fn act_on_slope(&self, s: Slope) -> Slope {
        match s.parts() {
            None => Slope::NonEssential,
            Some((p, q)) => Slope::new(self.d * p - self.c * q, self.a * q - self.b * p)
                .expect("unimodular maps send primitive pairs to primitive pairs"),
        }
    }

    /// Action on a point of the upper half-plane.
    pub fn act_on_point(&self, z: num_complex::Complex<Q>) -> num_complex::Complex<Q> {
        let w = if self.conjugating { z.conj() } else { z };
        (w * qi(self.a) + qi(self.b)) / (w * qi(self.c) + qi(self.d))
    }

    /// The map restricted to the real line as `x ↦ αx + β`, if it is affine
    /// there (`c = 0`).
    pub fn as_affine(&self) -> Option<(Q, Q)> {
        (self.c == 0).then(|| {
            (
                Q::new(self.a as i128, self.d as i128),
                Q::new(self.b as i128, self.d as i128),
            )
        })
    }

    /// The induced map on slopes as `s ↦ αs + β`, if affine (`b = 0`).
    pub fn slope_affine(&self) -> Option<(Q, Q)> {
        (self.b == 0).then(|| {
            (
                Q::new(self.d as i128, self.a as i128),
                Q::new(-self.c as i128, self.a as i128),
            )
        })
    }

    /// Compact matrix form, e.g. `[[1,0],[-2,1]]`, prefixed with `conj` for
    /// orientation-reversing maps.
    pub fn matrix_string(&self) -> String {
        let m = format!("[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d);
        if self.conjugating {
            format!("conj{m}")
        } else {
            m
        }
    }
}

fn linear_term(coef: i64, var: &str, constant: i64) -> String {
    let mut out = match coef {
        0 => String::new(),
        1 => var.to_string(),
        -1 => format!("-{var}"),
        k => format!("{k}{var}"),
    };
    if constant != 0 || out.is_empty() {
        if out.is_empty() {
            out = constant.to_string();
        } else if constant > 0 {
            out += &format!("+{constant}");
        } else {
            out += &constant.to_string();
        }
    }
    out
}

impl fmt::Display for Mobius {
    /// Formula form, e.g. `z/(5z+1)` or `-z̄`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = if self.c == 0 && self.d < 0 {
            self.scaled(-1)
        } else {
            *self
        };
        let var = if m.conjugating { "z̄" } else { "z" };
        let num = linear_term(m.a, var, m.b);
        if m.c == 0 && m.d == 1 {
            return write!(f, "{num}");
        }
        let den = linear_term(m.c, var, m.d);
        let den = if m.c == 0 { den } else { format!("({den})") };
        let num = if m.b != 0 && m.a != 0 {
            format!("({num})")
        } else {
            num
        };
        write!(f, "{num}/{den}")
    }
}

/// `Σ_f ∘ inner^d = outer^c ∘ Σ_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FunctionalEquation {
    pub inner: Mobius,
    pub inner_power: u32,
    pub outer: Mobius,
    pub outer_power: u32,
}

impl FunctionalEquation {
    /// The σ-level shadow `σ_f(inner^d · s) = outer^c · σ_f(s)` at `s`, with
    /// `o` absorbing.
    pub fn holds_for_slope(
        &self,
        pres: &NetMapPresentation,
        s: Slope,
    ) -> Result<bool, SlopeFnError> {
        let lhs = sigma(pres, self.inner.pow(self.inner_power).act_on_slope(s))?;
        let rhs = self
            .outer
            .pow(self.outer_power)
            .act_on_slope(sigma(pres, s)?);
        Ok(lhs == rhs)
    }
}

impl fmt::Display for FunctionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let power = |m: &Mobius, k: u32| {
            if k == 1 {
                m.matrix_string()
            } else {
                format!("{}^{k}", m.matrix_string())
            }
        };
        let inner = power(&self.inner, self.inner_power);
        if self.outer_power == 0 {
            write!(f, "Sigma_f . {inner} = Sigma_f")
        } else {
            write!(
                f,
                "Sigma_f . {inner} = {} . Sigma_f",
                power(&self.outer, self.outer_power)
            )
        }
    }
}

/// The matrix `[[1+2pq, 2q²], [−2p², 1−2pq]]` of the squared Dehn twist about
/// the curve of slope `p/q`, a parabolic fixing `−q/p`.
///
/// # Panics
/// If `slope` is `o`.
pub fn twist_matrix(slope: Slope) -> Mobius {
    let (p, q) = slope.parts().expect("twist about an essential slope");
    Mobius::from_matrix([[1 + 2 * p * q, 2 * q * q], [-2 * p * p, 1 - 2 * p * q]])
}

/// The Dehn-twist equation `Σ_f ∘ φ^d = ψ^c ∘ Σ_f` for `slope`, where `φ` and
/// `ψ` are the twist matrices of `slope` and `σ_f(slope)`, `d` is the
/// pullback degree and `c` the number of essential components.  When
/// `c = 0` the outer map is the identity.
pub fn twist_equation(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<FunctionalEquation, SlopeFnError> {
    let summary = analyze_slope(pres, slope)?;
    let image = sigma(pres, slope)?;
    let c = summary.essential as u32;
    let outer = if c == 0 {
        Mobius::IDENTITY
    } else {
        twist_matrix(image)
    };
    Ok(FunctionalEquation {
        inner: twist_matrix(slope),
        inner_power: summary.d as u32,
        outer,
        outer_power: c,
    })
}

/// Why a reflection equation does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReflectionFailure {
    /// `(λ, μ)` is not a basis of `Λ₂`.
    NotBasisLambda2,
    /// `(dλ, d′μ)` is not a basis of `Λ₁`.
    NotBasisLambda1,
    /// The postcritical classes are not permuted by `xλ + yμ ↦ −xλ + yμ`.
    ClassSetNotInvariant,
    /// `σ_f` of one slope is `o`, or both slopes have the same image.
    SigmaCollision,
}

impl fmt::Display for ReflectionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReflectionFailure::NotBasisLambda2 => "the two directions do not form a basis of Z^2",
            ReflectionFailure::NotBasisLambda1 => "(d lambda, d' mu) is not a basis of Lambda_1",
            ReflectionFailure::ClassSetNotInvariant => "the postcritical classes are not invariant",
            ReflectionFailure::SigmaCollision => {
                "sigma is o at one slope, or the two images coincide"
            }
        })
    }
}

/// Errors from symmetry computations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("reflection hypothesis failed: {0}")]
    HypothesisFailed(ReflectionFailure),
    #[error("the affine map is not a symmetry of the presentation")]
    NotInAff,
    #[error(
        "the affine map does not stabilize the spin mirrors; its boundary action is not supported"
    )]
    MirrorsNotStabilized,
    #[error(transparent)]
    SlopeFn(#[from] SlopeFnError),
}

/// A reflection equation `Σ_f ∘ ρ₂ = ρ₁ ∘ Σ_f`, recorded by the endpoints of
/// the geodesics fixed by the two reflections.  Endpoints are extended
/// rationals, stored as [`Slope`] values (`∞` included).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReflectionPair {
    pub rho2_endpoints: (Slope, Slope),
    pub rho1_endpoints: (Slope, Slope),
}

/// The extended rational `−q/p` of a slope `p/q`.
fn boundary_value(s: Slope) -> Slope {
    s.neg_reciprocal()
}

/// Image of a slope under the reflection of `ℝ̂` fixing the boundary points
/// `e₁, e₂` (the endpoints of a geodesic), acting on boundary points `−q/p`.
pub fn reflect_slope(endpoints: (Slope, Slope), s: Slope) -> Slope {
    let (Some((a1, a2)), Some((b1, b2)), Some(_)) =
        (endpoints.0.parts(), endpoints.1.parts(), s.parts())
    else {
        return Slope::NonEssential;
    };
    let x = boundary_value(s).parts().expect("essential");
    // Points as homogeneous pairs (num, den); the involution fixing a, b is
    // x ↦ ((a+b)x − 2ab) / (2x − (a+b)) in homogeneous coordinates.
    let (a, b) = ((a1 as i128, a2 as i128), (b1 as i128, b2 as i128));
    let (x0, x1) = (x.0 as i128, x.1 as i128);
    // a + b = (a1 b2 + b1 a2) / (a2 b2), ab = a1 b1 / (a2 b2).
    let sum_n = a.0 * b.1 + b.0 * a.1;
    let den = a.1 * b.1;
    let prod_n = a.0 * b.0;
    let num = sum_n * x0 - 2 * prod_n * x1;
    let dnm = 2 * den * x0 - sum_n * x1;
    let g = num_integer::gcd(num, dnm).max(1);
    let image = Slope::new((num / g) as i64, (dnm / g) as i64).expect("nonzero image");
    // Back from the boundary point −q/p to the slope p/q.
    image.neg_reciprocal()
}

/// Check the hypotheses of the reflection equation for the slopes `s1, s2`
/// (directions `λ`, `μ`) and return the two pairs of geodesic endpoints.
pub fn reflection_equation(
    pres: &NetMapPresentation,
    s1: Slope,
    s2: Slope,
) -> Result<ReflectionPair, SymmetryError> {
    let fail = |r| SymmetryError::HypothesisFailed(r);
    let (Some(lambda), Some(mu)) = (s1.direction(), s2.direction()) else {
        return Err(fail(ReflectionFailure::SigmaCollision));
    };
    if lambda.det(mu).abs() != 1 {
        return Err(fail(ReflectionFailure::NotBasisLambda2));
    }
    let d = order_in_quotient(lambda, pres.lambda1());
    let d_prime = order_in_quotient(mu, pres.lambda1());
    if (d * lambda).det(d_prime * mu).abs() != pres.degree() {
        return Err(fail(ReflectionFailure::NotBasisLambda1));
    }
    // Coordinates in the unimodular basis (λ, μ).
    let det = lambda.det(mu);
    let reflect = |h: IntVec2| {
        let x = h.det(mu) * det;
        let y = lambda.det(h) * det;
        (-x) * lambda + y * mu
    };
    if !pres
        .postcritical()
        .iter()
        .all(|&h| pres.is_postcritical_class(reflect(h)))
    {
        return Err(fail(ReflectionFailure::ClassSetNotInvariant));
    }
    let (t1, t2) = (sigma(pres, s1)?, sigma(pres, s2)?);
    if t1 == Slope::NonEssential || t2 == Slope::NonEssential || t1 == t2 {
        return Err(fail(ReflectionFailure::SigmaCollision));
    }
    Ok(ReflectionPair {
        rho2_endpoints: (boundary_value(s1), boundary_value(s2)),
        rho1_endpoints: (boundary_value(t1), boundary_value(t2)),
    })
}

/// An affine map `h ↦ L·h + t` of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AffineMap {
    pub linear: Mat2,
    pub translation: IntVec2,
}

impl AffineMap {
    pub fn new(linear: Mat2, translation: IntVec2) -> Self {
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn apply(&self, h: IntVec2) -> IntVec2 {
        crate::core_lattice::mat_apply(&self.linear, h) + self.translation
    }

    pub fn apply_rat(&self, p: RatPoint) -> RatPoint {
        let l = &self.linear;
        RatPoint::new(
            qi(l[0][0]) * p.x + qi(l[0][1]) * p.y + qi(self.translation.x),
            qi(l[1][0]) * p.x + qi(l[1][1]) * p.y + qi(self.translation.y),
        )
    }
}

/// Matrix of the linear part of `map` in the correspondence basis, if
/// integral (that is, if `L·Λ₁ ⊆ Λ₁`).
fn lambda1_matrix(pres: &NetMapPresentation, linear: &Mat2) -> Option<Mat2> {
    let basis = pres.correspondence();
    let image = |w: IntVec2| basis.coords(crate::core_lattice::mat_apply(linear, w));
    let (a, c) = image(basis.u)?;
    let (b, d) = image(basis.v)?;
    Some([[a, b], [c, d]])
}

/// Whether `h ↦ L·h + t` belongs to `Aff(f)`: it stabilizes `ℤ²` and `Λ₁`,
/// `t ∈ Λ₁`, and it permutes the postcritical inverse-pair classes mod `2Λ₁`.
pub fn aff_membership(pres: &NetMapPresentation, map: &AffineMap) -> bool {
    let det = mat_det(&map.linear);
    if det.abs() != 1 || !pres.in_lambda1(map.translation) {
        return false;
    }
    match lambda1_matrix(pres, &map.linear) {
        Some(m) if mat_det(&m).abs() == 1 => {}
        _ => return false,
    }
    let mut hit = [false; 4];
    for &h in pres.postcritical() {
        match pres.postcritical_index(map.apply(h)) {
            Some((k, _)) => hit[k] = true,
            None => return false,
        }
    }
    hit.iter().all(|&x| x)
}

/// `Σ_{δ₂}` for a linear part `[[a, b], [c, d]]` in the standard basis:
/// `z ↦ (dz + b)/(cz + a)`, conjugating when the determinant is `−1`.
///
/// # Panics
/// If the determinant is not `±1`.
pub fn sigma_delta2(linear: &Mat2) -> Mobius {
    let [[a, b], [c, d]] = *linear;
    Mobius::from_matrix([[d, b], [c, a]])
}

/// Whether the affine map carries every spin mirror onto a `2Λ₁`-translate
/// of a spin mirror.
pub fn stabilizes_mirrors(pres: &NetMapPresentation, map: &AffineMap) -> bool {
    let twice = pres.double_lambda1();
    pres.mirrors().iter().all(|mirror| {
        let image: Vec<RatPoint> = mirror
            .full_polyline()
            .iter()
            .map(|&p| map.apply_rat(p))
            .collect();
        let mid = map.apply(mirror.midpoint);
        pres.mirrors().iter().any(|target| {
            let shift = mid - target.midpoint;
            if !twice.contains(shift) || target.is_degenerate() != mirror.is_degenerate() {
                return false;
            }
            let moved: Vec<RatPoint> = target
                .full_polyline()
                .iter()
                .map(|&p| p + RatPoint::from(shift))
                .collect();
            let mut reversed = moved.clone();
            reversed.reverse();
            image == moved || image == reversed
        })
    })
}

/// `Σ_{δ₁}` for a mirror-stabilizing element of `Aff(f)`: the matrix of the
/// linear part in the correspondence basis, turned into a map by the same
/// recipe as [`sigma_delta2`].  Also returns that matrix.
pub fn sigma_delta1(
    pres: &NetMapPresentation,
    map: &AffineMap,
) -> Result<(Mobius, Mat2), SymmetryError> {
    if !aff_membership(pres, map) {
        return Err(SymmetryError::NotInAff);
    }
    if !stabilizes_mirrors(pres, map) {
        return Err(SymmetryError::MirrorsNotStabilized);
    }
    let m = lambda1_matrix(pres, &map.linear).ok_or(SymmetryError::NotInAff)?;
    Ok((sigma_delta2(&m), m))
}

/// The equation `Σ_f ∘ Σ_{δ₂} = Σ_{δ₁} ∘ Σ_f` of an affine symmetry.
pub fn affine_equation(
    pres: &NetMapPresentation,
    map: &AffineMap,
) -> Result<FunctionalEquation, SymmetryError> {
    let (outer, _) = sigma_delta1(pres, map)?;
    Ok(FunctionalEquation {
        inner: sigma_delta2(&map.linear),
        inner_power: 1,
        outer,
        outer_power: 1,
    })
}

/// A slope at which an equation's σ-level shadow fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub map: AffineMap,
    pub slope: Slope,
    /// `σ_f(Σ_{δ₂} · s)`.
    pub lhs: Slope,
    /// `Σ_{δ₁} · σ_f(s)`.
    pub rhs: Slope,
}

/// Check `σ_f(δ₂·s) = δ₁·σ_f(s)` for every map and every slope up to
/// `height`, returning all violations.  Maps whose `Σ_{δ₁}` is unavailable
/// are reported as errors.
pub fn consistency_suite(
    pres: &NetMapPresentation,
    maps: &[AffineMap],
    height: i64,
) -> Result<Vec<Violation>, SymmetryError> {
    let slopes = crate::obstruction::enumerate_slopes(height);
    let mut out = Vec::new();
    for map in maps {
        let eq = affine_equation(pres, map)?;
        for &s in &slopes {
            let lhs = sigma(pres, eq.inner.act_on_slope(s))?;
            let rhs = eq.outer.act_on_slope(sigma(pres, s)?);
            if lhs != rhs {
                out.push(Violation {
                    map: *map,
                    slope: s,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(out)
}

/// The unique line `y = m·x + b` compatible with a family of σ-level
/// identities `σ(α₂x + β₂) = α₁σ(x) + β₁`, each given as a pair
/// `(inner, outer)` of maps that are affine on slopes.  `None` if some map
/// is not affine or the solution is not unique.
pub fn invariant_line(pairs: &[(Mobius, Mobius)]) -> Option<(Q, Q)> {
    // Each identity gives m(α₂ − α₁) = 0 and m·β₂ + b(1 − α₁) = β₁.
    let mut rows: Vec<(Q, Q, Q)> = Vec::new();
    for (inner, outer) in pairs {
        let (a2, b2) = inner.slope_affine()?;
        let (a1, b1) = outer.slope_affine()?;
        rows.push((a2 - a1, Q::zero(), Q::zero()));
        rows.push((b2, qi(1) - a1, b1));
    }
    let mut solution = None;
    'outer: for (i, r) in rows.iter().enumerate() {
        for s in &rows[i + 1..] {
            let det = r.0 * s.1 - r.1 * s.0;
            if !det.is_zero() {
                let m = (r.2 * s.1 - r.1 * s.2) / det;
                let b = (r.0 * s.2 - r.2 * s.0) / det;
                solution = Some((m, b));
                break 'outer;
            }
        }
    }
    let (m, b) = solution?;
    rows.iter()
        .all(|r| r.0 * m + r.1 * b == r.2)
        .then_some((m, b))
}
