//! Exact integer-lattice and finite-quotient arithmetic.
//!
//! Everything in this crate is phrased in terms of the standard lattice
//! `Λ₂ = ℤ²`, its finite-index sublattice `Λ₁`, and the finite abelian
//! quotients `Λ₂/Λ₁` and `Λ₂/2Λ₁`.  This module supplies the integer vectors,
//! lattice bases, canonical extended-rational slopes and Smith-normal-form
//! quotient presentations that the other modules are built on.
//!
//! No floating point is used anywhere in this module.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use thiserror::Error;

/// Errors raised by the lattice layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    /// `(0, 0)` does not determine an element of `ℚ̂`.
    #[error("the zero vector does not determine a slope")]
    ZeroVector,
    /// A pair of vectors with vanishing determinant was offered as a basis.
    #[error("degenerate basis: ({0}) and ({1}) are linearly dependent")]
    DegenerateBasis(IntVec2, IntVec2),
    /// A string could not be read as a slope.
    #[error("cannot parse slope `{0}` (expected `p/q`, `p`, `inf` or `o`)")]
    ParseSlope(String),
    /// Scale factors other than 1 and 2 are not supported.
    #[error("unsupported quotient scale {0} (expected 1 or 2)")]
    UnsupportedScale(i64),
}

/// An element of `Λ₂ = ℤ²`, written in the standard basis `(λ₂, μ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVec2 {
    pub x: i64,
    pub y: i64,
}

impl IntVec2 {
    pub const ZERO: IntVec2 = IntVec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        IntVec2 { x, y }
    }

    /// Determinant of the 2×2 matrix with columns `self` and `other`.
    pub fn det(self, other: IntVec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }
}

impl fmt::Display for IntVec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for IntVec2 {
    type Output = IntVec2;
    fn add(self, rhs: IntVec2) -> IntVec2 {
        IntVec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for IntVec2 {
    fn add_assign(&mut self, rhs: IntVec2) {
        *self = *self + rhs;
    }
}

impl Sub for IntVec2 {
    type Output = IntVec2;
    fn sub(self, rhs: IntVec2) -> IntVec2 {
        IntVec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for IntVec2 {
    fn sub_assign(&mut self, rhs: IntVec2) {
        *self = *self - rhs;
    }
}

impl Neg for IntVec2 {
    type Output = IntVec2;
    fn neg(self) -> IntVec2 {
        IntVec2::new(-self.x, -self.y)
    }
}

impl Mul<IntVec2> for i64 {
    type Output = IntVec2;
    fn mul(self, rhs: IntVec2) -> IntVec2 {
        IntVec2::new(self * rhs.x, self * rhs.y)
    }
}

/// An integer 2×2 matrix stored row-major: `[[a, b], [c, d]]`.
pub type Mat2 = [[i64; 2]; 2];

/// Multiply a matrix by a column vector.
pub fn mat_apply(m: &Mat2, v: IntVec2) -> IntVec2 {
    IntVec2::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

/// Product of two integer matrices.
pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Determinant of an integer matrix.
pub fn mat_det(m: &Mat2) -> i64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Inverse of a unimodular matrix (determinant ±1).
///
/// # Panics
/// Panics if the determinant is not ±1.
pub fn mat_inverse_unimodular(m: &Mat2) -> Mat2 {
    let det = mat_det(m);
    assert!(det == 1 || det == -1, "matrix {m:?} is not unimodular");
    [
        [det * m[1][1], -det * m[0][1]],
        [-det * m[1][0], det * m[0][0]],
    ]
}

/// An element of `ℚ̂ = ℚ ∪ {∞}` used as the slope of a simple closed curve,
/// or the symbol `o` meaning "no essential, nonperipheral preimage".
///
/// The essential variant is always stored in canonical form: `gcd(p, q) = 1`,
/// `q ≥ 0`, and `∞` is `1/0`.  Construct it with [`Slope::new`] (or
/// [`slope_normalize`]) so that equality of slopes is structural equality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slope {
    /// The slope `p/q` in lowest terms with `q ≥ 0`.
    Essential { p: i64, q: i64 },
    /// The symbol `o`.
    NonEssential,
}

/// Canonicalize `p/q` as an element of `ℚ̂`.
pub fn slope_normalize(p: i64, q: i64) -> Result<Slope, LatticeError> {
    if p == 0 && q == 0 {
        return Err(LatticeError::ZeroVector);
    }
    if q == 0 {
        return Ok(Slope::INFINITY);
    }
    let g = p.gcd(&q);
    let (mut p, mut q) = (p / g, q / g);
    if q < 0 {
        p = -p;
        q = -q;
    }
    Ok(Slope::Essential { p, q })
}

impl Slope {
    /// The canonical `∞ = 1/0`.
    pub const INFINITY: Slope = Slope::Essential { p: 1, q: 0 };
    /// The slope `0 = 0/1`.
    pub const ZERO: Slope = Slope::Essential { p: 0, q: 1 };

    /// Canonical slope `p/q`; see [`slope_normalize`].
    pub fn new(p: i64, q: i64) -> Result<Slope, LatticeError> {
        slope_normalize(p, q)
    }

    /// The integer slope `p/1`.
    pub fn integer(p: i64) -> Slope {
        Slope::Essential { p, q: 1 }
    }

    pub fn is_essential(self) -> bool {
        matches!(self, Slope::Essential { .. })
    }

    pub fn is_infinity(self) -> bool {
        self == Slope::INFINITY
    }

    /// `(p, q)` for an essential slope.
    pub fn parts(self) -> Option<(i64, i64)> {
        match self {
            Slope::Essential { p, q } => Some((p, q)),
            Slope::NonEssential => None,
        }
    }

    /// The primitive lattice vector `λ = q·λ₂ + p·μ₂ = (q, p)` of this slope.
    pub fn direction(self) -> Option<IntVec2> {
        self.parts().map(|(p, q)| IntVec2::new(q, p))
    }

    /// The point `−1/s` of `ℚ̂` (so `0 ↦ ∞` and `∞ ↦ 0`); `o` is fixed.
    pub fn neg_reciprocal(self) -> Slope {
        match self {
            Slope::Essential { p, q } => Slope::new(-q, p).expect("nonzero vector"),
            Slope::NonEssential => Slope::NonEssential,
        }
    }

    /// `s + c` for an integer `c` (`∞` and `o` are fixed).
    pub fn add_integer(self, c: i64) -> Slope {
        match self {
            Slope::Essential { p, q } => Slope::new(p + c * q, q).expect("nonzero vector"),
            Slope::NonEssential => Slope::NonEssential,
        }
    }

    /// `−s` (`∞` and `o` are fixed).
    pub fn negate(self) -> Slope {
        match self {
            Slope::Essential { p, q } => Slope::new(-p, q).expect("nonzero vector"),
            Slope::NonEssential => Slope::NonEssential,
        }
    }

    /// Compare two essential slopes as extended reals, with every rational
    /// number less than `∞`.  Returns `None` if either side is `o`.
    pub fn cmp_value(self, other: Slope) -> Option<Ordering> {
        let (p1, q1) = self.parts()?;
        let (p2, q2) = other.parts()?;
        Some(match (q1 == 0, q2 == 0) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (p1 as i128 * q2 as i128).cmp(&(p2 as i128 * q1 as i128)),
        })
    }

    /// Floating-point value (`∞` maps to `f64::INFINITY`, `o` to NaN); for
    /// plotting only.
    pub fn to_f64(self) -> f64 {
        match self {
            Slope::Essential { q: 0, .. } => f64::INFINITY,
            Slope::Essential { p, q } => p as f64 / q as f64,
            Slope::NonEssential => f64::NAN,
        }
    }

    /// Height `max(|p|, |q|)` of an essential slope.
    pub fn height(self) -> Option<i64> {
        self.parts().map(|(p, q)| p.abs().max(q))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Slope::Essential { q: 0, .. } => write!(f, "inf"),
            Slope::Essential { p, q: 1 } => write!(f, "{p}"),
            Slope::Essential { p, q } => write!(f, "{p}/{q}"),
            Slope::NonEssential => write!(f, "o"),
        }
    }
}

impl FromStr for Slope {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || LatticeError::ParseSlope(s.to_string());
        match t {
            "inf" | "∞" | "1/0" => return Ok(Slope::INFINITY),
            "o" => return Ok(Slope::NonEssential),
            _ => {}
        }
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| err())?,
                q.trim().parse::<i64>().map_err(|_| err())?,
            ),
            None => (t.parse::<i64>().map_err(|_| err())?, 1),
        };
        slope_normalize(p, q).map_err(|_| err())
    }
}

/// An ordered pair of linearly independent lattice vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Basis2 {
    pub u: IntVec2,
    pub v: IntVec2,
}

impl Basis2 {
    pub fn new(u: IntVec2, v: IntVec2) -> Result<Self, LatticeError> {
        if u.det(v) == 0 {
            return Err(LatticeError::DegenerateBasis(u, v));
        }
        Ok(Basis2 { u, v })
    }

    /// Signed determinant `det(u, v)`.
    pub fn det(&self) -> i64 {
        self.u.det(self.v)
    }

    /// Index of the spanned sublattice in `ℤ²`.
    pub fn index(&self) -> i64 {
        self.det().abs()
    }

    /// The basis `(k·u, k·v)` of the scaled lattice.
    pub fn scaled(&self, k: i64) -> Basis2 {
        Basis2 {
            u: k * self.u,
            v: k * self.v,
        }
    }

    /// The matrix whose columns are `u` and `v`.
    pub fn matrix(&self) -> Mat2 {
        [[self.u.x, self.v.x], [self.u.y, self.v.y]]
    }

    /// Numerators `(α, β)` with `w = (α·u + β·v)/det`.
    pub fn scaled_coords(&self, w: IntVec2) -> (i64, i64) {
        (w.det(self.v), self.u.det(w))
    }

    /// Integer coordinates of `w` in this basis, if `w` lies in the lattice.
    pub fn coords(&self, w: IntVec2) -> Option<(i64, i64)> {
        let det = self.det();
        let (a, b) = self.scaled_coords(w);
        if a % det == 0 && b % det == 0 {
            Some((a / det, b / det))
        } else {
            None
        }
    }

    /// Whether `w` lies in the lattice spanned by this basis.
    pub fn contains(&self, w: IntVec2) -> bool {
        self.coords(w).is_some()
    }

    /// The vector `a·u + b·v`.
    pub fn combine(&self, a: i64, b: i64) -> IntVec2 {
        a * self.u + b * self.v
    }

    /// Whether `other` spans the same lattice as `self`.
    pub fn same_lattice(&self, other: &Basis2) -> bool {
        self.index() == other.index() && self.contains(other.u) && self.contains(other.v)
    }
}

impl fmt::Display for Basis2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u, self.v)
    }
}

/// Order of the image of `v` in `ℤ²/⟨sublattice⟩`.
///
/// Writing `v = (α·u + β·w)/D` with `D = det(u, w)`, the order is
/// `|D| / gcd(D, α, β)`.
pub fn order_in_quotient(v: IntVec2, sublattice: &Basis2) -> i64 {
    let det = sublattice.det();
    let (a, b) = sublattice.scaled_coords(v);
    det.abs() / det.gcd(&a).gcd(&b)
}

/// An element `(a mod m, b mod n)` of a two-factor finite abelian group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupElem {
    pub a: i64,
    pub b: i64,
}

impl GroupElem {
    pub const fn new(a: i64, b: i64) -> Self {
        GroupElem { a, b }
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// A presentation `ℤ²/⟨scale·sublattice⟩ ≅ ℤ/m ⊕ ℤ/n` with `m | n`, together
/// with the coordinate transforms realizing the isomorphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteAbelianPres {
    /// First invariant factor.
    pub m: i64,
    /// Second invariant factor; divisible by `m`.
    pub n: i64,
    /// Unimodular matrix `U` with `U·M·V = diag(m, n)`; maps `ℤ²` to
    /// coordinates.
    pub to_coords: Mat2,
    /// `U⁻¹`; maps coordinates back to representatives in `ℤ²`.
    pub from_coords: Mat2,
}

impl FiniteAbelianPres {
    /// Group order `m·n`.
    pub fn order(&self) -> i64 {
        self.m * self.n
    }

    /// Image of `v` in the quotient.
    pub fn reduce(&self, v: IntVec2) -> GroupElem {
        let w = mat_apply(&self.to_coords, v);
        GroupElem::new(w.x.rem_euclid(self.m), w.y.rem_euclid(self.n))
    }

    /// A representative in `ℤ²` of a group element.
    pub fn lift(&self, g: GroupElem) -> IntVec2 {
        mat_apply(&self.from_coords, IntVec2::new(g.a, g.b))
    }

    /// Group addition.
    pub fn add(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        GroupElem::new(
            (g.a + h.a).rem_euclid(self.m),
            (g.b + h.b).rem_euclid(self.n),
        )
    }

    /// Group negation.
    pub fn neg(&self, g: GroupElem) -> GroupElem {
        GroupElem::new((-g.a).rem_euclid(self.m), (-g.b).rem_euclid(self.n))
    }
}

/// Image of `v` in the quotient described by `pres`.
pub fn reduce_mod(v: IntVec2, pres: &FiniteAbelianPres) -> GroupElem {
    pres.reduce(v)
}

/// Smith normal form of an integer 2×2 matrix.
///
/// Returns `(m, n, U)` with `U` unimodular and `U·M·V = diag(m, n)` for some
/// unimodular `V`, `m, n ≥ 0` and `m | n`.
pub fn smith_normal_form(mat: &Mat2) -> (i64, i64, Mat2) {
    let mut a = *mat;
    let mut u: Mat2 = [[1, 0], [0, 1]];

    fn row_op(a: &mut Mat2, u: &mut Mat2, dst: usize, src: usize, k: i64) {
        for j in 0..2 {
            a[dst][j] -= k * a[src][j];
            u[dst][j] -= k * u[src][j];
        }
    }
    fn row_swap(a: &mut Mat2, u: &mut Mat2) {
        a.swap(0, 1);
        u.swap(0, 1);
    }
    fn col_op(a: &mut Mat2, dst: usize, src: usize, k: i64) {
        for row in a.iter_mut() {
            row[dst] -= k * row[src];
        }
    }
    fn col_swap(a: &mut Mat2) {
        for row in a.iter_mut() {
            row.swap(0, 1);
        }
    }

    loop {
        // Move the entry of least nonzero absolute value to position (0, 0).
        let mut best: Option<(usize, usize)> = None;
        for i in 0..2 {
            for j in 0..2 {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else {
            return (0, 0, u);
        };
        if bi == 1 {
            row_swap(&mut a, &mut u);
        }
        if bj == 1 {
            col_swap(&mut a);
        }
        let pivot = a[0][0];
        let q_row = a[1][0].div_euclid(pivot);
        row_op(&mut a, &mut u, 1, 0, q_row);
        let q_col = a[0][1].div_euclid(pivot);
        col_op(&mut a, 1, 0, q_col);
        if a[1][0] != 0 || a[0][1] != 0 {
            continue;
        }
        if a[1][1] % pivot != 0 {
            // Fold the second row into the first and keep reducing.
            row_op(&mut a, &mut u, 0, 1, -1);
            continue;
        }
        break;
    }
    for i in 0..2 {
        if a[i][i] < 0 {
            a[i][i] = -a[i][i];
            u[i][0] = -u[i][0];
            u[i][1] = -u[i][1];
        }
    }
    (a[0][0], a[1][1], u)
}

/// Presentation of `ℤ²/⟨scale·sublattice⟩` as `ℤ/m ⊕ ℤ/n` with `m | n`.
pub fn quotient_presentation(
    sublattice: &Basis2,
    scale: i64,
) -> Result<FiniteAbelianPres, LatticeError> {
    if scale != 1 && scale != 2 {
        return Err(LatticeError::UnsupportedScale(scale));
    }
    let (m, n, u) = smith_normal_form(&sublattice.scaled(scale).matrix());
    Ok(FiniteAbelianPres {
        m,
        n,
        to_coords: u,
        from_coords: mat_inverse_unimodular(&u),
    })
}
