//! Exact analysis of nearly Euclidean Thurston (NET) maps presented by
//! lattice data.
//!
//! A NET map is described by a lattice pair `Λ₁ ⊆ Λ₂ = ℤ²`, four postcritical
//! coset representatives, four spin mirrors and a correspondence basis of
//! `Λ₁` ([`presentation::NetMapPresentation`]).  From this data the crate
//! computes
//!
//! * pullback degrees, coset numbers and multipliers of curves by slope
//!   ([`pullback`]),
//! * the slope function `σ_f` by the spin-mirror zigzag algorithm
//!   ([`slope_fn`]),
//! * hyperbolic half-spaces and boundary-cover certificates
//!   ([`halfspace`]) that rule out Thurston obstructions ([`obstruction`]),
//! * functional equations for the induced Teichmüller map coming from Dehn
//!   twists, reflections and affine symmetries ([`symmetry`]),
//! * nonseparating subsets of finite abelian groups, which decide whether the
//!   Teichmüller map is constant ([`nonsep`]).
//!
//! All arithmetic is exact: integers, rationals and quadratic irrationals
//! `a + b√k`.  No floating point enters any decision.

pub mod core_lattice;
pub mod geometry;
pub mod halfspace;
pub mod nonsep;
pub mod obstruction;
pub mod presentation;
pub mod pullback;
pub mod slope_fn;
pub mod symmetry;
