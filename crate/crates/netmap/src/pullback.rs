//! Pullbacks of simple closed curves: degree, coset numbers, component
//! counts and the multiplier `δ_f`.
//!
//! For a slope `p/q` put `λ = (q, p)`.  The pullback of a curve of slope
//! `p/q` consists of `d′` components, each mapping with degree `d`, where `d`
//! is the order of `λ` in `Λ₂/Λ₁` and `d·d′ = deg f`.  The four coset numbers
//! `c₁ ≤ c₂ ≤ c₃ ≤ c₄` of the postcritical classes determine how many
//! components are essential, peripheral and null-homotopic.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::core_lattice::{order_in_quotient, IntVec2, Slope};
use crate::presentation::NetMapPresentation;

/// Errors from pullback computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum PullbackError {
    /// The slope `o` has no pullback.
    #[error("the symbol o is not a slope of a curve")]
    NotASlope,
}

/// Summary of the pullback of a curve with a given slope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PullbackSummary {
    pub slope: Slope,
    /// Degree with which each component maps to the curve.
    pub d: i64,
    /// Number of components, `deg f / d`.
    pub d_prime: i64,
    /// Sorted coset numbers `c₁ ≤ c₂ ≤ c₃ ≤ c₄`.
    pub coset_numbers: [i64; 4],
    /// `c₃ − c₂`.
    pub essential: i64,
    /// `(c₂ − c₁) + (c₄ − c₃)`.
    pub peripheral: i64,
    /// `c₁ − c₄ + d′`.
    pub null_homotopic: i64,
    /// `δ_f = essential / d`.
    pub multiplier: Ratio<i64>,
}

impl fmt::Display for PullbackSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c1, c2, c3, c4] = self.coset_numbers;
        write!(
            f,
            "d={} d'={} c=({c1},{c2},{c3},{c4}) ess={} per={} null={} delta={}",
            self.d,
            self.d_prime,
            self.essential,
            self.peripheral,
            self.null_homotopic,
            self.multiplier
        )
    }
}

/// Coset number of `η = (r, s)` for the slope `p/q`: the least nonnegative
/// integer congruent to `±(p·r − q·s)` modulo `2d′`.
pub fn coset_number(eta: IntVec2, slope: Slope, d_prime: i64) -> Result<i64, PullbackError> {
    let (p, q) = slope.parts().ok_or(PullbackError::NotASlope)?;
    let modulus = 2 * d_prime;
    let value = (p * eta.x - q * eta.y).rem_euclid(modulus);
    Ok(value.min(modulus - value))
}

/// Degree, coset numbers and component counts of the pullback of `slope`.
pub fn analyze_slope(
    pres: &NetMapPresentation,
    slope: Slope,
) -> Result<PullbackSummary, PullbackError> {
    let lambda = slope.direction().ok_or(PullbackError::NotASlope)?;
    let d = order_in_quotient(lambda, pres.lambda1());
    let d_prime = pres.degree() / d;
    let mut c = [0i64; 4];
    for (ck, &h) in c.iter_mut().zip(pres.postcritical()) {
        *ck = coset_number(h, slope, d_prime)?;
    }
    c.sort_unstable();
    let essential = c[2] - c[1];
    let peripheral = (c[1] - c[0]) + (c[3] - c[2]);
    let null_homotopic = c[0] - c[3] + d_prime;
    Ok(PullbackSummary {
        slope,
        d,
        d_prime,
        coset_numbers: c,
        essential,
        peripheral,
        null_homotopic,
        multiplier: Ratio::new(essential, d),
    })
}

/// The multiplier `δ_f(s) = c/d`, the 1×1 Thurston matrix entry of `s`.
pub fn multiplier(pres: &NetMapPresentation, slope: Slope) -> Result<Ratio<i64>, PullbackError> {
    analyze_slope(pres, slope).map(|s| s.multiplier)
}

/// One residue class of slopes `p/q` of the bundled degree-10 example, on
/// which the pullback data is constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueClass {
    /// The admissible values of `q mod 20`.
    pub q_mod_20: &'static str,
    /// The admissible values of `2p + q mod 5`.
    pub two_p_plus_q_mod_5: &'static str,
    /// A representative slope of the class.
    pub representative: Slope,
}

/// The eight residue classes `(q mod 20, 2p + q mod 5)` that determine the
/// pullback data of the bundled degree-10 example.
pub fn main_residue_classes() -> [ResidueClass; 8] {
    let row = |q_mod_20, two_p_plus_q_mod_5, p, q| ResidueClass {
        q_mod_20,
        two_p_plus_q_mod_5,
        representative: Slope::new(p, q).expect("coprime representative"),
    };
    [
        row("±1,±3,±5,±7,±9", "±1,±2", 0, 1),
        row("±1,±9", "0", 2, 1),
        row("±3,±7", "0", 1, 3),
        row("0,±2,±4,±6,±8,10", "±1,±2", 1, 4),
        row("±2", "0", -1, 2),
        row("±4", "0", 3, 4),
        row("±6", "0", 7, 6),
        row("±8", "0", 1, 8),
    ]
}

/// Whether `slope = p/q` (with `q ≥ 0`) lies in `class`.
pub fn in_residue_class(slope: Slope, class: &ResidueClass) -> bool {
    let Some((p, q)) = slope.parts() else {
        return false;
    };
    let matches = |set: &str, value: i64, modulus: i64| {
        set.split(',').any(|item| {
            let (signs, digits) = match item.strip_prefix('±') {
                Some(rest) => (&[1, -1][..], rest),
                None => (&[1][..], item),
            };
            let target: i64 = digits.parse().expect("residue table entry");
            signs
                .iter()
                .any(|&sg| (sg * target - value).rem_euclid(modulus) == 0)
        })
    };
    matches(class.q_mod_20, q, 20) && matches(class.two_p_plus_q_mod_5, 2 * p + q, 5)
}
