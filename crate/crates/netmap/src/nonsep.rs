//! Nonseparating subsets of finite abelian groups.
//!
//! Let `A = ℤ/m ⊕ ℤ/n` and let `H ⊆ A` be a disjoint union of four inverse
//! pairs `{±h₁},…,{±h₄}`.  For a cyclic subgroup `B` with cyclic quotient
//! `A/B ≅ ℤ/n_q` and an element `a` whose image generates `A/B`, each `h_k`
//! lies (up to sign) in exactly one coset `c·a + B` with `0 ≤ c ≤ n_q/2`.
//! Sorting these coset numbers as `c₁ ≤ c₂ ≤ c₃ ≤ c₄`, `H` is
//! *nonseparating* when `c₂ = c₃` for every such choice of `B` and `a`.
//!
//! The Teichmüller map of a NET map is constant exactly when the classes of
//! its postcritical representatives form a nonseparating subset of
//! `Λ₂/2Λ₁` ([`constant_teich_check`]).

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::core_lattice::GroupElem;
use crate::presentation::NetMapPresentation;

/// Default bound on the number of candidate subsets a search may examine.
pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// Errors from group construction and searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NonsepError {
    /// The factors are not positive or neither divides the other.
    #[error("invalid group Z/{m} + Z/{n}: factors must be positive and one must divide the other")]
    InvalidGroup { m: i64, n: i64 },
    /// An element does not belong to the group's coordinate ranges.
    #[error("element {0} is not reduced for the group")]
    NotAnElement(GroupElem),
    /// Two of the four inverse pairs coincide.
    #[error("inverse pairs of {0} and {1} are not disjoint")]
    OverlappingPairs(GroupElem, GroupElem),
    /// A translation by an element of order greater than two.
    #[error("{0} does not have order at most 2")]
    NotAnInvolution(GroupElem),
    /// The number of candidate subsets exceeds the search budget.
    #[error("search needs {needed} candidates, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
}

/// The group `ℤ/m ⊕ ℤ/n` where one factor divides the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    m: i64,
    n: i64,
}

impl FinAbGroup {
    /// `ℤ/m ⊕ ℤ/n`; requires `m | n` or `n | m`.
    pub fn new(m: i64, n: i64) -> Result<Self, NonsepError> {
        if m <= 0 || n <= 0 || (n % m != 0 && m % n != 0) {
            return Err(NonsepError::InvalidGroup { m, n });
        }
        Ok(FinAbGroup { m, n })
    }

    /// The first factor.
    pub fn m(&self) -> i64 {
        self.m
    }

    /// The second factor.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// `|A| = m·n`.
    pub fn order(&self) -> i64 {
        self.m * self.n
    }

    /// The element with coordinates reduced into `[0, m) × [0, n)`.
    pub fn elem(&self, a: i64, b: i64) -> GroupElem {
        GroupElem::new(a.rem_euclid(self.m), b.rem_euclid(self.n))
    }

    /// Whether `g` has reduced coordinates.
    pub fn contains(&self, g: GroupElem) -> bool {
        (0..self.m).contains(&g.a) && (0..self.n).contains(&g.b)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> Vec<GroupElem> {
        (0..self.m)
            .flat_map(|a| (0..self.n).map(move |b| GroupElem::new(a, b)))
            .collect()
    }

    /// Position of `g` in [`FinAbGroup::elements`].
    pub fn index_of(&self, g: GroupElem) -> usize {
        (g.a * self.n + g.b) as usize
    }

    /// `g + h`.
    pub fn add(&self, g: GroupElem, h: GroupElem) -> GroupElem {
        self.elem(g.a + h.a, g.b + h.b)
    }

    /// `−g`.
    pub fn neg(&self, g: GroupElem) -> GroupElem {
        self.elem(-g.a, -g.b)
    }

    /// `k·g`.
    pub fn mul(&self, k: i64, g: GroupElem) -> GroupElem {
        self.elem(k * g.a, k * g.b)
    }

    /// Order of `g`.
    pub fn order_of(&self, g: GroupElem) -> i64 {
        let oa = self.m / num_integer::gcd(self.m, g.a);
        let ob = self.n / num_integer::gcd(self.n, g.b);
        num_integer::lcm(oa, ob)
    }

    /// The representative of `{g, −g}` that is smaller in lexicographic order.
    pub fn pair_rep(&self, g: GroupElem) -> GroupElem {
        g.min(self.neg(g))
    }

    /// Representatives of the inverse pairs `{±g}`, in increasing order.
    pub fn inversion_classes(&self) -> Vec<GroupElem> {
        self.elements()
            .into_iter()
            .filter(|&g| self.pair_rep(g) == g)
            .collect()
    }

    /// The cyclic subgroup generated by `g`, as a sorted element list.
    pub fn cyclic_subgroup(&self, g: GroupElem) -> Vec<GroupElem> {
        let mut out: Vec<GroupElem> = (0..self.order_of(g)).map(|k| self.mul(k, g)).collect();
        out.sort();
        out
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{} + Z/{}", self.m, self.n)
    }
}

/// A subset `H = {±h₁} ⊔ {±h₂} ⊔ {±h₃} ⊔ {±h₄}` of a group.
///
/// Representatives are normalized by [`FinAbGroup::pair_rep`] and sorted, so
/// equal subsets compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymmetricFour {
    reps: [GroupElem; 4],
    involution: [bool; 4],
}

impl SymmetricFour {
    /// The subset with the given representatives; the four inverse pairs must
    /// be disjoint.
    pub fn new(group: &FinAbGroup, reps: [GroupElem; 4]) -> Result<Self, NonsepError> {
        for &g in &reps {
            if !group.contains(g) {
                return Err(NonsepError::NotAnElement(g));
            }
        }
        let mut reps = reps.map(|g| group.pair_rep(g));
        reps.sort();
        for i in 1..4 {
            if reps[i] == reps[i - 1] {
                return Err(NonsepError::OverlappingPairs(reps[i - 1], reps[i]));
            }
        }
        let involution = reps.map(|g| group.neg(g) == g);
        Ok(SymmetricFour { reps, involution })
    }

    /// The normalized representatives.
    pub fn reps(&self) -> [GroupElem; 4] {
        self.reps
    }

    /// Whether `g` lies in `H`.
    pub fn contains(&self, group: &FinAbGroup, g: GroupElem) -> bool {
        self.reps.contains(&group.pair_rep(g))
    }
}

impl fmt::Display for SymmetricFour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (g, inv)) in self.reps.iter().zip(self.involution).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if !inv {
                f.write_str("±")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

/// A cyclic subgroup `B` with cyclic quotient, together with an element `a`
/// whose image generates `A/B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPair {
    /// A generator of `B`.
    pub generator: GroupElem,
    /// The elements of `B`, sorted.
    pub subgroup: Vec<GroupElem>,
    /// The smallest element of a coset generating `A/B`.
    pub a: GroupElem,
    /// `|A/B|`.
    pub quotient_order: i64,
}

impl fmt::Display for CyclicPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "B=<{}> (order {}), a={}, |A/B|={}",
            self.generator,
            self.subgroup.len(),
            self.a,
            self.quotient_order
        )
    }
}

/// All cyclic subgroups `B` with cyclic quotient, each paired with every
/// generator of `A/B`.
///
/// Subgroups are deduplicated by element set.  Generators of `A/B` are
/// cosets, each represented by its smallest element; coset numbers depend on
/// `a` only through `a + B`.
pub fn cyclic_pairs(group: &FinAbGroup) -> Vec<CyclicPair> {
    let mut seen: HashSet<Vec<GroupElem>> = HashSet::new();
    let mut out = Vec::new();
    for g in group.elements() {
        let subgroup = group.cyclic_subgroup(g);
        if !seen.insert(subgroup.clone()) {
            continue;
        }
        let members: HashSet<GroupElem> = subgroup.iter().copied().collect();
        let quotient_order = group.order() / subgroup.len() as i64;
        let mut coset_reps = BTreeSet::new();
        for a in group.elements() {
            let rep = subgroup
                .iter()
                .map(|&b| group.add(a, b))
                .min()
                .expect("B is nonempty");
            if rep != a {
                continue;
            }
            // The order of a + B in A/B.
            let mut k = 1;
            let mut x = a;
            while !members.contains(&x) {
                x = group.add(x, a);
                k += 1;
            }
            if k == quotient_order {
                coset_reps.insert(rep);
            }
        }
        for a in coset_reps {
            out.push(CyclicPair {
                generator: g,
                subgroup: subgroup.clone(),
                a,
                quotient_order,
            });
        }
    }
    out
}

/// For each element, its coset number `c ∈ [0, n_q/2]` relative to `pair`,
/// indexed by [`FinAbGroup::index_of`].  Built as a discrete-log table of the
/// cosets `c·a + B`.
fn coset_table(group: &FinAbGroup, pair: &CyclicPair) -> Vec<i64> {
    let mut table = vec![-1; group.order() as usize];
    let nq = pair.quotient_order;
    for c in 0..nq {
        let base = group.mul(c, pair.a);
        for &b in &pair.subgroup {
            table[group.index_of(group.add(base, b))] = c.min(nq - c);
        }
    }
    debug_assert!(table.iter().all(|&c| c >= 0));
    table
}

/// The sorted coset numbers `c₁ ≤ … ≤ c₄` of `h` relative to `pair`.
pub fn coset_numbers_group(group: &FinAbGroup, h: &SymmetricFour, pair: &CyclicPair) -> [i64; 4] {
    let table = coset_table(group, pair);
    sorted_numbers(group, h, &table)
}

fn sorted_numbers(group: &FinAbGroup, h: &SymmetricFour, table: &[i64]) -> [i64; 4] {
    let mut c = h.reps.map(|g| table[group.index_of(g)]);
    c.sort();
    c
}

/// A choice of `(B, a)` for which `c₂ ≠ c₃`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingWitness {
    pub pair: CyclicPair,
    pub coset_numbers: [i64; 4],
}

impl fmt::Display for SeparatingWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coset_numbers;
        write!(f, "{}: c=({},{},{},{})", self.pair, c[0], c[1], c[2], c[3])
    }
}

/// Precomputed coset tables for every `(B, a)` of a group.
///
/// Tables that coincide (for example those of `a` and `−a`) are stored once.
#[derive(Debug, Clone)]
pub struct NonsepChecker {
    group: FinAbGroup,
    pairs: Vec<CyclicPair>,
    tables: Vec<Vec<i64>>,
    /// Index into `pairs` of the first pair producing each table.
    table_pair: Vec<usize>,
}

impl NonsepChecker {
    /// Tables for all pairs of `group`.
    pub fn new(group: FinAbGroup) -> Self {
        let pairs = cyclic_pairs(&group);
        let mut seen = HashSet::new();
        let mut tables = Vec::new();
        let mut table_pair = Vec::new();
        for (i, pair) in pairs.iter().enumerate() {
            let table = coset_table(&group, pair);
            if seen.insert(table.clone()) {
                tables.push(table);
                table_pair.push(i);
            }
        }
        NonsepChecker {
            group,
            pairs,
            tables,
            table_pair,
        }
    }

    /// The group.
    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    /// All pairs `(B, a)`.
    pub fn pairs(&self) -> &[CyclicPair] {
        &self.pairs
    }

    /// A pair with `c₂ ≠ c₃`, if one exists.
    pub fn witness(&self, h: &SymmetricFour) -> Option<SeparatingWitness> {
        self.tables
            .iter()
            .zip(&self.table_pair)
            .find_map(|(table, &i)| {
                let c = sorted_numbers(&self.group, h, table);
                (c[1] != c[2]).then(|| SeparatingWitness {
                    pair: self.pairs[i].clone(),
                    coset_numbers: c,
                })
            })
    }

    /// Whether `c₂ = c₃` for every pair.
    pub fn is_nonseparating(&self, h: &SymmetricFour) -> bool {
        self.tables.iter().all(|table| {
            let c = sorted_numbers(&self.group, h, table);
            c[1] == c[2]
        })
    }
}

/// Whether `h` is a nonseparating subset of `group`.
pub fn is_nonseparating(group: &FinAbGroup, h: &SymmetricFour) -> bool {
    NonsepChecker::new(*group).is_nonseparating(h)
}

fn choose4(k: u64) -> u64 {
    if k < 4 {
        0
    } else {
        k * (k - 1) * (k - 2) * (k - 3) / 24
    }
}

/// Every candidate `H`: all 4-subsets of the inverse pairs of `group`, in
/// lexicographic order.
pub fn all_candidates(group: &FinAbGroup, budget: u64) -> Result<Vec<SymmetricFour>, NonsepError> {
    let classes = group.inversion_classes();
    let needed = choose4(classes.len() as u64);
    if needed > budget {
        return Err(NonsepError::BudgetExceeded { needed, budget });
    }
    let k = classes.len();
    let mut out = Vec::with_capacity(needed as usize);
    for i in 0..k {
        for j in i + 1..k {
            for l in j + 1..k {
                for t in l + 1..k {
                    let reps = [classes[i], classes[j], classes[l], classes[t]];
                    out.push(SymmetricFour::new(group, reps).expect("distinct inverse pairs"));
                }
            }
        }
    }
    Ok(out)
}

/// All nonseparating subsets of `group`, by exhaustive enumeration of the
/// 4-subsets of inverse pairs.
pub fn search_nonseparating(
    group: &FinAbGroup,
    budget: u64,
) -> Result<Vec<SymmetricFour>, NonsepError> {
    let candidates = all_candidates(group, budget)?;
    let checker = NonsepChecker::new(*group);
    Ok(candidates
        .into_iter()
        .filter(|h| checker.is_nonseparating(h))
        .collect())
}

/// The first nonseparating subset of `group` in enumeration order, if any.
pub fn find_nonseparating(
    group: &FinAbGroup,
    budget: u64,
) -> Result<Option<SymmetricFour>, NonsepError> {
    let candidates = all_candidates(group, budget)?;
    let checker = NonsepChecker::new(*group);
    Ok(candidates.into_iter().find(|h| checker.is_nonseparating(h)))
}

/// `true` when `group` has no nonseparating subset (exhaustive check).
pub fn verify_nonexistence(group: &FinAbGroup, budget: u64) -> Result<bool, NonsepError> {
    Ok(find_nonseparating(group, budget)?.is_none())
}

/// The translate `H + h` for an element `h` with `2h = 0`.
pub fn translate_by_involution(
    group: &FinAbGroup,
    h: &SymmetricFour,
    by: GroupElem,
) -> Result<SymmetricFour, NonsepError> {
    if !group.contains(by) {
        return Err(NonsepError::NotAnElement(by));
    }
    if group.mul(2, by) != group.elem(0, 0) {
        return Err(NonsepError::NotAnInvolution(by));
    }
    SymmetricFour::new(group, h.reps.map(|g| group.add(g, by)))
}

/// One nonseparating subset of `ℤ/4 ⊕ ℤ/2` and whether it meets the two
/// conditions a degree-2 NET map with constant Teichmüller map would impose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Degree2Entry {
    pub subset: SymmetricFour,
    /// `H` contains both inverse pairs of elements of order 4.
    pub has_order_four: bool,
    /// `H` contains exactly one of the elements of `2A = {(0,0),(2,0)}`.
    pub exactly_one_in_2a: bool,
}

impl Degree2Entry {
    /// Whether both conditions hold.
    pub fn realizable(&self) -> bool {
        self.has_order_four && self.exactly_one_in_2a
    }
}

impl fmt::Display for Degree2Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes_no = |b: bool| if b { "yes" } else { "no" };
        write!(
            f,
            "{} order-4 pairs: {}, exactly one of 2A: {}, realizable: {}",
            self.subset,
            yes_no(self.has_order_four),
            yes_no(self.exactly_one_in_2a),
            yes_no(self.realizable())
        )
    }
}

/// All nonseparating subsets of `A = ℤ/4 ⊕ ℤ/2` with their dispositions.
///
/// A degree-2 NET map has `Λ₂/2Λ₁ ≅ ℤ/4 ⊕ ℤ/2`, and its postcritical classes
/// must contain both pairs of order-4 elements and exactly one element of
/// `2A`.  No nonseparating subset does both, so no degree-2 NET map has a
/// constant Teichmüller map.
pub fn degree2_refutation() -> Vec<Degree2Entry> {
    let group = FinAbGroup::new(4, 2).expect("valid group");
    let order_four: Vec<GroupElem> = group
        .inversion_classes()
        .into_iter()
        .filter(|&g| group.order_of(g) == 4)
        .collect();
    let two_a = [group.elem(0, 0), group.elem(2, 0)];
    search_nonseparating(&group, DEFAULT_SEARCH_BUDGET)
        .expect("eight elements are within budget")
        .into_iter()
        .map(|subset| Degree2Entry {
            subset,
            has_order_four: order_four.iter().all(|&g| subset.contains(&group, g)),
            exactly_one_in_2a: two_a
                .iter()
                .filter(|&&g| subset.contains(&group, g))
                .count()
                == 1,
        })
        .collect()
}

/// The group `Λ₂/2Λ₁` of a presentation and the subset formed by the classes
/// of its postcritical representatives.
pub fn postcritical_subset(pres: &NetMapPresentation) -> (FinAbGroup, SymmetricFour) {
    let q = pres.quotient();
    let group = FinAbGroup::new(q.m, q.n).expect("Smith normal form factors divide");
    let reps = pres.postcritical().map(|h| pres.class_of(h));
    let subset =
        SymmetricFour::new(&group, reps).expect("presentations have distinct inverse pairs");
    (group, subset)
}

/// Whether the Teichmüller map of the NET map is constant, i.e. whether the
/// postcritical classes form a nonseparating subset of `Λ₂/2Λ₁`.
pub fn constant_teich_check(pres: &NetMapPresentation) -> bool {
    let (group, subset) = postcritical_subset(pres);
    is_nonseparating(&group, &subset)
}
