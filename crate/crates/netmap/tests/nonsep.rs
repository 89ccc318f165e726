use std::collections::BTreeSet;

use netmap::core_lattice::GroupElem;
use netmap::nonsep::{
    all_candidates, constant_teich_check, coset_numbers_group, cyclic_pairs, degree2_refutation,
    find_nonseparating, is_nonseparating, postcritical_subset, search_nonseparating,
    translate_by_involution, verify_nonexistence, FinAbGroup, NonsepChecker, NonsepError,
    SymmetricFour, DEFAULT_SEARCH_BUDGET,
};
use netmap::obstruction::enumerate_slopes;
use netmap::presentation::NetMapPresentation;
use netmap::pullback::analyze_slope;
use proptest::prelude::*;

fn e(a: i64, b: i64) -> GroupElem {
    GroupElem::new(a, b)
}

fn group(m: i64, n: i64) -> FinAbGroup {
    FinAbGroup::new(m, n).unwrap()
}

fn degtwo() -> (FinAbGroup, SymmetricFour) {
    let a = group(4, 2);
    let h = SymmetricFour::new(&a, [e(0, 0), e(1, 0), e(2, 0), e(1, 1)]).unwrap();
    (a, h)
}

fn order_three(a: &FinAbGroup) -> SymmetricFour {
    let reps: Vec<GroupElem> = a
        .inversion_classes()
        .into_iter()
        .filter(|&g| a.order_of(g) == 3)
        .collect();
    assert_eq!(reps.len(), 4);
    SymmetricFour::new(a, [reps[0], reps[1], reps[2], reps[3]]).unwrap()
}

fn subgroup_set(a: &FinAbGroup, g: GroupElem) -> Vec<GroupElem> {
    a.cyclic_subgroup(g)
}

#[test]
fn cyclic_pairs_of_z4_z2() {
    let a = group(4, 2);
    let pairs = cyclic_pairs(&a);
    let subgroups: BTreeSet<Vec<GroupElem>> = pairs.iter().map(|p| p.subgroup.clone()).collect();
    for g in [e(1, 0), e(1, 1), e(0, 1), e(2, 1)] {
        assert!(subgroups.contains(&subgroup_set(&a, g)), "<{g}> missing");
    }
    // ⟨(2,0)⟩ has quotient ℤ/2 ⊕ ℤ/2 and the trivial subgroup has quotient A.
    assert!(!subgroups.contains(&subgroup_set(&a, e(2, 0))));
    assert!(!subgroups.contains(&subgroup_set(&a, e(0, 0))));
    assert_eq!(subgroups.len(), 4);
    for p in &pairs {
        assert_eq!(p.quotient_order * p.subgroup.len() as i64, 8);
    }
}

#[test]
fn cyclic_pairs_of_klein_group() {
    let a = group(2, 2);
    let pairs = cyclic_pairs(&a);
    assert_eq!(pairs.len(), 3);
    assert!(pairs
        .iter()
        .all(|p| p.subgroup.len() == 2 && p.quotient_order == 2));
}

#[test]
fn cyclic_pairs_include_trivial_and_full_subgroups_when_cyclic() {
    let a = group(1, 6);
    let subgroups: BTreeSet<usize> = cyclic_pairs(&a).iter().map(|p| p.subgroup.len()).collect();
    assert_eq!(subgroups, BTreeSet::from([1, 2, 3, 6]));
    // Every generator of ℤ/6 is listed for the trivial subgroup.
    let trivial: Vec<GroupElem> = cyclic_pairs(&a)
        .into_iter()
        .filter(|p| p.subgroup.len() == 1)
        .map(|p| p.a)
        .collect();
    assert_eq!(trivial, vec![e(0, 1), e(0, 5)]);
}

#[test]
fn cyclic_pairs_of_z6_z6_are_balanced() {
    let a = group(6, 6);
    let pairs = cyclic_pairs(&a);
    assert!(!pairs.is_empty());
    for p in &pairs {
        assert_eq!(p.subgroup.len(), 6);
        assert_eq!(p.quotient_order, 6);
    }
}

#[test]
fn degtwo_coset_numbers() {
    let (a, h) = degtwo();
    for p in cyclic_pairs(&a) {
        let c = coset_numbers_group(&a, &h, &p);
        if p.subgroup == subgroup_set(&a, e(1, 0)) {
            assert_eq!(c, [0, 0, 0, 1]);
        }
        if p.subgroup == subgroup_set(&a, e(0, 1)) {
            assert_eq!(c, [0, 1, 1, 2]);
        }
    }
    assert!(is_nonseparating(&a, &h));
}

#[test]
fn degnine_coset_numbers() {
    let a = group(6, 6);
    let h = order_three(&a);
    for p in cyclic_pairs(&a) {
        assert_eq!(coset_numbers_group(&a, &h, &p), [0, 2, 2, 2], "{p}");
    }
    assert!(is_nonseparating(&a, &h));
}

#[test]
fn two_pairs_inside_a_cyclic_subgroup_separate() {
    // Two inverse pairs inside ⟨(1,0)⟩ and two outside give c = (0,0,1,1).
    let a = group(4, 2);
    let h = SymmetricFour::new(&a, [e(0, 0), e(1, 0), e(0, 1), e(1, 1)]).unwrap();
    let checker = NonsepChecker::new(a);
    let witness = checker.witness(&h).expect("separating");
    assert_ne!(witness.coset_numbers[1], witness.coset_numbers[2]);
    assert!(!is_nonseparating(&a, &h));
}

#[test]
fn coset_numbers_are_unit_invariant() {
    // Replacing a by u·a for a unit u permutes cosets without changing the
    // sorted coset numbers.
    let a = group(4, 4);
    let checker = NonsepChecker::new(a);
    let candidates = all_candidates(&a, DEFAULT_SEARCH_BUDGET).unwrap();
    for p in checker.pairs() {
        let same_b: Vec<_> = checker
            .pairs()
            .iter()
            .filter(|q| q.subgroup == p.subgroup)
            .collect();
        for h in candidates.iter().step_by(7) {
            let c = coset_numbers_group(&a, h, p);
            for q in &same_b {
                assert_eq!(coset_numbers_group(&a, h, q), c);
            }
        }
    }
}

#[test]
fn search_z4_z2_finds_degtwo() {
    let (a, h) = degtwo();
    let found = search_nonseparating(&a, DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(found.contains(&h));
}

#[test]
fn search_z4_z4_finds_embedded_degtwo() {
    let a = group(4, 4);
    let h = SymmetricFour::new(&a, [e(0, 0), e(1, 0), e(2, 0), e(1, 2)]).unwrap();
    assert!(search_nonseparating(&a, DEFAULT_SEARCH_BUDGET)
        .unwrap()
        .contains(&h));
}

#[test]
fn klein_group_snapshot() {
    let a = group(2, 2);
    let candidates = all_candidates(&a, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(candidates.len(), 1);
    let found: Vec<String> = search_nonseparating(&a, DEFAULT_SEARCH_BUDGET)
        .unwrap()
        .iter()
        .map(|h| h.to_string())
        .collect();
    // The only candidate is all of A, and B = ⟨(1,0)⟩ gives c = (0,0,1,1).
    assert!(found.is_empty(), "{found:?}");
    let checker = NonsepChecker::new(a);
    assert_eq!(
        checker.witness(&candidates[0]).unwrap().coset_numbers,
        [0, 0, 1, 1]
    );
}

#[test]
fn translate_examples() {
    let (a, h) = degtwo();
    assert_eq!(translate_by_involution(&a, &h, e(0, 0)).unwrap(), h);
    for by in [e(0, 1), e(2, 1), e(2, 0)] {
        let t = translate_by_involution(&a, &h, by).unwrap();
        assert!(is_nonseparating(&a, &t), "H + {by}");
    }
    assert_eq!(
        translate_by_involution(&a, &h, e(1, 0)),
        Err(NonsepError::NotAnInvolution(e(1, 0)))
    );
}

#[test]
fn nonexistence_for_odd_squarefree_d() {
    for d in [3, 5, 7, 15] {
        let a = group(2, 2 * d);
        assert_eq!(
            verify_nonexistence(&a, DEFAULT_SEARCH_BUDGET),
            Ok(true),
            "d = {d}"
        );
    }
    assert_eq!(
        verify_nonexistence(&group(4, 2), DEFAULT_SEARCH_BUDGET),
        Ok(false)
    );
}

#[test]
fn existence_for_even_or_nine_divisible_d() {
    for (d, m, n) in [(4, 8, 2), (6, 12, 2), (8, 16, 2), (9, 6, 6), (18, 12, 6)] {
        let a = group(m, n);
        assert_eq!(a.order(), 4 * d);
        assert!(
            find_nonseparating(&a, DEFAULT_SEARCH_BUDGET)
                .unwrap()
                .is_some(),
            "d = {d}"
        );
    }
}

#[test]
fn budget_is_enforced() {
    let a = group(2, 30);
    assert!(matches!(
        search_nonseparating(&a, 10_000),
        Err(NonsepError::BudgetExceeded {
            needed: 35960,
            budget: 10_000
        })
    ));
}

#[test]
fn degree_two_refutation() {
    let report = degree2_refutation();
    assert!(!report.is_empty());
    assert_eq!(report.iter().filter(|r| r.realizable()).count(), 0);
    let (_, h) = degtwo();
    let entry = report
        .iter()
        .find(|r| r.subset == h)
        .expect("degtwo H listed");
    assert!(entry.has_order_four);
    assert!(!entry.exactly_one_in_2a);
}

#[test]
fn missing_order_four_pair_separates() {
    let a = group(4, 2);
    for h in all_candidates(&a, DEFAULT_SEARCH_BUDGET).unwrap() {
        if !(h.contains(&a, e(1, 0)) && h.contains(&a, e(1, 1))) {
            assert!(!is_nonseparating(&a, &h), "{h}");
        }
    }
}

#[test]
fn constant_teichmuller_examples() {
    let double = NetMapPresentation::double_example();
    let (a, _) = postcritical_subset(&double);
    assert_eq!((a.m(), a.n()), (4, 4));
    assert!(constant_teich_check(&double));
    assert!(!constant_teich_check(&NetMapPresentation::main_example()));
    assert!(!constant_teich_check(
        &NetMapPresentation::euclidean_example()
    ));
}

#[test]
fn constant_teichmuller_agrees_with_pullbacks() {
    for pres in [
        NetMapPresentation::main_example(),
        NetMapPresentation::double_example(),
        NetMapPresentation::euclidean_example(),
    ] {
        let all_inessential = enumerate_slopes(8)
            .into_iter()
            .all(|s| analyze_slope(&pres, s).unwrap().essential == 0);
        assert_eq!(
            constant_teich_check(&pres),
            all_inessential,
            "{}",
            pres.name()
        );
    }
}

fn all_involutions(a: &FinAbGroup) -> Vec<GroupElem> {
    a.elements()
        .into_iter()
        .filter(|&g| a.mul(2, g) == e(0, 0))
        .collect()
}

fn small_group() -> impl Strategy<Value = FinAbGroup> {
    prop_oneof![
        Just((2, 2)),
        Just((4, 2)),
        Just((2, 6)),
        Just((4, 4)),
        Just((6, 2)),
        Just((8, 2)),
        Just((3, 3)),
        Just((1, 8))
    ]
    .prop_map(|(m, n)| group(m, n))
}

#[test]
fn translate_lemma_exhaustive() {
    for (m, n) in [(2, 2), (4, 2), (2, 6), (4, 4), (8, 2), (6, 6), (2, 10)] {
        let a = group(m, n);
        let checker = NonsepChecker::new(a);
        for h in search_nonseparating(&a, DEFAULT_SEARCH_BUDGET).unwrap() {
            for by in all_involutions(&a) {
                let t = translate_by_involution(&a, &h, by).unwrap();
                assert!(checker.is_nonseparating(&t), "{h} + {by} in {a}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translate_lemma(a in small_group(), pick in any::<prop::sample::Index>(), inv in any::<prop::sample::Index>()) {
        let found = search_nonseparating(&a, DEFAULT_SEARCH_BUDGET).unwrap();
        prop_assume!(!found.is_empty());
        let h = found[pick.index(found.len())];
        let invs = all_involutions(&a);
        let by = invs[inv.index(invs.len())];
        prop_assert!(is_nonseparating(&a, &translate_by_involution(&a, &h, by).unwrap()));
    }

    #[test]
    fn subgroup_lemma(base in small_group(), k in 1i64..4, l in 1i64..4, pick in any::<prop::sample::Index>()) {
        // A′ = ℤ/m ⊕ ℤ/n sits in A = ℤ/km ⊕ ℤ/ln via (x, y) ↦ (kx, ly).
        let (m, n) = (base.m(), base.n());
        let Ok(a) = FinAbGroup::new(k * m, l * n) else { return Ok(()) };
        prop_assume!(a.order() <= 64);
        let found = search_nonseparating(&base, DEFAULT_SEARCH_BUDGET).unwrap();
        prop_assume!(!found.is_empty());
        let h = found[pick.index(found.len())];
        let image = SymmetricFour::new(&a, h.reps().map(|g| a.elem(k * g.a, l * g.b))).unwrap();
        prop_assert!(is_nonseparating(&a, &image), "{} in {}", image, a);
    }
}
