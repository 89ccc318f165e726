//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.  Runs without the libtest harness so the report is
//! always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use netmap::core_lattice::{mat_mul, GroupElem, IntVec2, Mat2, Slope};
use netmap::geometry::Q;
use netmap::halfspace::{halfspace_for, horoball_value, GaussQ};
use netmap::nonsep::{
    constant_teich_check, coset_numbers_group, cyclic_pairs, degree2_refutation, is_nonseparating,
    search_nonseparating, translate_by_involution, verify_nonexistence, FinAbGroup, NonsepChecker,
    SymmetricFour, DEFAULT_SEARCH_BUDGET,
};
use netmap::obstruction::{obstruction_report_for_slopes, verify_certificate, ObstructionVerdict};
use netmap::presentation::NetMapPresentation;
use netmap::pullback::analyze_slope;
use netmap::slope_fn::{find_segment, sigma, sigma_main_closed_form};
use netmap::symmetry::{
    affine_equation, consistency_suite, sigma_delta1, sigma_delta2, twist_equation, twist_matrix,
    AffineMap,
};
use num_traits::One;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = Result<(), String>;

fn s(p: i64, q: i64) -> Slope {
    Slope::new(p, q).unwrap()
}

fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

fn check(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn box_slopes(bound: i64) -> Vec<Slope> {
    let mut out = vec![Slope::INFINITY];
    for qq in 1..=bound {
        for p in -bound..=bound {
            if num_integer::gcd(p, qq) == 1 {
                out.push(s(p, qq));
            }
        }
    }
    out
}

/// Representative slope, d, coset numbers, essential, peripheral, null.
type PullbackRow = ((i64, i64), i64, [i64; 4], i64, i64, i64);

const PULLBACK_TABLE: [PullbackRow; 8] = [
    ((0, 1), 10, [0, 0, 1, 1], 1, 0, 0),
    ((2, 1), 2, [0, 1, 4, 5], 3, 2, 0),
    ((1, 3), 2, [0, 2, 3, 5], 1, 4, 0),
    ((1, 4), 5, [0, 0, 2, 2], 2, 0, 0),
    ((-1, 2), 1, [0, 2, 8, 10], 6, 4, 0),
    ((3, 4), 1, [0, 0, 6, 6], 6, 0, 4),
    ((7, 6), 1, [0, 4, 6, 10], 2, 8, 0),
    ((1, 8), 1, [0, 0, 2, 2], 2, 0, 8),
];

fn pullback_table() -> Outcome {
    let pres = NetMapPresentation::main_example();
    for ((p, qq), d, c, ess, per, null) in PULLBACK_TABLE {
        let a = analyze_slope(&pres, s(p, qq)).map_err(|e| e.to_string())?;
        let got = (
            a.d,
            a.coset_numbers,
            a.essential,
            a.peripheral,
            a.null_homotopic,
        );
        check(got == (d, c, ess, per, null), || {
            format!("{p}/{qq}: got {got:?}")
        })?;
    }
    Ok(())
}

/// Slope, base point, multiple of (q, p).
type SegmentRow = ((i64, i64), (i64, i64), i64);

const SEGMENT_TABLE: [SegmentRow; 8] = [
    ((3, 4), (0, 0), 1),
    ((1, 4), (0, 0), 5),
    ((-1, 2), (2, 0), 2),
    ((1, 2), (0, 0), 3),
    ((3, 2), (0, 0), 1),
    ((2, 1), (2, 0), 4),
    ((0, 1), (0, 0), 2),
    ((1, 1), (0, 0), 6),
];

fn segment_table() -> Outcome {
    let pres = NetMapPresentation::main_example();
    for ((p, qq), (bx, by), k) in SEGMENT_TABLE {
        let (v, w) = find_segment(&pres, s(p, qq)).map_err(|e| e.to_string())?;
        check(w - v == IntVec2::new(k * qq, k * p), || {
            format!("{p}/{qq}: w - v = {}", w - v)
        })?;
        let base = IntVec2::new(bx, by);
        check(pres.class_of(v) == pres.class_of(base), || {
            format!("{p}/{qq}: v = {v}")
        })?;
    }
    Ok(())
}

fn closed_form_equivalence() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let slopes = box_slopes(50);
    for &x in &slopes {
        let got = sigma(&pres, x).map_err(|e| format!("{x}: {e}"))?;
        let want = sigma_main_closed_form(x);
        check(got == want, || {
            format!("sigma({x}) = {got}, closed form {want}")
        })?;
    }
    check(slopes.len() > 3000, || {
        format!("only {} slopes", slopes.len())
    })
}

/// Slope, image, δ, C, R², bounded.
fn halfspace_rows() -> Vec<(Slope, Slope, Q, Q, Q, bool)> {
    vec![
        (s(-1, 2), s(0, 1), q(6, 1), q(2, 1), q(6, 1), true),
        (s(-1, 4), s(1, 6), q(2, 5), q(32, 3), q(1000, 9), true),
        (s(1, 8), s(1, 4), q(2, 1), q(0, 1), q(32, 1), false),
        (s(1, 4), s(1, 2), q(2, 5), q(-16, 3), q(40, 9), true),
        (s(1, 3), s(0, 1), q(1, 2), q(-3, 1), q(1, 2), true),
        (s(7, 16), s(1, 4), q(6, 1), q(-88, 43), q(864, 1849), true),
        (s(1, 2), s(1, 3), q(2, 5), q(-4, 3), q(10, 9), true),
        (s(3, 4), s(1, 2), q(6, 1), q(0, 1), q(8, 3), true),
    ]
}

fn worked_values() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let sig = |x: Slope| sigma(&pres, x).map_err(|e| e.to_string());
    check(sig(s(1, 4))? == s(1, 2), || "sigma(1/4)".into())?;
    check(sig(s(3, 2))? == s(1, 1), || "sigma(3/2)".into())?;
    check(sig(Slope::INFINITY)? == Slope::INFINITY, || {
        "sigma(inf)".into()
    })?;
    for (x, image, ..) in halfspace_rows() {
        let got = sig(x)?;
        check(got == image, || {
            format!("sigma({x}) = {got}, expected {image}")
        })?;
    }
    Ok(())
}

fn functional_identities() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let sig = |x: Slope| sigma(&pres, x).map_err(|e| e.to_string());
    for x in box_slopes(50) {
        let sx = sig(x)?;
        check(sig(x.add_integer(5))? == sx.add_integer(2), || {
            format!("shift at {x}")
        })?;
        check(sig(x.negate().add_integer(-1))? == sx.negate(), || {
            format!("flip at {x}")
        })?;
    }
    Ok(())
}

fn halfspace_table() -> Outcome {
    let pres = NetMapPresentation::main_example();
    for (x, image, delta, c, r2, bounded) in halfspace_rows() {
        let h = halfspace_for(&pres, x)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("no half-space for {x}"))?;
        check(h.source.image == image && h.source.delta == delta, || {
            format!("{x}: source {:?}", h.source)
        })?;
        check(h.center == c, || format!("{x}: C = {}", h.center))?;
        check(h.radius_squared() == Some(r2), || {
            format!("{x}: R^2 = {:?}", h.radius_squared())
        })?;
        check(h.kind.is_bounded() == bounded, || {
            format!("{x}: kind {:?}", h.kind)
        })?;
    }
    Ok(())
}

fn no_obstruction_certificate() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let all: Vec<Slope> = halfspace_rows().iter().map(|r| r.0).collect();
    let six: Vec<Slope> = all
        .iter()
        .copied()
        .filter(|&x| x != s(7, 16) && x != s(-1, 2))
        .collect();
    for slopes in [all, six] {
        match obstruction_report_for_slopes(&pres, &slopes).map_err(|e| e.to_string())? {
            ObstructionVerdict::Unobstructed(cert) => verify_certificate(&pres, &cert)?,
            other => return Err(format!("{} slopes: {other}", slopes.len())),
        }
    }
    Ok(())
}

fn conj(m: Mat2, by: Mat2) -> Mat2 {
    let det = by[0][0] * by[1][1] - by[0][1] * by[1][0];
    let inv = [
        [by[1][1] * det, -by[0][1] * det],
        [-by[1][0] * det, by[0][0] * det],
    ];
    mat_mul(&mat_mul(&by, &m), &inv)
}

fn dehn_twist_equation() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let eq = twist_equation(&pres, Slope::INFINITY).map_err(|e| e.to_string())?;
    check((eq.inner_power, eq.outer_power) == (5, 2), || {
        format!("powers {eq}")
    })?;
    let phi = [[1, 0], [-2, 1]];
    check(eq.inner.matrix() == phi && eq.outer.matrix() == phi, || {
        format!("matrices {eq}")
    })?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut tested = 0;
    while tested < 1000 {
        let (p, qq) = (rng.gen_range(-1000i64..=1000), rng.gen_range(0i64..=1000));
        if num_integer::gcd(p, qq) != 1 {
            continue;
        }
        tested += 1;
        let g = num_integer::Integer::extended_gcd(&p, &qq);
        let (s_, r) = (g.x * g.gcd, -g.y * g.gcd);
        let by = [[-qq, -s_], [p, r]];
        let t = twist_matrix(s(p, qq));
        check(conj([[1, 2], [0, 1]], by) == t.matrix(), || {
            format!("conjugation at {p}/{qq}")
        })?;
    }
    Ok(())
}

fn affine_equations() -> Outcome {
    let pres = NetMapPresentation::main_example();
    let shear = AffineMap::new([[1, 0], [5, 1]], IntVec2::ZERO);
    let flip = AffineMap::new([[-1, 0], [1, 1]], IntVec2::ZERO);
    let err = |e: netmap::symmetry::SymmetryError| e.to_string();
    check(
        sigma_delta2(&shear.linear).to_string() == "z/(5z+1)",
        || "shear delta2".into(),
    )?;
    let (_, m) = sigma_delta1(&pres, &shear).map_err(err)?;
    check(m == [[1, 0], [2, 1]], || {
        format!("shear lambda1 matrix {m:?}")
    })?;
    check(
        sigma_delta2(&flip.linear).to_string() == "z̄/(z̄-1)",
        || "flip delta2".into(),
    )?;
    let (m1, _) = sigma_delta1(&pres, &flip).map_err(err)?;
    check(m1.to_string() == "-z̄", || format!("flip delta1 {m1}"))?;
    affine_equation(&pres, &shear).map_err(err)?;
    let violations = consistency_suite(&pres, &[shear, flip], 30).map_err(err)?;
    check(violations.is_empty(), || {
        format!("{} violations", violations.len())
    })
}

fn e(a: i64, b: i64) -> GroupElem {
    GroupElem::new(a, b)
}

fn nonseparating_suite() -> Outcome {
    let err = |e: netmap::nonsep::NonsepError| e.to_string();
    // Degree-two example.
    let a = FinAbGroup::new(4, 2).map_err(err)?;
    let h = SymmetricFour::new(&a, [e(0, 0), e(1, 0), e(2, 0), e(1, 1)]).map_err(err)?;
    for p in cyclic_pairs(&a) {
        let c = coset_numbers_group(&a, &h, &p);
        if p.subgroup == a.cyclic_subgroup(e(1, 0)) {
            check(c == [0, 0, 0, 1], || format!("<(1,0)>: {c:?}"))?;
        }
        if p.subgroup == a.cyclic_subgroup(e(0, 1)) {
            check(c == [0, 1, 1, 2], || format!("<(0,1)>: {c:?}"))?;
        }
    }
    check(is_nonseparating(&a, &h), || "degree-two H separates".into())?;
    // Degree-nine example.
    let a6 = FinAbGroup::new(6, 6).map_err(err)?;
    let threes: Vec<GroupElem> = a6
        .inversion_classes()
        .into_iter()
        .filter(|&g| a6.order_of(g) == 3)
        .collect();
    let h9 = SymmetricFour::new(&a6, [threes[0], threes[1], threes[2], threes[3]]).map_err(err)?;
    for p in cyclic_pairs(&a6) {
        let c = coset_numbers_group(&a6, &h9, &p);
        check(c == [0, 2, 2, 2], || format!("{p}: {c:?}"))?;
    }
    check(is_nonseparating(&a6, &h9), || {
        "degree-nine H separates".into()
    })?;
    // Translate lemma, exhaustively over small groups.
    for (m, n) in [(2, 2), (4, 2), (2, 6), (4, 4), (8, 2), (6, 6)] {
        let g = FinAbGroup::new(m, n).map_err(err)?;
        let checker = NonsepChecker::new(g);
        let involutions: Vec<GroupElem> = g
            .elements()
            .into_iter()
            .filter(|&x| g.mul(2, x) == e(0, 0))
            .collect();
        for h in search_nonseparating(&g, DEFAULT_SEARCH_BUDGET).map_err(err)? {
            for &t in &involutions {
                let moved = translate_by_involution(&g, &h, t).map_err(err)?;
                check(checker.is_nonseparating(&moved), || {
                    format!("{h} + {t} in {g}")
                })?;
            }
        }
    }
    // Subgroup lemma: Z/m + Z/n inside Z/km + Z/ln via (x, y) -> (kx, ly).
    for (m, n) in [(4, 2), (2, 4), (4, 4), (6, 6)] {
        let sub = FinAbGroup::new(m, n).map_err(err)?;
        let found = search_nonseparating(&sub, DEFAULT_SEARCH_BUDGET).map_err(err)?;
        for (k, l) in [(1, 2), (2, 1), (2, 2), (1, 3)] {
            let Ok(big) = FinAbGroup::new(k * m, l * n) else {
                continue;
            };
            if big.order() > 72 {
                continue;
            }
            let checker = NonsepChecker::new(big);
            for h in &found {
                let image = SymmetricFour::new(&big, h.reps().map(|x| big.elem(k * x.a, l * x.b)))
                    .map_err(err)?;
                check(checker.is_nonseparating(&image), || {
                    format!("{image} in {big}")
                })?;
            }
        }
    }
    // Nonexistence for odd squarefree d.
    for d in [3, 5, 7, 15] {
        let g = FinAbGroup::new(2, 2 * d).map_err(err)?;
        check(
            verify_nonexistence(&g, DEFAULT_SEARCH_BUDGET).map_err(err)?,
            || format!("d = {d}"),
        )?;
    }
    let realizable = degree2_refutation()
        .iter()
        .filter(|r| r.realizable())
        .count();
    check(realizable == 0, || {
        format!("{realizable} realizable degree-2 subsets")
    })?;
    check(
        constant_teich_check(&NetMapPresentation::double_example()),
        || "double example".into(),
    )?;
    check(
        !constant_teich_check(&NetMapPresentation::main_example()),
        || "main example".into(),
    )
}

fn horoball_equivariance() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x6011);
    for _ in 0..100 {
        let re = q(rng.gen_range(-50..=50), rng.gen_range(1..=20));
        let im = q(rng.gen_range(1..=50), rng.gen_range(1..=20));
        let z = GaussQ::new(re, im);
        let (p, qq) = loop {
            let (p, qq) = (rng.gen_range(-30i64..=30), rng.gen_range(0i64..=30));
            if num_integer::gcd(p, qq) == 1 {
                break (p, qq);
            }
        };
        let base = horoball_value(z, s(p, qq));
        check(horoball_value(z + Q::one(), s(p + qq, qq)) == base, || {
            format!("translation at {z}")
        })?;
        check(horoball_value(-z.conj(), s(-p, qq)) == base, || {
            format!("reflection at {z}")
        })?;
        check(horoball_value(-z.inv(), s(-qq, p)) == base, || {
            format!("inversion at {z}")
        })?;
    }
    let pres = NetMapPresentation::main_example();
    for (x, ..) in halfspace_rows() {
        let h = halfspace_for(&pres, x)
            .map_err(|e| e.to_string())?
            .expect("row has a half-space");
        let (p, qq) = x.parts().expect("slope");
        let (pp, qp) = h.source.image.parts().expect("slope");
        if p == 0 || pp == 0 {
            continue;
        }
        let rhs = (h.center + q(qq as i128, p as i128)) * (h.center + q(qp as i128, pp as i128));
        check(h.radius_squared() == Some(rhs), || {
            format!("R^2 identity at {x}")
        })?;
    }
    Ok(())
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() -> ExitCode {
    let secs = |n| Some(Duration::from_secs(n));
    let criteria: [Criterion; 11] = [
        (
            "pullback table for the eight residue classes",
            secs(1),
            pullback_table,
        ),
        ("segment table for the eight rows", secs(1), segment_table),
        (
            "sigma equals the closed form on |p|,|q| <= 50",
            secs(10),
            closed_form_equivalence,
        ),
        (
            "worked sigma values and half-space images",
            None,
            worked_values,
        ),
        (
            "functional identities on |p|,|q| <= 50",
            None,
            functional_identities,
        ),
        (
            "half-space centres, radii and kinds",
            secs(1),
            halfspace_table,
        ),
        (
            "verified no-obstruction certificates (8 and 6 slopes)",
            secs(5),
            no_obstruction_certificate,
        ),
        (
            "Dehn-twist equation and 1000 conjugations",
            None,
            dehn_twist_equation,
        ),
        (
            "affine equations and consistency to height 30",
            None,
            affine_equations,
        ),
        ("nonseparating subsets suite", secs(30), nonseparating_suite),
        (
            "horoball equivariance and radius identity",
            None,
            horoball_equivariance,
        ),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, limit {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
