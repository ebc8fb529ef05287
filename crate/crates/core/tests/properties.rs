//! Property tests: parser round-trips, quotient laws, closure properties
//! of {0,1}-freeness, and the exhaustive size-4 power-semiring dichotomy.

use cep_core::circuit::Circuit;
use cep_core::classify::is_zero_one_free;
use cep_core::coeff::CoeffSemiring;
use cep_core::enumerate::all_semigroups;
use cep_core::fixtures;
use cep_core::gen;
use cep_core::powerset::{build_power, power_verdict, PowerVerdict};
use cep_core::semiring::FiniteSemiring;
use cep_core::Elem;
use proptest::prelude::*;

proptest! {
    /// B(k,d) carries the semiring laws over class arithmetic.
    #[test]
    fn coefficient_semiring_laws(k in 0usize..6, d in 1usize..7, xs in prop::collection::vec(0usize..60, 3)) {
        let b = CoeffSemiring::new(k, d);
        let (x, y, z) = (b.class_of(xs[0]), b.class_of(xs[1]), b.class_of(xs[2]));
        prop_assert_eq!(b.add(x, y), b.add(y, x));
        prop_assert_eq!(b.add(b.add(x, y), z), b.add(x, b.add(y, z)));
        prop_assert_eq!(b.mul(b.mul(x, y), z), b.mul(x, b.mul(y, z)));
        prop_assert_eq!(b.mul(x, b.add(y, z)), b.add(b.mul(x, y), b.mul(x, z)));
        prop_assert_eq!(b.mul(b.add(y, z), x), b.add(b.mul(y, x), b.mul(z, x)));
    }

    /// Circuit text round-trips through parse ∘ serialize.
    #[test]
    fn circuit_roundtrip(seed in 0u64..500, gates in 1usize..60) {
        let sr = fixtures::maxsat4();
        let c = gen::random_circuit(&sr, gates, seed);
        let text = c.serialize(&sr);
        let back = Circuit::parse(&text, &sr).unwrap();
        prop_assert_eq!(back.serialize(&sr), text);
        prop_assert_eq!(
            back.eval_naive(&sr).output,
            c.eval_naive(&sr).output
        );
    }

    /// Random generated subsemirings of {0,1}-free fixtures stay free.
    #[test]
    fn subsemirings_of_free_fixtures_stay_free(seed in 0u64..200) {
        use rand::Rng;
        let frees = [fixtures::maxsat4(), fixtures::sink2sq(), fixtures::power_of_cyclic(3)];
        let mut rng = gen::rng(seed);
        let sr = &frees[rng.gen_range(0..frees.len())];
        let count = rng.gen_range(1..=sr.size());
        let seeds: Vec<Elem> = (0..count).map(|_| Elem(rng.gen_range(0..sr.size()))).collect();
        let closed = sr.generated_subsemiring(&seeds).unwrap();
        let sub = sr.subsemiring(&closed, "sub").unwrap();
        prop_assert!(is_zero_one_free(&sub));
    }

    /// Padding a productive grammar yields a grammar deriving every short
    /// word (its language is all of Σ*).
    #[test]
    fn padding_gadget_yields_full_language(seed in 0u64..60) {
        let g = gen::random_grammar(&["a", "b"], 2 + (seed as usize) % 3, 3, seed);
        let padded = g.padding_gadget();
        let words = padded.words_up_to(3);
        let n = padded.terminals.len();
        let expect: usize = (0..=3usize).map(|l| n.pow(l as u32)).sum();
        prop_assert_eq!(words[padded.start].len(), expect);
    }
}

proptest! {
    /// Generated subsemirings are closed and minimal: every member is
    /// forced from the seed by the closure rules.
    #[test]
    fn generated_subsemiring_closed_and_minimal(seed in 0u64..120) {
        use rand::Rng;
        let srs = [fixtures::ring_z(6), fixtures::maxsat4(), fixtures::power_of_cyclic(3)];
        let mut rng = gen::rng(seed);
        let sr = &srs[rng.gen_range(0..srs.len())];
        let k = rng.gen_range(1..=2usize);
        let seeds: Vec<Elem> = (0..k).map(|_| Elem(rng.gen_range(0..sr.size()))).collect();
        let closed = sr.generated_subsemiring(&seeds).unwrap();
        // closure
        for &x in &closed {
            for &y in &closed {
                prop_assert!(closed.contains(&sr.add(x, y)));
                prop_assert!(closed.contains(&sr.mul(x, y)));
            }
        }
        // minimality: any closed superset of the seed contains everything
        for &x in &closed {
            let without: Vec<Elem> = closed.iter().copied().filter(|&y| y != x).collect();
            if seeds.contains(&x) {
                continue;
            }
            // removing a non-seed element must break closure
            let still_closed = without.iter().all(|&a| {
                without.iter().all(|&b| {
                    without.contains(&sr.add(a, b)) && without.contains(&sr.mul(a, b))
                })
            }) && seeds.iter().all(|s| without.contains(s));
            prop_assert!(!still_closed, "removable element in a least closure");
        }
    }
}

/// The core value types are shareable across threads (all operations are
/// pure functions over immutable tables).
#[test]
fn core_types_are_send_and_sync() {
    fn check<T: Send + Sync>() {}
    check::<FiniteSemiring>();
    check::<cep_core::FiniteSemigroup>();
    check::<Circuit>();
    check::<cep_core::reduction::TypeAssignment>();
    check::<cep_core::rank::RankStructure>();
    check::<cep_core::lang::RecognizedLanguage>();
}

/// Direct products of {0,1}-free fixtures are {0,1}-free.
#[test]
fn products_of_free_fixtures_stay_free() {
    let frees = [
        fixtures::unit1(),
        fixtures::sink2(),
        fixtures::maxsat4(),
        fixtures::power_of_cyclic(2),
    ];
    for a in &frees {
        for b in &frees {
            let p = fixtures::direct_product("prod", a, b);
            assert!(is_zero_one_free(&p), "{} × {}", a.name, b.name);
        }
    }
}

/// Semiring table files round-trip for every named fixture.
#[test]
fn semiring_files_roundtrip() {
    for sr in [
        fixtures::bool2(),
        fixtures::ring_z(6),
        fixtures::sink2(),
        fixtures::sink2sq(),
        fixtures::maxsat4(),
        fixtures::power_of_cyclic(3),
    ] {
        let text = sr.serialize();
        let back = FiniteSemiring::parse(&text).unwrap();
        assert_eq!(back.serialize(), text);
    }
}

/// Subset cardinality is a rank function for P(S) exactly when S is a
/// group: groups translate injectively, and a non-group is
/// non-cancellative, which shrinks a product set.
#[test]
fn cardinality_rank_iff_group_exhaustive() {
    use cep_core::powerset::elem_to_mask;
    use cep_core::rank::check_rank_axioms;
    for n in 1..=3usize {
        for sg in all_semigroups(n) {
            let is_group = sg.identity().is_some_and(|e| {
                sg.elems()
                    .all(|x| sg.elems().any(|y| sg.op(x, y) == e && sg.op(y, x) == e))
            });
            let p = build_power(&sg, 8).unwrap();
            let card: Vec<usize> = p
                .elems()
                .map(|x| elem_to_mask(x).count_ones() as usize)
                .collect();
            let passes = check_rank_axioms(&p, &card).is_none();
            assert_eq!(passes, is_group, "{}", sg.name);
        }
    }
}

/// The power-semiring dichotomy agrees with the direct semigroup criteria
/// on all 188 semigroups of size 4 (and everything below).
#[test]
fn power_dichotomy_exhaustive_size_4() {
    let mut total = 0usize;
    let mut det = 0usize;
    for n in 1..=4usize {
        for sg in all_semigroups(n) {
            let report = power_verdict(&sg, 8);
            assert!(report.routes_agree(), "{}", sg.name);
            // classify(P(S)) is P-complete iff S is not a solvable local group
            let p = build_power(&sg, 8).unwrap();
            let classify_p_complete =
                cep_core::classify::classify(&p).verdict == cep_core::classify::Verdict::PComplete;
            assert_eq!(
                classify_p_complete,
                !(report.local_group && report.solvable),
                "{}",
                sg.name
            );
            if report.direct == PowerVerdict::Det {
                det += 1;
            }
            total += 1;
        }
    }
    assert_eq!(total, 1 + 5 + 24 + 188);
    // sanity: both classes occur
    assert!(det > 0 && det < total);
}
