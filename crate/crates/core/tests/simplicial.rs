mod common;

use std::sync::Arc;

use fibcat::model::Kind;
use fibcat::present::Budget;
use fibcat::random::{self, Caps};
use fibcat::shapes;
use fibcat::simplicial::{
    categorify, categorify_marked, check_transpose, counit, delta, generator_images, horn, nerve,
    ImageClass, MarkedTruncSSet, SRef, MAX_DIM,
};
use fibcat::{are_isomorphic, FinCat, Marking, MorId, DEFAULT_SEARCH_NODES};
use proptest::prelude::*;

/// Strings of `k` composable non-identity morphisms.
fn chains(c: &FinCat, k: usize) -> usize {
    let non_id: Vec<MorId> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    if k == 0 {
        return c.num_objects();
    }
    let mut ends: Vec<MorId> = non_id.clone();
    for _ in 1..k {
        ends = ends
            .iter()
            .flat_map(|&f| {
                non_id
                    .iter()
                    .copied()
                    .filter(move |&g| c.src(g) == c.tgt(f))
            })
            .collect();
    }
    ends.len()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn nerves_of_ordinals_are_standard_simplices() {
    for n in 0..=3 {
        let d = delta(n);
        for k in 0..=MAX_DIM {
            assert_eq!(d.sset.count(k), binomial(n + 1, k + 1), "n={n} k={k}");
        }
    }
    let d2 = delta(2);
    let top = SRef::nondegenerate(2, 0);
    assert_eq!(d2.sset.vertices(&top), vec![0, 1, 2]);
}

#[test]
fn horns_miss_exactly_the_top_simplex_and_one_face() {
    for n in 1..=3 {
        for t in 0..=n {
            let (h, inc) = horn(n, t);
            assert!(inc.is_injective());
            let d = delta(n);
            assert_eq!(h.count(n), 0);
            assert_eq!(h.count(n - 1), d.sset.count(n - 1) - 1);
        }
    }
}

#[test]
fn categorified_horns() {
    // The inner horn recovers [2]; the outer one is free on two arrows.
    let (inner, _) = horn(2, 1);
    let c = categorify(&inner, Budget::default()).unwrap();
    assert!(are_isomorphic(&c.cat, &Arc::new(shapes::ordinal(2))).unwrap());
    let (outer, _) = horn(2, 0);
    let c = categorify(&outer, Budget::default()).unwrap();
    assert_eq!((c.cat.num_objects(), c.cat.num_morphisms()), (3, 5));
}

#[test]
fn marked_edge_categorifies_to_marked_morphism() {
    let d = delta(1);
    let x = MarkedTruncSSet::sharp(d.sset.clone());
    let (c, m) = categorify_marked(&x, Budget::default()).unwrap();
    assert_eq!(c.cat.num_morphisms(), 3);
    assert!(m.is_maximal());
}

#[test]
fn generator_images_match_golden() {
    let base = Arc::new(shapes::ordinal(1));
    for (kind, name) in [
        (Kind::Discrete, "generator_images_discrete.json"),
        (Kind::Marked, "generator_images_marked.json"),
    ] {
        let g = generator_images(kind, &base, Budget::default(), DEFAULT_SEARCH_NODES).unwrap();
        assert!(g.rows.iter().all(|r| r.class != ImageClass::Unclassified));
        common::golden(name, &g).unwrap();
    }
}

#[test]
fn generator_images_agree_across_bases() {
    let summary = |n: usize, kind| {
        let base = Arc::new(shapes::ordinal(n));
        generator_images(kind, &base, Budget::default(), DEFAULT_SEARCH_NODES)
            .unwrap()
            .summary
    };
    for kind in [Kind::Discrete, Kind::Marked] {
        assert_eq!(summary(0, kind), summary(1, kind));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nerve_counts_composable_strings(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 0);
        let c = random::category(&mut rng, Caps { max_objects: 4, max_morphisms: 10 });
        let n = nerve(&c);
        for k in 0..=MAX_DIM {
            prop_assert_eq!(n.sset.count(k), chains(&c, k));
        }
    }

    #[test]
    fn nerve_then_categorify_is_identity(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 1);
        let c = random::category(&mut rng, Caps { max_objects: 4, max_morphisms: 10 });
        let n = nerve(&c);
        let cn = categorify(&n.sset, Budget::default()).unwrap();
        prop_assert!(counit(&n, &cn).is_isomorphism());
    }

    #[test]
    fn simplicial_identities_hold_in_nerves(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 2);
        let c = random::category(&mut rng, Caps { max_objects: 4, max_morphisms: 10 });
        let s = &nerve(&c).sset;
        for k in 2..=MAX_DIM {
            for x in 0..s.count(k) as u32 {
                let r = SRef::nondegenerate(k, x);
                for j in 1..=k {
                    for i in 0..j {
                        prop_assert_eq!(
                            s.face(&s.face(&r, j), i),
                            s.face(&s.face(&r, i), j - 1)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_is_a_bijection(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 3);
        let c = random::category(&mut rng, Caps { max_objects: 3, max_morphisms: 8 });
        let e = random::marking(&mut rng, &c);
        let n = (seed % 3) as usize + 1;
        let t = (seed / 3 % (n as u64 + 1)) as usize;
        let (h, _) = horn(n, t);
        let marked: Vec<u32> = (0..h.count(1) as u32).filter(|x| x % 2 == 0).collect();
        let x = MarkedTruncSSet::new(h, &marked).unwrap();
        let r = check_transpose(&x, &c, &e, Budget::default(), 100_000).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
        let flat = MarkedTruncSSet::flat(delta(n).sset.clone());
        let r = check_transpose(&flat, &c, &Marking::minimal(c.clone()), Budget::default(), 100_000)
            .unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }
}
