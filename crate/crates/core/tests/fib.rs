use std::collections::HashSet;
use std::sync::Arc;

use fibcat::fib::{
    cartesian_lift, cartesian_lifts, is_cart_marked, is_discrete_fibration, is_equivalence,
    is_final, is_grothendieck_fibration, is_isofibration, is_marked_trivial_fibration,
    is_p_cartesian, is_trivial_fibration, p_lifts, vertical_comparisons, Witness,
};
use fibcat::groth::elements;
use fibcat::random::{self, Caps};
use fibcat::shapes;
use fibcat::{coproduct, product, FinCat, Functor, Marking, MorId, ObjId, Slice};
use proptest::prelude::*;

fn arc(c: FinCat) -> Arc<FinCat> {
    Arc::new(c)
}

fn morphisms_between(c: &FinCat, a: ObjId, b: ObjId) -> Vec<MorId> {
    c.morphisms()
        .filter(|&m| c.src(m) == a && c.tgt(m) == b)
        .collect()
}

/// Lift counts straight from the definition, scanning all morphisms.
fn discrete_by_definition(p: &Functor) -> bool {
    let (t, b) = (p.dom(), p.cod());
    t.objects().all(|a| {
        b.morphisms().filter(|&f| b.tgt(f) == p.obj(a)).all(|f| {
            t.morphisms()
                .filter(|&g| t.tgt(g) == a && p.mor(g) == f)
                .count()
                == 1
        })
    })
}

/// `g: a' -> a` is cartesian iff for every `b`, `h' ↦ (g h', P h')` is a
/// bijection from `Hom(b, a')` onto the pairs `(h, f)` with `P h = P g ∘ f`.
fn cartesian_by_definition(p: &Functor, g: MorId) -> bool {
    let (t, base) = (p.dom(), p.cod());
    let (a2, a) = (t.src(g), t.tgt(g));
    t.objects().all(|b| {
        let mut pairs = HashSet::new();
        for h in morphisms_between(t, b, a) {
            for f in morphisms_between(base, p.obj(b), p.obj(a2)) {
                if base.compose(p.mor(g), f) == p.mor(h) {
                    pairs.insert((h, f));
                }
            }
        }
        let images: Vec<(MorId, MorId)> = morphisms_between(t, b, a2)
            .into_iter()
            .map(|h2| (t.compose(g, h2), p.mor(h2)))
            .collect();
        let distinct: HashSet<_> = images.iter().copied().collect();
        distinct.len() == images.len() && distinct == pairs
    })
}

fn isofibration_by_definition(f: &Functor) -> bool {
    let (d, c) = (f.dom(), f.cod());
    d.objects().all(|a| {
        c.morphisms()
            .filter(|&g| c.tgt(g) == f.obj(a) && c.is_iso(g))
            .all(|g| {
                d.morphisms()
                    .any(|m| d.tgt(m) == a && d.is_iso(m) && f.mor(m) == g)
            })
    })
}

fn equivalence_by_definition(f: &Functor) -> bool {
    let (d, c) = (f.dom(), f.cod());
    let full_faithful = d.objects().all(|a| {
        d.objects().all(|b| {
            let src = morphisms_between(d, a, b);
            let tgt = morphisms_between(c, f.obj(a), f.obj(b));
            let hit: HashSet<MorId> = src.iter().map(|&m| f.mor(m)).collect();
            hit.len() == src.len() && hit.len() == tgt.len()
        })
    });
    let ess_surj = c.objects().all(|x| {
        d.objects().any(|a| {
            morphisms_between(c, f.obj(a), x)
                .into_iter()
                .any(|m| c.is_iso(m))
        })
    });
    full_faithful && ess_surj
}

fn slice(seed: u64, stream: u64) -> Slice {
    let mut rng = random::case_rng(seed, stream);
    random::slice(&mut rng, Caps::default(), 20_000)
}

#[test]
fn lifts_against_a_collapse() {
    let i = arc(shapes::ordinal(1));
    let p = fibcat::fib::to_point(&i);
    let pt = p.cod().clone();
    let lifts = p_lifts(&p, pt.id(ObjId(0)), ObjId(1));
    assert_eq!(lifts.len(), 2);
    assert_eq!(
        is_discrete_fibration(&p),
        Err(Witness::LiftCount {
            object: "1".into(),
            morphism: pt.mor_label(pt.id(ObjId(0))).into(),
            lifts: 2
        })
    );
}

#[test]
fn two_points_over_the_interval() {
    let two = arc(shapes::discrete(2));
    let i = arc(shapes::ordinal(1));
    let p = Functor::from_objects(two, i.clone(), vec![ObjId(0), ObjId(1)]).unwrap();
    let u = i.mor_by_label("0->1").unwrap();
    assert!(p_lifts(&p, u, ObjId(1)).is_empty());
    assert_eq!(cartesian_lift(&p, u, ObjId(1)), None);
    assert!(is_grothendieck_fibration(&p).is_err());
}

#[test]
fn product_projections() {
    let i = arc(shapes::ordinal(1));
    let iso = arc(shapes::walking_iso());
    let (ci, pr, second) = product(&i, &iso);
    for g in ci.morphisms() {
        assert!(is_p_cartesian(&pr, g));
        assert!(iso.is_iso(second.mor(g)));
    }
    let (ci, pr, second) = product(&i, &i);
    for g in ci.morphisms() {
        assert_eq!(is_p_cartesian(&pr, g), i.is_iso(second.mor(g)));
    }
    let (sq, pr, _) = product(&i, &i);
    assert!(is_grothendieck_fibration(&pr).is_ok());
    for g in sq.morphisms() {
        assert_eq!(is_p_cartesian(&pr, g), cartesian_by_definition(&pr, g));
    }
}

#[test]
fn isofibrations_and_equivalences() {
    let pt = arc(shapes::point());
    let iso = arc(shapes::walking_iso());
    let into_iso = Functor::from_objects(pt.clone(), iso.clone(), vec![ObjId(0)]).unwrap();
    assert!(is_isofibration(&into_iso).is_err());
    assert!(is_isofibration(&Functor::identity(iso.clone())).is_ok());

    let collapse = fibcat::fib::to_point(&iso);
    assert!(is_equivalence(&collapse).is_ok());
    assert!(is_trivial_fibration(&collapse).is_ok());

    let two = arc(shapes::discrete(2));
    assert!(is_equivalence(&fibcat::fib::to_point(&two)).is_err());

    let i = arc(shapes::ordinal(1));
    let at_zero = Functor::from_objects(pt, i, vec![ObjId(0)]).unwrap();
    assert!(is_trivial_fibration(&at_zero).is_err());
}

#[test]
fn marked_trivial_fibrations_over_a_point() {
    let iso = arc(shapes::walking_iso());
    let collapse = fibcat::fib::to_point(&iso);
    let sharp = Marking::maximal(collapse.cod().clone());
    assert!(is_marked_trivial_fibration(&collapse, &Marking::natural(iso.clone()), &sharp).is_ok());
    let flat = Marking::minimal(iso);
    assert!(matches!(
        is_marked_trivial_fibration(&collapse, &flat, &sharp),
        Err(Witness::MarkingNotReflected { .. })
    ));
}

#[test]
fn cart_marking_must_be_exact() {
    let i = arc(shapes::ordinal(1));
    let c = Functor::identity(i.clone());
    assert!(is_cart_marked(&c, &Marking::maximal(i.clone())).is_ok());
    assert!(is_cart_marked(&c, &Marking::minimal(i.clone())).is_err());
    // The fiber [1] over a point is not a groupoid.
    let p = fibcat::fib::to_point(&i);
    assert!(is_cart_marked(&p, &Marking::maximal(i)).is_err());
}

#[test]
fn finality_of_endpoint_inclusions() {
    let pt = arc(shapes::point());
    let i = arc(shapes::ordinal(1));
    let at_one = Functor::from_objects(pt.clone(), i.clone(), vec![ObjId(1)]).unwrap();
    let at_zero = Functor::from_objects(pt, i.clone(), vec![ObjId(0)]).unwrap();
    assert!(is_final(&at_one).is_ok());
    assert!(is_final(&at_zero).is_err());
    assert!(is_final(&Functor::identity(i)).is_ok());
}

#[test]
fn empty_categories_are_vacuous() {
    let e = arc(shapes::empty());
    let id = Functor::identity(e.clone());
    assert!(is_discrete_fibration(&id).is_ok());
    assert!(is_grothendieck_fibration(&id).is_ok());
    let (_, inc, _) = coproduct(&e, &arc(shapes::ordinal(1)));
    assert!(is_discrete_fibration(&Functor::from_empty(e, inc.cod().clone())).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn predicates_agree_with_their_definitions(seed in any::<u64>()) {
        let p = slice(seed, 0);
        let p = p.proj();
        prop_assert_eq!(is_discrete_fibration(p).is_ok(), discrete_by_definition(p));
        for g in p.dom().morphisms() {
            prop_assert_eq!(is_p_cartesian(p, g), cartesian_by_definition(p, g));
        }
        prop_assert_eq!(is_isofibration(p).is_ok(), isofibration_by_definition(p));
        prop_assert_eq!(is_equivalence(p).is_ok(), equivalence_by_definition(p));
    }

    #[test]
    fn cartesian_morphisms_compose(seed in any::<u64>()) {
        let s = slice(seed, 1);
        let (p, t) = (s.proj(), s.total());
        for g in t.morphisms().filter(|&g| is_p_cartesian(p, g)) {
            for &h in t.out_of(t.tgt(g)) {
                if is_p_cartesian(p, h) {
                    prop_assert!(is_p_cartesian(p, t.compose(h, g)));
                }
            }
        }
    }

    #[test]
    fn cartesian_over_iso_means_iso(seed in any::<u64>()) {
        let s = slice(seed, 2);
        let (p, t) = (s.proj(), s.total());
        for g in t.morphisms() {
            let lhs = is_p_cartesian(p, g) && p.cod().is_iso(p.mor(g));
            prop_assert_eq!(lhs, t.is_iso(g));
        }
    }

    #[test]
    fn cartesian_lifts_are_unique_up_to_unique_vertical_iso(seed in any::<u64>()) {
        let s = slice(seed, 3);
        let (p, t) = (s.proj(), s.total());
        for a in t.objects() {
            for &f in p.cod().incoming(p.obj(a)) {
                let lifts = cartesian_lifts(p, f, a);
                for &g1 in &lifts {
                    for &g2 in &lifts {
                        let h = vertical_comparisons(p, g1, g2);
                        prop_assert_eq!(h.len(), 1);
                        prop_assert!(t.is_iso(h[0]));
                    }
                }
            }
        }
    }

    #[test]
    fn discrete_fibrations_cancel(seed in any::<u64>()) {
        // Q is the projection of a category of elements; F is a random
        // functor into its total category.
        let mut rng = random::case_rng(seed, 4);
        let base = random::category(&mut rng, Caps::default().base());
        let el = elements(&random::presheaf_set(&mut rng, &base, 6));
        let q = el.proj();
        let f = random::slice_over(&mut rng, q.dom(), Caps { max_objects: 5, max_morphisms: 15 }, 20_000);
        let qf = q.after(f.proj());
        prop_assert_eq!(is_discrete_fibration(f.proj()).is_ok(), is_discrete_fibration(&qf).is_ok());
    }

    #[test]
    fn trivial_fibrations_preserve_and_reflect_cartesian_morphisms(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 5);
        let q = random::slice(&mut rng, Caps { max_objects: 4, max_morphisms: 12 }, 20_000);
        let f = random::inflate(&mut rng, q.total(), 25);
        prop_assert!(is_trivial_fibration(&f).is_ok());
        let p = q.proj().after(&f);
        for g in f.dom().morphisms() {
            prop_assert_eq!(is_p_cartesian(&p, g), is_p_cartesian(q.proj(), f.mor(g)));
        }
    }

    #[test]
    fn discrete_fibrations_are_grothendieck_with_all_cartesian(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 6);
        let base = random::category(&mut rng, Caps::default().base());
        let el = elements(&random::presheaf_set(&mut rng, &base, 6));
        let p = el.proj();
        prop_assert!(is_discrete_fibration(p).is_ok());
        prop_assert!(is_grothendieck_fibration(p).is_ok());
        for g in p.dom().morphisms() {
            prop_assert!(is_p_cartesian(p, g));
        }
    }
}
