mod common;

use std::sync::Arc;

use fibcat::fib::{
    is_cart_marked_fibration, is_discrete_fibration, is_equivalence, is_isofibration,
    is_marked_trivial_fibration, is_trivial_fibration, Witness,
};
use fibcat::groth::path_object;
use fibcat::model::{
    anodyne_generators, find_lift, is_naive_fibrant, is_naive_fibration, is_weak_equivalence,
    pushout_of_trivial_fibration, second_leg_check, verify_path_object, Kind, MarkedMap, Shape,
};
use fibcat::present::{marked_pushout, Budget};
use fibcat::random::{self, Caps, CaseRng};
use fibcat::shapes;
use fibcat::{FinCat, Functor, MarkedSlice, Marking, MorId, ObjId, Slice, DEFAULT_SEARCH_NODES};
use proptest::prelude::*;
use serde_json::json;

const NODES: u64 = DEFAULT_SEARCH_NODES;

fn ord(n: usize) -> Arc<FinCat> {
    Arc::new(shapes::ordinal(n))
}

/// `0` and `0'` isomorphic, both below `1`.
fn doubled_source() -> Arc<FinCat> {
    let labels = vec!["0".to_string(), "0'".to_string(), "1".to_string()];
    Arc::new(shapes::poset(&labels, |i, j| {
        i == j || j == 2 || (i < 2 && j < 2)
    }))
}

fn preimage(f: &Functor, m: &Marking) -> Marking {
    let a = f.dom();
    Marking::new(
        a.clone(),
        a.morphisms().map(|x| m.is_marked(f.mor(x))).collect(),
    )
    .unwrap()
}

/// A map of fibrant marked slices over a random base: either the collapse
/// of an inflation or a random marking-preserving functor.
fn fibrant_map(rng: &mut CaseRng) -> Option<(MarkedSlice, MarkedSlice, Functor)> {
    let base = random::category(rng, Caps::default().base());
    let q = random::fibrant(rng, &base, Caps::default());
    if rand::Rng::gen_bool(rng, 0.5) {
        let f = random::inflate(rng, q.total(), 25);
        let p = MarkedSlice::new(q.proj().after(&f), preimage(&f, q.marking())).unwrap();
        Some((p, q, f))
    } else {
        let p = random::fibrant(rng, &base, Caps::default());
        let f = random::slice_map(rng, &p, &q, 20_000)?;
        Some((p, q, f))
    }
}

fn marked_map(p: &MarkedSlice, q: &MarkedSlice, f: &Functor) -> MarkedMap {
    MarkedMap {
        functor: f.clone(),
        src: p.marking().clone(),
        tgt: q.marking().clone(),
    }
}

#[test]
fn discrete_generator_counts() {
    assert_eq!(
        anodyne_generators(Kind::Discrete, &ord(0)).generators.len(),
        2
    );
    assert_eq!(
        anodyne_generators(Kind::Discrete, &ord(1)).generators.len(),
        6
    );
    let empty = Arc::new(shapes::empty());
    assert!(anodyne_generators(Kind::Discrete, &empty)
        .generators
        .is_empty());
    assert!(anodyne_generators(Kind::Marked, &empty)
        .generators
        .is_empty());
}

#[test]
fn marked_generators_over_a_point_instantiate_once_each() {
    let g = anodyne_generators(Kind::Marked, &ord(0));
    for &shape in Shape::all(Kind::Marked) {
        assert_eq!(g.count(shape), 1, "{}", shape.name());
    }
}

#[test]
fn generators_over_the_interval_match_golden() {
    let table: Vec<_> = [Kind::Discrete, Kind::Marked]
        .into_iter()
        .map(|kind| {
            let g = anodyne_generators(kind, &ord(1));
            let shapes: Vec<_> = Shape::all(kind)
                .iter()
                .map(|&s| {
                    let names: Vec<&str> = g
                        .generators
                        .iter()
                        .filter(|x| x.shape == s)
                        .map(|x| x.name.as_str())
                        .collect();
                    json!({ "shape": s.name(), "count": names.len(), "generators": names })
                })
                .collect();
            json!({ "kind": kind, "shapes": shapes })
        })
        .collect();
    common::golden("generators_interval.json", &table).unwrap();
}

#[test]
fn identity_square_has_the_identity_lift() {
    let i = MarkedMap::plain(Functor::identity(ord(1)));
    let l = find_lift(&i, &i, &i.functor, &i.functor, NODES)
        .unwrap()
        .unwrap();
    assert!(l.is_identity());
}

#[test]
fn discrete_fibrations_are_discrete_naive_fibrant() {
    let c = ord(1);
    let two = Arc::new(shapes::discrete(2));
    let p = Functor::from_objects(two, c.clone(), vec![ObjId(0), ObjId(1)]).unwrap();
    let p = MarkedSlice::minimal(Slice::new(p));
    assert!(is_discrete_fibration(p.proj()).is_err());
    assert!(is_naive_fibrant(Kind::Discrete, &p, NODES)
        .unwrap()
        .is_err());
    // The same points over [1] do not have marked endpoint lifts either.
    let w = is_naive_fibrant(Kind::Marked, &p, NODES)
        .unwrap()
        .unwrap_err();
    assert!(
        w.generator.starts_with("marked-endpoint"),
        "{}",
        w.generator
    );
    let id = MarkedSlice::minimal(Slice::identity(c));
    assert!(is_naive_fibrant(Kind::Discrete, &id, NODES)
        .unwrap()
        .is_ok());
}

#[test]
fn isofibration_failure_is_found_by_the_iso_marking_shape() {
    // The point into 𝕀♮ over [0]: both slices are fibrant, the map is not
    // an isofibration.
    let pt = Arc::new(shapes::point());
    let iso = Arc::new(shapes::walking_iso());
    let q = MarkedSlice::natural(Slice::new(Functor::to_terminal(iso.clone(), pt.clone())));
    let p = MarkedSlice::natural(Slice::identity(pt.clone()));
    let f = Functor::from_objects(pt, iso, vec![ObjId(0)]).unwrap();
    assert!(is_cart_marked_fibration(p.proj(), p.marking()).is_ok());
    assert!(is_cart_marked_fibration(q.proj(), q.marking()).is_ok());
    assert!(is_isofibration(&f).is_err());
    let w = is_naive_fibration(
        Kind::Marked,
        &marked_map(&p, &q, &f),
        p.proj(),
        q.proj(),
        NODES,
    )
    .unwrap()
    .unwrap_err();
    assert!(w.generator.starts_with("marked-endpoint") || w.generator.starts_with("iso-marking"));
}

#[test]
fn weak_equivalence_examples() {
    let iso = Arc::new(shapes::walking_iso());
    let pt = Arc::new(shapes::point());
    let p = MarkedSlice::natural(Slice::new(Functor::to_terminal(iso.clone(), pt.clone())));
    let q = MarkedSlice::maximal(Slice::identity(pt.clone()));
    let collapse = Functor::to_terminal(iso, pt);
    let r = is_weak_equivalence(
        Kind::Marked,
        &marked_map(&p, &q, &collapse),
        &p,
        &q,
        Budget::default(),
    )
    .unwrap();
    assert!(r.weak_equivalence);
    let id = Functor::identity(p.total().clone());
    let r = is_weak_equivalence(
        Kind::Discrete,
        &marked_map(&p, &p, &id),
        &p,
        &p,
        Budget::default(),
    )
    .unwrap();
    assert!(r.weak_equivalence);
}

#[test]
fn corrupted_path_object_fails_the_second_leg() {
    let iso = Arc::new(shapes::walking_iso());
    let pt = Arc::new(shapes::point());
    let p = MarkedSlice::natural(Slice::new(Functor::to_terminal(iso, pt)));
    let report = verify_path_object(&p, NODES).unwrap().unwrap();
    assert!(report.holds());
    let mut path = path_object(&p).unwrap();
    let total = path.path.total().clone();
    let victim = total
        .morphisms()
        .find(|&m| !total.is_identity(m) && path.path.is_marked(m))
        .unwrap();
    let dropped = path.path.marking().with_flag(victim, false);
    path.path = path.path.with_marking(dropped).unwrap();
    assert!(second_leg_check(&path, NODES).unwrap().is_err());
}

/// The collapse `f: A -> [1]` of the doubled source is a marked trivial
/// fibration (A carries the preimage of the minimal marking). Marking
/// `0 -> 1` in A gives a marked cofibration `A -> A'` (the identity on
/// underlying categories). In the pushout, `0 -> 1` of `[1]` becomes
/// marked, but `0' -> 1` stays unmarked in `A'` while lying over it, so
/// `A' -> [1]` does not reflect the marking.
#[test]
fn pushout_stability_fails_for_markings_not_closed_under_composition() {
    let a = doubled_source();
    let b = ord(1);
    let f =
        Functor::from_objects(a.clone(), b.clone(), vec![ObjId(0), ObjId(0), ObjId(1)]).unwrap();
    let mb = Marking::minimal(b.clone());
    let ma = preimage(&f, &mb);
    assert!(is_marked_trivial_fibration(&f, &ma, &mb).is_ok());

    let e: MorId = a.mor_by_label("0->1").unwrap();
    let ma2 = ma.with_flag(e, true);
    assert!(!ma2.is_closed_under_composition());
    let g = MarkedMap {
        functor: Functor::identity(a.clone()),
        src: ma.clone(),
        tgt: ma2.clone(),
    };
    let fm = MarkedMap {
        functor: f.clone(),
        src: ma,
        tgt: mb.clone(),
    };
    let verdict = pushout_of_trivial_fibration(&fm, &g, Budget::default()).unwrap();
    assert_eq!(
        verdict,
        Err(Witness::MarkingNotReflected {
            morphism: "0'->1".into()
        })
    );

    // The underlying functor is still a trivial fibration, and the failure
    // is a genuine lifting failure against [1]♭ -> [1]♯.
    let po = marked_pushout(&f, &mb, &g.functor, &ma2, Budget::default()).unwrap();
    assert!(is_trivial_fibration(&po.right).is_ok());
    let flat = MarkedMap {
        functor: Functor::identity(b.clone()),
        src: Marking::minimal(b.clone()),
        tgt: Marking::maximal(b.clone()),
    };
    let right = MarkedMap {
        functor: po.right.clone(),
        src: ma2.clone(),
        tgt: po.marking.clone().unwrap(),
    };
    let top = Functor::from_objects(b.clone(), a.clone(), vec![ObjId(1), ObjId(2)]).unwrap();
    let bottom = po.right.after(&top);
    assert!(find_lift(&flat, &right, &top, &bottom, NODES)
        .unwrap()
        .is_none());

    // Closing the marking of A' under composition marks 0' -> 1 as well
    // and restores stability.
    let g = MarkedMap {
        tgt: ma2.closure(),
        ..g
    };
    let verdict = pushout_of_trivial_fibration(&fm, &g, Budget::default()).unwrap();
    assert!(verdict.is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn discrete_naive_fibrant_iff_discrete_fibration(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 0);
        let p = random::slice(&mut rng, Caps { max_objects: 4, max_morphisms: 12 }, 20_000);
        let naive = is_naive_fibrant(Kind::Discrete, &MarkedSlice::minimal(p.clone()), NODES).unwrap();
        prop_assert_eq!(naive.is_ok(), is_discrete_fibration(p.proj()).is_ok());
    }

    #[test]
    fn marked_naive_fibrant_iff_cart_marked_fibration(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 1);
        let p = if rand::Rng::gen_bool(&mut rng, 0.5) {
            let base = random::category(&mut rng, Caps::default().base());
            random::fibrant(&mut rng, &base, Caps::default())
        } else {
            let s = random::slice(&mut rng, Caps { max_objects: 4, max_morphisms: 12 }, 20_000);
            let m = random::marking(&mut rng, s.total());
            MarkedSlice::new(s.proj().clone(), m).unwrap()
        };
        let naive = is_naive_fibrant(Kind::Marked, &p, NODES).unwrap();
        prop_assert_eq!(naive.is_ok(), is_cart_marked_fibration(p.proj(), p.marking()).is_ok());
    }

    #[test]
    fn coincidences_between_fibrant_objects(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 2);
        let Some((p, q, f)) = fibrant_map(&mut rng) else { return Ok(()) };
        let m = marked_map(&p, &q, &f);
        let naive = is_naive_fibration(Kind::Marked, &m, p.proj(), q.proj(), NODES).unwrap();
        prop_assert_eq!(naive.is_ok(), is_isofibration(&f).is_ok());
        let trivial = is_marked_trivial_fibration(&f, p.marking(), q.marking()).is_ok();
        prop_assert_eq!(trivial, is_equivalence(&f).is_ok() && is_isofibration(&f).is_ok());
    }

    #[test]
    fn codomain_of_trivial_fibration_from_fibrant_is_fibrant(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 3);
        let s = random::slice(&mut rng, Caps { max_objects: 4, max_morphisms: 12 }, 20_000);
        let q = MarkedSlice::new(s.proj().clone(), random::marking(&mut rng, s.total())).unwrap();
        let f = random::inflate(&mut rng, q.total(), 25);
        let p = MarkedSlice::new(q.proj().after(&f), preimage(&f, q.marking())).unwrap();
        prop_assert!(is_marked_trivial_fibration(&f, p.marking(), q.marking()).is_ok());
        if is_cart_marked_fibration(p.proj(), p.marking()).is_ok() {
            prop_assert!(is_cart_marked_fibration(q.proj(), q.marking()).is_ok());
        }
    }

    #[test]
    fn path_objects_of_fibrant_slices(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 4);
        let base = random::category(&mut rng, Caps::default().base());
        let p = random::fibrant(&mut rng, &base, Caps::default());
        let report = verify_path_object(&p, NODES).unwrap().unwrap();
        prop_assert!(report.holds());
    }
}
