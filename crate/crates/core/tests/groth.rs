use std::sync::Arc;

use fibcat::fib::{
    is_cart_marked, is_discrete_fibration, is_equivalence, is_final, is_grothendieck_fibration,
};
use fibcat::groth::{
    counit_discrete, elements, marked_elements, path_object, t_set, unit_discrete, unit_marked,
    verify_triangles_discrete, verify_triangles_marked,
};
use fibcat::present::Budget;
use fibcat::random::{self, Caps};
use fibcat::shapes;
use fibcat::{Functor, MarkedSlice, ObjId, PresheafCat, PresheafSet, Slice, UnionFind};
use proptest::prelude::*;

fn s(x: &str) -> String {
    x.to_string()
}

/// `|π₀(c↓P)|` for each `c`, by union-find over pairs `(a, f: c -> P a)`.
fn component_counts(p: &Functor) -> Vec<usize> {
    let (t, b) = (p.dom(), p.cod());
    b.objects()
        .map(|c| {
            let mut objs = Vec::new();
            for a in t.objects() {
                for &f in b.hom(c, p.obj(a)) {
                    objs.push((a, f));
                }
            }
            let index = |x: (ObjId, fibcat::MorId)| objs.iter().position(|&y| y == x).unwrap();
            let mut uf = UnionFind::new(objs.len());
            for &(a, f) in &objs {
                for &g in t.out_of(a) {
                    let target = (t.tgt(g), b.compose(p.mor(g), f));
                    uf.union(index((a, f)) as u32, index(target) as u32);
                }
            }
            (0..objs.len() as u32).filter(|&i| uf.find(i) == i).count()
        })
        .collect()
}

/// Morphism and marked-morphism counts of the marked category of elements:
/// `(f, ψ)` with `f: c -> d`, `y ∈ F d` and `ψ: x -> F f (y)` in `F c`.
fn marked_elements_counts(f: &PresheafCat) -> (usize, usize) {
    let base = f.base();
    let (mut all, mut marked) = (0, 0);
    for m in base.morphisms() {
        let (c, d) = (base.src(m), base.tgt(m));
        let fc = f.fiber(c);
        for y in f.fiber(d).objects() {
            for &psi in fc.incoming(f.act(m).obj(y)) {
                all += 1;
                if fc.is_iso(psi) {
                    marked += 1;
                }
            }
        }
    }
    (all, marked)
}

fn interval_presheaf() -> PresheafSet {
    let c = Arc::new(shapes::ordinal(1));
    let u = c.mor_by_label("0->1").unwrap();
    let mut action = vec![Vec::new(); c.num_morphisms()];
    action[c.id(ObjId(0)).idx()] = vec![0];
    action[c.id(ObjId(1)).idx()] = vec![0];
    action[u.idx()] = vec![0];
    PresheafSet::new(c, vec![vec![s("x")], vec![s("y")]], action).unwrap()
}

/// `F(1) = [1]`, `F(0) = [0]`, with the collapse as action.
fn collapse_presheaf() -> PresheafCat {
    let c = Arc::new(shapes::ordinal(1));
    let pt = Arc::new(shapes::point());
    let i = Arc::new(shapes::ordinal(1));
    let u = c.mor_by_label("0->1").unwrap();
    let action = c
        .morphisms()
        .map(|m| {
            if m == u {
                Functor::to_terminal(i.clone(), pt.clone())
            } else if c.src(m) == ObjId(0) {
                Functor::identity(pt.clone())
            } else {
                Functor::identity(i.clone())
            }
        })
        .collect();
    PresheafCat::new(c, vec![pt, i], action).unwrap()
}

#[test]
fn elements_of_the_interval_presheaf_is_the_interval() {
    let el = elements(&interval_presheaf());
    assert_eq!(el.slice.total().num_objects(), 2);
    assert_eq!(el.slice.total().num_morphisms(), 3);
    assert!(el.proj().is_isomorphism());
}

#[test]
fn elements_of_terminal_and_empty() {
    let c = Arc::new(shapes::horn());
    assert!(elements(&PresheafSet::terminal(c.clone()))
        .proj()
        .is_isomorphism());
    assert!(elements(&PresheafSet::empty(c)).slice.total().is_empty());
}

#[test]
fn t_of_an_endpoint_inclusion() {
    let pt = Arc::new(shapes::point());
    let i = Arc::new(shapes::ordinal(1));
    let p = Functor::from_objects(pt, i, vec![ObjId(0)]).unwrap();
    let t = t_set(&p);
    assert_eq!(t.presheaf.size(ObjId(0)), 1);
    assert_eq!(t.presheaf.size(ObjId(1)), 0);
    let fac = unit_discrete(&p);
    assert!(fac.unit_final.is_ok());
    assert!(fac.second_leg_discrete.is_ok());
    assert_eq!(fac.elements.slice.total().num_objects(), 1);
}

#[test]
fn t_of_identity_is_terminal() {
    let c = Arc::new(shapes::double_filler());
    let t = t_set(&Functor::identity(c.clone()));
    assert!(c.objects().all(|o| t.presheaf.size(o) == 1));
    let fac = unit_discrete(&Functor::identity(c));
    assert!(fac.unit_is_iso);
}

#[test]
fn marked_elements_of_the_collapse() {
    let f = collapse_presheaf();
    let el = marked_elements(&f);
    assert_eq!(el.total().num_objects(), 3);
    assert_eq!(
        (el.total().num_morphisms(), el.slice.marking().count()),
        marked_elements_counts(&f)
    );
    assert_eq!(marked_elements_counts(&f), (6, 5));
    let um = unit_marked(&el.slice, Budget::default()).unwrap();
    assert!(is_equivalence(&um.unit).is_ok());
    let w = verify_triangles_marked(&el.slice, &f, Budget::default()).unwrap();
    assert!(w.holds());
}

#[test]
fn path_object_of_the_walking_iso_over_a_point() {
    let i = Arc::new(shapes::walking_iso());
    let pt = Arc::new(shapes::point());
    let p = MarkedSlice::natural(Slice::new(Functor::to_terminal(i, pt)));
    let po = path_object(&p).unwrap();
    assert_eq!(po.path.total().num_objects(), 4);
    assert!(po.holds());
}

#[test]
fn path_object_of_the_collapse_example() {
    let el = marked_elements(&collapse_presheaf());
    let po = path_object(&el.slice).unwrap();
    assert!(po.holds());
}

#[test]
fn path_object_refuses_non_fibrant_input() {
    let i = Arc::new(shapes::ordinal(1));
    let p = MarkedSlice::minimal(Slice::identity(i));
    assert!(path_object(&p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t_sizes_are_component_counts(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 0);
        let p = random::slice(&mut rng, Caps::default(), 20_000);
        let t = t_set(p.proj());
        let counts = component_counts(p.proj());
        for c in p.base().objects() {
            prop_assert_eq!(t.presheaf.size(c), counts[c.idx()]);
        }
    }

    #[test]
    fn set_round_trip(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 1);
        let base = random::category(&mut rng, Caps::default().base());
        let f = random::presheaf_set(&mut rng, &base, 6);
        let el = elements(&f);
        prop_assert!(is_discrete_fibration(el.proj()).is_ok());
        prop_assert_eq!(el.slice.total().num_objects(), f.total_size());
        let (tf, eps) = counit_discrete(&el);
        prop_assert!(eps.is_iso());
        for c in base.objects() {
            prop_assert_eq!(tf.presheaf.size(c), f.size(c));
        }
    }

    #[test]
    fn marked_elements_match_direct_count(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 2);
        let base = random::category(&mut rng, Caps::default().base());
        let f = random::presheaf_cat(&mut rng, &base, Caps::default());
        let el = marked_elements(&f);
        prop_assert_eq!(
            (el.total().num_morphisms(), el.slice.marking().count()),
            marked_elements_counts(&f)
        );
        prop_assert!(is_grothendieck_fibration(el.proj()).is_ok());
        prop_assert!(is_cart_marked(el.proj(), el.slice.marking()).is_ok());
    }

    #[test]
    fn comprehensive_factorization(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 3);
        let p = random::slice(&mut rng, Caps::default(), 20_000);
        let fac = unit_discrete(p.proj());
        prop_assert!(fac.unit_final.is_ok());
        prop_assert!(is_final(&fac.unit).is_ok());
        prop_assert!(fac.second_leg_discrete.is_ok());
        prop_assert_eq!(fac.unit_is_iso, is_discrete_fibration(p.proj()).is_ok());
        let composite = fac.elements.proj().after(&fac.unit);
        prop_assert_eq!(composite.obj_table(), p.proj().obj_table());
        prop_assert_eq!(composite.mor_table(), p.proj().mor_table());
    }

    #[test]
    fn discrete_triangles(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 4);
        let p = random::slice(&mut rng, Caps::default(), 20_000);
        let f = random::presheaf_set(&mut rng, p.base(), 6);
        prop_assert!(verify_triangles_discrete(p.proj(), &f).holds());
    }

    #[test]
    fn unit_of_fibrant_is_an_equivalence(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 5);
        let base = random::category(&mut rng, Caps::default().base());
        let p = random::fibrant(&mut rng, &base, Caps::default());
        let um = unit_marked(&p, Budget::default()).unwrap();
        prop_assert!(um.preserves_marking.is_ok());
        prop_assert!(is_equivalence(&um.unit).is_ok());
    }
}
