use std::sync::Arc;

use fibcat::groth::{elements, t_set};
use fibcat::lke::{
    lke_cat_slice, lke_set, lke_set_unit, on_standard_ordinal, slice_comparison_transformation,
    transpose, verify_slice_extension, VerifyError,
};
use fibcat::present::{Budget, PresentError};
use fibcat::random::{self, Caps};
use fibcat::shapes;
use fibcat::{
    all_set_nat_trans, are_isomorphic, comma, FinCat, Functor, ObjId, PresheafSet, Slice,
    DEFAULT_SEARCH_NODES,
};
use proptest::prelude::*;

fn ord(n: usize) -> Arc<FinCat> {
    Arc::new(shapes::ordinal(n))
}

fn objs(v: &[u32]) -> Vec<ObjId> {
    v.iter().map(|&o| ObjId(o)).collect()
}

/// `σ_!F(c)` computed as the components of `c↓(σ ∘ π_F)`.
fn sizes_by_components(f: &PresheafSet, sigma: &Functor) -> Vec<usize> {
    let el = elements(f);
    let t = t_set(&sigma.after(el.proj()));
    sigma.cod().objects().map(|c| t.presheaf.size(c)).collect()
}

#[test]
fn extension_along_identity_is_the_presheaf() {
    let c = ord(2);
    let f = PresheafSet::representable(c.clone(), ObjId(1));
    let e = lke_set(&f, &Functor::identity(c.clone()));
    for o in c.objects() {
        assert_eq!(e.presheaf.size(o), f.size(o));
    }
    assert!(lke_set_unit(&f, &Functor::identity(c), &e).is_iso());
}

#[test]
fn terminal_extends_to_hom_components() {
    // A point at 1 of [1]: both objects map into 1 once.
    let c = ord(1);
    let s = Functor::from_objects(ord(0), c.clone(), objs(&[1])).unwrap();
    let e = lke_set(&PresheafSet::terminal(ord(0)), &s);
    assert_eq!(e.presheaf.size(ObjId(0)), 1);
    assert_eq!(e.presheaf.size(ObjId(1)), 1);
    // A point at 0 is unreachable from 1.
    let s = Functor::from_objects(ord(0), c, objs(&[0])).unwrap();
    let e = lke_set(&PresheafSet::terminal(ord(0)), &s);
    assert_eq!(e.presheaf.size(ObjId(1)), 0);
}

#[test]
fn representables_extend_to_representables() {
    let c = ord(2);
    let s = Functor::from_objects(ord(1), c.clone(), objs(&[0, 2])).unwrap();
    for a in ord(1).objects() {
        let e = lke_set(&PresheafSet::representable(ord(1), a), &s);
        let y = PresheafSet::representable(c.clone(), s.obj(a));
        for o in c.objects() {
            assert_eq!(e.presheaf.size(o), y.size(o));
        }
    }
}

#[test]
fn point_into_a_group_gives_its_elements() {
    let c = Arc::new(shapes::z2());
    let s = Functor::new(ord(0), c.clone(), objs(&[0]), vec![c.id(ObjId(0))]).unwrap();
    let e = lke_cat_slice(&s, Budget::default()).unwrap();
    let fib = e.presheaf.fiber(ObjId(0));
    assert_eq!((fib.num_objects(), fib.num_morphisms()), (2, 2));
}

#[test]
fn edge_into_two_simplex_recovers_commas() {
    let s = Functor::from_objects(ord(1), ord(2), objs(&[0, 1])).unwrap();
    let e = lke_cat_slice(&s, Budget::default()).unwrap();
    let slice = Slice::new(s.clone());
    for c in ord(2).objects() {
        assert!(are_isomorphic(e.presheaf.fiber(c), &comma(c, &slice).cat).unwrap());
    }
    let r = verify_slice_extension(&s, Budget::default(), DEFAULT_SEARCH_NODES).unwrap();
    assert!(r.holds(), "{r:?}");
    assert!(slice_comparison_transformation(&s, &e)
        .naturality_failure()
        .is_none());
}

#[test]
fn non_ordinal_domains_are_rejected() {
    let c = Arc::new(shapes::walking_iso());
    assert!(on_standard_ordinal(&Functor::identity(c.clone())).is_none());
    assert!(matches!(
        verify_slice_extension(
            &Functor::identity(c),
            Budget::default(),
            DEFAULT_SEARCH_NODES
        ),
        Err(VerifyError::NotOrdinal)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn set_extension_sizes_are_component_counts(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 0);
        let a = random::category(&mut rng, Caps { max_objects: 3, max_morphisms: 8 });
        let c = random::category(&mut rng, Caps { max_objects: 4, max_morphisms: 12 });
        let Some(sigma) = random::functor(&mut rng, &a, &c, 20_000) else { return Ok(()) };
        let f = random::presheaf_set(&mut rng, &a, 5);
        let e = lke_set(&f, &sigma);
        let sizes: Vec<usize> = c.objects().map(|o| e.presheaf.size(o)).collect();
        prop_assert_eq!(sizes, sizes_by_components(&f, &sigma));
    }

    #[test]
    fn adjunction_bijection(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 1);
        let a = random::category(&mut rng, Caps { max_objects: 3, max_morphisms: 6 });
        let c = random::category(&mut rng, Caps { max_objects: 3, max_morphisms: 8 });
        let Some(sigma) = random::functor(&mut rng, &a, &c, 20_000) else { return Ok(()) };
        let f = random::presheaf_set(&mut rng, &a, 3);
        let g = random::presheaf_set(&mut rng, &c, 3);
        let e = lke_set(&f, &sigma);
        let unit = lke_set_unit(&f, &sigma, &e);
        let cap = 5_000;
        let left = all_set_nat_trans(&e.presheaf, &g, cap);
        let right = all_set_nat_trans(&f, &g.restrict(&sigma), cap);
        prop_assume!(left.len() < cap && right.len() < cap);
        prop_assert_eq!(left.len(), right.len());
        let mut images: Vec<_> = left.iter().map(|phi| transpose(phi, &sigma, &unit)).collect();
        for psi in &images {
            prop_assert!(right.contains(psi));
        }
        images.sort_by(|x, y| format!("{x:?}").cmp(&format!("{y:?}")));
        images.dedup();
        prop_assert_eq!(images.len(), right.len());
    }

    #[test]
    fn slice_extension_on_random_targets(seed in any::<u64>()) {
        let mut rng = random::case_rng(seed, 2);
        let n = (seed % 3) as usize;
        let c = random::category(&mut rng, Caps { max_objects: 4, max_morphisms: 12 });
        let Some(sigma) = random::functor(&mut rng, &ord(n), &c, 20_000) else { return Ok(()) };
        match verify_slice_extension(&sigma, Budget::default(), DEFAULT_SEARCH_NODES) {
            Ok(r) => prop_assert!(r.holds(), "{:?}", r),
            Err(VerifyError::Present(PresentError::Invalid(e))) => prop_assert!(false, "{}", e),
            Err(_) => {}
        }
    }
}
