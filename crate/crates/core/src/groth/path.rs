use std::collections::HashMap;
use std::sync::Arc;

use crate::fib::{
    is_cart_marked_fibration, is_equivalence, is_isofibration, is_marked_functor, Verdict, Witness,
};
use crate::fincat::{
    marked_product_over, CatBuilder, Functor, MarkedSlice, Marking, MorId, ObjId, Pullback,
};
use crate::present::colimit::disambiguate;

/// The path object of a cart-marked Grothendieck fibration `P`: objects
/// are the vertical isomorphisms of `P`, ordered by id; a morphism
/// `g₁ -> g₂` is a pair `(f', f)` with `g₂ f' = f g₁` and `P f' = P f`,
/// marked iff both components are. Morphisms are ordered by
/// `(g₁, g₂, f', f)`.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub path: MarkedSlice,
    pub objs: Vec<MorId>,
    pub mors: Vec<(MorId, MorId)>,
    /// `P -> Path`: `a ↦ id_a`, `f ↦ (f, f)`.
    pub first: Functor,
    /// `Path -> P ×_C P`: `(g: a' -> a) ↦ (a', a)`.
    pub second: Functor,
    pub pullback: Pullback,
    pub product: MarkedSlice,
    pub first_is_equivalence: Verdict,
    pub second_is_isofibration: Verdict,
    pub path_is_fibrant: Verdict,
    pub legs_are_marked: Verdict,
    pub composite_is_diagonal: bool,
}

impl PathObject {
    pub fn holds(&self) -> bool {
        self.first_is_equivalence.is_ok()
            && self.second_is_isofibration.is_ok()
            && self.path_is_fibrant.is_ok()
            && self.legs_are_marked.is_ok()
            && self.composite_is_diagonal
    }
}

/// Builds the path object and checks its legs. Fails with the offending
/// instance when `p` is not a cart-marked Grothendieck fibration.
pub fn path_object(p: &MarkedSlice) -> Result<PathObject, Witness> {
    is_cart_marked_fibration(p.proj(), p.marking())?;
    let (total, base) = (p.total(), p.base());
    let objs: Vec<MorId> = total
        .morphisms()
        .filter(|&g| total.is_iso(g) && base.is_identity(p.proj().mor(g)))
        .collect();
    let obj_index: HashMap<MorId, ObjId> = objs
        .iter()
        .enumerate()
        .map(|(i, &g)| (g, ObjId(i as u32)))
        .collect();
    let mut keys = Vec::new();
    for (i1, &g1) in objs.iter().enumerate() {
        for (i2, &g2) in objs.iter().enumerate() {
            for &f2 in total.hom(total.src(g1), total.src(g2)) {
                for &f in total.hom(total.tgt(g1), total.tgt(g2)) {
                    if p.proj().mor(f2) == p.proj().mor(f)
                        && total.compose(g2, f2) == total.compose(f, g1)
                    {
                        keys.push((i1, i2, f2, f));
                    }
                }
            }
        }
    }
    let mor_index: HashMap<(usize, usize, MorId, MorId), MorId> = keys
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, MorId(i as u32)))
        .collect();
    let mut b = CatBuilder::new();
    let mut olabels: Vec<String> = objs
        .iter()
        .map(|&g| total.mor_label(g).to_string())
        .collect();
    disambiguate(&mut olabels);
    for l in olabels {
        b.add_object(l);
    }
    let mut mlabels: Vec<String> = keys
        .iter()
        .map(|&(_, _, f2, f)| format!("({},{})", total.mor_label(f2), total.mor_label(f)))
        .collect();
    disambiguate(&mut mlabels);
    for (l, &(i1, i2, f2, f)) in mlabels.into_iter().zip(&keys) {
        let m = b.add_morphism(l, ObjId(i1 as u32), ObjId(i2 as u32));
        if i1 == i2 && total.is_identity(f2) && total.is_identity(f) {
            b.set_identity(ObjId(i1 as u32), m);
        }
    }
    let cat = Arc::new(b.build(|y, x| {
        let (i1, _, f2, f) = keys[x.idx()];
        let (_, i3, h2, h) = keys[y.idx()];
        mor_index[&(i1, i3, total.compose(h2, f2), total.compose(h, f))]
    }));
    let proj = Functor::new_unchecked(
        cat.clone(),
        base.clone(),
        objs.iter().map(|&g| p.proj().obj(total.tgt(g))).collect(),
        keys.iter().map(|&(_, _, _, f)| p.proj().mor(f)).collect(),
    );
    let marking = Marking::new(
        cat.clone(),
        keys.iter()
            .map(|&(_, _, f2, f)| p.is_marked(f2) && p.is_marked(f))
            .collect(),
    )
    .expect("identity pairs are marked");
    let path = MarkedSlice::new(proj, marking)
        .expect("pairs of marked morphisms lie over marked morphisms");

    let first = Functor::new_unchecked(
        total.clone(),
        cat.clone(),
        total.objects().map(|a| obj_index[&total.id(a)]).collect(),
        total
            .morphisms()
            .map(|f| {
                let (a, a2) = (
                    obj_index[&total.id(total.src(f))],
                    obj_index[&total.id(total.tgt(f))],
                );
                mor_index[&(a.idx(), a2.idx(), f, f)]
            })
            .collect(),
    );
    let (pullback, product) = marked_product_over(p, p).expect("same base");
    let second = Functor::new_unchecked(
        cat.clone(),
        pullback.slice.total().clone(),
        objs.iter()
            .map(|&g| {
                pullback
                    .object_of(total.src(g), total.tgt(g))
                    .expect("pair over one object")
            })
            .collect(),
        keys.iter()
            .map(|&(_, _, f2, f)| pullback.morphism_of(f2, f).expect("pair over one morphism"))
            .collect(),
    );
    let diagonal = second.after(&first);
    let composite_is_diagonal = total
        .objects()
        .all(|a| Some(diagonal.obj(a)) == pullback.object_of(a, a))
        && total
            .morphisms()
            .all(|f| Some(diagonal.mor(f)) == pullback.morphism_of(f, f));
    let legs_are_marked = is_marked_functor(&first, p.marking(), path.marking())
        .and_then(|_| is_marked_functor(&second, path.marking(), product.marking()));
    Ok(PathObject {
        first_is_equivalence: is_equivalence(&first),
        second_is_isofibration: is_isofibration(&second),
        path_is_fibrant: is_cart_marked_fibration(path.proj(), path.marking()),
        legs_are_marked,
        composite_is_diagonal,
        path,
        objs,
        mors: keys.iter().map(|&(_, _, f2, f)| (f2, f)).collect(),
        first,
        second,
        pullback,
        product,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{shapes, Slice};

    #[test]
    fn iso_over_point() {
        let i = Arc::new(shapes::walking_iso());
        let pt = Arc::new(shapes::point());
        let p = MarkedSlice::natural(Slice::new(Functor::to_terminal(i, pt)));
        let po = path_object(&p).unwrap();
        assert_eq!(po.path.total().num_objects(), 4);
        assert!(po.holds(), "{po:?}");
    }

    #[test]
    fn no_vertical_isos_gives_copy() {
        let c = Arc::new(shapes::ordinal(2));
        let p = MarkedSlice::maximal(Slice::identity(c));
        let po = path_object(&p).unwrap();
        assert!(po.first.is_isomorphism());
        assert!(po.holds());
    }

    #[test]
    fn rejects_non_fibrant() {
        let c = Arc::new(shapes::ordinal(1));
        let p = MarkedSlice::minimal(Slice::identity(c));
        assert!(matches!(
            path_object(&p),
            Err(Witness::MarkingMismatch { .. })
        ));
    }
}
