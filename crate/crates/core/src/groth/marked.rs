use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{functor_residuals, AdjunctionWitness};
use crate::fib::{is_marked_functor, Verdict};
use crate::fincat::{
    comma_restrict, marked_comma, CatBuilder, CatNatTrans, Comma, FinCat, Functor, MarkedSlice,
    Marking, MorId, ObjId, PresheafCat,
};
use crate::present::{localize, Budget, Localization, PresentError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum GrothError {
    /// Localizing the comma category over `object` did not produce a
    /// finite category.
    #[error("localization over `{object}` failed: {error}")]
    Localization { object: String, error: PresentError },
}

impl GrothError {
    pub fn present_error(&self) -> &PresentError {
        match self {
            GrothError::Localization { error, .. } => error,
        }
    }
}

/// The marked Grothendieck construction `∫⁺F` with its projection.
///
/// Objects `(c, x)` are ordered by `(c, x)`. The morphism `(f, y, ψ)` for
/// `f: c -> d`, `y ∈ F d` and `ψ: x -> F f (y)` in `F c` goes
/// `(c, x) -> (d, y)`; morphisms are ordered by `(f, y, ψ)`. A morphism is
/// marked iff `ψ` is invertible.
#[derive(Clone, Debug)]
pub struct MarkedElements {
    pub presheaf: PresheafCat,
    pub slice: MarkedSlice,
    pub objs: Vec<(ObjId, ObjId)>,
    pub mors: Vec<(MorId, ObjId, MorId)>,
    obj_index: HashMap<(ObjId, ObjId), ObjId>,
    mor_index: HashMap<(MorId, ObjId, MorId), MorId>,
}

impl MarkedElements {
    pub fn object_of(&self, c: ObjId, x: ObjId) -> ObjId {
        self.obj_index[&(c, x)]
    }

    pub fn morphism_of(&self, f: MorId, y: ObjId, psi: MorId) -> MorId {
        self.mor_index[&(f, y, psi)]
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.slice.total()
    }

    pub fn proj(&self) -> &Functor {
        self.slice.proj()
    }
}

pub fn marked_elements(f: &PresheafCat) -> MarkedElements {
    let base = f.base().clone();
    let mut objs = Vec::new();
    for c in base.objects() {
        for x in f.fiber(c).objects() {
            objs.push((c, x));
        }
    }
    let obj_index: HashMap<(ObjId, ObjId), ObjId> = objs
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, ObjId(i as u32)))
        .collect();
    let mut b = CatBuilder::new();
    for &(c, x) in &objs {
        b.add_object(format!(
            "({},{})",
            base.obj_label(c),
            f.fiber(c).obj_label(x)
        ));
    }
    let mut mors = Vec::new();
    let mut mor_index = HashMap::new();
    let mut marked = Vec::new();
    for m in base.morphisms() {
        let (c, d) = (base.src(m), base.tgt(m));
        let (fc, fd) = (f.fiber(c), f.fiber(d));
        let act = f.act(m);
        for y in fd.objects() {
            let t = act.obj(y);
            for &psi in fc.incoming(t) {
                let x = fc.src(psi);
                let src = obj_index[&(c, x)];
                let tgt = obj_index[&(d, y)];
                let id = b.add_morphism(
                    format!(
                        "({},{},{})",
                        base.mor_label(m),
                        fc.mor_label(psi),
                        fd.obj_label(y)
                    ),
                    src,
                    tgt,
                );
                if base.is_identity(m) && fc.is_identity(psi) {
                    b.set_identity(src, id);
                }
                mor_index.insert((m, y, psi), id);
                mors.push((m, y, psi));
                marked.push(fc.is_iso(psi));
            }
        }
    }
    let total = Arc::new(b.build(|g, h| {
        let (gm, z, phi) = mors[g.idx()];
        let (hm, _, psi) = mors[h.idx()];
        let c = base.src(hm);
        let composite = f.fiber(c).compose(f.act(hm).mor(phi), psi);
        mor_index[&(base.compose(gm, hm), z, composite)]
    }));
    let proj = Functor::new_unchecked(
        total.clone(),
        base.clone(),
        objs.iter().map(|p| p.0).collect(),
        mors.iter().map(|p| p.0).collect(),
    );
    let marking = Marking::new(total, marked).expect("identities have identity ψ");
    let slice =
        MarkedSlice::new(proj, marking).expect("marked morphisms lie over the maximal marking");
    MarkedElements {
        presheaf: f.clone(),
        slice,
        objs,
        mors,
        obj_index,
        mor_index,
    }
}

/// `∫⁺α: ∫⁺F -> ∫⁺G` for `α: F ⇒ G`.
pub fn marked_elements_map(
    alpha: &CatNatTrans,
    src: &MarkedElements,
    tgt: &MarkedElements,
) -> Functor {
    let base = src.presheaf.base();
    let obj = src
        .objs
        .iter()
        .map(|&(c, x)| tgt.object_of(c, alpha.at(c).obj(x)))
        .collect();
    let mor = src
        .mors
        .iter()
        .map(|&(f, y, psi)| {
            tgt.morphism_of(
                f,
                alpha.at(base.tgt(f)).obj(y),
                alpha.at(base.src(f)).mor(psi),
            )
        })
        .collect();
    Functor::new_unchecked(src.total().clone(), tgt.total().clone(), obj, mor)
}

/// `T⁺P`: the presheaf `c ↦ (c↓P)[E_c⁻¹]`, with the commas and
/// localizations it was computed from. The objects of each localization
/// are the objects of the comma category, with the same ids.
#[derive(Clone, Debug)]
pub struct TMarked {
    pub slice: MarkedSlice,
    pub presheaf: PresheafCat,
    pub commas: Vec<Comma>,
    pub locs: Vec<Localization>,
}

/// Computes `T⁺P`. Base objects are processed in id order and the first
/// localization that fails aborts the computation.
pub fn t_marked(p: &MarkedSlice, budget: Budget) -> Result<TMarked, GrothError> {
    let base = p.base().clone();
    let mut commas = Vec::with_capacity(base.num_objects());
    let mut locs = Vec::with_capacity(base.num_objects());
    for c in base.objects() {
        let (k, marking) = marked_comma(c, p);
        let loc = localize(&marking, budget).map_err(|error| GrothError::Localization {
            object: base.obj_label(c).into(),
            error,
        })?;
        commas.push(k);
        locs.push(loc);
    }
    let fibers: Vec<Arc<FinCat>> = locs.iter().map(|l| l.cat().clone()).collect();
    let action = base
        .morphisms()
        .map(|u| {
            let (c, d) = (base.src(u), base.tgt(u));
            let restrict = comma_restrict(p.slice(), u, &commas[d.idx()], &commas[c.idx()]);
            locs[d.idx()]
                .factor(&locs[c.idx()].gamma.after(&restrict))
                .expect("precomposition preserves markings")
        })
        .collect();
    let presheaf =
        PresheafCat::new(base, fibers, action).expect("induced action is strictly functorial");
    Ok(TMarked {
        slice: p.clone(),
        presheaf,
        commas,
        locs,
    })
}

/// `T⁺G: T⁺P ⇒ T⁺Q` for a marked functor `G: P -> Q` over the base.
pub fn t_marked_map(g: &Functor, tp: &TMarked, tq: &TMarked) -> CatNatTrans {
    let base = tp.presheaf.base();
    let comp = base
        .objects()
        .map(|c| {
            let (kp, kq) = (&tp.commas[c.idx()], &tq.commas[c.idx()]);
            let obj: Vec<ObjId> = kp
                .objs
                .iter()
                .map(|&(a, f)| kq.object_of(g.obj(a), f).expect("comma object"))
                .collect();
            let mor = kp
                .cat
                .morphisms()
                .map(|m| {
                    kq.morphism_of(obj[kp.cat.src(m).idx()], g.mor(kp.mors[m.idx()]))
                        .expect("comma morphism")
                })
                .collect();
            let on_commas = Functor::new_unchecked(kp.cat.clone(), kq.cat.clone(), obj, mor);
            tp.locs[c.idx()]
                .factor(&tq.locs[c.idx()].gamma.after(&on_commas))
                .expect("marked functors preserve markings")
        })
        .collect();
    CatNatTrans::new(tp.presheaf.clone(), tq.presheaf.clone(), comp)
        .expect("induced map is natural")
}

/// The unit `η_P: P -> ∫⁺T⁺P`.
#[derive(Clone, Debug)]
pub struct UnitMarked {
    pub t: TMarked,
    pub elements: MarkedElements,
    pub unit: Functor,
    pub preserves_marking: Verdict,
}

fn unit_from(p: &MarkedSlice, t: &TMarked, el: &MarkedElements) -> Functor {
    let (total, base) = (p.total(), p.base());
    let at_identity = |a: ObjId| {
        let c = p.proj().obj(a);
        t.commas[c.idx()]
            .object_of(a, base.id(c))
            .expect("(a, id) is a comma object")
    };
    let obj = total
        .objects()
        .map(|a| el.object_of(p.proj().obj(a), at_identity(a)))
        .collect();
    let mor = total
        .morphisms()
        .map(|h| {
            let (a2, a) = (total.src(h), total.tgt(h));
            let c2 = p.proj().obj(a2);
            let k = &t.commas[c2.idx()];
            let g = k
                .morphism_of(at_identity(a2), h)
                .expect("h is a comma morphism out of (a', id)");
            let psi = t.locs[c2.idx()].gamma.mor(g);
            el.morphism_of(p.proj().mor(h), at_identity(a), psi)
        })
        .collect();
    Functor::new_unchecked(total.clone(), el.total().clone(), obj, mor)
}

pub fn unit_marked(p: &MarkedSlice, budget: Budget) -> Result<UnitMarked, GrothError> {
    let t = t_marked(p, budget)?;
    let el = marked_elements(&t.presheaf);
    let unit = unit_from(p, &t, &el);
    debug_assert!(el.proj().after(&unit) == *p.proj());
    let preserves_marking = is_marked_functor(&unit, p.marking(), el.slice.marking());
    Ok(UnitMarked {
        t,
        elements: el,
        unit,
        preserves_marking,
    })
}

/// `ε_F: T⁺∫⁺F ⇒ F`: at `c`, the object `((d, y), f)` goes to `F f (y)` and
/// the morphism `(g, ψ)` out of `((d', y'), f')` goes to `F f' (ψ)`.
pub fn counit_marked(
    el: &MarkedElements,
    budget: Budget,
) -> Result<(TMarked, CatNatTrans), GrothError> {
    let t = t_marked(&el.slice, budget)?;
    let f = &el.presheaf;
    let base = f.base();
    let comp = base
        .objects()
        .map(|c| {
            let k = &t.commas[c.idx()];
            let fc = f.fiber(c);
            let obj: Vec<ObjId> = k
                .objs
                .iter()
                .map(|&(a, g)| {
                    let (_, y) = el.objs[a.idx()];
                    f.act(g).obj(y)
                })
                .collect();
            let mor = k
                .cat
                .morphisms()
                .map(|m| {
                    let (_, f2) = k.objs[k.cat.src(m).idx()];
                    let (_, _, psi) = el.mors[k.mors[m.idx()].idx()];
                    f.act(f2).mor(psi)
                })
                .collect();
            let on_comma = Functor::new_unchecked(k.cat.clone(), fc.clone(), obj, mor);
            t.locs[c.idx()]
                .factor(&on_comma)
                .expect("invertible ψ stays invertible")
        })
        .collect();
    let eps = CatNatTrans::new(t.presheaf.clone(), f.clone(), comp).expect("counit is natural");
    Ok((t, eps))
}

/// Checks `ε_{T⁺P} ∘ T⁺η_P = id` at `p` and `∫⁺ε_F ∘ η_{∫⁺F} = id` at `f`.
pub fn verify_triangles_marked(
    p: &MarkedSlice,
    f: &PresheafCat,
    budget: Budget,
) -> Result<AdjunctionWitness, GrothError> {
    let mut w = AdjunctionWitness::default();

    let um = unit_marked(p, budget)?;
    let (t2, eps_tp) = counit_marked(&um.elements, budget)?;
    let t_eta = t_marked_map(&um.unit, &um.t, &t2);
    let base = p.base();
    for c in base.objects() {
        let composite = eps_tp.at(c).after(t_eta.at(c));
        let id = Functor::identity(um.t.presheaf.fiber(c).clone());
        functor_residuals(
            &format!("ε T⁺ ∘ T⁺η at {}", base.obj_label(c)),
            &composite,
            &id,
            &mut w.left_triangle,
        );
    }
    let total = p.total();
    w.unit = total
        .objects()
        .map(|a| {
            (
                total.obj_label(a).to_string(),
                um.unit.cod().obj_label(um.unit.obj(a)).to_string(),
            )
        })
        .collect();

    let el = marked_elements(f);
    let (t, eps) = counit_marked(&el, budget)?;
    let el2 = marked_elements(&t.presheaf);
    let eta = unit_from(&el.slice, &t, &el2);
    let int_eps = marked_elements_map(&eps, &el2, &el);
    functor_residuals(
        "∫⁺ε ∘ η",
        &int_eps.after(&eta),
        &Functor::identity(el.total().clone()),
        &mut w.right_triangle,
    );
    w.counit = f
        .base()
        .objects()
        .map(|c| {
            let e = eps.at(c);
            let pairs = e
                .dom()
                .objects()
                .map(|x| {
                    (
                        e.dom().obj_label(x).to_string(),
                        e.cod().obj_label(e.obj(x)).to_string(),
                    )
                })
                .collect();
            (f.base().obj_label(c).to_string(), pairs)
        })
        .collect();
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::{is_cart_marked, is_equivalence, is_grothendieck_fibration};
    use crate::fincat::shapes;

    fn ord(n: usize) -> Arc<FinCat> {
        Arc::new(shapes::ordinal(n))
    }

    /// Over `[1]`: `F 1 = [1]`, `F 0 = [0]`, the action collapses.
    fn collapse_example() -> PresheafCat {
        let c = ord(1);
        let (f0, f1) = (Arc::new(shapes::point()), ord(1));
        let id0 = Functor::identity(f0.clone());
        let id1 = Functor::identity(f1.clone());
        let collapse = Functor::to_terminal(f1.clone(), f0.clone());
        PresheafCat::new(c, vec![f0, f1], vec![id0, collapse, id1]).unwrap()
    }

    #[test]
    fn constant_point_is_base() {
        let c = ord(2);
        let el = marked_elements(&PresheafCat::constant(c, Arc::new(shapes::point())));
        assert!(el.proj().is_isomorphism());
        assert!(el.slice.marking().is_maximal());
    }

    #[test]
    fn collapse_example_is_fibrant() {
        let el = marked_elements(&collapse_example());
        assert_eq!(el.total().num_objects(), 3);
        assert!(is_grothendieck_fibration(el.proj()).is_ok());
        assert!(is_cart_marked(el.proj(), el.slice.marking()).is_ok());
        // 3 identities, (0->1, id, y) for both y, (id_1, 0->1, 1)
        assert_eq!(el.total().num_morphisms(), 6);
        assert_eq!(el.slice.marking().count(), 5);
    }

    #[test]
    fn counit_components_are_equivalences() {
        let f = collapse_example();
        let el = marked_elements(&f);
        let (_, eps) = counit_marked(&el, Budget::default()).unwrap();
        for c in f.base().objects() {
            assert!(is_equivalence(eps.at(c)).is_ok());
        }
    }

    #[test]
    fn unit_of_fibrant_is_equivalence() {
        let el = marked_elements(&collapse_example());
        let um = unit_marked(&el.slice, Budget::default()).unwrap();
        assert!(um.preserves_marking.is_ok());
        assert!(is_equivalence(&um.unit).is_ok());
    }

    #[test]
    fn triangles_on_collapse_example() {
        let f = collapse_example();
        let el = marked_elements(&f);
        let w = verify_triangles_marked(&el.slice, &f, Budget::default()).unwrap();
        assert!(w.holds(), "{w:?}");
    }

    #[test]
    fn natural_marking_over_point_localizes() {
        // T⁺ over [0] is localization: [1] with its arrow marked becomes 𝕀.
        let m = shapes::standard("[1]^sharp").unwrap();
        let pt = Arc::new(shapes::point());
        let p = MarkedSlice::new(Functor::to_terminal(m.carrier().clone(), pt), m).unwrap();
        let um = unit_marked(&p, Budget::default()).unwrap();
        assert!(um.t.presheaf.fiber(ObjId(0)).is_groupoid());
        assert!(is_equivalence(&um.unit).is_err());
    }

    #[test]
    fn minimal_marking_keeps_commas() {
        let c = ord(1);
        let p = MarkedSlice::minimal(crate::fincat::Slice::identity(c));
        let t = t_marked(&p, Budget::default()).unwrap();
        for (k, l) in t.commas.iter().zip(&t.locs) {
            assert_eq!(k.cat.num_morphisms(), l.cat().num_morphisms());
        }
    }
}
