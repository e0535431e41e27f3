use std::collections::HashMap;
use std::sync::Arc;

use super::{functor_residuals, AdjunctionWitness};
use crate::fib::{is_discrete_fibration, is_final, Verdict};
use crate::fincat::{
    comma, pi0, CatBuilder, Comma, Components, Functor, MorId, ObjId, PresheafSet, SetNatTrans,
    Slice,
};

/// The category of elements `∫F` with its projection.
///
/// Objects `(c, x)` are ordered by `(c, x)`. The morphism `(f, y)` for
/// `f: c -> d` and `y ∈ F d` goes `(c, F f y) -> (d, y)`; morphisms are
/// ordered by `(f, y)`.
#[derive(Clone, Debug)]
pub struct Elements {
    pub presheaf: PresheafSet,
    pub slice: Slice,
    pub objs: Vec<(ObjId, u32)>,
    pub mors: Vec<(MorId, u32)>,
    obj_index: HashMap<(ObjId, u32), ObjId>,
    mor_index: HashMap<(MorId, u32), MorId>,
}

impl Elements {
    pub fn object_of(&self, c: ObjId, x: u32) -> ObjId {
        self.obj_index[&(c, x)]
    }

    pub fn morphism_of(&self, f: MorId, y: u32) -> MorId {
        self.mor_index[&(f, y)]
    }

    pub fn proj(&self) -> &Functor {
        self.slice.proj()
    }
}

pub fn elements(f: &PresheafSet) -> Elements {
    let base = f.base().clone();
    let mut objs = Vec::new();
    for c in base.objects() {
        for x in 0..f.size(c) as u32 {
            objs.push((c, x));
        }
    }
    let obj_index: HashMap<(ObjId, u32), ObjId> = objs
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, ObjId(i as u32)))
        .collect();
    let mut b = CatBuilder::new();
    for &(c, x) in &objs {
        b.add_object(format!("({},{})", base.obj_label(c), f.elem_label(c, x)));
    }
    let mut mors = Vec::new();
    let mut mor_index = HashMap::new();
    for m in base.morphisms() {
        let (c, d) = (base.src(m), base.tgt(m));
        for y in 0..f.size(d) as u32 {
            let src = obj_index[&(c, f.act(m, y))];
            let tgt = obj_index[&(d, y)];
            let id = b.add_morphism(
                format!("({},{})", base.mor_label(m), f.elem_label(d, y)),
                src,
                tgt,
            );
            if base.is_identity(m) {
                b.set_identity(src, id);
            }
            mor_index.insert((m, y), id);
            mors.push((m, y));
        }
    }
    let total = Arc::new(b.build(|g, h| {
        let (gm, z) = mors[g.idx()];
        let (hm, _) = mors[h.idx()];
        mor_index[&(base.compose(gm, hm), z)]
    }));
    let proj = Functor::new_unchecked(
        total,
        base.clone(),
        objs.iter().map(|p| p.0).collect(),
        mors.iter().map(|p| p.0).collect(),
    );
    Elements {
        presheaf: f.clone(),
        slice: Slice::new(proj),
        objs,
        mors,
        obj_index,
        mor_index,
    }
}

/// `∫α: ∫F -> ∫G` for `α: F ⇒ G`.
pub fn elements_map(alpha: &SetNatTrans, src: &Elements, tgt: &Elements) -> Functor {
    let base = src.presheaf.base();
    let obj = src
        .objs
        .iter()
        .map(|&(c, x)| tgt.object_of(c, alpha.at(c, x)))
        .collect();
    let mor = src
        .mors
        .iter()
        .map(|&(f, y)| tgt.morphism_of(f, alpha.at(base.tgt(f), y)))
        .collect();
    Functor::new_unchecked(
        src.slice.total().clone(),
        tgt.slice.total().clone(),
        obj,
        mor,
    )
}

/// `T P`: the presheaf `c ↦ π₀(c↓P)`, with the commas it was computed from.
#[derive(Clone, Debug)]
pub struct TSet {
    pub presheaf: PresheafSet,
    pub slice: Slice,
    pub commas: Vec<Comma>,
    pub components: Vec<Components>,
}

impl TSet {
    /// The element of `T P (c)` containing `(a, f)`.
    pub fn class_of(&self, c: ObjId, a: ObjId, f: MorId) -> u32 {
        let k = &self.commas[c.idx()];
        self.components[c.idx()].index_of(k.object_of(a, f).expect("comma object")) as u32
    }
}

pub fn t_set(p: &Functor) -> TSet {
    let slice = Slice::new(p.clone());
    let base = p.cod().clone();
    let commas: Vec<Comma> = base.objects().map(|c| comma(c, &slice)).collect();
    let components: Vec<Components> = commas.iter().map(|k| pi0(&k.cat)).collect();
    let elems = commas
        .iter()
        .zip(&components)
        .map(|(k, comp)| {
            comp.reps
                .iter()
                .map(|&r| format!("[{}]", k.cat.obj_label(r)))
                .collect()
        })
        .collect();
    let mut t = TSet {
        presheaf: PresheafSet::empty(base.clone()),
        slice,
        commas,
        components,
    };
    let action = base
        .morphisms()
        .map(|u| {
            let (c, d) = (base.src(u), base.tgt(u));
            let k = &t.commas[d.idx()];
            t.components[d.idx()]
                .reps
                .iter()
                .map(|&r| {
                    let (a, f) = k.objs[r.idx()];
                    t.class_of(c, a, base.compose(f, u))
                })
                .collect()
        })
        .collect();
    t.presheaf = PresheafSet::new_unchecked(base, elems, action);
    t
}

/// `T G: T P ⇒ T Q` for `G: P -> Q` over the base.
pub fn t_set_map(g: &Functor, tp: &TSet, tq: &TSet) -> SetNatTrans {
    let base = tp.presheaf.base();
    let comp = base
        .objects()
        .map(|c| {
            let k = &tp.commas[c.idx()];
            tp.components[c.idx()]
                .reps
                .iter()
                .map(|&r| {
                    let (a, f) = k.objs[r.idx()];
                    tq.class_of(c, g.obj(a), f)
                })
                .collect()
        })
        .collect();
    SetNatTrans::new(tp.presheaf.clone(), tq.presheaf.clone(), comp)
        .expect("induced map is natural")
}

/// The unit `η_P: P -> ∫ T P` and the comprehensive factorization it
/// yields: `η_P` is final and the projection of `∫ T P` is a discrete
/// fibration.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub tset: TSet,
    pub elements: Elements,
    pub unit: Functor,
    pub unit_final: Verdict,
    pub second_leg_discrete: Verdict,
    pub unit_is_iso: bool,
}

fn unit_from(p: &Functor, t: &TSet, el: &Elements) -> Functor {
    let (total, base) = (p.dom(), p.cod());
    let obj = total
        .objects()
        .map(|a| {
            let c = p.obj(a);
            el.object_of(c, t.class_of(c, a, base.id(c)))
        })
        .collect();
    let mor = total
        .morphisms()
        .map(|h| {
            let a = total.tgt(h);
            let d = p.obj(a);
            el.morphism_of(p.mor(h), t.class_of(d, a, base.id(d)))
        })
        .collect();
    Functor::new_unchecked(total.clone(), el.slice.total().clone(), obj, mor)
}

pub fn unit_discrete(p: &Functor) -> Factorization {
    let tset = t_set(p);
    let el = elements(&tset.presheaf);
    let unit = unit_from(p, &tset, &el);
    debug_assert!(el.proj().after(&unit) == *p);
    Factorization {
        unit_final: is_final(&unit),
        second_leg_discrete: is_discrete_fibration(el.proj()),
        unit_is_iso: unit.is_isomorphism(),
        tset,
        elements: el,
        unit,
    }
}

/// `ε_F: T ∫F ⇒ F`, sending the class of `((d, y), g: c -> d)` to `F g (y)`.
pub fn counit_discrete(el: &Elements) -> (TSet, SetNatTrans) {
    let t = t_set(el.proj());
    let f = &el.presheaf;
    let base = f.base();
    let comp = base
        .objects()
        .map(|c| {
            let k = &t.commas[c.idx()];
            let value = |o: ObjId| {
                let (a, g) = k.objs[o.idx()];
                f.act(g, el.objs[a.idx()].1)
            };
            debug_assert!(k
                .cat
                .objects()
                .all(|o| value(o) == value(t.components[c.idx()].rep_of[o.idx()])));
            t.components[c.idx()]
                .reps
                .iter()
                .map(|&r| value(r))
                .collect()
        })
        .collect();
    let eps = SetNatTrans::new(t.presheaf.clone(), f.clone(), comp).expect("counit is natural");
    (t, eps)
}

/// Checks `ε_{T P} ∘ T η_P = id` at `p` and `∫ε_F ∘ η_{∫F} = id` at `f`.
pub fn verify_triangles_discrete(p: &Functor, f: &PresheafSet) -> AdjunctionWitness {
    let mut w = AdjunctionWitness::default();

    let fac = unit_discrete(p);
    let (t2, eps_tp) = counit_discrete(&fac.elements);
    let t_eta = t_set_map(&fac.unit, &fac.tset, &t2);
    let composite = eps_tp.after(&t_eta);
    let base = p.cod();
    for c in base.objects() {
        for x in 0..fac.tset.presheaf.size(c) as u32 {
            let y = composite.at(c, x);
            if y != x {
                w.left_triangle.push(format!(
                    "at {}: {} goes to {}",
                    base.obj_label(c),
                    fac.tset.presheaf.elem_label(c, x),
                    fac.tset.presheaf.elem_label(c, y)
                ));
            }
        }
    }
    let total = p.dom();
    w.unit = total
        .objects()
        .map(|a| {
            (
                total.obj_label(a).to_string(),
                fac.unit.cod().obj_label(fac.unit.obj(a)).to_string(),
            )
        })
        .collect();

    let el = elements(f);
    let (t, eps) = counit_discrete(&el);
    let el2 = elements(&t.presheaf);
    let eta = unit_from(el.proj(), &t, &el2);
    let int_eps = elements_map(&eps, &el2, &el);
    functor_residuals(
        "∫ε ∘ η",
        &int_eps.after(&eta),
        &Functor::identity(el.slice.total().clone()),
        &mut w.right_triangle,
    );
    w.counit = f
        .base()
        .objects()
        .map(|c| {
            let pairs = (0..t.presheaf.size(c) as u32)
                .map(|x| {
                    (
                        t.presheaf.elem_label(c, x).to_string(),
                        f.elem_label(c, eps.at(c, x)).to_string(),
                    )
                })
                .collect();
            (f.base().obj_label(c).to_string(), pairs)
        })
        .collect();
    w
}
