//! Pointwise left Kan extensions of presheaves along finite functors.
//!
//! For `σ: A -> C` and a presheaf `F` on `A`, `σ_!F(c)` is the quotient of
//! the pairs `(g: c -> σa, x ∈ F a)` by `(σh ∘ g, y) ~ (g, F h (y))` for
//! `h: a -> a'`. The set-valued version is a union-find quotient, the
//! category-valued one is glued through the presentation engine.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fincat::{
    comma, comma_restrict, find_isomorphism, shapes, CatBuilder, CatNatTrans, Comma, FinCat,
    Functor, MorId, ObjId, PresheafCat, PresheafSet, SearchExhausted, SetNatTrans, Slice,
    UnionFind,
};
use crate::present::colimit::disambiguate;
use crate::present::{Budget, Colimit, ColimitBuilder, PresentError};

/// `σ_!F` for a set-valued `F`, with the quotient maps.
#[derive(Clone, Debug)]
pub struct LkeSet {
    pub presheaf: PresheafSet,
    /// Per object `c` of `C`: the pairs `(a, g, x)` in lexicographic id order.
    pub pairs: Vec<Vec<(ObjId, MorId, u32)>>,
    /// Per object `c`: the class of each pair. Classes are numbered by
    /// their smallest pair, which is also their representative.
    pub class: Vec<Vec<u32>>,
    index: Vec<HashMap<(ObjId, MorId, u32), usize>>,
}

impl LkeSet {
    pub fn class_of(&self, c: ObjId, a: ObjId, g: MorId, x: u32) -> u32 {
        self.class[c.idx()][self.index[c.idx()][&(a, g, x)]]
    }
}

pub fn lke_set(f: &PresheafSet, sigma: &Functor) -> LkeSet {
    let (a_cat, c_cat) = (sigma.dom(), sigma.cod());
    assert!(
        **f.base() == **a_cat,
        "presheaf lives on the domain of the functor"
    );
    let mut all_pairs = Vec::new();
    let mut all_class = Vec::new();
    let mut all_index = Vec::new();
    let mut elems = Vec::new();
    for c in c_cat.objects() {
        let mut pairs = Vec::new();
        for a in a_cat.objects() {
            for &g in c_cat.hom(c, sigma.obj(a)) {
                for x in 0..f.size(a) as u32 {
                    pairs.push((a, g, x));
                }
            }
        }
        let index: HashMap<(ObjId, MorId, u32), usize> =
            pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut uf = UnionFind::new(pairs.len());
        for h in a_cat.morphisms() {
            let (a, a2) = (a_cat.src(h), a_cat.tgt(h));
            for &g in c_cat.hom(c, sigma.obj(a)) {
                let g2 = c_cat.compose(sigma.mor(h), g);
                for y in 0..f.size(a2) as u32 {
                    uf.union(
                        index[&(a2, g2, y)] as u32,
                        index[&(a, g, f.act(h, y))] as u32,
                    );
                }
            }
        }
        let mut class = vec![u32::MAX; pairs.len()];
        let mut labels = Vec::new();
        for i in 0..pairs.len() {
            let r = uf.find(i as u32) as usize;
            if class[r] == u32::MAX {
                class[r] = labels.len() as u32;
                let (a, g, x) = pairs[i];
                labels.push(format!("({},{})", c_cat.mor_label(g), f.elem_label(a, x)));
            }
            class[i] = class[r];
        }
        disambiguate(&mut labels);
        elems.push(labels);
        all_pairs.push(pairs);
        all_class.push(class);
        all_index.push(index);
    }
    let action = c_cat
        .morphisms()
        .map(|u| {
            let (c2, c) = (c_cat.src(u), c_cat.tgt(u));
            let mut img = vec![u32::MAX; elems[c.idx()].len()];
            for (i, &(a, g, x)) in all_pairs[c.idx()].iter().enumerate() {
                let k = all_class[c.idx()][i] as usize;
                if img[k] == u32::MAX {
                    img[k] = all_class[c2.idx()][all_index[c2.idx()][&(a, c_cat.compose(g, u), x)]];
                }
            }
            img
        })
        .collect();
    let presheaf = PresheafSet::new_unchecked(c_cat.clone(), elems, action);
    LkeSet {
        presheaf,
        pairs: all_pairs,
        class: all_class,
        index: all_index,
    }
}

/// The unit `F -> σ*σ_!F`, `x ∈ F a ↦ [id_σa, x]`.
pub fn lke_set_unit(f: &PresheafSet, sigma: &Functor, ext: &LkeSet) -> SetNatTrans {
    let a_cat = sigma.dom();
    let comp = a_cat
        .objects()
        .map(|a| {
            let sa = sigma.obj(a);
            (0..f.size(a) as u32)
                .map(|x| ext.class_of(sa, a, sigma.cod().id(sa), x))
                .collect()
        })
        .collect();
    SetNatTrans::new(f.clone(), ext.presheaf.restrict(sigma), comp).expect("unit is natural")
}

/// The transpose `σ*φ ∘ η` of `φ: σ_!F -> G`.
pub fn transpose(phi: &SetNatTrans, sigma: &Functor, unit: &SetNatTrans) -> SetNatTrans {
    let a_cat = sigma.dom();
    let comp = a_cat
        .objects()
        .map(|a| {
            unit.component(a)
                .iter()
                .map(|&y| phi.at(sigma.obj(a), y))
                .collect()
        })
        .collect();
    SetNatTrans::new(unit.src().clone(), phi.tgt().restrict(sigma), comp)
        .expect("transpose is natural")
}

/// `σ_!F` for a category-valued `F`, one realized colimit per object.
#[derive(Clone, Debug)]
pub struct LkeCat {
    pub presheaf: PresheafCat,
    pub colimits: Vec<Colimit>,
    /// Per object `c`: part `k` is `F a` indexed by `(a, g: c -> σa)`.
    pub parts: Vec<Vec<(ObjId, MorId)>>,
}

impl LkeCat {
    pub fn part_of(&self, c: ObjId, a: ObjId, g: MorId) -> usize {
        self.parts[c.idx()]
            .iter()
            .position(|&p| p == (a, g))
            .expect("part exists")
    }
}

fn relabel(fiber: &FinCat, tag: &str) -> Arc<FinCat> {
    let mut b = CatBuilder::new();
    for o in fiber.objects() {
        b.add_object(format!("({},{tag})", fiber.obj_label(o)));
    }
    for m in fiber.morphisms() {
        b.add_morphism(
            format!("({},{tag})", fiber.mor_label(m)),
            fiber.src(m),
            fiber.tgt(m),
        );
    }
    for o in fiber.objects() {
        b.set_identity(o, fiber.id(o));
    }
    Arc::new(b.build(|g, f| fiber.compose(g, f)))
}

/// Pointwise `σ_!F` for `F: A^op -> Cat`. Each value is the coequalizer of
/// `∐_{h: a -> a'} C(c, σa) × F a' ⇉ ∐_a C(c, σa) × F a`, realized through
/// the presentation engine; it may fail to converge for general inputs.
pub fn lke_cat(f: &PresheafCat, sigma: &Functor, budget: Budget) -> Result<LkeCat, PresentError> {
    let (a_cat, c_cat) = (sigma.dom(), sigma.cod());
    assert!(
        **f.base() == **a_cat,
        "presheaf lives on the domain of the functor"
    );
    let mut colimits = Vec::new();
    let mut all_parts = Vec::new();
    for c in c_cat.objects() {
        let mut b = ColimitBuilder::new();
        let mut parts = Vec::new();
        for a in a_cat.objects() {
            for &g in c_cat.hom(c, sigma.obj(a)) {
                b.add_part(relabel(f.fiber(a), c_cat.mor_label(g)));
                parts.push((a, g));
            }
        }
        let index: HashMap<(ObjId, MorId), usize> =
            parts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        for h in a_cat.morphisms().filter(|&h| !a_cat.is_identity(h)) {
            let (a, a2) = (a_cat.src(h), a_cat.tgt(h));
            let fh = f.act(h);
            for &g in c_cat.hom(c, sigma.obj(a)) {
                let g2 = c_cat.compose(sigma.mor(h), g);
                b.identify_along(
                    index[&(a2, g2)],
                    &Functor::identity(f.fiber(a2).clone()),
                    index[&(a, g)],
                    fh,
                );
            }
        }
        colimits.push(b.build(budget)?);
        all_parts.push(parts);
    }
    let action = c_cat
        .morphisms()
        .map(|u| {
            let (c2, c) = (c_cat.src(u), c_cat.tgt(u));
            let to = &colimits[c2.idx()];
            let legs: Vec<Functor> = all_parts[c.idx()]
                .iter()
                .map(|&(a, g)| {
                    let k = all_parts[c2.idx()]
                        .iter()
                        .position(|&p| p == (a, c_cat.compose(g, u)))
                        .expect("part exists");
                    to.injections[k].clone()
                })
                .collect();
            colimits[c.idx()].induced(&legs, &to.cat)
        })
        .collect();
    let fibers = colimits.iter().map(|k| k.cat.clone()).collect();
    let presheaf =
        PresheafCat::new(c_cat.clone(), fibers, action).expect("induced action is functorial");
    Ok(LkeCat {
        presheaf,
        colimits,
        parts: all_parts,
    })
}

/// `i ↦ i↓[n]` as a presheaf of categories on `[n]`; `i↓[n]` is the
/// full subposet `{k ≥ i}`.
pub fn under_ordinal(n: usize) -> PresheafCat {
    let base = Arc::new(shapes::ordinal(n));
    let fibers: Vec<Arc<FinCat>> = (0..=n)
        .map(|i| {
            let labels: Vec<String> = (i..=n).map(|k| k.to_string()).collect();
            Arc::new(shapes::poset(&labels, |x, y| x <= y))
        })
        .collect();
    let action = base
        .morphisms()
        .map(|m| {
            let (i, j) = (base.src(m).idx(), base.tgt(m).idx());
            Functor::from_objects(
                fibers[j].clone(),
                fibers[i].clone(),
                (j..=n).map(|k| ObjId((k - i) as u32)).collect(),
            )
            .expect("posets are thin")
        })
        .collect();
    PresheafCat::new(base, fibers, action).expect("inclusions compose")
}

/// `σ_!((−)↓[n])` for `σ: [n] -> C`.
pub fn lke_cat_slice(sigma: &Functor, budget: Budget) -> Result<LkeCat, PresentError> {
    let n = sigma.dom().num_objects() - 1;
    lke_cat(&under_ordinal(n), sigma, budget)
}

/// Per-object outcome of comparing `σ_!((−)↓[n])(c)` with `c↓σ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObjectComparison {
    pub object: String,
    pub objects: usize,
    pub morphisms: usize,
    /// An isomorphism was found by search.
    pub isomorphic: bool,
    /// The explicit comparison functors are mutually inverse.
    pub explicit_inverse: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceExtensionReport {
    pub n: usize,
    pub per_object: Vec<ObjectComparison>,
    /// The explicit comparison is natural in `c`.
    pub natural: bool,
}

impl SliceExtensionReport {
    pub fn holds(&self) -> bool {
        self.natural
            && self
                .per_object
                .iter()
                .all(|o| o.isomorphic && o.explicit_inverse)
    }
}

/// The comparison `c↓σ -> σ_!((−)↓[n])(c)`, `(i, g) ↦ [g; i]`, together
/// with its inverse `[g; k ≥ i] ↦ (k, σ(i ≤ k) ∘ g)`.
pub fn slice_comparison(sigma: &Functor, ext: &LkeCat, c: ObjId, k: &Comma) -> (Functor, Functor) {
    let (ord, cc) = (sigma.dom(), sigma.cod());
    let colim = &ext.colimits[c.idx()];
    let step = |i: usize, j: usize| ord.hom(ObjId(i as u32), ObjId(j as u32))[0];
    let obj: Vec<ObjId> = k
        .objs
        .iter()
        .map(|&(i, g)| colim.injections[ext.part_of(c, i, g)].obj(ObjId(0)))
        .collect();
    let mor: Vec<MorId> = k
        .cat
        .morphisms()
        .map(|m| {
            let (i, g) = k.objs[k.cat.src(m).idx()];
            let t = ord.tgt(k.mors[m.idx()]);
            let part = colim.injections[ext.part_of(c, i, g)].clone();
            let fib = part.dom();
            part.mor(fib.hom(ObjId(0), ObjId((t.idx() - i.idx()) as u32))[0])
        })
        .collect();
    let forward = Functor::new_unchecked(k.cat.clone(), colim.cat.clone(), obj, mor);
    let legs: Vec<Functor> = ext.parts[c.idx()]
        .iter()
        .map(|&(i, g)| {
            let part = colim.injections[ext.part_of(c, i, g)].dom().clone();
            let at = |x: ObjId| {
                let t = i.idx() + x.idx();
                k.object_of(ObjId(t as u32), cc.compose(sigma.mor(step(i.idx(), t)), g))
                    .expect("comma object")
            };
            let obj: Vec<ObjId> = part.objects().map(at).collect();
            let mor = part
                .morphisms()
                .map(|m| {
                    let (x, y) = (part.src(m), part.tgt(m));
                    k.morphism_of(at(x), step(i.idx() + x.idx(), i.idx() + y.idx()))
                        .expect("comma morphism")
                })
                .collect();
            Functor::new_unchecked(part, k.cat.clone(), obj, mor)
        })
        .collect();
    let backward = colim.induced(&legs, &k.cat);
    (forward, backward)
}

/// `σ` re-indexed along the standard `[n]`, when its domain has objects
/// `0..=n` in order and exactly one morphism `i -> j` for `i <= j`.
pub fn on_standard_ordinal(sigma: &Functor) -> Option<Functor> {
    let a = sigma.dom();
    let n = a.num_objects().checked_sub(1)?;
    let ord = Arc::new(shapes::ordinal(n));
    let mut mor = vec![MorId(0); ord.num_morphisms()];
    for i in a.objects() {
        for j in a.objects() {
            let (h, k) = (a.hom(i, j), ord.hom(i, j));
            if h.len() != k.len() || h.len() > 1 {
                return None;
            }
            if let (Some(&h), Some(&k)) = (h.first(), k.first()) {
                mor[k.idx()] = sigma.mor(h);
            }
        }
    }
    let obj = a.objects().map(|o| sigma.obj(o)).collect();
    Some(Functor::new(ord, sigma.cod().clone(), obj, mor).expect("same composition table"))
}

/// Compares `σ_!((−)↓[n])` with `(−)↓σ` object by object and checks that
/// the explicit comparison is natural.
pub fn verify_slice_extension(
    sigma: &Functor,
    budget: Budget,
    max_nodes: u64,
) -> Result<SliceExtensionReport, VerifyError> {
    let sigma = &on_standard_ordinal(sigma).ok_or(VerifyError::NotOrdinal)?;
    let ext = lke_cat_slice(sigma, budget)?;
    let cc = sigma.cod();
    let slice = Slice::new(sigma.clone());
    let commas: Vec<Comma> = cc.objects().map(|c| comma(c, &slice)).collect();
    let mut per_object = Vec::new();
    let mut forwards = Vec::new();
    for c in cc.objects() {
        let k = &commas[c.idx()];
        let lhs = &ext.colimits[c.idx()].cat;
        let isomorphic = find_isomorphism(lhs, &k.cat, max_nodes)?.is_some();
        let (fw, bw) = slice_comparison(sigma, &ext, c, k);
        let explicit_inverse = bw.after(&fw).is_identity() && fw.after(&bw).is_identity();
        per_object.push(ObjectComparison {
            object: cc.obj_label(c).to_string(),
            objects: lhs.num_objects(),
            morphisms: lhs.num_morphisms(),
            isomorphic,
            explicit_inverse,
        });
        forwards.push(fw);
    }
    let natural = cc.morphisms().all(|u| {
        let (c2, c) = (cc.src(u), cc.tgt(u));
        let lhs = ext.presheaf.act(u).after(&forwards[c.idx()]);
        let rhs = forwards[c2.idx()].after(&comma_restrict(
            &slice,
            u,
            &commas[c.idx()],
            &commas[c2.idx()],
        ));
        lhs.obj_table() == rhs.obj_table() && lhs.mor_table() == rhs.mor_table()
    });
    Ok(SliceExtensionReport {
        n: sigma.dom().num_objects() - 1,
        per_object,
        natural,
    })
}

/// The comparison functors assembled into a natural transformation
/// `(−)↓σ -> σ_!((−)↓[n])`.
pub fn slice_comparison_transformation(sigma: &Functor, ext: &LkeCat) -> CatNatTrans {
    let cc = sigma.cod();
    let slice = Slice::new(sigma.clone());
    let commas: Vec<Comma> = cc.objects().map(|c| comma(c, &slice)).collect();
    let fibers = commas.iter().map(|k| k.cat.clone()).collect();
    let action = cc
        .morphisms()
        .map(|u| {
            comma_restrict(
                &slice,
                u,
                &commas[cc.tgt(u).idx()],
                &commas[cc.src(u).idx()],
            )
        })
        .collect();
    let src = PresheafCat::new(cc.clone(), fibers, action).expect("commas form a presheaf");
    let comp = cc
        .objects()
        .map(|c| slice_comparison(sigma, ext, c, &commas[c.idx()]).0)
        .collect();
    CatNatTrans::new(src, ext.presheaf.clone(), comp).expect("comparison is natural")
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("the functor's domain is not an ordinal [n] with objects in order")]
    NotOrdinal,
    #[error(transparent)]
    Present(#[from] PresentError),
    #[error(transparent)]
    Search(#[from] SearchExhausted),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{are_isomorphic, DEFAULT_SEARCH_NODES};

    fn ord(n: usize) -> Arc<FinCat> {
        Arc::new(shapes::ordinal(n))
    }

    fn objs(v: &[u32]) -> Vec<ObjId> {
        v.iter().map(|&o| ObjId(o)).collect()
    }

    #[test]
    fn set_extension_along_identity() {
        let c = ord(2);
        let f = PresheafSet::representable(c.clone(), ObjId(1));
        let e = lke_set(&f, &Functor::identity(c.clone()));
        for o in c.objects() {
            assert_eq!(e.presheaf.size(o), f.size(o));
        }
        assert!(lke_set_unit(&f, &Functor::identity(c), &e).is_iso());
    }

    #[test]
    fn terminal_extends_to_components() {
        // σ: [0] -> [1] at 1; c↓σ is nonempty for both objects
        let c = ord(1);
        let s = Functor::from_objects(ord(0), c.clone(), objs(&[1])).unwrap();
        let e = lke_set(&PresheafSet::terminal(ord(0)), &s);
        assert_eq!(
            (e.presheaf.size(ObjId(0)), e.presheaf.size(ObjId(1))),
            (1, 1)
        );
        // σ at 0: nothing maps from 1 into σ
        let s0 = Functor::from_objects(ord(0), c, objs(&[0])).unwrap();
        let e0 = lke_set(&PresheafSet::terminal(ord(0)), &s0);
        assert_eq!(
            (e0.presheaf.size(ObjId(0)), e0.presheaf.size(ObjId(1))),
            (1, 0)
        );
    }

    #[test]
    fn representable_extends_to_representable() {
        let c = ord(2);
        let s = Functor::from_objects(ord(1), c.clone(), objs(&[0, 2])).unwrap();
        let e = lke_set(&PresheafSet::representable(ord(1), ObjId(1)), &s);
        let y = PresheafSet::representable(c.clone(), ObjId(2));
        for o in c.objects() {
            assert_eq!(e.presheaf.size(o), y.size(o));
        }
    }

    #[test]
    fn adjunction_bijection_small() {
        let c = ord(1);
        let s = Functor::from_objects(ord(0), c.clone(), objs(&[1])).unwrap();
        let f = PresheafSet::terminal(ord(0));
        let e = lke_set(&f, &s);
        let unit = lke_set_unit(&f, &s, &e);
        let g = PresheafSet::representable(c.clone(), ObjId(1));
        let left = crate::fincat::all_set_nat_trans(&e.presheaf, &g, 1000);
        let right = crate::fincat::all_set_nat_trans(&f, &g.restrict(&s), 1000);
        assert_eq!(left.len(), right.len());
        let mut images: Vec<_> = left.iter().map(|phi| transpose(phi, &s, &unit)).collect();
        images.dedup();
        assert_eq!(images.len(), right.len());
    }

    #[test]
    fn point_into_category_gives_discrete_homs() {
        let c = Arc::new(shapes::z2());
        let s = Functor::new(ord(0), c.clone(), objs(&[0]), vec![c.id(ObjId(0))]).unwrap();
        let e = lke_cat_slice(&s, Budget::default()).unwrap();
        let fib = e.presheaf.fiber(ObjId(0));
        assert_eq!((fib.num_objects(), fib.num_morphisms()), (2, 2));
    }

    #[test]
    fn identity_gives_commas() {
        let s = Functor::identity(ord(2));
        let r = verify_slice_extension(&s, Budget::default(), DEFAULT_SEARCH_NODES).unwrap();
        assert!(r.holds(), "{r:?}");
    }

    #[test]
    fn edge_into_larger_poset() {
        let s = Functor::from_objects(ord(1), ord(2), objs(&[0, 1])).unwrap();
        let e = lke_cat_slice(&s, Budget::default()).unwrap();
        let slice = Slice::new(s.clone());
        for c in ord(2).objects() {
            assert!(are_isomorphic(e.presheaf.fiber(c), &comma(c, &slice).cat).unwrap());
        }
        assert!(
            verify_slice_extension(&s, Budget::default(), DEFAULT_SEARCH_NODES)
                .unwrap()
                .holds()
        );
        slice_comparison_transformation(&s, &e);
    }

    #[test]
    fn collapsing_functor() {
        let s = Functor::from_objects(ord(2), ord(1), objs(&[0, 1, 1])).unwrap();
        assert!(
            verify_slice_extension(&s, Budget::default(), DEFAULT_SEARCH_NODES)
                .unwrap()
                .holds()
        );
    }
}
