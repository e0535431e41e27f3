//! Comma categories, components, pullbacks over a base and other basic
//! constructions.

use std::collections::HashMap;
use std::sync::Arc;

use super::category::{CatBuilder, FinCat, MorId, ObjId};
use super::functor::Functor;
use super::marking::Marking;
use super::slice::{MarkedSlice, Slice, SliceError};

/// The comma category `c↓P` together with its encoding.
///
/// Objects are pairs `(a, f)` with `f: c -> P a`, ordered by `(a, f)`.
/// A morphism `(a', f') -> (a, f)` is a morphism `g: a' -> a` of the total
/// category with `P g ∘ f' = f`; morphisms are ordered by source object and
/// then by `g`.
#[derive(Clone, Debug)]
pub struct Comma {
    pub cat: Arc<FinCat>,
    pub apex: ObjId,
    /// Object `i` is `(objs[i].0, objs[i].1)`.
    pub objs: Vec<(ObjId, MorId)>,
    /// Morphism `i` is `g = mors[i]` out of its source object.
    pub mors: Vec<MorId>,
    index: HashMap<(ObjId, MorId), ObjId>,
}

impl Comma {
    pub fn object_of(&self, a: ObjId, f: MorId) -> Option<ObjId> {
        self.index.get(&(a, f)).copied()
    }

    /// The comma morphism out of `src` lying over `g`.
    pub fn morphism_of(&self, src: ObjId, g: MorId) -> Option<MorId> {
        self.cat
            .out_of(src)
            .iter()
            .copied()
            .find(|&m| self.mors[m.idx()] == g)
    }

    /// The forgetful functor `c↓P -> total`.
    pub fn forget(&self, total: &Arc<FinCat>) -> Functor {
        Functor::new_unchecked(
            self.cat.clone(),
            total.clone(),
            self.objs.iter().map(|p| p.0).collect(),
            self.mors.clone(),
        )
    }
}

/// Builds `c↓P`.
pub fn comma(c: ObjId, p: &Slice) -> Comma {
    let base = p.base();
    let total = p.total();
    let mut objs = Vec::new();
    for a in total.objects() {
        for &f in base.hom(c, p.p_obj(a)) {
            objs.push((a, f));
        }
    }
    let index: HashMap<(ObjId, MorId), ObjId> = objs
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, ObjId(i as u32)))
        .collect();
    let mut b = CatBuilder::new();
    for &(a, f) in &objs {
        b.add_object(format!("({},{})", total.obj_label(a), base.mor_label(f)));
    }
    let mut mors = Vec::new();
    let mut by_src: HashMap<(ObjId, MorId), MorId> = HashMap::new();
    for (i, &(a1, f1)) in objs.iter().enumerate() {
        for &g in total.out_of(a1) {
            let f = base.compose(p.p_mor(g), f1);
            let tgt = index[&(total.tgt(g), f)];
            let id = b.add_morphism(
                format!("({},{})", total.mor_label(g), base.mor_label(f1)),
                ObjId(i as u32),
                tgt,
            );
            if total.is_identity(g) {
                b.set_identity(ObjId(i as u32), id);
            }
            mors.push(g);
            by_src.insert((ObjId(i as u32), g), id);
        }
    }
    let srcs: Vec<ObjId> = (0..mors.len()).map(|m| b.src(MorId(m as u32))).collect();
    let cat = b.build(|g2, g1| {
        by_src[&(
            srcs[g1.idx()],
            total.compose(mors[g2.idx()], mors[g1.idx()]),
        )]
    });
    Comma {
        cat: Arc::new(cat),
        apex: c,
        objs,
        mors,
        index,
    }
}

/// `c↓P` with `g` marked iff it is marked in the total category.
pub fn marked_comma(c: ObjId, p: &MarkedSlice) -> (Comma, Marking) {
    let k = comma(c, p.slice());
    let marked = k.mors.iter().map(|&g| p.is_marked(g)).collect();
    let m = Marking::new(k.cat.clone(), marked).expect("identities lie over identities");
    (k, m)
}

/// The functor `d↓P -> c↓P` given by precomposition with `u: c -> d`.
pub fn comma_restrict(p: &Slice, u: MorId, from: &Comma, to: &Comma) -> Functor {
    let base = p.base();
    debug_assert_eq!(from.apex, base.tgt(u));
    debug_assert_eq!(to.apex, base.src(u));
    let obj: Vec<ObjId> = from
        .objs
        .iter()
        .map(|&(a, f)| to.object_of(a, base.compose(f, u)).expect("object exists"))
        .collect();
    let mor: Vec<MorId> = from
        .cat
        .morphisms()
        .map(|m| {
            to.morphism_of(obj[from.cat.src(m).idx()], from.mors[m.idx()])
                .expect("morphism exists")
        })
        .collect();
    Functor::new_unchecked(from.cat.clone(), to.cat.clone(), obj, mor)
}

/// Connected components of a category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Components {
    /// Representative (smallest object id) of each object's component.
    pub rep_of: Vec<ObjId>,
    /// The representatives in increasing order.
    pub reps: Vec<ObjId>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    /// Index of the component of `o` in `reps`.
    pub fn index_of(&self, o: ObjId) -> usize {
        self.reps
            .binary_search(&self.rep_of[o.idx()])
            .expect("rep is listed")
    }
}

/// Minimal union-find with path halving; the root of a class is its
/// smallest element.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    pub fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    /// Returns true if two classes were merged.
    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// `π₀` of a category.
pub fn pi0(c: &FinCat) -> Components {
    let mut uf = UnionFind::new(c.num_objects());
    for m in c.morphisms() {
        uf.union(c.src(m).0, c.tgt(m).0);
    }
    let rep_of: Vec<ObjId> = c.objects().map(|o| ObjId(uf.find(o.0))).collect();
    let mut reps: Vec<ObjId> = rep_of.clone();
    reps.sort();
    reps.dedup();
    Components { rep_of, reps }
}

/// The pullback `P ×_C Q` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub slice: Slice,
    pub left: Functor,
    pub right: Functor,
    pub obj_pairs: Vec<(ObjId, ObjId)>,
    pub mor_pairs: Vec<(MorId, MorId)>,
}

impl Pullback {
    pub fn object_of(&self, a: ObjId, b: ObjId) -> Option<ObjId> {
        self.obj_pairs
            .binary_search(&(a, b))
            .ok()
            .map(|i| ObjId(i as u32))
    }

    pub fn morphism_of(&self, f: MorId, g: MorId) -> Option<MorId> {
        self.mor_pairs
            .binary_search(&(f, g))
            .ok()
            .map(|i| MorId(i as u32))
    }
}

/// Builds `P ×_C Q`; objects and morphisms are pairs in lexicographic order.
pub fn product_over(p: &Slice, q: &Slice) -> Result<Pullback, SliceError> {
    if !(Arc::ptr_eq(p.base(), q.base()) || **p.base() == **q.base()) {
        return Err(SliceError::BaseMismatch);
    }
    let (pt, qt) = (p.total(), q.total());
    let mut b = CatBuilder::new();
    let mut obj_pairs = Vec::new();
    for a in pt.objects() {
        for x in qt.objects() {
            if p.p_obj(a) == q.p_obj(x) {
                obj_pairs.push((a, x));
                b.add_object(format!("({},{})", pt.obj_label(a), qt.obj_label(x)));
            }
        }
    }
    let obj_index = |a: ObjId, x: ObjId| ObjId(obj_pairs.binary_search(&(a, x)).unwrap() as u32);
    let mut mor_pairs = Vec::new();
    for f in pt.morphisms() {
        for g in qt.morphisms() {
            if p.p_mor(f) == q.p_mor(g) {
                mor_pairs.push((f, g));
            }
        }
    }
    for &(f, g) in &mor_pairs {
        let m = b.add_morphism(
            format!("({},{})", pt.mor_label(f), qt.mor_label(g)),
            obj_index(pt.src(f), qt.src(g)),
            obj_index(pt.tgt(f), qt.tgt(g)),
        );
        if pt.is_identity(f) && qt.is_identity(g) {
            b.set_identity(obj_index(pt.src(f), qt.src(g)), m);
        }
    }
    let mor_index = |f: MorId, g: MorId| MorId(mor_pairs.binary_search(&(f, g)).unwrap() as u32);
    let cat = Arc::new(b.build(|m2, m1| {
        let (f2, g2) = mor_pairs[m2.idx()];
        let (f1, g1) = mor_pairs[m1.idx()];
        mor_index(pt.compose(f2, f1), qt.compose(g2, g1))
    }));
    let proj = Functor::new_unchecked(
        cat.clone(),
        p.base().clone(),
        obj_pairs.iter().map(|&(a, _)| p.p_obj(a)).collect(),
        mor_pairs.iter().map(|&(f, _)| p.p_mor(f)).collect(),
    );
    let left = Functor::new_unchecked(
        cat.clone(),
        pt.clone(),
        obj_pairs.iter().map(|x| x.0).collect(),
        mor_pairs.iter().map(|x| x.0).collect(),
    );
    let right = Functor::new_unchecked(
        cat,
        qt.clone(),
        obj_pairs.iter().map(|x| x.1).collect(),
        mor_pairs.iter().map(|x| x.1).collect(),
    );
    Ok(Pullback {
        slice: Slice::new(proj),
        left,
        right,
        obj_pairs,
        mor_pairs,
    })
}

/// Marked pullback: a pair is marked iff both components are.
pub fn marked_product_over(
    p: &MarkedSlice,
    q: &MarkedSlice,
) -> Result<(Pullback, MarkedSlice), SliceError> {
    let pb = product_over(p.slice(), q.slice())?;
    let marked = pb
        .mor_pairs
        .iter()
        .map(|&(f, g)| p.is_marked(f) && q.is_marked(g))
        .collect();
    let marking =
        Marking::new(pb.slice.total().clone(), marked).expect("identity pairs are marked");
    let ms = MarkedSlice::new(pb.slice.proj().clone(), marking)?;
    Ok((pb, ms))
}

/// Full subcategory on `keep` (in the given order) with its inclusion.
pub fn full_subcategory(c: &Arc<FinCat>, keep: &[ObjId]) -> (Arc<FinCat>, Functor) {
    let mut pos = vec![None; c.num_objects()];
    for (i, o) in keep.iter().enumerate() {
        pos[o.idx()] = Some(ObjId(i as u32));
    }
    subcategory(c, keep, |m| {
        pos[c.src(m).idx()].is_some() && pos[c.tgt(m).idx()].is_some()
    })
}

/// Subcategory on the objects `keep` and the morphisms selected by `keep_mor`,
/// which must be closed under composition and contain the identities of
/// `keep`.
pub fn subcategory(
    c: &Arc<FinCat>,
    keep: &[ObjId],
    keep_mor: impl Fn(MorId) -> bool,
) -> (Arc<FinCat>, Functor) {
    let mut pos = vec![None; c.num_objects()];
    for (i, o) in keep.iter().enumerate() {
        pos[o.idx()] = Some(ObjId(i as u32));
    }
    let mut b = CatBuilder::new();
    for &o in keep {
        b.add_object(c.obj_label(o));
    }
    let mut mors = Vec::new();
    let mut mpos = vec![None; c.num_morphisms()];
    for m in c.morphisms() {
        if let (Some(s), Some(t)) = (pos[c.src(m).idx()], pos[c.tgt(m).idx()]) {
            if keep_mor(m) {
                let id = b.add_morphism(c.mor_label(m), s, t);
                if c.is_identity(m) {
                    b.set_identity(s, id);
                }
                mpos[m.idx()] = Some(id);
                mors.push(m);
            }
        }
    }
    let sub = Arc::new(b.build(|g, f| {
        mpos[c.compose(mors[g.idx()], mors[f.idx()]).idx()].expect("closed under composition")
    }));
    let inc = Functor::new_unchecked(sub.clone(), c.clone(), keep.to_vec(), mors);
    (sub, inc)
}

/// Disjoint union with its two coprojections. Labels are prefixed with
/// `l.`/`r.` only when they clash.
pub fn coproduct(a: &Arc<FinCat>, b: &Arc<FinCat>) -> (Arc<FinCat>, Functor, Functor) {
    let clash = a
        .objects()
        .any(|o| b.obj_by_label(a.obj_label(o)).is_some())
        || a.morphisms()
            .any(|m| b.mor_by_label(a.mor_label(m)).is_some());
    let (pl, pr) = if clash { ("l.", "r.") } else { ("", "") };
    let mut bl = CatBuilder::new();
    for o in a.objects() {
        bl.add_object(format!("{pl}{}", a.obj_label(o)));
    }
    for o in b.objects() {
        bl.add_object(format!("{pr}{}", b.obj_label(o)));
    }
    let no = a.num_objects() as u32;
    let nm = a.num_morphisms() as u32;
    for m in a.morphisms() {
        bl.add_morphism(format!("{pl}{}", a.mor_label(m)), a.src(m), a.tgt(m));
    }
    for m in b.morphisms() {
        bl.add_morphism(
            format!("{pr}{}", b.mor_label(m)),
            ObjId(b.src(m).0 + no),
            ObjId(b.tgt(m).0 + no),
        );
    }
    for o in a.objects() {
        bl.set_identity(o, a.id(o));
    }
    for o in b.objects() {
        bl.set_identity(ObjId(o.0 + no), MorId(b.id(o).0 + nm));
    }
    let sum = Arc::new(bl.build(|g, f| {
        if g.0 < nm {
            a.compose(g, f)
        } else {
            MorId(b.compose(MorId(g.0 - nm), MorId(f.0 - nm)).0 + nm)
        }
    }));
    let il = Functor::new_unchecked(
        a.clone(),
        sum.clone(),
        a.objects().collect(),
        a.morphisms().collect(),
    );
    let ir = Functor::new_unchecked(
        b.clone(),
        sum.clone(),
        b.objects().map(|o| ObjId(o.0 + no)).collect(),
        b.morphisms().map(|m| MorId(m.0 + nm)).collect(),
    );
    (sum, il, ir)
}

/// Cartesian product of two categories, pairs in lexicographic order.
pub fn product(a: &Arc<FinCat>, b: &Arc<FinCat>) -> (Arc<FinCat>, Functor, Functor) {
    let pa = Slice::new(Functor::to_terminal(
        a.clone(),
        Arc::new(super::shapes::point()),
    ));
    let pb = Slice::new(Functor::to_terminal(b.clone(), pa.base().clone()));
    let pull = product_over(&pa, &pb).expect("same terminal base");
    (pull.slice.total().clone(), pull.left, pull.right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::shapes;

    fn point_at(c: &Arc<FinCat>, o: ObjId) -> Slice {
        let pt = Arc::new(shapes::point());
        Slice::new(Functor::new(pt, c.clone(), vec![o], vec![c.id(o)]).unwrap())
    }

    #[test]
    fn comma_of_identity_on_interval() {
        let c = Arc::new(shapes::ordinal(1));
        let k = comma(ObjId(0), &Slice::identity(c.clone()));
        assert_eq!(k.cat.num_objects(), 2);
        assert_eq!(k.cat.num_morphisms(), 3);
        assert!(k.cat.check_axioms().is_empty());
    }

    #[test]
    fn empty_commas() {
        let c = Arc::new(shapes::ordinal(1));
        let k = comma(ObjId(1), &point_at(&c, ObjId(0)));
        assert!(k.cat.is_empty());
    }

    #[test]
    fn pi0_examples() {
        assert_eq!(pi0(&shapes::ordinal(1)).count(), 1);
        assert_eq!(pi0(&shapes::discrete(2)).count(), 2);
        assert_eq!(pi0(&shapes::horn()).count(), 1);
        assert_eq!(pi0(&shapes::empty()).count(), 0);
    }

    #[test]
    fn pullback_over_point_is_product() {
        let i = Arc::new(shapes::ordinal(1));
        let (sq, _, _) = product(&i, &i);
        assert_eq!(sq.num_objects(), 4);
        assert_eq!(sq.num_morphisms(), 9);
        assert!(sq.check_axioms().is_empty());
    }

    #[test]
    fn coproduct_sizes() {
        let i = Arc::new(shapes::ordinal(1));
        let (s, l, r) = coproduct(&i, &i);
        assert_eq!(s.num_objects(), 4);
        assert_eq!(pi0(&s).count(), 2);
        assert!(l.is_injective_on_objects() && r.is_injective_on_objects());
    }
}
