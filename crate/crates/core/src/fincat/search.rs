//! Backtracking search for functors between finite categories.
//!
//! Shared by isomorphism testing, the lifting solver and random instance
//! generation. Objects are assigned first in a connected order, each
//! morphism as soon as both of its endpoints are placed, and every
//! assignment propagates forced composites.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::category::{FinCat, MorId, ObjId};
use super::functor::Functor;

/// Default node budget for one search.
pub const DEFAULT_SEARCH_NODES: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("search exhausted its budget of {cap} nodes")]
pub struct SearchExhausted {
    pub cap: u64,
}

#[derive(Clone, Copy, Debug)]
enum Var {
    Obj(ObjId),
    Mor(MorId),
}

type MorFilter<'a> = Box<dyn Fn(MorId, MorId) -> bool + Send + Sync + 'a>;

/// Configurable search for functors `dom -> cod`.
pub struct FunctorSearch<'a> {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj_cands: Vec<Vec<ObjId>>,
    mor_fixed: Vec<Option<MorId>>,
    filter: Option<MorFilter<'a>>,
    injective: bool,
    max_nodes: u64,
    seed: Option<u64>,
}

impl<'a> FunctorSearch<'a> {
    pub fn new(dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Self {
        let all: Vec<ObjId> = cod.objects().collect();
        FunctorSearch {
            obj_cands: vec![all; dom.num_objects()],
            mor_fixed: vec![None; dom.num_morphisms()],
            dom: dom.clone(),
            cod: cod.clone(),
            filter: None,
            injective: false,
            max_nodes: DEFAULT_SEARCH_NODES,
            seed: None,
        }
    }

    /// Restricts the images allowed for object `o`.
    pub fn restrict_object(mut self, o: ObjId, allowed: impl Fn(ObjId) -> bool) -> Self {
        self.obj_cands[o.idx()].retain(|&t| allowed(t));
        self
    }

    pub fn fix_object(mut self, o: ObjId, t: ObjId) -> Self {
        self.obj_cands[o.idx()].retain(|&x| x == t);
        self
    }

    pub fn fix_morphism(mut self, m: MorId, t: MorId) -> Self {
        match self.mor_fixed[m.idx()] {
            Some(prev) if prev != t => {
                // contradictory constraints: no functor exists
                self.obj_cands[self.dom.src(m).idx()].clear();
            }
            _ => self.mor_fixed[m.idx()] = Some(t),
        }
        let (s, tt) = (self.cod.src(t), self.cod.tgt(t));
        let (ds, dt) = (self.dom.src(m), self.dom.tgt(m));
        self.obj_cands[ds.idx()].retain(|&x| x == s);
        self.obj_cands[dt.idx()].retain(|&x| x == tt);
        self
    }

    /// Only allow `m ↦ t` when `allowed(m, t)` holds.
    pub fn filter(mut self, allowed: impl Fn(MorId, MorId) -> bool + Send + Sync + 'a) -> Self {
        self.filter = Some(Box::new(allowed));
        self
    }

    /// Require injectivity on objects and morphisms.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn max_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n;
        self
    }

    /// Visit candidates in a pseudo-random order derived from `seed`.
    pub fn shuffled(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// The first functor in search order.
    pub fn first(self) -> Result<Option<Functor>, SearchExhausted> {
        let mut found = None;
        self.for_each(|f| {
            found = Some(f.clone());
            ControlFlow::Break(())
        })?;
        Ok(found)
    }

    /// All functors, up to `cap` of them.
    pub fn all(self, cap: usize) -> Result<Vec<Functor>, SearchExhausted> {
        let mut out = Vec::new();
        self.for_each(|f| {
            out.push(f.clone());
            if out.len() >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(out)
    }

    /// Number of functors, counting at most `cap`.
    pub fn count(self, cap: usize) -> Result<usize, SearchExhausted> {
        let mut n = 0usize;
        self.for_each(|_| {
            n += 1;
            if n >= cap {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })?;
        Ok(n)
    }

    /// Calls `visit` on each functor until it breaks.
    pub fn for_each(
        self,
        mut visit: impl FnMut(&Functor) -> ControlFlow<()>,
    ) -> Result<(), SearchExhausted> {
        let order = variable_order(&self.dom);
        let mut st = State {
            obj: vec![None; self.dom.num_objects()],
            mor: vec![None; self.dom.num_morphisms()],
            used_obj: vec![
                false;
                if self.injective {
                    self.cod.num_objects()
                } else {
                    0
                }
            ],
            used_mor: vec![
                false;
                if self.injective {
                    self.cod.num_morphisms()
                } else {
                    0
                }
            ],
            trail: Vec::new(),
            nodes: 0,
            rng: self.seed.map(ChaCha8Rng::seed_from_u64),
        };
        if self.injective
            && (self.dom.num_objects() > self.cod.num_objects()
                || self.dom.num_morphisms() > self.cod.num_morphisms())
        {
            return Ok(());
        }
        match self.rec(&order, 0, &mut st, &mut visit) {
            Err(e) => Err(e),
            Ok(_) => Ok(()),
        }
    }

    fn rec(
        &self,
        order: &[Var],
        mut pos: usize,
        st: &mut State,
        visit: &mut impl FnMut(&Functor) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>, SearchExhausted> {
        while pos < order.len() {
            let assigned = match order[pos] {
                Var::Obj(o) => st.obj[o.idx()].is_some(),
                Var::Mor(m) => st.mor[m.idx()].is_some(),
            };
            if !assigned {
                break;
            }
            pos += 1;
        }
        if pos == order.len() {
            let f = Functor::new_unchecked(
                self.dom.clone(),
                self.cod.clone(),
                st.obj.iter().map(|o| o.unwrap()).collect(),
                st.mor.iter().map(|m| m.unwrap()).collect(),
            );
            return Ok(visit(&f));
        }
        let var = order[pos];
        let mut cands: Vec<u32> = match var {
            Var::Obj(o) => self.obj_cands[o.idx()].iter().map(|x| x.0).collect(),
            Var::Mor(m) => match self.mor_fixed[m.idx()] {
                Some(t) => vec![t.0],
                None => {
                    let s = st.obj[self.dom.src(m).idx()].unwrap();
                    let t = st.obj[self.dom.tgt(m).idx()].unwrap();
                    self.cod.hom(s, t).iter().map(|x| x.0).collect()
                }
            },
        };
        if let Some(rng) = st.rng.as_mut() {
            cands.shuffle(rng);
        }
        for c in cands {
            st.nodes += 1;
            if st.nodes > self.max_nodes {
                return Err(SearchExhausted {
                    cap: self.max_nodes,
                });
            }
            let mark = st.trail.len();
            let ok = match var {
                Var::Obj(o) => self.assign_obj(st, o, ObjId(c)),
                Var::Mor(m) => self.assign_mor(st, m, MorId(c)),
            };
            if ok {
                if let ControlFlow::Break(()) = self.rec(order, pos + 1, st, visit)? {
                    return Ok(ControlFlow::Break(()));
                }
            }
            st.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }

    fn assign_obj(&self, st: &mut State, o: ObjId, t: ObjId) -> bool {
        if self.injective {
            if st.used_obj[t.idx()] {
                return false;
            }
            st.used_obj[t.idx()] = true;
        }
        st.obj[o.idx()] = Some(t);
        st.trail.push(Var::Obj(o));
        self.assign_mor(st, self.dom.id(o), self.cod.id(t))
    }

    fn admissible(&self, st: &State, m: MorId, v: MorId) -> bool {
        if let Some(fx) = self.mor_fixed[m.idx()] {
            if fx != v {
                return false;
            }
        }
        if let Some(s) = st.obj[self.dom.src(m).idx()] {
            if self.cod.src(v) != s {
                return false;
            }
        }
        if let Some(t) = st.obj[self.dom.tgt(m).idx()] {
            if self.cod.tgt(v) != t {
                return false;
            }
        }
        if self.injective && st.used_mor[v.idx()] {
            return false;
        }
        if let Some(f) = &self.filter {
            if !f(m, v) {
                return false;
            }
        }
        true
    }

    fn assign_mor(&self, st: &mut State, m: MorId, v: MorId) -> bool {
        let mut queue = vec![(m, v)];
        while let Some((m, v)) = queue.pop() {
            if let Some(prev) = st.mor[m.idx()] {
                if prev != v {
                    return false;
                }
                continue;
            }
            if !self.admissible(st, m, v) {
                return false;
            }
            st.mor[m.idx()] = Some(v);
            if self.injective {
                st.used_mor[v.idx()] = true;
            }
            st.trail.push(Var::Mor(m));
            let d = &self.dom;
            for &g in d.out_of(d.tgt(m)) {
                if let Some(fg) = st.mor[g.idx()] {
                    queue.push((d.compose(g, m), self.cod.compose(fg, v)));
                }
            }
            for &h in d.incoming(d.src(m)) {
                if let Some(fh) = st.mor[h.idx()] {
                    queue.push((d.compose(m, h), self.cod.compose(v, fh)));
                }
            }
        }
        true
    }
}

struct State {
    obj: Vec<Option<ObjId>>,
    mor: Vec<Option<MorId>>,
    used_obj: Vec<bool>,
    used_mor: Vec<bool>,
    trail: Vec<Var>,
    nodes: u64,
    rng: Option<ChaCha8Rng>,
}

impl State {
    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Var::Obj(o) => {
                    let t = self.obj[o.idx()].take().unwrap();
                    if !self.used_obj.is_empty() {
                        self.used_obj[t.idx()] = false;
                    }
                }
                Var::Mor(m) => {
                    let t = self.mor[m.idx()].take().unwrap();
                    if !self.used_mor.is_empty() {
                        self.used_mor[t.idx()] = false;
                    }
                }
            }
        }
    }
}

/// Objects in breadth-first order along morphisms (components in id order),
/// each followed by the morphisms between it and earlier objects.
fn variable_order(c: &FinCat) -> Vec<Var> {
    let n = c.num_objects();
    let mut placed = vec![false; n];
    let mut objs = Vec::with_capacity(n);
    for start in c.objects() {
        if placed[start.idx()] {
            continue;
        }
        placed[start.idx()] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(o) = queue.pop_front() {
            objs.push(o);
            for &m in c.out_of(o).iter().chain(c.incoming(o)) {
                for x in [c.src(m), c.tgt(m)] {
                    if !placed[x.idx()] {
                        placed[x.idx()] = true;
                        queue.push_back(x);
                    }
                }
            }
        }
    }
    let mut rank = vec![0usize; n];
    for (i, o) in objs.iter().enumerate() {
        rank[o.idx()] = i;
    }
    let mut mors: Vec<MorId> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
    mors.sort_by_key(|&m| (rank[c.src(m).idx()].max(rank[c.tgt(m).idx()]), m));
    let mut out = Vec::with_capacity(n + mors.len());
    let mut k = 0;
    for (i, &o) in objs.iter().enumerate() {
        out.push(Var::Obj(o));
        while k < mors.len() && rank[c.src(mors[k]).idx()].max(rank[c.tgt(mors[k]).idx()]) == i {
            out.push(Var::Mor(mors[k]));
            k += 1;
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct ObjSig {
    out: usize,
    inc: usize,
    endo: usize,
    isos: usize,
}

fn obj_sig(c: &FinCat, o: ObjId) -> ObjSig {
    ObjSig {
        out: c.out_of(o).len(),
        inc: c.incoming(o).len(),
        endo: c.hom(o, o).len(),
        isos: c.out_of(o).iter().filter(|&&m| c.is_iso(m)).count(),
    }
}

fn mor_sig(c: &FinCat, m: MorId) -> (bool, bool, bool) {
    let endo = c.src(m) == c.tgt(m);
    (c.is_iso(m), endo, endo && c.compose(m, m) == m)
}

/// An isomorphism `a -> b`, if one exists.
pub fn find_isomorphism(
    a: &Arc<FinCat>,
    b: &Arc<FinCat>,
    max_nodes: u64,
) -> Result<Option<Functor>, SearchExhausted> {
    if a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms() {
        return Ok(None);
    }
    let mut sa: Vec<ObjSig> = a.objects().map(|o| obj_sig(a, o)).collect();
    let mut sb: Vec<ObjSig> = b.objects().map(|o| obj_sig(b, o)).collect();
    let (ta, tb) = (sa.clone(), sb.clone());
    sa.sort();
    sb.sort();
    if sa != sb {
        return Ok(None);
    }
    let mut s = FunctorSearch::new(a, b).injective().max_nodes(max_nodes);
    for o in a.objects() {
        let want = ta[o.idx()];
        s = s.restrict_object(o, |t| tb[t.idx()] == want);
    }
    let (a2, b2) = (a.clone(), b.clone());
    s.filter(move |m, t| mor_sig(&a2, m) == mor_sig(&b2, t))
        .first()
}

pub fn are_isomorphic(a: &Arc<FinCat>, b: &Arc<FinCat>) -> Result<bool, SearchExhausted> {
    Ok(find_isomorphism(a, b, DEFAULT_SEARCH_NODES)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::shapes;

    #[test]
    fn functor_counts_between_ordinals() {
        // Functors [1] -> [2] are monotone maps: 6 of them.
        let a = Arc::new(shapes::ordinal(1));
        let b = Arc::new(shapes::ordinal(2));
        assert_eq!(FunctorSearch::new(&a, &b).count(usize::MAX).unwrap(), 6);
        // [2] -> [1]: 4 monotone maps
        assert_eq!(FunctorSearch::new(&b, &a).count(usize::MAX).unwrap(), 4);
    }

    #[test]
    fn endofunctors_of_iso_and_z2() {
        let i = Arc::new(shapes::walking_iso());
        assert_eq!(FunctorSearch::new(&i, &i).count(usize::MAX).unwrap(), 4);
        let z = Arc::new(shapes::z2());
        assert_eq!(FunctorSearch::new(&z, &z).count(usize::MAX).unwrap(), 2);
    }

    #[test]
    fn isomorphism_search() {
        let h = Arc::new(shapes::horn());
        let h2 = Arc::new(shapes::horn());
        let iso = find_isomorphism(&h, &h2, 1000).unwrap().unwrap();
        assert!(iso.is_isomorphism());
        let o2 = Arc::new(shapes::ordinal(2));
        assert!(find_isomorphism(&h, &o2, 1000).unwrap().is_none());
    }

    #[test]
    fn cap_is_reported() {
        let a = Arc::new(shapes::discrete(6));
        let b = Arc::new(shapes::discrete(6));
        let r = FunctorSearch::new(&a, &b).max_nodes(10).count(usize::MAX);
        assert_eq!(r, Err(SearchExhausted { cap: 10 }));
    }

    #[test]
    fn shuffled_search_is_deterministic() {
        let a = Arc::new(shapes::ordinal(2));
        let b = Arc::new(shapes::ordinal(3));
        let f1 = FunctorSearch::new(&a, &b).shuffled(7).first().unwrap();
        let f2 = FunctorSearch::new(&a, &b).shuffled(7).first().unwrap();
        assert_eq!(f1, f2);
    }
}
