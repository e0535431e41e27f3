//! Strict presheaves of finite sets and of finite categories.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCat, MorId, ObjId};
use super::functor::Functor;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum PresheafError {
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("action of `{morphism}` has the wrong domain or codomain")]
    ActionShape { morphism: String },
    #[error("identity `{morphism}` does not act as the identity")]
    Identity { morphism: String },
    #[error("action does not respect the composite {g} ∘ {f}")]
    Composition { g: String, f: String },
    #[error("naturality fails at `{morphism}`")]
    Naturality { morphism: String },
    #[error("component at `{object}` has the wrong domain or codomain")]
    Component { object: String },
    #[error("base categories differ")]
    BaseMismatch,
}

/// A strict functor `C^op -> Set` with finite values.
///
/// `action[f]` for `f: c -> d` is the function `F d -> F c`, stored as the
/// list of images of the elements of `F d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafSet {
    base: Arc<FinCat>,
    elems: Vec<Vec<String>>,
    action: Vec<Vec<u32>>,
}

impl PresheafSet {
    pub fn new(
        base: Arc<FinCat>,
        elems: Vec<Vec<String>>,
        action: Vec<Vec<u32>>,
    ) -> Result<PresheafSet, PresheafError> {
        if elems.len() != base.num_objects() {
            return Err(PresheafError::Shape {
                expected: base.num_objects(),
                got: elems.len(),
            });
        }
        if action.len() != base.num_morphisms() {
            return Err(PresheafError::Shape {
                expected: base.num_morphisms(),
                got: action.len(),
            });
        }
        for f in base.morphisms() {
            let (c, d) = (base.src(f), base.tgt(f));
            let a = &action[f.idx()];
            if a.len() != elems[d.idx()].len()
                || a.iter().any(|&x| x as usize >= elems[c.idx()].len())
            {
                return Err(PresheafError::ActionShape {
                    morphism: base.mor_label(f).into(),
                });
            }
        }
        for o in base.objects() {
            let i = base.id(o);
            if action[i.idx()]
                .iter()
                .enumerate()
                .any(|(k, &x)| x as usize != k)
            {
                return Err(PresheafError::Identity {
                    morphism: base.mor_label(i).into(),
                });
            }
        }
        for f in base.morphisms() {
            for &g in base.out_of(base.tgt(f)) {
                let gf = base.compose(g, f);
                let ok = (0..elems[base.tgt(g).idx()].len())
                    .all(|z| action[gf.idx()][z] == action[f.idx()][action[g.idx()][z] as usize]);
                if !ok {
                    return Err(PresheafError::Composition {
                        g: base.mor_label(g).into(),
                        f: base.mor_label(f).into(),
                    });
                }
            }
        }
        Ok(PresheafSet {
            base,
            elems,
            action,
        })
    }

    pub(crate) fn new_unchecked(
        base: Arc<FinCat>,
        elems: Vec<Vec<String>>,
        action: Vec<Vec<u32>>,
    ) -> PresheafSet {
        if cfg!(debug_assertions) {
            PresheafSet::new(base, elems, action)
                .expect("internal presheaf construction is invalid")
        } else {
            PresheafSet {
                base,
                elems,
                action,
            }
        }
    }

    /// The presheaf with a single element everywhere.
    pub fn terminal(base: Arc<FinCat>) -> PresheafSet {
        let elems = vec![vec!["*".to_string()]; base.num_objects()];
        let action = vec![vec![0]; base.num_morphisms()];
        PresheafSet {
            base,
            elems,
            action,
        }
    }

    /// The presheaf with no elements.
    pub fn empty(base: Arc<FinCat>) -> PresheafSet {
        let elems = vec![Vec::new(); base.num_objects()];
        let action = vec![Vec::new(); base.num_morphisms()];
        PresheafSet {
            base,
            elems,
            action,
        }
    }

    /// `Hom(-, c)` with action by precomposition.
    pub fn representable(base: Arc<FinCat>, c: ObjId) -> PresheafSet {
        let elems: Vec<Vec<String>> = base
            .objects()
            .map(|x| {
                base.hom(x, c)
                    .iter()
                    .map(|&m| base.mor_label(m).to_string())
                    .collect()
            })
            .collect();
        let pos = |m: MorId| {
            base.hom(base.src(m), c)
                .iter()
                .position(|&n| n == m)
                .unwrap() as u32
        };
        let action = base
            .morphisms()
            .map(|f| {
                base.hom(base.tgt(f), c)
                    .iter()
                    .map(|&h| pos(base.compose(h, f)))
                    .collect()
            })
            .collect();
        PresheafSet {
            base,
            elems,
            action,
        }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn size(&self, c: ObjId) -> usize {
        self.elems[c.idx()].len()
    }

    pub fn total_size(&self) -> usize {
        self.elems.iter().map(Vec::len).sum()
    }

    pub fn elem_label(&self, c: ObjId, x: u32) -> &str {
        &self.elems[c.idx()][x as usize]
    }

    pub fn labels(&self, c: ObjId) -> &[String] {
        &self.elems[c.idx()]
    }

    /// `F f (y)` for `f: c -> d`, `y ∈ F d`.
    #[inline]
    pub fn act(&self, f: MorId, y: u32) -> u32 {
        self.action[f.idx()][y as usize]
    }

    pub fn action(&self, f: MorId) -> &[u32] {
        &self.action[f.idx()]
    }

    /// Restriction along `sigma: A -> C`, a presheaf on `A`.
    pub fn restrict(&self, sigma: &Functor) -> PresheafSet {
        assert!(**sigma.cod() == *self.base);
        let a = sigma.dom();
        let elems = a
            .objects()
            .map(|x| self.elems[sigma.obj(x).idx()].clone())
            .collect();
        let action = a
            .morphisms()
            .map(|m| self.action[sigma.mor(m).idx()].clone())
            .collect();
        PresheafSet {
            base: a.clone(),
            elems,
            action,
        }
    }
}

/// A natural transformation between set-valued presheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetNatTrans {
    src: PresheafSet,
    tgt: PresheafSet,
    comp: Vec<Vec<u32>>,
}

impl SetNatTrans {
    pub fn new(
        src: PresheafSet,
        tgt: PresheafSet,
        comp: Vec<Vec<u32>>,
    ) -> Result<SetNatTrans, PresheafError> {
        if *src.base != *tgt.base {
            return Err(PresheafError::BaseMismatch);
        }
        let base = src.base.clone();
        if comp.len() != base.num_objects() {
            return Err(PresheafError::Shape {
                expected: base.num_objects(),
                got: comp.len(),
            });
        }
        for c in base.objects() {
            let k = &comp[c.idx()];
            if k.len() != src.size(c) || k.iter().any(|&x| x as usize >= tgt.size(c)) {
                return Err(PresheafError::Component {
                    object: base.obj_label(c).into(),
                });
            }
        }
        if let Some(f) = naturality_failure(&src, &tgt, &comp) {
            return Err(PresheafError::Naturality {
                morphism: base.mor_label(f).into(),
            });
        }
        Ok(SetNatTrans { src, tgt, comp })
    }

    pub fn identity(f: PresheafSet) -> SetNatTrans {
        let comp = f
            .base
            .objects()
            .map(|c| (0..f.size(c) as u32).collect())
            .collect();
        SetNatTrans {
            src: f.clone(),
            tgt: f,
            comp,
        }
    }

    pub fn src(&self) -> &PresheafSet {
        &self.src
    }

    pub fn tgt(&self) -> &PresheafSet {
        &self.tgt
    }

    #[inline]
    pub fn at(&self, c: ObjId, x: u32) -> u32 {
        self.comp[c.idx()][x as usize]
    }

    pub fn component(&self, c: ObjId) -> &[u32] {
        &self.comp[c.idx()]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &SetNatTrans) -> SetNatTrans {
        let comp = first
            .comp
            .iter()
            .enumerate()
            .map(|(c, k)| k.iter().map(|&x| self.comp[c][x as usize]).collect())
            .collect();
        SetNatTrans {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            comp,
        }
    }

    /// True when every component is a bijection.
    pub fn is_iso(&self) -> bool {
        self.src.base.objects().all(|c| {
            let k = &self.comp[c.idx()];
            if k.len() != self.tgt.size(c) {
                return false;
            }
            let mut seen = vec![false; k.len()];
            k.iter()
                .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
        })
    }

    pub fn is_identity(&self) -> bool {
        self.comp
            .iter()
            .all(|k| k.iter().enumerate().all(|(i, &x)| x as usize == i))
    }
}

fn naturality_failure(src: &PresheafSet, tgt: &PresheafSet, comp: &[Vec<u32>]) -> Option<MorId> {
    let base = &src.base;
    base.morphisms().find(|&f| {
        let (c, d) = (base.src(f), base.tgt(f));
        (0..src.size(d) as u32)
            .any(|y| comp[c.idx()][src.act(f, y) as usize] != tgt.act(f, comp[d.idx()][y as usize]))
    })
}

/// Every natural transformation `src => tgt`, by backtracking over objects
/// in id order; stops after `cap` results.
pub fn all_set_nat_trans(src: &PresheafSet, tgt: &PresheafSet, cap: usize) -> Vec<SetNatTrans> {
    let base = src.base.clone();
    let n = base.num_objects();
    let mut comp: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut out = Vec::new();
    fn consistent(
        base: &FinCat,
        src: &PresheafSet,
        tgt: &PresheafSet,
        comp: &[Vec<u32>],
        upto: usize,
    ) -> bool {
        base.morphisms().all(|f| {
            let (c, d) = (base.src(f).idx(), base.tgt(f).idx());
            if c > upto || d > upto {
                return true;
            }
            (0..src.size(ObjId(d as u32)) as u32)
                .all(|y| comp[c][src.act(f, y) as usize] == tgt.act(f, comp[d][y as usize]))
        })
    }
    fn rec(
        i: usize,
        base: &FinCat,
        src: &PresheafSet,
        tgt: &PresheafSet,
        comp: &mut Vec<Vec<u32>>,
        out: &mut Vec<SetNatTrans>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if i == base.num_objects() {
            out.push(SetNatTrans {
                src: src.clone(),
                tgt: tgt.clone(),
                comp: comp.clone(),
            });
            return;
        }
        let (s, t) = (src.size(ObjId(i as u32)), tgt.size(ObjId(i as u32)));
        if s > 0 && t == 0 {
            return;
        }
        let mut k = vec![0u32; s];
        loop {
            comp[i] = k.clone();
            if consistent(base, src, tgt, comp, i) {
                rec(i + 1, base, src, tgt, comp, out, cap);
                if out.len() >= cap {
                    return;
                }
            }
            // next function in lexicographic order
            let mut p = s;
            loop {
                if p == 0 {
                    comp[i].clear();
                    return;
                }
                p -= 1;
                k[p] += 1;
                if (k[p] as usize) < t {
                    break;
                }
                k[p] = 0;
            }
        }
    }
    rec(0, &base, src, tgt, &mut comp, &mut out, cap);
    out
}

/// A strict functor `C^op -> Cat` with finite values.
///
/// `action[f]` for `f: c -> d` is a functor `F d -> F c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresheafCat {
    base: Arc<FinCat>,
    fibers: Vec<Arc<FinCat>>,
    action: Vec<Functor>,
}

impl PresheafCat {
    pub fn new(
        base: Arc<FinCat>,
        fibers: Vec<Arc<FinCat>>,
        action: Vec<Functor>,
    ) -> Result<PresheafCat, PresheafError> {
        if fibers.len() != base.num_objects() {
            return Err(PresheafError::Shape {
                expected: base.num_objects(),
                got: fibers.len(),
            });
        }
        if action.len() != base.num_morphisms() {
            return Err(PresheafError::Shape {
                expected: base.num_morphisms(),
                got: action.len(),
            });
        }
        for f in base.morphisms() {
            let a = &action[f.idx()];
            if **a.dom() != *fibers[base.tgt(f).idx()] || **a.cod() != *fibers[base.src(f).idx()] {
                return Err(PresheafError::ActionShape {
                    morphism: base.mor_label(f).into(),
                });
            }
        }
        let action: Vec<Functor> = base
            .morphisms()
            .map(|f| {
                action[f.idx()]
                    .with_dom(fibers[base.tgt(f).idx()].clone())
                    .with_cod(fibers[base.src(f).idx()].clone())
            })
            .collect();
        for o in base.objects() {
            let i = base.id(o);
            if !action[i.idx()].is_identity() {
                return Err(PresheafError::Identity {
                    morphism: base.mor_label(i).into(),
                });
            }
        }
        for f in base.morphisms() {
            for &g in base.out_of(base.tgt(f)) {
                let gf = base.compose(g, f);
                let lhs = &action[gf.idx()];
                let rhs = action[f.idx()].after(&action[g.idx()]);
                if lhs.obj_table() != rhs.obj_table() || lhs.mor_table() != rhs.mor_table() {
                    return Err(PresheafError::Composition {
                        g: base.mor_label(g).into(),
                        f: base.mor_label(f).into(),
                    });
                }
            }
        }
        Ok(PresheafCat {
            base,
            fibers,
            action,
        })
    }

    /// The constant presheaf at `fiber`.
    pub fn constant(base: Arc<FinCat>, fiber: Arc<FinCat>) -> PresheafCat {
        let fibers = vec![fiber.clone(); base.num_objects()];
        let action = vec![Functor::identity(fiber); base.num_morphisms()];
        PresheafCat {
            base,
            fibers,
            action,
        }
    }

    /// A set-valued presheaf viewed as a presheaf of discrete categories.
    pub fn discrete(f: &PresheafSet) -> PresheafCat {
        use super::category::CatBuilder;
        let base = f.base.clone();
        let fibers: Vec<Arc<FinCat>> = base
            .objects()
            .map(|c| {
                let mut b = CatBuilder::new();
                for l in f.labels(c) {
                    b.add_object(l.clone());
                }
                for (i, l) in f.labels(c).iter().enumerate() {
                    let m = b.add_morphism(format!("id_{l}"), ObjId(i as u32), ObjId(i as u32));
                    b.set_identity(ObjId(i as u32), m);
                }
                Arc::new(b.build(|g, _| g))
            })
            .collect();
        let action = base
            .morphisms()
            .map(|m| {
                let t: Vec<ObjId> = f.action(m).iter().map(|&x| ObjId(x)).collect();
                let tm: Vec<MorId> = t.iter().map(|o| MorId(o.0)).collect();
                Functor::new_unchecked(
                    fibers[base.tgt(m).idx()].clone(),
                    fibers[base.src(m).idx()].clone(),
                    t,
                    tm,
                )
            })
            .collect();
        PresheafCat {
            base,
            fibers,
            action,
        }
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    /// Restriction along `sigma: A -> C`, a presheaf on `A`.
    pub fn restrict(&self, sigma: &Functor) -> PresheafCat {
        assert!(**sigma.cod() == *self.base);
        let a = sigma.dom();
        PresheafCat {
            base: a.clone(),
            fibers: a
                .objects()
                .map(|x| self.fibers[sigma.obj(x).idx()].clone())
                .collect(),
            action: a
                .morphisms()
                .map(|m| self.action[sigma.mor(m).idx()].clone())
                .collect(),
        }
    }

    pub fn fiber(&self, c: ObjId) -> &Arc<FinCat> {
        &self.fibers[c.idx()]
    }

    pub fn fibers(&self) -> &[Arc<FinCat>] {
        &self.fibers
    }

    /// The functor `F f: F d -> F c` for `f: c -> d`.
    pub fn act(&self, f: MorId) -> &Functor {
        &self.action[f.idx()]
    }
}

/// A natural transformation between category-valued presheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatNatTrans {
    src: PresheafCat,
    tgt: PresheafCat,
    comp: Vec<Functor>,
}

impl CatNatTrans {
    pub fn new(
        src: PresheafCat,
        tgt: PresheafCat,
        comp: Vec<Functor>,
    ) -> Result<CatNatTrans, PresheafError> {
        if *src.base != *tgt.base {
            return Err(PresheafError::BaseMismatch);
        }
        let base = src.base.clone();
        if comp.len() != base.num_objects() {
            return Err(PresheafError::Shape {
                expected: base.num_objects(),
                got: comp.len(),
            });
        }
        for c in base.objects() {
            let k = &comp[c.idx()];
            if **k.dom() != **src.fiber(c) || **k.cod() != **tgt.fiber(c) {
                return Err(PresheafError::Component {
                    object: base.obj_label(c).into(),
                });
            }
        }
        let t = CatNatTrans { src, tgt, comp };
        if let Some(f) = t.naturality_failure() {
            return Err(PresheafError::Naturality {
                morphism: base.mor_label(f).into(),
            });
        }
        Ok(t)
    }

    pub fn identity(f: PresheafCat) -> CatNatTrans {
        let comp = f
            .fibers
            .iter()
            .map(|x| Functor::identity(x.clone()))
            .collect();
        CatNatTrans {
            src: f.clone(),
            tgt: f,
            comp,
        }
    }

    /// First base morphism at which the naturality square fails.
    pub fn naturality_failure(&self) -> Option<MorId> {
        let base = &self.src.base;
        base.morphisms().find(|&f| {
            let (c, d) = (base.src(f), base.tgt(f));
            let lhs = self.comp[c.idx()].after(self.src.act(f));
            let rhs = self.tgt.act(f).after(&self.comp[d.idx()]);
            lhs.obj_table() != rhs.obj_table() || lhs.mor_table() != rhs.mor_table()
        })
    }

    pub fn src(&self) -> &PresheafCat {
        &self.src
    }

    pub fn tgt(&self) -> &PresheafCat {
        &self.tgt
    }

    pub fn at(&self, c: ObjId) -> &Functor {
        &self.comp[c.idx()]
    }

    pub fn components(&self) -> &[Functor] {
        &self.comp
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CatNatTrans) -> CatNatTrans {
        let comp = first
            .comp
            .iter()
            .zip(&self.comp)
            .map(|(a, b)| b.after(a))
            .collect();
        CatNatTrans {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            comp,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::shapes;

    #[test]
    fn representable_is_valid() {
        let c = Arc::new(shapes::ordinal(2));
        for o in c.objects() {
            let r = PresheafSet::representable(c.clone(), o);
            PresheafSet::new(r.base.clone(), r.elems.clone(), r.action.clone()).unwrap();
        }
    }

    #[test]
    fn contravariance_is_checked() {
        // On [2], send 0->1 and 1->2 to maps that do not compose to 0->2.
        let c = Arc::new(shapes::ordinal(2));
        let elems = vec![
            vec!["a".into(), "b".into()],
            vec!["x".into()],
            vec!["y".into()],
        ];
        let mut action = vec![Vec::new(); c.num_morphisms()];
        for m in c.morphisms() {
            let (s, t) = (c.src(m).idx(), c.tgt(m).idx());
            action[m.idx()] = if s == t {
                (0..elems[s].len() as u32).collect()
            } else if s == 0 && t == 1 {
                vec![0]
            } else if s == 0 {
                vec![1]
            } else {
                vec![0]
            };
        }
        let err = PresheafSet::new(c, elems, action).unwrap_err();
        assert!(matches!(err, PresheafError::Composition { .. }));
    }

    #[test]
    fn nat_trans_enumeration_counts() {
        let c = Arc::new(shapes::ordinal(1));
        let y0 = PresheafSet::representable(c.clone(), ObjId(0));
        let y1 = PresheafSet::representable(c.clone(), ObjId(1));
        // Yoneda: Nat(y0, y1) = Hom(0, 1) has one element, Nat(y1, y0) = Hom(1, 0) is empty.
        assert_eq!(all_set_nat_trans(&y0, &y1, 100).len(), 1);
        assert_eq!(all_set_nat_trans(&y1, &y0, 100).len(), 0);
        assert_eq!(all_set_nat_trans(&y1, &y1, 100).len(), 1);
    }
}
