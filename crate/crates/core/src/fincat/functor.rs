use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCat, MorId, ObjId};

/// Why a candidate functor table is not a functor.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctorError {
    #[error("object map has {got} entries, domain has {expected} objects")]
    ObjectCount { expected: usize, got: usize },
    #[error("morphism map has {got} entries, domain has {expected} morphisms")]
    MorphismCount { expected: usize, got: usize },
    #[error("image of `{label}` is out of range")]
    OutOfRange { label: String },
    #[error("image of `{morphism}` has the wrong endpoints")]
    Endpoints { morphism: String },
    #[error("identity of `{object}` is not sent to an identity")]
    Identity { object: String },
    #[error("composite {g} ∘ {f} is not preserved")]
    Composition { g: String, f: String },
}

/// A functor between two finite categories, stored as id tables.
#[derive(Clone)]
pub struct Functor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj: Vec<ObjId>,
    mor: Vec<MorId>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.dom, &other.dom) || self.dom == other.dom)
            && (Arc::ptr_eq(&self.cod, &other.cod) || self.cod == other.cod)
            && self.obj == other.obj
            && self.mor == other.mor
    }
}

impl Eq for Functor {}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objs: Vec<String> = self
            .dom
            .objects()
            .map(|o| {
                format!(
                    "{} -> {}",
                    self.dom.obj_label(o),
                    self.cod.obj_label(self.obj[o.idx()])
                )
            })
            .collect();
        let mors: Vec<String> = self
            .dom
            .morphisms()
            .map(|m| {
                format!(
                    "{} -> {}",
                    self.dom.mor_label(m),
                    self.cod.mor_label(self.mor[m.idx()])
                )
            })
            .collect();
        f.debug_struct("Functor")
            .field("objects", &objs)
            .field("morphisms", &mors)
            .finish()
    }
}

impl Functor {
    /// Validates the tables against the functor laws.
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<ObjId>,
        mor: Vec<MorId>,
    ) -> Result<Functor, FunctorError> {
        if obj.len() != dom.num_objects() {
            return Err(FunctorError::ObjectCount {
                expected: dom.num_objects(),
                got: obj.len(),
            });
        }
        if mor.len() != dom.num_morphisms() {
            return Err(FunctorError::MorphismCount {
                expected: dom.num_morphisms(),
                got: mor.len(),
            });
        }
        for o in dom.objects() {
            if obj[o.idx()].idx() >= cod.num_objects() {
                return Err(FunctorError::OutOfRange {
                    label: dom.obj_label(o).into(),
                });
            }
        }
        for m in dom.morphisms() {
            let fm = mor[m.idx()];
            if fm.idx() >= cod.num_morphisms() {
                return Err(FunctorError::OutOfRange {
                    label: dom.mor_label(m).into(),
                });
            }
            if cod.src(fm) != obj[dom.src(m).idx()] || cod.tgt(fm) != obj[dom.tgt(m).idx()] {
                return Err(FunctorError::Endpoints {
                    morphism: dom.mor_label(m).into(),
                });
            }
        }
        for o in dom.objects() {
            if mor[dom.id(o).idx()] != cod.id(obj[o.idx()]) {
                return Err(FunctorError::Identity {
                    object: dom.obj_label(o).into(),
                });
            }
        }
        for f in dom.morphisms() {
            for &g in dom.out_of(dom.tgt(f)) {
                let gf = dom.compose(g, f);
                if mor[gf.idx()] != cod.compose(mor[g.idx()], mor[f.idx()]) {
                    return Err(FunctorError::Composition {
                        g: dom.mor_label(g).into(),
                        f: dom.mor_label(f).into(),
                    });
                }
            }
        }
        Ok(Functor { dom, cod, obj, mor })
    }

    /// Builds a functor whose laws are guaranteed by construction.
    /// Debug builds still validate.
    pub fn new_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<ObjId>,
        mor: Vec<MorId>,
    ) -> Functor {
        if cfg!(debug_assertions) {
            match Functor::new(dom, cod, obj, mor) {
                Ok(f) => f,
                Err(e) => panic!("internal functor construction is invalid: {e}"),
            }
        } else {
            Functor { dom, cod, obj, mor }
        }
    }

    /// The functor determined by an object map into a category whose hom-sets
    /// between the relevant objects are singletons (e.g. a poset).
    pub fn from_objects(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<ObjId>,
    ) -> Result<Functor, FunctorError> {
        let mut mor = Vec::with_capacity(dom.num_morphisms());
        for m in dom.morphisms() {
            let (a, b) = (obj[dom.src(m).idx()], obj[dom.tgt(m).idx()]);
            match cod.hom(a, b) {
                [h] => mor.push(*h),
                _ => {
                    return Err(FunctorError::Endpoints {
                        morphism: dom.mor_label(m).to_string(),
                    })
                }
            }
        }
        Functor::new(dom, cod, obj, mor)
    }

    pub fn identity(c: Arc<FinCat>) -> Functor {
        let obj = c.objects().collect();
        let mor = c.morphisms().collect();
        Functor {
            dom: c.clone(),
            cod: c,
            obj,
            mor,
        }
    }

    /// The unique functor out of the empty category.
    pub fn from_empty(empty: Arc<FinCat>, cod: Arc<FinCat>) -> Functor {
        assert!(empty.is_empty());
        Functor {
            dom: empty,
            cod,
            obj: vec![],
            mor: vec![],
        }
    }

    /// The functor to a one-object category with only an identity.
    pub fn to_terminal(dom: Arc<FinCat>, terminal: Arc<FinCat>) -> Functor {
        assert_eq!(terminal.num_objects(), 1);
        assert_eq!(terminal.num_morphisms(), 1);
        let obj = vec![ObjId(0); dom.num_objects()];
        let mor = vec![MorId(0); dom.num_morphisms()];
        Functor {
            dom,
            cod: terminal,
            obj,
            mor,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        assert!(
            Arc::ptr_eq(first.cod(), &self.dom) || **first.cod() == *self.dom,
            "functor composition: codomain/domain mismatch"
        );
        Functor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj: first.obj.iter().map(|o| self.obj[o.idx()]).collect(),
            mor: first.mor.iter().map(|m| self.mor[m.idx()]).collect(),
        }
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    #[inline]
    pub fn obj(&self, o: ObjId) -> ObjId {
        self.obj[o.idx()]
    }

    #[inline]
    pub fn mor(&self, m: MorId) -> MorId {
        self.mor[m.idx()]
    }

    pub fn obj_table(&self) -> &[ObjId] {
        &self.obj
    }

    pub fn mor_table(&self) -> &[MorId] {
        &self.mor
    }

    /// Same tables with a replaced (equal) codomain; used to re-target onto
    /// a shared `Arc` of an equal category.
    pub fn with_cod(&self, cod: Arc<FinCat>) -> Functor {
        debug_assert!(*cod == *self.cod);
        Functor {
            dom: self.dom.clone(),
            cod,
            obj: self.obj.clone(),
            mor: self.mor.clone(),
        }
    }

    pub fn with_dom(&self, dom: Arc<FinCat>) -> Functor {
        debug_assert!(*dom == *self.dom);
        Functor {
            dom,
            cod: self.cod.clone(),
            obj: self.obj.clone(),
            mor: self.mor.clone(),
        }
    }

    pub fn is_injective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.cod.num_objects()];
        self.obj
            .iter()
            .all(|o| !std::mem::replace(&mut seen[o.idx()], true))
    }

    pub fn is_surjective_on_objects(&self) -> bool {
        let mut seen = vec![false; self.cod.num_objects()];
        for o in &self.obj {
            seen[o.idx()] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// True when the functor is bijective on objects and morphisms, hence
    /// an isomorphism of categories.
    pub fn is_isomorphism(&self) -> bool {
        self.dom.num_objects() == self.cod.num_objects()
            && self.dom.num_morphisms() == self.cod.num_morphisms()
            && self.is_injective_on_objects()
            && {
                let mut seen = vec![false; self.cod.num_morphisms()];
                self.mor
                    .iter()
                    .all(|m| !std::mem::replace(&mut seen[m.idx()], true))
            }
    }

    /// The inverse functor of an isomorphism.
    pub fn inverse(&self) -> Option<Functor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut obj = vec![ObjId(0); self.cod.num_objects()];
        for (i, o) in self.obj.iter().enumerate() {
            obj[o.idx()] = ObjId(i as u32);
        }
        let mut mor = vec![MorId(0); self.cod.num_morphisms()];
        for (i, m) in self.mor.iter().enumerate() {
            mor[m.idx()] = MorId(i as u32);
        }
        Some(Functor {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            obj,
            mor,
        })
    }

    /// True when every object and morphism is sent to itself.
    pub fn is_identity(&self) -> bool {
        *self.dom == *self.cod
            && self.obj.iter().enumerate().all(|(i, o)| o.idx() == i)
            && self.mor.iter().enumerate().all(|(i, m)| m.idx() == i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::shapes;

    #[test]
    fn identity_and_composition() {
        let c = Arc::new(shapes::ordinal(2));
        let id = Functor::identity(c.clone());
        assert!(id.is_identity());
        assert_eq!(id.after(&id), id);
        assert!(id.is_isomorphism());
    }

    #[test]
    fn rejects_non_functor() {
        let c = Arc::new(shapes::ordinal(1));
        let d = Arc::new(shapes::ordinal(1));
        let a = c.mor_by_label("0->1").unwrap();
        let mut mor: Vec<MorId> = c.morphisms().collect();
        // send the arrow to an identity while objects stay apart
        mor[a.idx()] = d.id(ObjId(0));
        let err = Functor::new(c.clone(), d, c.objects().collect(), mor).unwrap_err();
        assert!(matches!(err, FunctorError::Endpoints { .. }));
    }
}
