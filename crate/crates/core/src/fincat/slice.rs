use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCat, MorId, ObjId};
use super::functor::Functor;
use super::marking::Marking;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum SliceError {
    #[error("base categories differ")]
    BaseMismatch,
    #[error("marking is not on the total category")]
    MarkingCarrier,
    #[error("functor does not commute with the projections at `{0}`")]
    NotOverBase(String),
    #[error("functor does not preserve the marking at `{0}`")]
    MarkingNotPreserved(String),
    #[error("functor endpoints do not match the slices")]
    Endpoints,
}

/// An object of `Cat/C`: a functor `P: total -> base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    proj: Functor,
}

impl Slice {
    pub fn new(proj: Functor) -> Slice {
        Slice { proj }
    }

    /// `id_C` as a slice over `C`.
    pub fn identity(c: Arc<FinCat>) -> Slice {
        Slice {
            proj: Functor::identity(c),
        }
    }

    pub fn proj(&self) -> &Functor {
        &self.proj
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.proj.dom()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.proj.cod()
    }

    #[inline]
    pub fn p_obj(&self, a: ObjId) -> ObjId {
        self.proj.obj(a)
    }

    #[inline]
    pub fn p_mor(&self, m: MorId) -> MorId {
        self.proj.mor(m)
    }
}

/// An object of `Cat⁺/C♯`: a marked total category over a base whose every
/// morphism counts as marked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSlice {
    slice: Slice,
    marking: Marking,
}

impl MarkedSlice {
    pub fn new(proj: Functor, marking: Marking) -> Result<MarkedSlice, SliceError> {
        if !(Arc::ptr_eq(marking.carrier(), proj.dom()) || **marking.carrier() == **proj.dom()) {
            return Err(SliceError::MarkingCarrier);
        }
        let marking = marking.with_carrier(proj.dom().clone());
        Ok(MarkedSlice {
            slice: Slice::new(proj),
            marking,
        })
    }

    pub fn minimal(slice: Slice) -> MarkedSlice {
        let marking = Marking::minimal(slice.total().clone());
        MarkedSlice { slice, marking }
    }

    pub fn maximal(slice: Slice) -> MarkedSlice {
        let marking = Marking::maximal(slice.total().clone());
        MarkedSlice { slice, marking }
    }

    pub fn natural(slice: Slice) -> MarkedSlice {
        let marking = Marking::natural(slice.total().clone());
        MarkedSlice { slice, marking }
    }

    /// `C♯` over itself.
    pub fn identity(c: Arc<FinCat>) -> MarkedSlice {
        MarkedSlice::maximal(Slice::identity(c))
    }

    pub fn slice(&self) -> &Slice {
        &self.slice
    }

    pub fn marking(&self) -> &Marking {
        &self.marking
    }

    pub fn proj(&self) -> &Functor {
        self.slice.proj()
    }

    pub fn total(&self) -> &Arc<FinCat> {
        self.slice.total()
    }

    pub fn base(&self) -> &Arc<FinCat> {
        self.slice.base()
    }

    #[inline]
    pub fn is_marked(&self, m: MorId) -> bool {
        self.marking.is_marked(m)
    }

    pub fn with_marking(&self, marking: Marking) -> Result<MarkedSlice, SliceError> {
        MarkedSlice::new(self.proj().clone(), marking)
    }
}

fn same(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A morphism of `Cat/C`: a functor commuting with the projections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMorphism {
    src: Slice,
    tgt: Slice,
    functor: Functor,
}

impl SliceMorphism {
    pub fn new(src: Slice, tgt: Slice, functor: Functor) -> Result<SliceMorphism, SliceError> {
        if !same(src.base(), tgt.base()) {
            return Err(SliceError::BaseMismatch);
        }
        if !same(functor.dom(), src.total()) || !same(functor.cod(), tgt.total()) {
            return Err(SliceError::Endpoints);
        }
        let s = src.total();
        for o in s.objects() {
            if tgt.p_obj(functor.obj(o)) != src.p_obj(o) {
                return Err(SliceError::NotOverBase(s.obj_label(o).into()));
            }
        }
        for m in s.morphisms() {
            if tgt.p_mor(functor.mor(m)) != src.p_mor(m) {
                return Err(SliceError::NotOverBase(s.mor_label(m).into()));
            }
        }
        Ok(SliceMorphism { src, tgt, functor })
    }

    pub fn identity(p: Slice) -> SliceMorphism {
        let functor = Functor::identity(p.total().clone());
        SliceMorphism {
            src: p.clone(),
            tgt: p,
            functor,
        }
    }

    pub fn src(&self) -> &Slice {
        &self.src
    }

    pub fn tgt(&self) -> &Slice {
        &self.tgt
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }
}

/// A marking-preserving functor between marked slices over the same base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedSliceMorphism {
    src: MarkedSlice,
    tgt: MarkedSlice,
    functor: Functor,
}

impl MarkedSliceMorphism {
    pub fn new(
        src: MarkedSlice,
        tgt: MarkedSlice,
        functor: Functor,
    ) -> Result<MarkedSliceMorphism, SliceError> {
        SliceMorphism::new(src.slice().clone(), tgt.slice().clone(), functor.clone())?;
        for m in src.total().morphisms() {
            if src.is_marked(m) && !tgt.is_marked(functor.mor(m)) {
                return Err(SliceError::MarkingNotPreserved(
                    src.total().mor_label(m).into(),
                ));
            }
        }
        Ok(MarkedSliceMorphism { src, tgt, functor })
    }

    pub fn identity(p: MarkedSlice) -> MarkedSliceMorphism {
        let functor = Functor::identity(p.total().clone());
        MarkedSliceMorphism {
            src: p.clone(),
            tgt: p,
            functor,
        }
    }

    pub fn src(&self) -> &MarkedSlice {
        &self.src
    }

    pub fn tgt(&self) -> &MarkedSlice {
        &self.tgt
    }

    pub fn functor(&self) -> &Functor {
        &self.functor
    }

    pub fn underlying(&self) -> SliceMorphism {
        SliceMorphism {
            src: self.src.slice().clone(),
            tgt: self.tgt.slice().clone(),
            functor: self.functor.clone(),
        }
    }
}
