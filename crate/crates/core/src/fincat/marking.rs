use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCat, MorId};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum MarkingError {
    #[error("marking has {got} flags for {expected} morphisms")]
    Length { expected: usize, got: usize },
    #[error("identity `{0}` is not marked")]
    IdentityUnmarked(String),
    #[error("unknown morphism `{0}` in marking")]
    UnknownMorphism(String),
}

/// A category together with a set of marked morphisms containing every
/// identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Marking {
    carrier: Arc<FinCat>,
    marked: Vec<bool>,
}

impl Marking {
    pub fn new(carrier: Arc<FinCat>, marked: Vec<bool>) -> Result<Marking, MarkingError> {
        if marked.len() != carrier.num_morphisms() {
            return Err(MarkingError::Length {
                expected: carrier.num_morphisms(),
                got: marked.len(),
            });
        }
        for o in carrier.objects() {
            let i = carrier.id(o);
            if !marked[i.idx()] {
                return Err(MarkingError::IdentityUnmarked(carrier.mor_label(i).into()));
            }
        }
        Ok(Marking { carrier, marked })
    }

    /// Identities plus the listed morphisms.
    pub fn generated_by(carrier: Arc<FinCat>, extra: impl IntoIterator<Item = MorId>) -> Marking {
        let mut marked = vec![false; carrier.num_morphisms()];
        for o in carrier.objects() {
            marked[carrier.id(o).idx()] = true;
        }
        for m in extra {
            marked[m.idx()] = true;
        }
        Marking { carrier, marked }
    }

    /// Identities plus the morphisms with the given labels.
    pub fn from_labels(carrier: Arc<FinCat>, labels: &[&str]) -> Result<Marking, MarkingError> {
        let mut ids = Vec::new();
        for l in labels {
            ids.push(
                carrier
                    .mor_by_label(l)
                    .ok_or_else(|| MarkingError::UnknownMorphism(l.to_string()))?,
            );
        }
        Ok(Marking::generated_by(carrier, ids))
    }

    /// Only identities are marked.
    pub fn minimal(carrier: Arc<FinCat>) -> Marking {
        Marking::generated_by(carrier, [])
    }

    /// Every morphism is marked.
    pub fn maximal(carrier: Arc<FinCat>) -> Marking {
        let n = carrier.num_morphisms();
        Marking {
            carrier,
            marked: vec![true; n],
        }
    }

    /// Exactly the isomorphisms are marked.
    pub fn natural(carrier: Arc<FinCat>) -> Marking {
        let marked = carrier.morphisms().map(|m| carrier.is_iso(m)).collect();
        Marking { carrier, marked }
    }

    pub fn carrier(&self) -> &Arc<FinCat> {
        &self.carrier
    }

    #[inline]
    pub fn is_marked(&self, m: MorId) -> bool {
        self.marked[m.idx()]
    }

    pub fn flags(&self) -> &[bool] {
        &self.marked
    }

    pub fn marked_morphisms(&self) -> impl Iterator<Item = MorId> + '_ {
        self.carrier.morphisms().filter(|m| self.marked[m.idx()])
    }

    pub fn count(&self) -> usize {
        self.marked.iter().filter(|b| **b).count()
    }

    pub fn is_maximal(&self) -> bool {
        self.marked.iter().all(|b| *b)
    }

    /// Same flags over an equal carrier held in a different `Arc`.
    pub fn with_carrier(&self, carrier: Arc<FinCat>) -> Marking {
        debug_assert!(*carrier == *self.carrier);
        Marking {
            carrier,
            marked: self.marked.clone(),
        }
    }

    /// Copy with one morphism's flag changed. Identities stay marked.
    pub fn with_flag(&self, m: MorId, value: bool) -> Marking {
        let mut marked = self.marked.clone();
        marked[m.idx()] = value || self.carrier.is_identity(m);
        Marking {
            carrier: self.carrier.clone(),
            marked,
        }
    }

    /// True when every marked morphism is closed under composition.
    pub fn is_closed_under_composition(&self) -> bool {
        let c = &self.carrier;
        self.marked_morphisms().all(|f| {
            c.out_of(c.tgt(f))
                .iter()
                .all(|&g| !self.is_marked(g) || self.is_marked(c.compose(g, f)))
        })
    }

    /// The smallest marking containing this one that is closed under
    /// composition.
    pub fn closure(&self) -> Marking {
        let c = &self.carrier;
        let mut marked = self.marked.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for f in c.morphisms() {
                if !marked[f.idx()] {
                    continue;
                }
                for &g in c.out_of(c.tgt(f)) {
                    let gf = c.compose(g, f).idx();
                    if marked[g.idx()] && !marked[gf] {
                        marked[gf] = true;
                        changed = true;
                    }
                }
            }
        }
        Marking {
            carrier: c.clone(),
            marked,
        }
    }
}
