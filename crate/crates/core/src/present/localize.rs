//! Localization `C[E⁻¹]` by adjoining formal inverses and rewriting.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::realize::{realize, Budget, PresentError, Realized};
use super::word::{generator_of, is_inverse, letter, Presentation};
use crate::fincat::{FinCat, Functor, Marking, MorId};

/// `C[E⁻¹]` with the canonical functor `γ: C -> C[E⁻¹]`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub source: Arc<FinCat>,
    pub marking: Marking,
    pub realized: Realized,
    pub gamma: Functor,
    /// Generator index of each non-identity morphism of the source.
    gen_of: Vec<Option<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum FactorError {
    #[error("functor is not defined on the localized category's source")]
    WrongDomain,
    #[error("marked morphism `{0}` is not sent to an isomorphism")]
    NotInverted(String),
    #[error("no factorization through the localization: {0}")]
    NoFactorization(String),
}

impl Localization {
    pub fn cat(&self) -> &Arc<FinCat> {
        &self.realized.cat
    }

    /// The unique `F̄` with `F̄ ∘ γ = f`, for `f` inverting every marked
    /// morphism.
    pub fn factor(&self, f: &Functor) -> Result<Functor, FactorError> {
        let c = &self.source;
        if **f.dom() != **c {
            return Err(FactorError::WrongDomain);
        }
        let d = f.cod();
        for m in self.marking.marked_morphisms() {
            if !d.is_iso(f.mor(m)) {
                return Err(FactorError::NotInverted(c.mor_label(m).into()));
            }
        }
        let pres = &self.realized.pres;
        let src_of: Vec<MorId> = {
            let mut v = vec![MorId(0); pres.generators.len()];
            for m in c.morphisms() {
                if let Some(g) = self.gen_of[m.idx()] {
                    v[g as usize] = m;
                }
            }
            v
        };
        let loc = self.cat();
        let obj = loc.objects().map(|o| f.obj(o)).collect();
        let mor = loc
            .morphisms()
            .map(|m| {
                let w = &self.realized.words[m.idx()];
                w.iter().fold(d.id(f.obj(loc.src(m))), |acc, &l| {
                    let fm = f.mor(src_of[generator_of(l) as usize]);
                    let step = if is_inverse(l) {
                        d.inverse(fm).expect("checked invertible")
                    } else {
                        fm
                    };
                    d.compose(step, acc)
                })
            })
            .collect();
        let fbar = Functor::new(loc.clone(), d.clone(), obj, mor)
            .map_err(|e| FactorError::NoFactorization(e.to_string()))?;
        let back = fbar.after(&self.gamma);
        if back.obj_table() != f.obj_table() || back.mor_table() != f.mor_table() {
            return Err(FactorError::NoFactorization("F̄ ∘ γ differs from F".into()));
        }
        Ok(fbar)
    }

    /// Every morphism of the localization is a composite of images of `γ`
    /// and inverses of images of marked morphisms, which makes factorizations
    /// unique.
    pub fn generated_by_gamma(&self) -> bool {
        let loc = self.cat();
        let c = &self.source;
        loc.morphisms().all(|m| {
            let w = &self.realized.words[m.idx()];
            let mut acc = loc.id(loc.src(m));
            for &l in w {
                let g = generator_of(l);
                let Some(orig) = c.morphisms().find(|&x| self.gen_of[x.idx()] == Some(g)) else {
                    return false;
                };
                let step = if is_inverse(l) {
                    if !self.marking.is_marked(orig) {
                        return false;
                    }
                    match loc.inverse(self.gamma.mor(orig)) {
                        Some(inv) => inv,
                        None => return false,
                    }
                } else {
                    self.gamma.mor(orig)
                };
                acc = loc.compose(step, acc);
            }
            acc == m
        })
    }
}

/// The presentation of `C[E⁻¹]`: the tables of `C` with every marked
/// generator invertible, and the generator of each non-identity morphism.
pub fn localization_presentation(marking: &Marking) -> (Presentation, Vec<Option<u32>>) {
    let c = marking.carrier();
    let mut pres = Presentation::from_fincat(c);
    let mut gen_of = vec![None; c.num_morphisms()];
    let mut g = 0u32;
    for m in c.morphisms() {
        if !c.is_identity(m) {
            gen_of[m.idx()] = Some(g);
            if marking.is_marked(m) {
                pres.generators[g as usize].invertible = true;
            }
            g += 1;
        }
    }
    (pres, gen_of)
}

/// Localizes `marking.carrier()` at the marked morphisms.
pub fn localize(marking: &Marking, budget: Budget) -> Result<Localization, PresentError> {
    let c = marking.carrier().clone();
    let (pres, gen_of) = localization_presentation(marking);
    let realized = realize(&pres, budget)?;
    let loc = realized.cat.clone();
    let obj = c.objects().collect();
    let mor = c
        .morphisms()
        .map(|m| match gen_of[m.idx()] {
            Some(g) => realized.letter_morphism(letter(g, false)),
            None => loc.id(c.src(m)),
        })
        .collect();
    let gamma = Functor::new_unchecked(c.clone(), loc, obj, mor);
    Ok(Localization {
        source: c,
        marking: marking.clone(),
        realized,
        gamma,
        gen_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{are_isomorphic, shapes};

    #[test]
    fn interval_localizes_to_iso() {
        let m = shapes::standard("[1]^sharp").unwrap();
        let loc = localize(&m, Budget::default()).unwrap();
        let i = Arc::new(shapes::walking_iso());
        assert!(are_isomorphic(loc.cat(), &i).unwrap());
        assert!(loc
            .cat()
            .is_iso(loc.gamma.mor(m.carrier().mor_by_label("0->1").unwrap())));
        assert!(loc.generated_by_gamma());
    }

    #[test]
    fn identities_only_changes_nothing() {
        let m = Marking::minimal(Arc::new(shapes::ordinal(2)));
        let loc = localize(&m, Budget::default()).unwrap();
        assert!(loc.gamma.is_isomorphism());
    }

    #[test]
    fn parallel_pair_diverges() {
        let m = shapes::standard("parallel{a}").unwrap();
        let err = localize(&m, Budget::default()).unwrap_err();
        let cert = err.certificate().expect("divergent");
        assert!(!cert.cycle.is_empty());
    }

    #[test]
    fn factor_through_identity() {
        let m = shapes::standard("[1]^sharp").unwrap();
        let loc = localize(&m, Budget::default()).unwrap();
        let fbar = loc.factor(&loc.gamma).unwrap();
        assert!(fbar.is_identity());
    }
}
