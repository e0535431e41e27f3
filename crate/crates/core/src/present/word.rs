//! Presentations: objects, generating arrows (optionally invertible) and
//! relations between parallel paths.

use serde::{Deserialize, Serialize};

use crate::fincat::{FinCat, ObjId};

/// A generator or a formal inverse of one: `(generator << 1) | inverse`.
pub type Letter = u32;

/// A path of letters in application order: `[f, g]` is `g ∘ f`.
pub type Word = Vec<Letter>;

#[inline]
pub fn letter(generator: u32, inverse: bool) -> Letter {
    (generator << 1) | inverse as u32
}

#[inline]
pub fn generator_of(l: Letter) -> u32 {
    l >> 1
}

#[inline]
pub fn is_inverse(l: Letter) -> bool {
    l & 1 == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub src: ObjId,
    pub tgt: ObjId,
    /// A formal inverse is adjoined.
    pub invertible: bool,
}

/// `lhs = rhs` as paths `src -> tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub src: ObjId,
    pub tgt: ObjId,
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum PresentationError {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("word is not a path: {0}")]
    NotAPath(String),
    #[error("relation sides are not parallel: {0}")]
    NotParallel(String),
    #[error("inverse of `{0}` used but the generator is not invertible")]
    NotInvertible(String),
}

/// A finitely presented category.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presentation {
    pub objects: Vec<String>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

impl Presentation {
    pub fn letter_src(&self, l: Letter) -> ObjId {
        let g = &self.generators[generator_of(l) as usize];
        if is_inverse(l) {
            g.tgt
        } else {
            g.src
        }
    }

    pub fn letter_tgt(&self, l: Letter) -> ObjId {
        let g = &self.generators[generator_of(l) as usize];
        if is_inverse(l) {
            g.src
        } else {
            g.tgt
        }
    }

    pub fn letter_label(&self, l: Letter) -> String {
        let g = &self.generators[generator_of(l) as usize];
        if is_inverse(l) {
            format!("{}^-1", g.label)
        } else {
            g.label.clone()
        }
    }

    /// Composition-order rendering: `g.f` for the path `[f, g]`.
    pub fn word_label(&self, w: &[Letter]) -> String {
        w.iter()
            .rev()
            .map(|&l| self.letter_label(l))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Endpoints of a nonempty word, or `None` if it is not a path.
    pub fn path_endpoints(&self, w: &[Letter]) -> Option<(ObjId, ObjId)> {
        let first = *w.first()?;
        let mut at = self.letter_tgt(first);
        for &l in &w[1..] {
            if self.letter_src(l) != at {
                return None;
            }
            at = self.letter_tgt(l);
        }
        Some((self.letter_src(first), at))
    }

    /// Letters in use: every generator, plus inverses of invertible ones.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            out.push(letter(i as u32, false));
            if g.invertible {
                out.push(letter(i as u32, true));
            }
        }
        out
    }

    /// Shortlex letter ranks: by source object of the generator, then
    /// generator id, then the inverse flag.
    pub fn letter_ranks(&self) -> Vec<u32> {
        let mut letters: Vec<Letter> = (0..self.generators.len() as u32 * 2).collect();
        letters.sort_by_key(|&l| {
            (
                self.generators[generator_of(l) as usize].src,
                generator_of(l),
                is_inverse(l),
            )
        });
        let mut rank = vec![0u32; letters.len()];
        for (r, &l) in letters.iter().enumerate() {
            rank[l as usize] = r as u32;
        }
        rank
    }

    /// Checks that every relation is a pair of parallel paths and only uses
    /// inverses of invertible generators.
    pub fn check(&self) -> Result<(), PresentationError> {
        for r in &self.relations {
            for w in [&r.lhs, &r.rhs] {
                for &l in w.iter() {
                    let g = &self.generators[generator_of(l) as usize];
                    if is_inverse(l) && !g.invertible {
                        return Err(PresentationError::NotInvertible(g.label.clone()));
                    }
                }
                match self.path_endpoints(w) {
                    None if w.is_empty() => {
                        if r.src != r.tgt {
                            return Err(PresentationError::NotParallel(self.word_label(w)));
                        }
                    }
                    None => return Err(PresentationError::NotAPath(self.word_label(w))),
                    Some((s, t)) => {
                        if s != r.src || t != r.tgt {
                            return Err(PresentationError::NotParallel(format!(
                                "{} vs {}",
                                self.word_label(&r.lhs),
                                self.word_label(&r.rhs)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Generators are the non-identity morphisms; relations are the
    /// composites of composable non-identity pairs.
    pub fn from_fincat(c: &FinCat) -> Presentation {
        let mut gen_of = vec![None; c.num_morphisms()];
        let mut generators = Vec::new();
        for m in c.morphisms() {
            if !c.is_identity(m) {
                gen_of[m.idx()] = Some(generators.len() as u32);
                generators.push(Generator {
                    label: c.mor_label(m).into(),
                    src: c.src(m),
                    tgt: c.tgt(m),
                    invertible: false,
                });
            }
        }
        let word = |m: crate::fincat::MorId| -> Word {
            gen_of[m.idx()]
                .map(|g| vec![letter(g, false)])
                .unwrap_or_default()
        };
        let mut relations = Vec::new();
        for f in c.morphisms() {
            if c.is_identity(f) {
                continue;
            }
            for &g in c.out_of(c.tgt(f)) {
                if c.is_identity(g) {
                    continue;
                }
                let gf = c.compose(g, f);
                relations.push(Relation {
                    src: c.src(f),
                    tgt: c.tgt(g),
                    lhs: [word(f), word(g)].concat(),
                    rhs: word(gf),
                });
            }
        }
        Presentation {
            objects: c.objects().map(|o| c.obj_label(o).to_string()).collect(),
            generators,
            relations,
        }
    }

    /// Generator index of a non-identity morphism of the category a
    /// presentation was read off with [`Presentation::from_fincat`].
    pub fn generator_by_label(&self, label: &str) -> Option<u32> {
        self.generators
            .iter()
            .position(|g| g.label == label)
            .map(|i| i as u32)
    }
}
