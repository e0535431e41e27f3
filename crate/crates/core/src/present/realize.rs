//! Turning a completed presentation into a finite category, or certifying
//! that it has infinitely many morphisms.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::rewrite::{CompletionFailed, RewriteSystem, DEFAULT_REWRITE_STEPS};
use super::word::{Letter, Presentation, Word};
use crate::fincat::{CatBuilder, FinCat, MorId, ObjId};

/// Default cap on enumerated normal forms.
pub const DEFAULT_NORMAL_FORMS: usize = 10_000;

/// Resource limits for completion and enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub rewrite_steps: usize,
    pub normal_forms: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            rewrite_steps: DEFAULT_REWRITE_STEPS,
            normal_forms: DEFAULT_NORMAL_FORMS,
        }
    }
}

/// Evidence that a presented category is infinite: every word
/// `prefix · cycle^n` is a normal form, so these are pairwise distinct
/// morphisms out of `object`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub object: String,
    /// Letters in application order, rendered with `^-1` for inverses.
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
    #[serde(skip)]
    pub prefix_letters: Word,
    #[serde(skip)]
    pub cycle_letters: Word,
    /// The family was re-normalized for `n = 0..verified_up_to`.
    pub verified_up_to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum PresentError {
    #[error(transparent)]
    CompletionFailed(#[from] CompletionFailed),
    #[error("presented category is infinite: ({cycle}) repeats without bound after ({prefix}) at `{object}`",
        object = .0.object, prefix = .0.prefix.join(" "), cycle = .0.cycle.join(" "))]
    Divergent(GrowthCertificate),
    #[error("more than {cap} normal forms without a repeating pattern")]
    EnumerationCap { cap: usize },
    #[error("invalid presentation: {0}")]
    Invalid(String),
}

impl PresentError {
    pub fn certificate(&self) -> Option<&GrowthCertificate> {
        match self {
            PresentError::Divergent(c) => Some(c),
            _ => None,
        }
    }
}

/// A presentation realized as a finite category.
#[derive(Clone, Debug)]
pub struct Realized {
    pub pres: Presentation,
    pub system: Arc<RewriteSystem>,
    pub cat: Arc<FinCat>,
    /// Normal form of each morphism.
    pub words: Vec<Word>,
    index: HashMap<(ObjId, Word), MorId>,
}

impl Realized {
    /// The morphism represented by a path starting at `src`.
    pub fn morphism_of(&self, src: ObjId, w: &[Letter]) -> MorId {
        let nf = self.system.normalize(w);
        self.index[&(src, nf)]
    }

    /// The morphism of a single letter.
    pub fn letter_morphism(&self, l: Letter) -> MorId {
        self.morphism_of(self.pres.letter_src(l), &[l])
    }
}

/// Completes and realizes a presentation.
pub fn realize(p: &Presentation, budget: Budget) -> Result<Realized, PresentError> {
    p.check()
        .map_err(|e| PresentError::Invalid(e.to_string()))?;
    let sys = RewriteSystem::complete(p, budget.rewrite_steps)?;
    realize_with(p, Arc::new(sys), budget)
}

/// Realizes a presentation with an already complete rewriting system.
pub fn realize_with(
    p: &Presentation,
    sys: Arc<RewriteSystem>,
    budget: Budget,
) -> Result<Realized, PresentError> {
    let words = enumerate_normal_forms(p, &sys, budget.normal_forms)?;
    build_category(p, sys, words)
}

/// All normal forms grouped by source object, each group in shortlex order.
fn enumerate_normal_forms(
    p: &Presentation,
    sys: &RewriteSystem,
    cap: usize,
) -> Result<Vec<(ObjId, Word)>, PresentError> {
    let mut by_src: Vec<Vec<Letter>> = vec![Vec::new(); p.objects.len()];
    let mut letters = p.letters();
    letters.sort_by_key(|&l| sys.letter_rank(l));
    for &l in &letters {
        by_src[p.letter_src(l).idx()].push(l);
    }
    let window = sys.max_lhs().saturating_sub(1);
    let mut out = Vec::new();
    for o in 0..p.objects.len() {
        let start = ObjId(o as u32);
        out.push((start, Vec::new()));
        let mut queue: VecDeque<Word> = VecDeque::from([Vec::new()]);
        while let Some(w) = queue.pop_front() {
            let at = w.last().map(|&l| p.letter_tgt(l)).unwrap_or(start);
            for &l in &by_src[at.idx()] {
                let mut w2 = w.clone();
                w2.push(l);
                if sys.has_reducible_suffix(&w2) {
                    continue;
                }
                if let Some(pos) = repeated_state(p, &w2, window) {
                    return Err(PresentError::Divergent(certificate(
                        p, sys, start, &w2, pos,
                    )));
                }
                out.push((start, w2.clone()));
                if out.len() > cap {
                    return Err(PresentError::EnumerationCap { cap });
                }
                queue.push_back(w2);
            }
        }
    }
    Ok(out)
}

/// Position `p < len` where the automaton state (current object and last
/// `window` letters) equals the state after the whole word.
fn repeated_state(p: &Presentation, w: &[Letter], window: usize) -> Option<usize> {
    let n = w.len();
    if n < window {
        return None;
    }
    let end_obj = p.letter_tgt(w[n - 1]);
    let end = &w[n - window..];
    (window..n).find(|&q| {
        let obj = if q == 0 {
            p.letter_src(w[0])
        } else {
            p.letter_tgt(w[q - 1])
        };
        obj == end_obj && &w[q - window..q] == end
    })
}

fn certificate(
    p: &Presentation,
    sys: &RewriteSystem,
    start: ObjId,
    w: &[Letter],
    pos: usize,
) -> GrowthCertificate {
    let (u, v) = (w[..pos].to_vec(), w[pos..].to_vec());
    let rounds = 8;
    let mut word = u.clone();
    for _ in 0..rounds {
        debug_assert!(sys.is_normal(&word));
        word.extend_from_slice(&v);
    }
    GrowthCertificate {
        object: p.objects[start.idx()].clone(),
        prefix: u.iter().map(|&l| p.letter_label(l)).collect(),
        cycle: v.iter().map(|&l| p.letter_label(l)).collect(),
        prefix_letters: u,
        cycle_letters: v,
        verified_up_to: rounds,
    }
}

/// Re-expands a certificate: the words `prefix · cycle^n` for `n < rounds`
/// must all be irreducible, hence pairwise distinct morphisms.
pub fn check_certificate(sys: &RewriteSystem, cert: &GrowthCertificate, rounds: usize) -> bool {
    if cert.cycle_letters.is_empty() {
        return false;
    }
    let mut word = cert.prefix_letters.clone();
    let mut seen = std::collections::HashSet::new();
    for _ in 0..rounds {
        let nf = sys.normalize(&word);
        if nf != word || !seen.insert(nf) {
            return false;
        }
        word.extend_from_slice(&cert.cycle_letters);
    }
    true
}

fn build_category(
    p: &Presentation,
    sys: Arc<RewriteSystem>,
    forms: Vec<(ObjId, Word)>,
) -> Result<Realized, PresentError> {
    let mut b = CatBuilder::new();
    for o in &p.objects {
        b.add_object(o.clone());
    }
    let mut index = HashMap::with_capacity(forms.len());
    let mut labels: HashMap<String, usize> = HashMap::new();
    let mut words = Vec::with_capacity(forms.len());
    for (src, w) in forms {
        let tgt = w.last().map(|&l| p.letter_tgt(l)).unwrap_or(src);
        let mut label = if w.is_empty() {
            format!("id_{}", p.objects[src.idx()])
        } else {
            p.word_label(&w)
        };
        let n = labels.entry(label.clone()).or_insert(0);
        *n += 1;
        if *n > 1 {
            label = format!("{label}#{}", *n - 1);
        }
        let m = b.add_morphism(label, src, tgt);
        if w.is_empty() {
            b.set_identity(src, m);
        }
        index.insert((src, w.clone()), m);
        words.push(w);
    }
    let srcs: Vec<ObjId> = (0..words.len()).map(|m| b.src(MorId(m as u32))).collect();
    let cat = b.build(|g, f| {
        let w = [words[f.idx()].as_slice(), words[g.idx()].as_slice()].concat();
        index[&(srcs[f.idx()], sys.normalize(&w))]
    });
    Ok(Realized {
        pres: p.clone(),
        system: sys,
        cat: Arc::new(cat),
        words,
        index,
    })
}
