//! Shortlex string rewriting with Knuth–Bendix completion.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::word::{letter, Letter, Presentation, Word};

/// Default number of rules completion may orient before giving up.
pub const DEFAULT_REWRITE_STEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("completion did not converge within {steps} steps ({rules} live rules)")]
pub struct CompletionFailed {
    pub steps: usize,
    pub rules: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rule {
    lhs: Word,
    rhs: Word,
    alive: bool,
}

/// A confluent, terminating rewriting system for a presentation, ordered by
/// shortlex on letter ranks.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    rank: Vec<u32>,
    rules: Vec<Rule>,
    index: HashMap<Word, usize>,
    max_lhs: usize,
    steps: usize,
}

impl RewriteSystem {
    fn empty(rank: Vec<u32>) -> Self {
        RewriteSystem {
            rank,
            rules: Vec::new(),
            index: HashMap::new(),
            max_lhs: 0,
            steps: 0,
        }
    }

    /// Shortlex comparison.
    pub fn cmp_words(&self, a: &[Letter], b: &[Letter]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                let o = self.rank[*x as usize].cmp(&self.rank[*y as usize]);
                if o != Ordering::Equal {
                    return o;
                }
            }
            Ordering::Equal
        })
    }

    pub fn letter_rank(&self, l: Letter) -> u32 {
        self.rank[l as usize]
    }

    /// Longest left-hand side.
    pub fn max_lhs(&self) -> usize {
        self.max_lhs
    }

    /// Rules oriented during completion.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn rules(&self) -> impl Iterator<Item = (&[Letter], &[Letter])> {
        self.rules
            .iter()
            .filter(|r| r.alive)
            .map(|r| (r.lhs.as_slice(), r.rhs.as_slice()))
    }

    pub fn num_rules(&self) -> usize {
        self.index.len()
    }

    /// True when some left-hand side is a suffix of `w`.
    pub fn has_reducible_suffix(&self, w: &[Letter]) -> bool {
        let n = w.len();
        (1..=self.max_lhs.min(n)).any(|k| self.index.contains_key(&w[n - k..]))
    }

    pub fn is_normal(&self, w: &[Letter]) -> bool {
        (1..=w.len()).all(|e| !self.has_reducible_suffix(&w[..e]))
    }

    /// The normal form of `w`.
    pub fn normalize(&self, w: &[Letter]) -> Word {
        let mut out: Word = Vec::with_capacity(w.len());
        let mut input: Vec<Letter> = w.iter().rev().copied().collect();
        while let Some(l) = input.pop() {
            out.push(l);
            let n = out.len();
            for k in 1..=self.max_lhs.min(n) {
                if let Some(&r) = self.index.get(&out[n - k..]) {
                    out.truncate(n - k);
                    input.extend(self.rules[r].rhs.iter().rev());
                    break;
                }
            }
        }
        out
    }

    fn recompute_max(&mut self) {
        self.max_lhs = self.index.keys().map(Vec::len).max().unwrap_or(0);
    }

    /// Adds `u = v` after normalizing; returns false if it was already
    /// derivable. Left-hand sides made reducible are retired and their
    /// equations re-queued.
    fn add_equation(
        &mut self,
        u: &[Letter],
        v: &[Letter],
        pending: &mut Vec<(Word, Word)>,
    ) -> bool {
        let (u, v) = (self.normalize(u), self.normalize(v));
        let (lhs, rhs) = match self.cmp_words(&u, &v) {
            Ordering::Equal => return false,
            Ordering::Greater => (u, v),
            Ordering::Less => (v, u),
        };
        self.steps += 1;
        let new_id = self.rules.len();
        for i in 0..self.rules.len() {
            if self.rules[i].alive && contains(&self.rules[i].lhs, &lhs) {
                self.rules[i].alive = false;
                self.index.remove(&self.rules[i].lhs);
                pending.push((self.rules[i].lhs.clone(), self.rules[i].rhs.clone()));
            }
        }
        self.index.insert(lhs.clone(), new_id);
        self.max_lhs = self.max_lhs.max(lhs.len());
        self.rules.push(Rule {
            lhs: lhs.clone(),
            rhs,
            alive: true,
        });
        for i in 0..new_id {
            if self.rules[i].alive && contains(&self.rules[i].rhs, &lhs) {
                let r = self.normalize(&self.rules[i].rhs);
                self.rules[i].rhs = r;
            }
        }
        self.recompute_max();
        true
    }

    /// Runs completion on the relations of `p` (plus the invertibility
    /// rules of invertible generators).
    pub fn complete(p: &Presentation, max_steps: usize) -> Result<RewriteSystem, CompletionFailed> {
        let mut sys = RewriteSystem::empty(p.letter_ranks());
        let mut pending: Vec<(Word, Word)> = Vec::new();
        for (i, g) in p.generators.iter().enumerate() {
            if g.invertible {
                let (a, b) = (letter(i as u32, false), letter(i as u32, true));
                pending.push((vec![a, b], vec![]));
                pending.push((vec![b, a], vec![]));
            }
        }
        for r in &p.relations {
            pending.push((r.lhs.clone(), r.rhs.clone()));
        }
        pending.reverse();
        let fail = |sys: &RewriteSystem| CompletionFailed {
            steps: sys.steps,
            rules: sys.index.len(),
        };
        while let Some((u, v)) = pending.pop() {
            sys.add_equation(&u, &v, &mut pending);
            if sys.steps > max_steps {
                return Err(fail(&sys));
            }
        }
        // Critical pairs: rule i is overlapped with every live rule j <= i.
        let mut i = 0;
        while i < sys.rules.len() {
            let mut j = 0;
            while j <= i && sys.rules[i].alive {
                if sys.rules[j].alive {
                    let pairs = {
                        let (a, b) = (&sys.rules[i], &sys.rules[j]);
                        let mut v = critical_pairs(a, b);
                        if i != j {
                            v.extend(critical_pairs(b, a));
                        }
                        v
                    };
                    for (x, y) in pairs {
                        pending.push((x, y));
                        while let Some((u, v)) = pending.pop() {
                            sys.add_equation(&u, &v, &mut pending);
                            if sys.steps > max_steps {
                                return Err(fail(&sys));
                            }
                        }
                        if !sys.rules[i].alive || !sys.rules[j].alive {
                            break;
                        }
                    }
                }
                j += 1;
            }
            i += 1;
        }
        Ok(sys)
    }

    /// Builds a system from rules known to be complete.
    pub fn from_complete_rules(rank: Vec<u32>, rules: Vec<(Word, Word)>) -> RewriteSystem {
        let mut sys = RewriteSystem::empty(rank);
        for (l, r) in rules {
            sys.index.insert(l.clone(), sys.rules.len());
            sys.rules.push(Rule {
                lhs: l,
                rhs: r,
                alive: true,
            });
        }
        sys.recompute_max();
        sys
    }

    /// True when every critical pair of the live rules is joinable.
    pub fn is_confluent(&self) -> bool {
        let live: Vec<&Rule> = self.rules.iter().filter(|r| r.alive).collect();
        for a in &live {
            for b in &live {
                for (x, y) in critical_pairs(a, b) {
                    if self.normalize(&x) != self.normalize(&y) {
                        return false;
                    }
                }
                if !std::ptr::eq(*a, *b) && contains(&a.lhs, &b.lhs) {
                    return false;
                }
            }
        }
        live.iter()
            .all(|r| self.cmp_words(&r.lhs, &r.rhs) == Ordering::Greater)
    }
}

fn contains(hay: &[Letter], needle: &[Letter]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}

/// Overlaps where a proper suffix of `a.lhs` is a proper prefix of `b.lhs`.
fn critical_pairs(a: &Rule, b: &Rule) -> Vec<(Word, Word)> {
    let (l1, l2) = (&a.lhs, &b.lhs);
    let mut out = Vec::new();
    for k in 1..l1.len().min(l2.len()) {
        if l1[l1.len() - k..] == l2[..k] {
            let x = [a.rhs.as_slice(), &l2[k..]].concat();
            let y = [&l1[..l1.len() - k], b.rhs.as_slice()].concat();
            out.push((x, y));
        }
    }
    out
}
