//! Seeded random instances for property checks.
//!
//! Categories come from presentations on random DAGs, optionally with one
//! invertible generator, one loop of order two or an idempotent loop, and a
//! few relations between parallel paths. Presentations whose realization
//! exceeds the caps are redrawn.

use std::collections::HashMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fincat::{
    comma, comma_restrict, product, shapes, CatBuilder, FinCat, Functor, FunctorSearch,
    MarkedSlice, Marking, MorId, ObjId, PresheafCat, PresheafSet, Slice, UnionFind,
};
use crate::groth::{elements, marked_elements};
use crate::present::{letter, realize, Budget, Generator, Letter, Presentation, Relation};

pub type CaseRng = ChaCha8Rng;

/// Size limits for generated categories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 6,
            max_morphisms: 25,
        }
    }
}

impl Caps {
    /// Caps for base categories of slices and presheaves.
    pub fn base(self) -> Caps {
        Caps {
            max_objects: self.max_objects.min(3),
            max_morphisms: self.max_morphisms.min(8),
        }
    }

    fn admits(self, c: &FinCat) -> bool {
        c.num_objects() <= self.max_objects && c.num_morphisms() <= self.max_morphisms
    }
}

/// Independent stream `case` of the run seeded by `seed`.
pub fn case_rng(seed: u64, case: u64) -> CaseRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(case);
    r
}

const ATTEMPTS: usize = 64;

fn budget() -> Budget {
    Budget {
        rewrite_steps: 2_000,
        normal_forms: 400,
    }
}

/// All paths of length `1..=max_len` in non-inverted letters.
fn short_paths(p: &Presentation, max_len: usize) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = (0..p.generators.len() as u32)
        .map(|g| vec![letter(g, false)])
        .collect();
    let mut frontier = out.clone();
    for _ in 1..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            let end = p.letter_tgt(*w.last().unwrap());
            for (g, gen) in p.generators.iter().enumerate() {
                if gen.src == end {
                    let mut v = w.clone();
                    v.push(letter(g as u32, false));
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn draw_presentation(rng: &mut CaseRng, caps: Caps) -> Presentation {
    let n = rng.gen_range(1..=caps.max_objects.min(caps.max_morphisms));
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut p = Presentation {
        objects: (0..n).map(|i| i.to_string()).collect(),
        ..Default::default()
    };
    let density = rng.gen_range(0.15..0.6);
    for j in 0..n {
        for i in 0..j {
            let copies = if rng.gen_bool(density) {
                1 + rng.gen_bool(0.1) as usize
            } else {
                0
            };
            for _ in 0..copies {
                let k = p.generators.len();
                p.generators.push(Generator {
                    label: format!("a{k}"),
                    src: ObjId(order[i]),
                    tgt: ObjId(order[j]),
                    invertible: false,
                });
            }
        }
    }
    if !p.generators.is_empty() && rng.gen_bool(0.25) {
        let k = rng.gen_range(0..p.generators.len());
        p.generators[k].invertible = true;
    }
    if rng.gen_bool(0.2) {
        let o = ObjId(rng.gen_range(0..n as u32));
        let k = p.generators.len() as u32;
        p.generators.push(Generator {
            label: format!("e{k}"),
            src: o,
            tgt: o,
            invertible: false,
        });
        let rhs = if rng.gen_bool(0.5) {
            Vec::new()
        } else {
            vec![letter(k, false)]
        };
        p.relations.push(Relation {
            src: o,
            tgt: o,
            lhs: vec![letter(k, false); 2],
            rhs,
        });
    }
    let paths = short_paths(&p, 3);
    let mut groups: HashMap<(ObjId, ObjId), Vec<&Vec<Letter>>> = HashMap::new();
    for w in &paths {
        let ends = p.path_endpoints(w).expect("paths are composable");
        groups.entry(ends).or_default().push(w);
    }
    let mut keys: Vec<_> = groups
        .iter()
        .filter(|(_, v)| v.len() >= 2)
        .map(|(k, _)| *k)
        .collect();
    keys.sort();
    let relations = if keys.is_empty() {
        0
    } else {
        rng.gen_range(0..=2)
    };
    for _ in 0..relations {
        let key = keys[rng.gen_range(0..keys.len())];
        let ws = &groups[&key];
        let (i, j) = (rng.gen_range(0..ws.len()), rng.gen_range(0..ws.len()));
        if i != j {
            p.relations.push(Relation {
                src: key.0,
                tgt: key.1,
                lhs: ws[i].clone(),
                rhs: ws[j].clone(),
            });
        }
    }
    p
}

/// A random finite category within `caps`; empty when either cap is zero.
pub fn category(rng: &mut CaseRng, caps: Caps) -> Arc<FinCat> {
    if caps.max_objects == 0 || caps.max_morphisms == 0 {
        return Arc::new(shapes::empty());
    }
    for _ in 0..ATTEMPTS {
        let p = draw_presentation(rng, caps);
        if let Ok(r) = realize(&p, budget()) {
            if caps.admits(&r.cat) {
                return r.cat;
            }
        }
    }
    Arc::new(shapes::discrete(1))
}

/// A functor `dom -> cod` drawn by a shuffled search, if any exists within
/// the node budget.
pub fn functor(
    rng: &mut CaseRng,
    dom: &Arc<FinCat>,
    cod: &Arc<FinCat>,
    max_nodes: u64,
) -> Option<Functor> {
    FunctorSearch::new(dom, cod)
        .shuffled(rng.gen())
        .max_nodes(max_nodes)
        .first()
        .ok()
        .flatten()
}

/// A quotient of a sum of representables. Every presheaf arises this way.
pub fn presheaf_set(rng: &mut CaseRng, base: &Arc<FinCat>, max_elements: usize) -> PresheafSet {
    if base.is_empty() {
        return PresheafSet::empty(base.clone());
    }
    for _ in 0..ATTEMPTS {
        let summands: Vec<ObjId> = (0..rng.gen_range(0..=3))
            .map(|_| ObjId(rng.gen_range(0..base.num_objects() as u32)))
            .collect();
        let mut elems: Vec<Vec<(usize, MorId)>> = vec![Vec::new(); base.num_objects()];
        for (k, &c) in summands.iter().enumerate() {
            for d in base.objects() {
                for &f in base.hom(d, c) {
                    elems[d.idx()].push((k, f));
                }
            }
        }
        let total: usize = elems.iter().map(Vec::len).sum();
        if total > max_elements {
            continue;
        }
        // global numbering for the union-find
        let mut offset = vec![0usize; base.num_objects() + 1];
        for d in base.objects() {
            offset[d.idx() + 1] = offset[d.idx()] + elems[d.idx()].len();
        }
        let mut index: HashMap<(ObjId, usize, MorId), usize> = HashMap::new();
        for d in base.objects() {
            for (i, &(k, f)) in elems[d.idx()].iter().enumerate() {
                index.insert((d, k, f), offset[d.idx()] + i);
            }
        }
        let act = |f: MorId, (k, g): (usize, MorId)| (k, base.compose(g, f));
        let mut uf = UnionFind::new(total);
        for _ in 0..rng.gen_range(0..=2) {
            let d = ObjId(rng.gen_range(0..base.num_objects() as u32));
            let es = &elems[d.idx()];
            if es.len() >= 2 {
                let (i, j) = (rng.gen_range(0..es.len()), rng.gen_range(0..es.len()));
                uf.union((offset[d.idx()] + i) as u32, (offset[d.idx()] + j) as u32);
            }
        }
        loop {
            let mut changed = false;
            for f in base.morphisms() {
                let (c, d) = (base.src(f), base.tgt(f));
                let es = &elems[d.idx()];
                for i in 0..es.len() {
                    for j in i + 1..es.len() {
                        let (x, y) = ((offset[d.idx()] + i) as u32, (offset[d.idx()] + j) as u32);
                        if uf.find(x) == uf.find(y) {
                            let fx = index[&(c, act(f, es[i]).0, act(f, es[i]).1)];
                            let fy = index[&(c, act(f, es[j]).0, act(f, es[j]).1)];
                            changed |= uf.union(fx as u32, fy as u32);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut labels = Vec::new();
        let mut class_of = vec![0u32; total];
        for d in base.objects() {
            let mut seen: HashMap<u32, u32> = HashMap::new();
            let mut ls = Vec::new();
            for (i, &(k, f)) in elems[d.idx()].iter().enumerate() {
                let g = offset[d.idx()] + i;
                let r = uf.find(g as u32);
                let next = seen.len() as u32;
                let cls = *seen.entry(r).or_insert_with(|| {
                    ls.push(format!("{k}:{}", base.mor_label(f)));
                    next
                });
                class_of[g] = cls;
            }
            labels.push(ls);
        }
        let action = base
            .morphisms()
            .map(|f| {
                let (c, d) = (base.src(f), base.tgt(f));
                let mut table = vec![u32::MAX; labels[d.idx()].len()];
                for (i, &e) in elems[d.idx()].iter().enumerate() {
                    let (k, g) = act(f, e);
                    table[class_of[offset[d.idx()] + i] as usize] = class_of[index[&(c, k, g)]];
                }
                table
            })
            .collect();
        return PresheafSet::new(base.clone(), labels, action).expect("quotient is a presheaf");
    }
    PresheafSet::terminal(base.clone())
}

/// `c ↦ F c × D` with `F` acting on the first factor.
fn times_constant(f: &PresheafSet, d: &Arc<FinCat>) -> PresheafCat {
    let base = f.base();
    let parts: Vec<(Arc<FinCat>, Functor, Functor)> = base
        .objects()
        .map(|c| {
            let labels = f.labels(c).to_vec();
            let set = Arc::new(shapes::poset(&labels, |x, y| x == y));
            product(&set, d)
        })
        .collect();
    let fibers: Vec<Arc<FinCat>> = parts.iter().map(|p| p.0.clone()).collect();
    let action = base
        .morphisms()
        .map(|m| {
            let (s, t) = (&parts[base.src(m).idx()], &parts[base.tgt(m).idx()]);
            let obj_at: HashMap<(ObjId, ObjId), ObjId> =
                s.0.objects()
                    .map(|o| ((s.1.obj(o), s.2.obj(o)), o))
                    .collect();
            let mor_at: HashMap<(ObjId, MorId), MorId> =
                s.0.morphisms()
                    .map(|g| ((s.1.obj(s.0.src(g)), s.2.mor(g)), g))
                    .collect();
            let obj =
                t.0.objects()
                    .map(|o| obj_at[&(ObjId(f.act(m, t.1.obj(o).0)), t.2.obj(o))])
                    .collect();
            let mor =
                t.0.morphisms()
                    .map(|g| mor_at[&(ObjId(f.act(m, t.1.obj(t.0.src(g)).0)), t.2.mor(g))])
                    .collect();
            Functor::new_unchecked(t.0.clone(), s.0.clone(), obj, mor)
        })
        .collect();
    PresheafCat::new(base.clone(), fibers, action).expect("product with a constant")
}

/// `c ↦ c↓P` for `P: A -> base`.
pub fn comma_presheaf(p: &Slice) -> PresheafCat {
    let base = p.base();
    let commas: Vec<_> = base.objects().map(|c| comma(c, p)).collect();
    let fibers = commas.iter().map(|k| k.cat.clone()).collect();
    let action = base
        .morphisms()
        .map(|u| comma_restrict(p, u, &commas[base.tgt(u).idx()], &commas[base.src(u).idx()]))
        .collect();
    PresheafCat::new(base.clone(), fibers, action).expect("commas are functorial")
}

/// A random `base^op -> Cat` whose marked category of elements stays
/// within `caps`.
pub fn presheaf_cat(rng: &mut CaseRng, base: &Arc<FinCat>, caps: Caps) -> PresheafCat {
    let small = Caps {
        max_objects: 3,
        max_morphisms: 6,
    };
    for _ in 0..ATTEMPTS {
        let f = match rng.gen_range(0..4) {
            0 => PresheafCat::discrete(&presheaf_set(rng, base, caps.max_objects)),
            1 => PresheafCat::constant(base.clone(), category(rng, small)),
            2 => {
                let s = presheaf_set(rng, base, 3);
                times_constant(&s, &category(rng, small))
            }
            _ => {
                let a = category(rng, small);
                match functor(rng, &a, base, 10_000) {
                    Some(p) => comma_presheaf(&Slice::new(p)),
                    None => continue,
                }
            }
        };
        let objects: usize = f.fibers().iter().map(|x| x.num_objects()).sum();
        if objects > caps.max_objects {
            continue;
        }
        if caps.admits(marked_elements(&f).total()) {
            return f;
        }
    }
    PresheafCat::discrete(&PresheafSet::empty(base.clone()))
}

/// A cart-marked Grothendieck fibration over `base`.
pub fn fibrant(rng: &mut CaseRng, base: &Arc<FinCat>, caps: Caps) -> MarkedSlice {
    marked_elements(&presheaf_cat(rng, base, caps)).slice
}

fn restrict_to_objects(p: &Functor, keep: &[ObjId]) -> Functor {
    let (_, inc) = crate::fincat::full_subcategory(p.dom(), keep);
    p.after(&inc)
}

/// A slice over a random base, mixing fibrations of several kinds with
/// arbitrary functors and restrictions of fibrations.
pub fn slice(rng: &mut CaseRng, caps: Caps, max_nodes: u64) -> Slice {
    let base = category(rng, caps.base());
    slice_over(rng, &base, caps, max_nodes)
}

pub fn slice_over(rng: &mut CaseRng, base: &Arc<FinCat>, caps: Caps, max_nodes: u64) -> Slice {
    for _ in 0..ATTEMPTS {
        let p = match rng.gen_range(0..7) {
            0 => {
                let total = category(rng, caps);
                match functor(rng, &total, base, max_nodes) {
                    Some(p) => p,
                    None => continue,
                }
            }
            1 => elements(&presheaf_set(rng, base, caps.max_objects))
                .slice
                .proj()
                .clone(),
            2 => {
                let d = category(rng, caps.base());
                product(base, &d).1
            }
            3 => fibrant(rng, base, caps).proj().clone(),
            4 => Functor::identity(base.clone()),
            5 => {
                let p = fibrant(rng, base, caps).proj().clone();
                let keep: Vec<ObjId> = p.dom().objects().filter(|_| rng.gen_bool(0.7)).collect();
                restrict_to_objects(&p, &keep)
            }
            _ => {
                let a = category(rng, caps.base());
                match functor(rng, &a, base, max_nodes) {
                    Some(q) => {
                        let k = comma_presheaf(&Slice::new(q));
                        marked_elements(&k).slice.proj().clone()
                    }
                    None => continue,
                }
            }
        };
        if caps.admits(p.dom()) {
            return Slice::new(p);
        }
    }
    Slice::identity(base.clone())
}

/// Identities plus a random subset of the other morphisms.
pub fn marking(rng: &mut CaseRng, c: &Arc<FinCat>) -> Marking {
    match rng.gen_range(0..4) {
        0 => Marking::minimal(c.clone()),
        1 => Marking::maximal(c.clone()),
        2 => Marking::natural(c.clone()),
        _ => {
            let p = rng.gen_range(0.1..0.9);
            let extra: Vec<MorId> = c.morphisms().filter(|_| rng.gen_bool(p)).collect();
            Marking::generated_by(c.clone(), extra)
        }
    }
}

/// A marking-preserving functor between the totals of two marked slices
/// over the same base, commuting with the projections.
pub fn slice_map(
    rng: &mut CaseRng,
    p: &MarkedSlice,
    q: &MarkedSlice,
    max_nodes: u64,
) -> Option<Functor> {
    let mut search = FunctorSearch::new(p.total(), q.total())
        .shuffled(rng.gen())
        .max_nodes(max_nodes);
    for o in p.total().objects() {
        let c = p.proj().obj(o);
        search = search.restrict_object(o, move |t| q.proj().obj(t) == c);
    }
    search
        .filter(|m, n| q.proj().mor(n) == p.proj().mor(m) && (!p.is_marked(m) || q.is_marked(n)))
        .first()
        .ok()
        .flatten()
}

/// `Y` with some objects duplicated: `Hom(s, t) = Hom(F s, F t)`. The
/// collapse `F` is surjective on objects and fully faithful.
pub fn inflate(rng: &mut CaseRng, y: &Arc<FinCat>, max_morphisms: usize) -> Functor {
    let mut over: Vec<ObjId> = y.objects().collect();
    for o in y.objects() {
        if rng.gen_bool(0.3) {
            over.push(o);
        }
    }
    loop {
        let size: usize = over
            .iter()
            .flat_map(|&s| over.iter().map(move |&t| (s, t)))
            .map(|(s, t)| y.hom(s, t).len())
            .sum();
        if size <= max_morphisms.max(y.num_morphisms()) || over.len() == y.num_objects() {
            break;
        }
        over.pop();
    }
    let label = |i: usize| {
        if i < y.num_objects() {
            y.obj_label(over[i]).to_string()
        } else {
            format!("{}'{}", y.obj_label(over[i]), i)
        }
    };
    let mut b = CatBuilder::new();
    for i in 0..over.len() {
        b.add_object(label(i));
    }
    let mut table: Vec<(usize, MorId, usize)> = Vec::new();
    let mut index: HashMap<(usize, MorId, usize), MorId> = HashMap::new();
    for s in 0..over.len() {
        for t in 0..over.len() {
            for &m in y.hom(over[s], over[t]) {
                let l = if s < y.num_objects() && t < y.num_objects() {
                    y.mor_label(m).to_string()
                } else {
                    format!("{}[{},{}]", y.mor_label(m), label(s), label(t))
                };
                let id = b.add_morphism(l, ObjId(s as u32), ObjId(t as u32));
                index.insert((s, m, t), id);
                table.push((s, m, t));
            }
        }
    }
    for s in 0..over.len() {
        b.set_identity(ObjId(s as u32), index[&(s, y.id(over[s]), s)]);
    }
    let x = Arc::new(b.build(|g, f| {
        let (s, m, _) = table[f.idx()];
        let (_, n, t) = table[g.idx()];
        index[&(s, y.compose(n, m), t)]
    }));
    let obj = over.clone();
    let mor = table.iter().map(|&(_, m, _)| m).collect();
    Functor::new(x, y.clone(), obj, mor).expect("collapse is a functor")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::{is_cart_marked_fibration, is_trivial_fibration};

    #[test]
    fn zero_caps_give_the_empty_category() {
        let mut r = case_rng(0, 0);
        let caps = Caps {
            max_objects: 0,
            max_morphisms: 25,
        };
        assert!(category(&mut r, caps).is_empty());
    }

    #[test]
    fn categories_respect_caps_and_are_deterministic() {
        let caps = Caps::default();
        for case in 0..40 {
            let a = category(&mut case_rng(7, case), caps);
            let b = category(&mut case_rng(7, case), caps);
            assert_eq!(a, b);
            assert!(caps.admits(&a));
            assert!(a.check_axioms().is_empty());
        }
    }

    #[test]
    fn fibrant_instances_are_cart_marked() {
        for case in 0..30 {
            let mut r = case_rng(3, case);
            let base = category(&mut r, Caps::default().base());
            let p = fibrant(&mut r, &base, Caps::default());
            assert!(is_cart_marked_fibration(p.proj(), p.marking()).is_ok());
        }
    }

    #[test]
    fn inflation_is_a_trivial_fibration() {
        for case in 0..20 {
            let mut r = case_rng(5, case);
            let y = category(&mut r, Caps::default());
            let f = inflate(&mut r, &y, 40);
            assert!(is_trivial_fibration(&f).is_ok());
        }
    }

    #[test]
    fn presheaves_are_valid() {
        for case in 0..30 {
            let mut r = case_rng(11, case);
            let base = category(&mut r, Caps::default().base());
            let f = presheaf_set(&mut r, &base, 8);
            assert!(f.total_size() <= 8 || f.total_size() == base.num_objects());
        }
    }
}
