//! Colimits of finite categories through presentations: pushouts,
//! coequalizers and quotients, plus two direct constructions used as fast
//! paths.

use std::collections::HashMap;
use std::sync::Arc;

use super::realize::{realize, Budget, PresentError, Realized};
use super::word::{letter, Generator, Presentation, Relation, Word};
use crate::fincat::{CatBuilder, FinCat, Functor, Marking, MorId, ObjId, UnionFind};

/// A colimit of several categories glued along object and morphism
/// identifications.
#[derive(Clone, Debug, Default)]
pub struct ColimitBuilder {
    parts: Vec<Arc<FinCat>>,
    obj_eqs: Vec<((usize, ObjId), (usize, ObjId))>,
    mor_eqs: Vec<((usize, MorId), (usize, MorId))>,
}

/// The realized colimit with one coprojection per part.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub cat: Arc<FinCat>,
    pub injections: Vec<Functor>,
    pub realized: Realized,
    /// Part and morphism each generator of the presentation comes from.
    pub origins: Vec<(usize, MorId)>,
}

impl Colimit {
    /// The functor out of the colimit determined by one functor per part.
    /// The legs are assumed to agree on the identifications.
    pub fn induced(&self, legs: &[Functor], target: &Arc<FinCat>) -> Functor {
        let c = &self.cat;
        let mut obj = vec![None; c.num_objects()];
        for (inj, leg) in self.injections.iter().zip(legs) {
            for o in inj.dom().objects() {
                obj[inj.obj(o).idx()].get_or_insert(leg.obj(o));
            }
        }
        let obj: Vec<ObjId> = obj
            .into_iter()
            .map(|o| o.expect("every object comes from a part"))
            .collect();
        let mor = c
            .morphisms()
            .map(|m| {
                self.realized.words[m.idx()].iter().fold(
                    target.id(obj[c.src(m).idx()]),
                    |acc, &l| {
                        let (i, n) = self.origins[super::word::generator_of(l) as usize];
                        target.compose(legs[i].mor(n), acc)
                    },
                )
            })
            .collect();
        Functor::new_unchecked(c.clone(), target.clone(), obj, mor)
    }
}

impl ColimitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_part(&mut self, c: Arc<FinCat>) -> usize {
        self.parts.push(c);
        self.parts.len() - 1
    }

    pub fn identify_objects(&mut self, a: (usize, ObjId), b: (usize, ObjId)) {
        self.obj_eqs.push((a, b));
    }

    /// Identifies two morphisms (and hence their endpoints).
    pub fn identify_morphisms(&mut self, a: (usize, MorId), b: (usize, MorId)) {
        self.mor_eqs.push((a, b));
    }

    /// Identifies `F(x)` with `G(x)` for every object and morphism `x` of the
    /// common domain of `f: X -> parts[i]` and `g: X -> parts[j]`.
    pub fn identify_along(&mut self, i: usize, f: &Functor, j: usize, g: &Functor) {
        let x = f.dom();
        for o in x.objects() {
            self.identify_objects((i, f.obj(o)), (j, g.obj(o)));
        }
        for m in x.morphisms() {
            if !x.is_identity(m) {
                self.identify_morphisms((i, f.mor(m)), (j, g.mor(m)));
            }
        }
    }

    pub fn build(&self, budget: Budget) -> Result<Colimit, PresentError> {
        let mut obj_off = Vec::new();
        let mut n_obj = 0usize;
        for p in &self.parts {
            obj_off.push(n_obj);
            n_obj += p.num_objects();
        }
        let gobj = |(i, o): (usize, ObjId)| (obj_off[i] + o.idx()) as u32;
        let mut uf = UnionFind::new(n_obj);
        for &(a, b) in &self.obj_eqs {
            uf.union(gobj(a), gobj(b));
        }
        for &((i, m), (j, n)) in &self.mor_eqs {
            let (a, b) = (&self.parts[i], &self.parts[j]);
            uf.union(gobj((i, a.src(m))), gobj((j, b.src(n))));
            uf.union(gobj((i, a.tgt(m))), gobj((j, b.tgt(n))));
        }
        // classes in order of their smallest member
        let mut class_of = vec![u32::MAX; n_obj];
        let mut reps = Vec::new();
        for x in 0..n_obj as u32 {
            let r = uf.find(x);
            if class_of[r as usize] == u32::MAX {
                class_of[r as usize] = reps.len() as u32;
                reps.push(x);
            }
            class_of[x as usize] = class_of[r as usize];
        }
        let mut part_of = Vec::with_capacity(n_obj);
        for (i, p) in self.parts.iter().enumerate() {
            for o in p.objects() {
                part_of.push((i, o));
            }
        }
        let mut objects: Vec<String> = reps
            .iter()
            .map(|&x| {
                let (i, o) = part_of[x as usize];
                self.parts[i].obj_label(o).to_string()
            })
            .collect();
        disambiguate(&mut objects);
        let cls = |i: usize, o: ObjId| ObjId(class_of[gobj((i, o)) as usize]);

        let mut generators = Vec::new();
        let mut origins = Vec::new();
        let mut gen_of: Vec<Vec<Option<u32>>> = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            let mut v = vec![None; p.num_morphisms()];
            for m in p.morphisms() {
                if !p.is_identity(m) {
                    v[m.idx()] = Some(generators.len() as u32);
                    origins.push((i, m));
                    generators.push(Generator {
                        label: p.mor_label(m).to_string(),
                        src: cls(i, p.src(m)),
                        tgt: cls(i, p.tgt(m)),
                        invertible: false,
                    });
                }
            }
            gen_of.push(v);
        }
        let mut labels: Vec<String> = generators.iter().map(|g| g.label.clone()).collect();
        disambiguate(&mut labels);
        for (g, l) in generators.iter_mut().zip(labels) {
            g.label = l;
        }
        let word = |i: usize, m: MorId| -> Word {
            gen_of[i][m.idx()]
                .map(|g| vec![letter(g, false)])
                .unwrap_or_default()
        };
        let mut relations = Vec::new();
        for (i, p) in self.parts.iter().enumerate() {
            for f in p.morphisms() {
                if p.is_identity(f) {
                    continue;
                }
                for &g in p.out_of(p.tgt(f)) {
                    if !p.is_identity(g) {
                        relations.push(Relation {
                            src: cls(i, p.src(f)),
                            tgt: cls(i, p.tgt(g)),
                            lhs: [word(i, f), word(i, g)].concat(),
                            rhs: word(i, p.compose(g, f)),
                        });
                    }
                }
            }
        }
        for &((i, m), (j, n)) in &self.mor_eqs {
            let p = &self.parts[i];
            relations.push(Relation {
                src: cls(i, p.src(m)),
                tgt: cls(i, p.tgt(m)),
                lhs: word(i, m),
                rhs: word(j, n),
            });
        }
        let pres = Presentation {
            objects,
            generators,
            relations,
        };
        let realized = realize(&pres, budget)?;
        let cat = realized.cat.clone();
        let injections = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let obj = p.objects().map(|o| cls(i, o)).collect();
                let mor = p
                    .morphisms()
                    .map(|m| realized.morphism_of(cls(i, p.src(m)), &word(i, m)))
                    .collect();
                Functor::new_unchecked(p.clone(), cat.clone(), obj, mor)
            })
            .collect();
        Ok(Colimit {
            cat,
            injections,
            realized,
            origins,
        })
    }
}

pub(crate) fn disambiguate(labels: &mut [String]) {
    let mut seen: HashMap<String, usize> = HashMap::new();
    for l in labels.iter() {
        *seen.entry(l.clone()).or_insert(0) += 1;
    }
    let mut count: HashMap<String, usize> = HashMap::new();
    for l in labels.iter_mut() {
        if seen[l.as_str()] > 1 {
            let k = count.entry(l.clone()).or_insert(0);
            *k += 1;
            if *k > 1 {
                *l = format!("{l}#{}", *k - 1);
            }
        }
    }
}

/// Pushout of `a <-f- x -g-> b`, with coprojections `a -> q`, `b -> q`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub cat: Arc<FinCat>,
    pub left: Functor,
    pub right: Functor,
    /// Union of the images of the markings, when both legs are marked.
    pub marking: Option<Marking>,
    pub colimit: Colimit,
}

impl Pushout {
    /// The functor `q -> target` restricting to `left_leg` and `right_leg`.
    pub fn induced(
        &self,
        left_leg: &Functor,
        right_leg: &Functor,
        target: &Arc<FinCat>,
    ) -> Functor {
        self.colimit
            .induced(&[left_leg.clone(), right_leg.clone()], target)
    }
}

pub fn pushout(f: &Functor, g: &Functor, budget: Budget) -> Result<Pushout, PresentError> {
    let mut b = ColimitBuilder::new();
    let i = b.add_part(f.cod().clone());
    let j = b.add_part(g.cod().clone());
    b.identify_along(i, f, j, g);
    let col = b.build(budget)?;
    let left = col.injections[0].clone();
    let right = col.injections[1].clone();
    debug_assert!(left.after(f) == right.after(g));
    Ok(Pushout {
        cat: col.cat.clone(),
        left,
        right,
        marking: None,
        colimit: col,
    })
}

/// Pushout of marked categories: the marked morphisms are the images of the
/// marked morphisms of both legs.
pub fn marked_pushout(
    f: &Functor,
    a: &Marking,
    g: &Functor,
    b: &Marking,
    budget: Budget,
) -> Result<Pushout, PresentError> {
    let mut po = pushout(f, g, budget)?;
    let mut marked = vec![false; po.cat.num_morphisms()];
    for o in po.cat.objects() {
        marked[po.cat.id(o).idx()] = true;
    }
    for m in a.marked_morphisms() {
        marked[po.left.mor(m).idx()] = true;
    }
    for m in b.marked_morphisms() {
        marked[po.right.mor(m).idx()] = true;
    }
    po.marking = Some(Marking::new(po.cat.clone(), marked).expect("identities marked"));
    Ok(po)
}

/// `P ⊔_[0] [1]` where `[0]` picks `p` in `P` and the end `1` of `[1]`: a new
/// object `label` with a free arrow `e: label -> p`. Returns the category,
/// the inclusion of `P`, and the new arrow.
pub fn adjoin_free_arrow(
    c: &Arc<FinCat>,
    p: ObjId,
    label: &str,
    arrow: &str,
) -> (Arc<FinCat>, Functor, MorId) {
    let mut b = CatBuilder::new();
    for o in c.objects() {
        b.add_object(c.obj_label(o));
    }
    let new = b.add_object(label);
    for m in c.morphisms() {
        b.add_morphism(c.mor_label(m), c.src(m), c.tgt(m));
    }
    for o in c.objects() {
        b.set_identity(o, c.id(o));
    }
    let n = c.num_morphisms() as u32;
    let id_new = b.add_morphism(format!("id_{label}"), new, new);
    b.set_identity(new, id_new);
    // g ∘ e for each g out of p, in out_of order
    let outs: Vec<MorId> = c.out_of(p).to_vec();
    let mut e_index = HashMap::new();
    let mut e = MorId(0);
    for &g in &outs {
        let lbl = if c.is_identity(g) {
            arrow.to_string()
        } else {
            format!("{}.{arrow}", c.mor_label(g))
        };
        let m = b.add_morphism(lbl, new, c.tgt(g));
        e_index.insert(g, m);
        if c.is_identity(g) {
            e = m;
        }
    }
    let base_of: HashMap<MorId, MorId> = e_index.iter().map(|(&g, &m)| (m, g)).collect();
    let q = Arc::new(b.build(|h, f| {
        if f == id_new {
            return h;
        }
        if h.0 < n && f.0 < n {
            return c.compose(h, f);
        }
        if let Some(&g) = base_of.get(&f) {
            // h ∘ (g ∘ e) = (h ∘ g) ∘ e
            return e_index[&c.compose(h, g)];
        }
        unreachable!("nothing composes into the new object")
    }));
    let inc = Functor::new_unchecked(
        c.clone(),
        q.clone(),
        c.objects().collect(),
        c.morphisms().collect(),
    );
    (q, inc, e)
}

/// The quotient of `c` by the congruence generated by `a = b` for parallel
/// `a`, `b`, by congruence closure on the composition table. Returns the
/// quotient and the projection.
pub fn quotient_parallel(c: &Arc<FinCat>, a: MorId, b: MorId) -> (Arc<FinCat>, Functor) {
    assert!(
        c.src(a) == c.src(b) && c.tgt(a) == c.tgt(b),
        "arrows must be parallel"
    );
    let mut uf = UnionFind::new(c.num_morphisms());
    uf.union(a.0, b.0);
    loop {
        let mut changed = false;
        let mut seen: HashMap<(u32, u32), u32> = HashMap::new();
        for f in c.morphisms() {
            for &g in c.out_of(c.tgt(f)) {
                let key = (uf.find(g.0), uf.find(f.0));
                let v = uf.find(c.compose(g, f).0);
                match seen.get(&key) {
                    Some(&w) if w != v => {
                        uf.union(w, v);
                        changed = true;
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, v);
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut class = vec![u32::MAX; c.num_morphisms()];
    let mut reps = Vec::new();
    for m in c.morphisms() {
        let r = uf.find(m.0) as usize;
        if class[r] == u32::MAX {
            class[r] = reps.len() as u32;
            reps.push(m);
        }
        class[m.idx()] = class[r];
    }
    let mut bld = CatBuilder::new();
    for o in c.objects() {
        bld.add_object(c.obj_label(o));
    }
    for &m in &reps {
        bld.add_morphism(c.mor_label(m), c.src(m), c.tgt(m));
    }
    for o in c.objects() {
        bld.set_identity(o, MorId(class[c.id(o).idx()]));
    }
    let q = Arc::new(bld.build(|g, f| MorId(class[c.compose(reps[g.idx()], reps[f.idx()]).idx()])));
    let proj = Functor::new_unchecked(
        c.clone(),
        q.clone(),
        c.objects().collect(),
        c.morphisms().map(|m| MorId(class[m.idx()])).collect(),
    );
    (q, proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{are_isomorphic, shapes};

    #[test]
    fn pushout_along_identity_leg() {
        let b = Arc::new(shapes::ordinal(2));
        let x = Arc::new(shapes::ordinal(1));
        let f = Functor::from_objects(x.clone(), b.clone(), vec![ObjId(0), ObjId(1)]).unwrap();
        let po = pushout(&f, &Functor::identity(x), Budget::default()).unwrap();
        assert!(are_isomorphic(&po.cat, &b).unwrap());
    }

    #[test]
    fn free_arrow_fast_path_agrees() {
        let p = Arc::new(shapes::ordinal(2));
        let (q, _, _) = adjoin_free_arrow(&p, ObjId(1), "n", "e");
        assert!(q.check_axioms().is_empty());
        let pt = Arc::new(shapes::point());
        let i = Arc::new(shapes::ordinal(1));
        let into_p = Functor::from_objects(pt.clone(), p.clone(), vec![ObjId(1)]).unwrap();
        let into_i = Functor::from_objects(pt, i.clone(), vec![ObjId(1)]).unwrap();
        let po = pushout(&into_p, &into_i, Budget::default()).unwrap();
        assert!(are_isomorphic(&po.cat, &q).unwrap());
    }

    #[test]
    fn parallel_quotient_fast_path_agrees() {
        let c = Arc::new(shapes::double_filler());
        let (a, a2) = (c.mor_by_label("a").unwrap(), c.mor_by_label("a'").unwrap());
        let (q, proj) = quotient_parallel(&c, a, a2);
        assert!(q.check_axioms().is_empty());
        assert_eq!(q.num_morphisms(), 6);
        assert_eq!(proj.mor(a), proj.mor(a2));
        let par = Arc::new(shapes::parallel_pair());
        let i = Arc::new(shapes::ordinal(1));
        let f = Functor::new(
            par.clone(),
            c.clone(),
            vec![ObjId(0), ObjId(1)],
            vec![c.id(ObjId(0)), c.id(ObjId(1)), a, a2],
        )
        .unwrap();
        let arrow = i.mor_by_label("0->1").unwrap();
        let g = Functor::new(
            par,
            i.clone(),
            vec![ObjId(0), ObjId(1)],
            vec![i.id(ObjId(0)), i.id(ObjId(1)), arrow, arrow],
        )
        .unwrap();
        let po = pushout(&f, &g, Budget::default()).unwrap();
        assert!(are_isomorphic(&po.cat, &q).unwrap());
    }
}
