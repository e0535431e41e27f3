//! Generating anodyne maps for both model structures, a lifting solver,
//! naive fibrations, weak equivalences and instance-level checks of the
//! model-structure conditions.

use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fib::{is_equivalence, is_marked_trivial_fibration, Verdict};
use crate::fincat::{
    shapes, FinCat, Functor, FunctorSearch, MarkedSlice, Marking, SearchExhausted, Slice,
};
use crate::groth::{
    marked_elements, marked_elements_map, path_object, t_marked_map, t_set_map, unit_discrete,
    unit_marked, GrothError, PathObject,
};
use crate::present::{marked_pushout, Budget, PresentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Discrete,
    Marked,
}

/// The generating shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `[0] -> [1]` at the end `1`.
    Endpoint,
    /// `[1] ⊔_[0] [1] -> [1]`, gluing two arrows along their targets.
    HornCollapse,
    /// `[0] -> [1]♯` at the end `1`.
    MarkedEndpoint,
    /// `(Λ²[2], {1->2}) -> ([2], {1->2})`.
    MarkedHorn,
    /// `([2] ⊔_{Λ²[2]} [2], {1->2}) -> ([2], {1->2})`.
    FillerMerge,
    /// `𝕀♭ -> 𝕀♯`.
    IsoMarking,
    /// `([2], {0->1, 1->2}) -> [2]♯`.
    CompositeMarking,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Endpoint => "endpoint",
            Shape::HornCollapse => "horn-collapse",
            Shape::MarkedEndpoint => "marked-endpoint",
            Shape::MarkedHorn => "marked-horn",
            Shape::FillerMerge => "filler-merge",
            Shape::IsoMarking => "iso-marking",
            Shape::CompositeMarking => "composite-marking",
        }
    }

    pub fn all(kind: Kind) -> &'static [Shape] {
        match kind {
            Kind::Discrete => &[Shape::Endpoint, Shape::HornCollapse],
            Kind::Marked => &[
                Shape::MarkedEndpoint,
                Shape::MarkedHorn,
                Shape::FillerMerge,
                Shape::IsoMarking,
                Shape::CompositeMarking,
            ],
        }
    }

    /// The uninstantiated map `A -> B` with both markings.
    pub fn map(self) -> MarkedMap {
        let ord = |n| Arc::new(shapes::ordinal(n));
        let thin = |a: Arc<FinCat>, b: Arc<FinCat>, obj: &[u32]| {
            Functor::from_objects(a, b, obj.iter().map(|&o| crate::fincat::ObjId(o)).collect())
                .expect("thin codomain")
        };
        let flat = |c: &Arc<FinCat>| Marking::minimal(c.clone());
        let with = |c: &Arc<FinCat>, labels: &[&str]| {
            Marking::from_labels(c.clone(), labels).expect("labels exist")
        };
        match self {
            Shape::Endpoint | Shape::MarkedEndpoint => {
                let (a, b) = (ord(0), ord(1));
                let tgt = if self == Shape::Endpoint {
                    flat(&b)
                } else {
                    Marking::maximal(b.clone())
                };
                MarkedMap {
                    functor: thin(a.clone(), b, &[1]),
                    src: flat(&a),
                    tgt,
                }
            }
            Shape::HornCollapse => {
                let (a, b) = (Arc::new(shapes::horn()), ord(1));
                MarkedMap {
                    functor: thin(a.clone(), b.clone(), &[0, 0, 1]),
                    src: flat(&a),
                    tgt: flat(&b),
                }
            }
            Shape::MarkedHorn => {
                let (a, b) = (Arc::new(shapes::horn()), ord(2));
                MarkedMap {
                    functor: thin(a.clone(), b.clone(), &[0, 1, 2]),
                    src: with(&a, &["1->2"]),
                    tgt: with(&b, &["1->2"]),
                }
            }
            Shape::FillerMerge => {
                let (a, b) = (Arc::new(shapes::double_filler()), ord(2));
                MarkedMap {
                    functor: thin(a.clone(), b.clone(), &[0, 1, 2]),
                    src: with(&a, &["1->2"]),
                    tgt: with(&b, &["1->2"]),
                }
            }
            Shape::IsoMarking => {
                let i = Arc::new(shapes::walking_iso());
                MarkedMap {
                    functor: Functor::identity(i.clone()),
                    src: flat(&i),
                    tgt: Marking::maximal(i),
                }
            }
            Shape::CompositeMarking => {
                let b = ord(2);
                MarkedMap {
                    functor: Functor::identity(b.clone()),
                    src: with(&b, &["0->1", "1->2"]),
                    tgt: Marking::maximal(b),
                }
            }
        }
    }
}

/// A functor together with markings of its domain and codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedMap {
    pub functor: Functor,
    pub src: Marking,
    pub tgt: Marking,
}

impl MarkedMap {
    /// Both sides minimally marked.
    pub fn plain(functor: Functor) -> MarkedMap {
        let src = Marking::minimal(functor.dom().clone());
        let tgt = Marking::minimal(functor.cod().clone());
        MarkedMap { functor, src, tgt }
    }

    pub fn preserves_marking(&self) -> bool {
        self.src
            .marked_morphisms()
            .all(|m| self.tgt.is_marked(self.functor.mor(m)))
    }
}

/// One instance `A -> B -> C` of a generating shape.
#[derive(Clone, Debug)]
pub struct AnodyneGenerator {
    pub shape: Shape,
    /// Shape name followed by the images of the generating arrows of `B`.
    pub name: String,
    pub map: MarkedMap,
    /// `B -> C`.
    pub structure: Functor,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub kind: Kind,
    pub base: Arc<FinCat>,
    pub generators: Vec<AnodyneGenerator>,
}

impl GeneratorSet {
    pub fn count(&self, shape: Shape) -> usize {
        self.generators.iter().filter(|g| g.shape == shape).count()
    }
}

fn instantiate(kind: Kind, c: &Arc<FinCat>) -> GeneratorSet {
    let mut generators = Vec::new();
    for &shape in Shape::all(kind) {
        let map = shape.map();
        let b = map.functor.cod().clone();
        let mut structures = FunctorSearch::new(&b, c)
            .all(usize::MAX)
            .expect("generator shapes are tiny");
        structures.sort_by(|x, y| {
            x.mor_table()
                .cmp(y.mor_table())
                .then(x.obj_table().cmp(y.obj_table()))
        });
        for s in structures {
            let arrows: Vec<String> = b
                .morphisms()
                .filter(|&m| !b.is_identity(m))
                .filter(|&m| shape != Shape::IsoMarking || b.mor_label(m) == "u")
                .filter(|&m| b.mor_label(m) != "0->2" || b.num_objects() != 3)
                .map(|m| c.mor_label(s.mor(m)).to_string())
                .collect();
            let at = if arrows.is_empty() {
                b.objects()
                    .map(|o| c.obj_label(s.obj(o)).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            } else {
                arrows.join(",")
            };
            generators.push(AnodyneGenerator {
                shape,
                name: format!("{}[{}]", shape.name(), at),
                map: map.clone(),
                structure: s,
            });
        }
    }
    GeneratorSet {
        kind,
        base: c.clone(),
        generators,
    }
}

/// `[0] -> [1] -> C` and `[1] ⊔_[0] [1] -> [1] -> C` for every morphism
/// of `C`.
pub fn discrete_anodyne_generators(c: &Arc<FinCat>) -> GeneratorSet {
    instantiate(Kind::Discrete, c)
}

/// The five marked shapes over `C♯`, one instance per functor from the
/// codomain shape into `C`.
pub fn marked_anodyne_generators(c: &Arc<FinCat>) -> GeneratorSet {
    instantiate(Kind::Marked, c)
}

pub fn anodyne_generators(kind: Kind, c: &Arc<FinCat>) -> GeneratorSet {
    instantiate(kind, c)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum LiftError {
    #[error("the lifting square does not commute")]
    NotCommuting,
    #[error(transparent)]
    Exhausted(#[from] SearchExhausted),
}

/// A solution `L: B -> X` of the square `p ∘ top = bottom ∘ i` with
/// `L ∘ i = top` and `p ∘ L = bottom`, marking-preserving. Candidates are
/// tried in id order; the first lift found is returned.
pub fn find_lift(
    i: &MarkedMap,
    p: &MarkedMap,
    top: &Functor,
    bottom: &Functor,
    max_nodes: u64,
) -> Result<Option<Functor>, LiftError> {
    if p.functor.after(top) != bottom.after(&i.functor) {
        return Err(LiftError::NotCommuting);
    }
    let (a, b) = (i.functor.dom(), i.functor.cod());
    let x = p.functor.dom();
    let mut search = FunctorSearch::new(b, x).max_nodes(max_nodes);
    for o in a.objects() {
        search = search.fix_object(i.functor.obj(o), top.obj(o));
    }
    for m in a.morphisms() {
        search = search.fix_morphism(i.functor.mor(m), top.mor(m));
    }
    for o in b.objects() {
        let target = bottom.obj(o);
        search = search.restrict_object(o, |t| p.functor.obj(t) == target);
    }
    let search = search.filter(|mb, mx| {
        p.functor.mor(mx) == bottom.mor(mb) && (!i.tgt.is_marked(mb) || p.src.is_marked(mx))
    });
    Ok(search.first()?)
}

/// A commutative square with no lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftingFailure {
    pub generator: String,
    /// Images of the objects and non-identity morphisms of the generator's
    /// domain under the top map.
    pub top: Vec<(String, String)>,
    pub bottom: Vec<(String, String)>,
}

fn describe(f: &Functor) -> Vec<(String, String)> {
    let (d, c) = (f.dom(), f.cod());
    let mut v: Vec<(String, String)> = d
        .objects()
        .map(|o| {
            (
                d.obj_label(o).to_string(),
                c.obj_label(f.obj(o)).to_string(),
            )
        })
        .collect();
    v.extend(d.morphisms().filter(|&m| !d.is_identity(m)).map(|m| {
        (
            d.mor_label(m).to_string(),
            c.mor_label(f.mor(m)).to_string(),
        )
    }));
    v
}

/// `f: X -> Y` over `C`, with structure maps `px: X -> C` and `py: Y -> C`
/// (`py ∘ f = px`) and markings on `X`, `Y` (ignored for the discrete
/// kind). Checks the right lifting property against every generating
/// square, enumerating squares in generator order; the first failing
/// square is returned.
pub fn is_naive_fibration(
    kind: Kind,
    f: &MarkedMap,
    px: &Functor,
    py: &Functor,
    max_nodes: u64,
) -> Result<Result<(), LiftingFailure>, SearchExhausted> {
    let base = py.cod();
    let gens = anodyne_generators(kind, base);
    let f = match kind {
        Kind::Discrete => MarkedMap::plain(f.functor.clone()),
        Kind::Marked => f.clone(),
    };
    for g in &gens.generators {
        let i = match kind {
            Kind::Discrete => MarkedMap::plain(g.map.functor.clone()),
            Kind::Marked => g.map.clone(),
        };
        let (a, b) = (i.functor.dom().clone(), i.functor.cod().clone());
        let structure_a = g.structure.after(&i.functor);
        let bottoms = FunctorSearch::new(&b, f.functor.cod())
            .max_nodes(max_nodes)
            .filter(|mb, my| {
                py.mor(my) == g.structure.mor(mb) && (!i.tgt.is_marked(mb) || f.tgt.is_marked(my))
            })
            .all(usize::MAX)?;
        for v in bottoms {
            let vi = v.after(&i.functor);
            let mut failure = None;
            let tops = FunctorSearch::new(&a, f.functor.dom())
                .max_nodes(max_nodes)
                .filter(|ma, mx| {
                    f.functor.mor(mx) == vi.mor(ma)
                        && px.mor(mx) == structure_a.mor(ma)
                        && (!i.src.is_marked(ma) || f.src.is_marked(mx))
                });
            let mut err = None;
            tops.for_each(|u| match find_lift(&i, &f, u, &v, max_nodes) {
                Ok(Some(_)) => ControlFlow::Continue(()),
                Ok(None) => {
                    failure = Some(LiftingFailure {
                        generator: g.name.clone(),
                        top: describe(u),
                        bottom: describe(&v),
                    });
                    ControlFlow::Break(())
                }
                Err(LiftError::Exhausted(e)) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
                Err(LiftError::NotCommuting) => unreachable!("squares are built commuting"),
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            if let Some(w) = failure {
                return Ok(Err(w));
            }
        }
    }
    Ok(Ok(()))
}

/// `P -> C` (or `P -> C♯`) is a naive fibration.
pub fn is_naive_fibrant(
    kind: Kind,
    p: &MarkedSlice,
    max_nodes: u64,
) -> Result<Result<(), LiftingFailure>, SearchExhausted> {
    let base = p.base().clone();
    let tgt = match kind {
        Kind::Discrete => Marking::minimal(base.clone()),
        Kind::Marked => Marking::maximal(base.clone()),
    };
    let f = MarkedMap {
        functor: p.proj().clone(),
        src: p.marking().clone(),
        tgt,
    };
    is_naive_fibration(kind, &f, p.proj(), &Functor::identity(base), max_nodes)
}

/// Outcome of the weak-equivalence procedure: the induced map between
/// the replacements `∫T P -> ∫T Q` (discrete) or `∫⁺T⁺P -> ∫⁺T⁺Q`
/// (marked) is tested for being an isomorphism, respectively an
/// equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakEquivalenceReport {
    pub weak_equivalence: bool,
    /// Why the induced map fails, when it does.
    pub detail: Option<String>,
}

/// Decides whether `f: P -> Q` over `C` is a weak equivalence by
/// comparing the replacements given by the units.
pub fn is_weak_equivalence(
    kind: Kind,
    f: &MarkedMap,
    p: &MarkedSlice,
    q: &MarkedSlice,
    budget: Budget,
) -> Result<WeakEquivalenceReport, GrothError> {
    match kind {
        Kind::Discrete => {
            let fp = unit_discrete(p.proj());
            let fq = unit_discrete(q.proj());
            let t = t_set_map(&f.functor, &fp.tset, &fq.tset);
            let detail = if t.is_iso() {
                None
            } else {
                let base = p.base();
                let c = base
                    .objects()
                    .find(|&c| {
                        let comp = t.component(c);
                        let mut seen = comp.to_vec();
                        seen.sort();
                        seen.dedup();
                        seen.len() != comp.len() || comp.len() != fq.tset.presheaf.size(c)
                    })
                    .expect("a component is not bijective");
                Some(format!(
                    "induced map of replacements is not bijective over {}",
                    base.obj_label(c)
                ))
            };
            Ok(WeakEquivalenceReport {
                weak_equivalence: detail.is_none(),
                detail,
            })
        }
        Kind::Marked => {
            let up = unit_marked(p, budget)?;
            let uq = unit_marked(q, budget)?;
            let t = t_marked_map(&f.functor, &up.t, &uq.t);
            let induced = marked_elements_map(&t, &up.elements, &uq.elements);
            let verdict = is_equivalence(&induced);
            Ok(WeakEquivalenceReport {
                weak_equivalence: verdict.is_ok(),
                detail: verdict
                    .err()
                    .map(|w| serde_json::to_string(&w).expect("witness serializes")),
            })
        }
    }
}

/// Path object of a fibrant marked slice, with the second leg checked
/// through the lifting solver.
#[derive(Clone, Debug)]
pub struct PathReport {
    pub path: PathObject,
    pub second_leg_naive: Result<(), LiftingFailure>,
}

impl PathReport {
    pub fn holds(&self) -> bool {
        self.path.holds() && self.second_leg_naive.is_ok()
    }
}

pub fn verify_path_object(
    p: &MarkedSlice,
    max_nodes: u64,
) -> Result<Result<PathReport, crate::fib::Witness>, SearchExhausted> {
    let path = match path_object(p) {
        Ok(x) => x,
        Err(w) => return Ok(Err(w)),
    };
    let second_leg_naive = second_leg_check(&path, max_nodes)?;
    Ok(Ok(PathReport {
        path,
        second_leg_naive,
    }))
}

/// Lifting check of `Path -> P ×_C P` against the marked generators.
pub fn second_leg_check(
    path: &PathObject,
    max_nodes: u64,
) -> Result<Result<(), LiftingFailure>, SearchExhausted> {
    let f = MarkedMap {
        functor: path.second.clone(),
        src: path.path.marking().clone(),
        tgt: path.product.marking().clone(),
    };
    is_naive_fibration(
        Kind::Marked,
        &f,
        path.path.proj(),
        path.product.proj(),
        max_nodes,
    )
}

/// Pushes the marked trivial fibration `f: X -> Y` out along the marked
/// cofibration `g: X -> X'` and checks that `X' -> Y ⊔_X X'` is again a
/// marked trivial fibration.
pub fn pushout_of_trivial_fibration(
    f: &MarkedMap,
    g: &MarkedMap,
    budget: Budget,
) -> Result<Verdict, PresentError> {
    let po = marked_pushout(&f.functor, &f.tgt, &g.functor, &g.tgt, budget)?;
    let marking = po.marking.expect("marked pushout");
    Ok(is_marked_trivial_fibration(&po.right, &g.tgt, &marking))
}

/// The slice `C -> C` as a marked slice over `C♯`.
pub fn terminal_marked(c: &Arc<FinCat>) -> MarkedSlice {
    MarkedSlice::maximal(Slice::identity(c.clone()))
}

/// Convenience: `∫⁺F` is naive fibrant.
pub fn elements_are_fibrant(
    f: &crate::fincat::PresheafCat,
    max_nodes: u64,
) -> Result<bool, SearchExhausted> {
    let el = marked_elements(f);
    Ok(is_naive_fibrant(Kind::Marked, &el.slice, max_nodes)?.is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::{is_cart_marked_fibration, is_discrete_fibration};
    use crate::fincat::{ObjId, DEFAULT_SEARCH_NODES};

    fn ord(n: usize) -> Arc<FinCat> {
        Arc::new(shapes::ordinal(n))
    }

    #[test]
    fn generator_counts() {
        assert_eq!(discrete_anodyne_generators(&ord(0)).generators.len(), 2);
        assert_eq!(discrete_anodyne_generators(&ord(1)).generators.len(), 6);
        assert!(discrete_anodyne_generators(&Arc::new(shapes::empty()))
            .generators
            .is_empty());
        let m = marked_anodyne_generators(&ord(1));
        let counts: Vec<usize> = Shape::all(Kind::Marked)
            .iter()
            .map(|&s| m.count(s))
            .collect();
        assert_eq!(counts, vec![3, 4, 4, 2, 4]);
        assert_eq!(marked_anodyne_generators(&ord(0)).generators.len(), 5);
        assert!(marked_anodyne_generators(&Arc::new(shapes::empty()))
            .generators
            .is_empty());
    }

    #[test]
    fn shapes_are_marked_functors() {
        for kind in [Kind::Discrete, Kind::Marked] {
            for &s in Shape::all(kind) {
                let m = s.map();
                assert!(m.preserves_marking(), "{s:?}");
                assert!(m.functor.is_injective_on_objects() || s == Shape::HornCollapse);
            }
        }
    }

    #[test]
    fn identity_square_lifts() {
        let i = Shape::MarkedHorn.map();
        let b = i.functor.cod().clone();
        let p = MarkedMap {
            functor: Functor::identity(b.clone()),
            src: i.tgt.clone(),
            tgt: i.tgt.clone(),
        };
        let lift = find_lift(
            &i,
            &p,
            &i.functor,
            &Functor::identity(b),
            DEFAULT_SEARCH_NODES,
        )
        .unwrap()
        .unwrap();
        assert!(lift.is_identity());
    }

    #[test]
    fn discrete_naive_fibrant_is_discrete_fibration() {
        let c = ord(1);
        let two = Arc::new(shapes::discrete(2));
        for obj in [[0u32, 1], [1, 1], [0, 0]] {
            let p = Functor::from_objects(
                two.clone(),
                c.clone(),
                obj.iter().map(|&o| ObjId(o)).collect(),
            )
            .unwrap();
            let s = MarkedSlice::minimal(Slice::new(p.clone()));
            let naive = is_naive_fibrant(Kind::Discrete, &s, DEFAULT_SEARCH_NODES)
                .unwrap()
                .is_ok();
            assert_eq!(naive, is_discrete_fibration(&p).is_ok(), "{obj:?}");
        }
    }

    #[test]
    fn marked_naive_fibrant_examples() {
        let c = ord(1);
        let sharp = terminal_marked(&c);
        assert!(is_naive_fibrant(Kind::Marked, &sharp, DEFAULT_SEARCH_NODES)
            .unwrap()
            .is_ok());
        let flat = MarkedSlice::minimal(Slice::identity(c.clone()));
        let r = is_naive_fibrant(Kind::Marked, &flat, DEFAULT_SEARCH_NODES).unwrap();
        assert!(r.unwrap_err().generator.starts_with("marked-endpoint"));
        assert!(is_cart_marked_fibration(flat.proj(), flat.marking()).is_err());
    }

    #[test]
    fn path_object_through_solver() {
        let i = Arc::new(shapes::walking_iso());
        let pt = Arc::new(shapes::point());
        let p = MarkedSlice::natural(Slice::new(Functor::to_terminal(i, pt)));
        let r = verify_path_object(&p, DEFAULT_SEARCH_NODES)
            .unwrap()
            .unwrap();
        assert!(r.holds());
        // unmark a marked non-identity pair: the second leg stops lifting
        let path = &r.path;
        let total = path.path.total();
        let m = total
            .morphisms()
            .find(|&m| !total.is_identity(m) && path.path.is_marked(m))
            .unwrap();
        let mut broken = path.clone();
        broken.path = path
            .path
            .with_marking(path.path.marking().with_flag(m, false))
            .unwrap();
        assert!(second_leg_check(&broken, DEFAULT_SEARCH_NODES)
            .unwrap()
            .is_err());
    }

    #[test]
    fn weak_equivalences() {
        let c = ord(1);
        let id = MarkedSlice::minimal(Slice::identity(c.clone()));
        let f = MarkedMap::plain(Functor::identity(c.clone()));
        assert!(
            is_weak_equivalence(Kind::Discrete, &f, &id, &id, Budget::default())
                .unwrap()
                .weak_equivalence
        );
        // [0] --1--> [1] over [1] is final, hence a weak equivalence
        let pt = Arc::new(shapes::point());
        let one = Functor::from_objects(pt.clone(), c.clone(), vec![ObjId(1)]).unwrap();
        let p = MarkedSlice::minimal(Slice::new(one.clone()));
        let g = MarkedMap::plain(one);
        assert!(
            is_weak_equivalence(Kind::Discrete, &g, &p, &id, Budget::default())
                .unwrap()
                .weak_equivalence
        );
        let zero = Functor::from_objects(pt, c.clone(), vec![ObjId(0)]).unwrap();
        let p0 = MarkedSlice::minimal(Slice::new(zero.clone()));
        let h = MarkedMap::plain(zero);
        assert!(
            !is_weak_equivalence(Kind::Discrete, &h, &p0, &id, Budget::default())
                .unwrap()
                .weak_equivalence
        );
    }

    #[test]
    fn marked_trivial_fibration_is_weak_equivalence() {
        let i = Arc::new(shapes::walking_iso());
        let pt = Arc::new(shapes::point());
        let to_pt = Functor::to_terminal(i.clone(), pt.clone());
        let p = MarkedSlice::natural(Slice::new(to_pt.clone()));
        let q = MarkedSlice::maximal(Slice::identity(pt.clone()));
        let f = MarkedMap {
            functor: to_pt,
            src: p.marking().clone(),
            tgt: q.marking().clone(),
        };
        let r = is_weak_equivalence(Kind::Marked, &f, &p, &q, Budget::default()).unwrap();
        assert!(r.weak_equivalence, "{r:?}");
    }
}
