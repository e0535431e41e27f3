//! Named algebraic laws checked on seeded random instances, and the
//! parallel runner that produces deterministic reports.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::fib::{
    cartesian_lifts, cartesian_morphisms, is_cart_marked_fibration, is_discrete_fibration,
    is_equivalence, is_grothendieck_fibration, is_isofibration, is_marked_trivial_fibration,
    is_p_cartesian, vertical_comparisons,
};
use crate::fincat::{
    all_set_nat_trans, are_isomorphic, comma, comma_restrict, coproduct, full_subcategory, pi0,
    product_over, shapes, subcategory, CatNatTrans, FinCat, Functor, FunctorSearch, MarkedSlice,
    Marking, MorId, ObjId, PresheafCat, PresheafSet, RawCategory, SetNatTrans, Slice, UnionFind,
    DEFAULT_SEARCH_NODES,
};
use crate::groth::{
    counit_discrete, counit_marked, elements, elements_map, marked_elements, marked_elements_map,
    t_marked_map, t_set_map, unit_discrete, unit_marked, verify_triangles_discrete,
    verify_triangles_marked, GrothError,
};
use crate::io::{FunctorJson, PresheafJson, SSetJson};
use crate::lke::{lke_set, lke_set_unit, transpose, verify_slice_extension};
use crate::model::{is_naive_fibrant, is_naive_fibration, terminal_marked, Kind, MarkedMap};
use crate::present::{
    adjoin_free_arrow, check_certificate, localization_presentation, localize, marked_pushout,
    realize, Budget, PresentError, Presentation, RewriteSystem,
};
use crate::random::{self, case_rng, Caps, CaseRng};
use crate::simplicial::{
    categorify, categorify_marked, check_transpose, counit, horn, marked_nerve, nerve,
    MarkedTruncSSet, TruncSSet, MAX_DIM,
};

/// Limits shared by every law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub caps: Caps,
    pub max_nodes: u64,
    pub budget: Budget,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            caps: Caps::default(),
            max_nodes: DEFAULT_SEARCH_NODES,
            budget: Budget::default(),
        }
    }
}

/// Why a case did not pass.
#[derive(Clone, Debug, PartialEq)]
pub enum Issue {
    /// The instance could not be decided within the limits.
    Skip(String),
    Fail(Value),
}

pub type Check = Result<(), Issue>;

fn fail<T>(witness: Value) -> Result<T, Issue> {
    Err(Issue::Fail(witness))
}

fn skip<T>(why: impl Into<String>) -> Result<T, Issue> {
    Err(Issue::Skip(why.into()))
}

fn present_skip(e: &PresentError) -> Issue {
    Issue::Skip(match e {
        PresentError::CompletionFailed(_) => "completion failed".into(),
        PresentError::Divergent(_) => "divergent".into(),
        PresentError::EnumerationCap { .. } => "enumeration cap".into(),
        PresentError::Invalid(_) => "invalid presentation".into(),
    })
}

fn groth_skip(e: &GrothError) -> Issue {
    present_skip(e.present_error())
}

#[derive(Clone, Debug, PartialEq)]
pub enum CaseOutcome {
    Pass,
    Skip(String),
    Fail {
        witness: Value,
        instance: Value,
        shrink_steps: usize,
    },
}

type Runner = dyn Fn(u64, u64, &Settings) -> CaseOutcome + Send + Sync;

pub struct Law {
    pub name: &'static str,
    pub module: &'static str,
    pub statement: &'static str,
    run: Box<Runner>,
}

impl Law {
    pub fn run_case(&self, seed: u64, case: u64, settings: &Settings) -> CaseOutcome {
        (self.run)(seed, case, settings)
    }
}

const MAX_SHRINK_STEPS: usize = 200;

struct Recipe<I> {
    generate: fn(&mut CaseRng, &Settings) -> I,
    check: fn(&I, &Settings) -> Check,
    shrink: fn(&I) -> Vec<I>,
    show: fn(&I) -> Value,
}

fn law<I: 'static>(
    name: &'static str,
    module: &'static str,
    statement: &'static str,
    recipe: Recipe<I>,
) -> Law {
    let run = move |seed: u64, case: u64, s: &Settings| {
        let mut rng = case_rng(seed, case);
        let mut inst = (recipe.generate)(&mut rng, s);
        match (recipe.check)(&inst, s) {
            Ok(()) => CaseOutcome::Pass,
            Err(Issue::Skip(why)) => CaseOutcome::Skip(why),
            Err(Issue::Fail(mut witness)) => {
                let mut steps = 0;
                'outer: while steps < MAX_SHRINK_STEPS {
                    for cand in (recipe.shrink)(&inst) {
                        if let Err(Issue::Fail(w)) = (recipe.check)(&cand, s) {
                            inst = cand;
                            witness = w;
                            steps += 1;
                            continue 'outer;
                        }
                    }
                    break;
                }
                CaseOutcome::Fail {
                    witness,
                    instance: (recipe.show)(&inst),
                    shrink_steps: steps,
                }
            }
        }
    };
    Law {
        name,
        module,
        statement,
        run: Box::new(run),
    }
}

fn no_shrink<I>(_: &I) -> Vec<I> {
    Vec::new()
}

/// Subcategories with one object or one morphism fewer, with inclusions.
fn smaller_categories(c: &Arc<FinCat>) -> Vec<Functor> {
    let mut out = Vec::new();
    for drop in c.objects() {
        let keep: Vec<ObjId> = c.objects().filter(|&o| o != drop).collect();
        out.push(full_subcategory(c, &keep).1);
    }
    for m in c.morphisms() {
        if c.is_identity(m) {
            continue;
        }
        let closed = c.morphisms().all(|f| {
            f == m
                || c.out_of(c.tgt(f))
                    .iter()
                    .all(|&g| g == m || c.compose(g, f) != m)
        });
        if closed {
            let keep: Vec<ObjId> = c.objects().collect();
            out.push(subcategory(c, &keep, |x| x != m).1);
        }
    }
    out
}

fn shrink_cat(c: &Arc<FinCat>) -> Vec<Arc<FinCat>> {
    smaller_categories(c)
        .into_iter()
        .map(|i| i.dom().clone())
        .collect()
}

fn shrink_slice(p: &Slice) -> Vec<Slice> {
    smaller_categories(p.total())
        .into_iter()
        .map(|i| Slice::new(p.proj().after(&i)))
        .collect()
}

fn base_restrictions(base: &Arc<FinCat>) -> Vec<Functor> {
    base.objects()
        .map(|drop| {
            let keep: Vec<ObjId> = base.objects().filter(|&o| o != drop).collect();
            full_subcategory(base, &keep).1
        })
        .collect()
}

fn shrink_presheaf_set(f: &PresheafSet) -> Vec<PresheafSet> {
    base_restrictions(f.base())
        .iter()
        .map(|i| f.restrict(i))
        .collect()
}

fn shrink_presheaf_cat(f: &PresheafCat) -> Vec<PresheafCat> {
    base_restrictions(f.base())
        .iter()
        .map(|i| f.restrict(i))
        .collect()
}

fn show_cat(c: &Arc<FinCat>) -> Value {
    json!(crate::io::CategoryJson::from_cat(c))
}

fn show_slice(p: &Slice) -> Value {
    json!(FunctorJson::from_functor(p.proj()))
}

fn show_marked(p: &MarkedSlice) -> Value {
    json!(FunctorJson::from_marked_slice(p))
}

fn show_marking(m: &Marking) -> Value {
    json!(crate::io::CategoryJson::from_marked(m))
}

fn show_set(f: &PresheafSet) -> Value {
    json!(PresheafJson::from_set(f))
}

fn show_pcat(f: &PresheafCat) -> Value {
    json!(PresheafJson::from_cat(f))
}

fn label_of(c: &FinCat, m: MorId) -> String {
    c.mor_label(m).to_string()
}

fn gen_category(r: &mut CaseRng, s: &Settings) -> Arc<FinCat> {
    random::category(r, s.caps)
}

fn gen_slice(r: &mut CaseRng, s: &Settings) -> Slice {
    random::slice(r, s.caps, s.max_nodes)
}

fn gen_marking(r: &mut CaseRng, s: &Settings) -> Marking {
    let c = random::category(r, s.caps);
    random::marking(r, &c)
}

fn gen_set(r: &mut CaseRng, s: &Settings) -> PresheafSet {
    let base = random::category(r, s.caps.base());
    random::presheaf_set(r, &base, s.caps.max_objects)
}

fn gen_pcat(r: &mut CaseRng, s: &Settings) -> PresheafCat {
    let base = random::category(r, s.caps.base());
    random::presheaf_cat(r, &base, s.caps)
}

fn gen_fibrant(r: &mut CaseRng, s: &Settings) -> MarkedSlice {
    let base = random::category(r, s.caps.base());
    random::fibrant(r, &base, s.caps)
}

/// A slice with a random marking; a third are fibrant.
fn gen_marked_slice(r: &mut CaseRng, s: &Settings) -> MarkedSlice {
    if r.gen_bool(1.0 / 3.0) {
        return gen_fibrant(r, s);
    }
    let p = gen_slice(r, s);
    let m = random::marking(r, p.total());
    MarkedSlice::new(p.proj().clone(), m).expect("marking on the total")
}

fn fincat_laws() -> Vec<Law> {
    vec![
        law(
            "category-axioms",
            "fincat",
            "validated categories satisfy unit and associativity laws, and their tables re-validate to the same category",
            Recipe {
                generate: gen_category,
                check: |c, _| {
                    let v = c.check_axioms();
                    if !v.is_empty() {
                        return fail(json!({ "violations": v }));
                    }
                    let mut raw = RawCategory::from_cat(c);
                    raw.morphisms = c
                        .morphisms()
                        .map(|m| {
                            let (s, t) = (c.obj_label(c.src(m)), c.obj_label(c.tgt(m)));
                            (c.mor_label(m).into(), s.into(), t.into())
                        })
                        .collect();
                    match raw.validate() {
                        Ok(d) if d == **c => Ok(()),
                        Ok(_) => fail(json!("tables re-validate to a different category")),
                        Err(e) => fail(json!({ "violations": e.violations })),
                    }
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        ),
        law(
            "comma-functoriality",
            "fincat",
            "precomposition with u: c -> d gives a functor d↓P -> c↓P, identities act trivially and composites compose",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let base = p.base();
                    let commas: Vec<_> = base.objects().map(|c| comma(c, p)).collect();
                    let restrict = |u: MorId| {
                        let f = comma_restrict(
                            p,
                            u,
                            &commas[base.tgt(u).idx()],
                            &commas[base.src(u).idx()],
                        );
                        Functor::new(
                            f.dom().clone(),
                            f.cod().clone(),
                            f.obj_table().to_vec(),
                            f.mor_table().to_vec(),
                        )
                    };
                    let mut maps = Vec::new();
                    for u in base.morphisms() {
                        match restrict(u) {
                            Ok(f) => maps.push(f),
                            Err(e) => {
                                return fail(json!({
                                    "morphism": label_of(base, u),
                                    "error": e.to_string()
                                }))
                            }
                        }
                    }
                    for o in base.objects() {
                        if !maps[base.id(o).idx()].is_identity() {
                            return fail(json!({ "identity_acts": base.obj_label(o) }));
                        }
                    }
                    for u in base.morphisms() {
                        for &v in base.out_of(base.tgt(u)) {
                            let vu = base.compose(v, u);
                            if maps[vu.idx()] != maps[u.idx()].after(&maps[v.idx()]) {
                                return fail(json!({
                                    "u": label_of(base, u),
                                    "v": label_of(base, v)
                                }));
                            }
                        }
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "components-ignore-direction",
            "fincat",
            "connected components agree with those of the opposite category and with undirected reachability",
            Recipe {
                generate: gen_category,
                check: |c, _| {
                    let a = pi0(c);
                    let b = pi0(&Arc::new(c.opposite()));
                    let mut uf = UnionFind::new(c.num_objects());
                    for m in c.morphisms() {
                        uf.union(c.tgt(m).0, c.src(m).0);
                    }
                    let oracle: Vec<u32> = c.objects().map(|o| uf.find(o.0)).collect();
                    let ours: Vec<u32> = a.rep_of.iter().map(|o| o.0).collect();
                    if a.rep_of != b.rep_of || ours != oracle {
                        return fail(json!({ "components": ours, "reachability": oracle }));
                    }
                    Ok(())
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        ),
        law(
            "product-with-identity-slice",
            "fincat",
            "P ×_C id_C projects isomorphically onto the total category of P, over C",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let id = Slice::identity(p.base().clone());
                    let pb = product_over(p, &id).expect("same base");
                    if !pb.left.is_isomorphism() {
                        return fail(json!("first projection is not an isomorphism"));
                    }
                    if p.proj().after(&pb.left) != *pb.slice.proj() {
                        return fail(json!("projection is not over the base"));
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
    ]
}

fn localization_case(m: &Marking, s: &Settings) -> Result<crate::present::Localization, Issue> {
    localize(m, s.budget).map_err(|e| present_skip(&e))
}

fn present_laws() -> Vec<Law> {
    vec![
        law(
            "presentation-round-trip",
            "present",
            "realizing the presentation read off a finite category gives an isomorphic category",
            Recipe {
                generate: gen_category,
                check: |c, s| {
                    let r = realize(&Presentation::from_fincat(c), s.budget)
                        .map_err(|e| present_skip(&e))?;
                    match are_isomorphic(&r.cat, c) {
                        Ok(true) => Ok(()),
                        Ok(false) => fail(json!({
                            "realized_morphisms": r.cat.num_morphisms(),
                            "morphisms": c.num_morphisms()
                        })),
                        Err(_) => skip("isomorphism search exhausted"),
                    }
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        ),
        law(
            "localization-inverts-marking",
            "present",
            "the localization functor sends every marked morphism to an isomorphism",
            Recipe {
                generate: gen_marking,
                check: |m, s| {
                    let loc = localization_case(m, s)?;
                    for f in m.marked_morphisms() {
                        if !loc.cat().is_iso(loc.gamma.mor(f)) {
                            return fail(json!({ "not_inverted": label_of(m.carrier(), f) }));
                        }
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: show_marking,
            },
        ),
        law(
            "localization-universal-property",
            "present",
            "a functor inverting the marking factors through the localization, and the factorization is unique",
            Recipe {
                generate: |r, s| {
                    let m = gen_marking(r, s);
                    let d = random::category(r, s.caps);
                    let c = m.carrier().clone();
                    let f = FunctorSearch::new(&c, &d)
                        .shuffled(r.gen())
                        .max_nodes(s.max_nodes)
                        .filter(|x, y| !m.is_marked(x) || d.is_iso(y))
                        .first()
                        .ok()
                        .flatten();
                    (m, f)
                },
                check: |(m, f), s| {
                    let loc = localization_case(m, s)?;
                    let f = f.clone().unwrap_or_else(|| loc.gamma.clone());
                    let fbar = match loc.factor(&f) {
                        Ok(x) => x,
                        Err(e) => return fail(json!({ "no_factorization": e.to_string() })),
                    };
                    let mut search = FunctorSearch::new(loc.cat(), f.cod()).max_nodes(s.max_nodes);
                    for o in m.carrier().objects() {
                        search = search.fix_object(loc.gamma.obj(o), f.obj(o));
                    }
                    for x in m.carrier().morphisms() {
                        search = search.fix_morphism(loc.gamma.mor(x), f.mor(x));
                    }
                    match search.all(2) {
                        Ok(all) if all.len() == 1 && all[0] == fbar => Ok(()),
                        Ok(all) => fail(json!({ "factorizations": all.len() })),
                        Err(_) => skip("factorization search exhausted"),
                    }
                },
                shrink: no_shrink,
                show: |(m, f)| {
                    json!({
                        "marking": show_marking(m),
                        "functor": f.as_ref().map(FunctorJson::from_functor)
                    })
                },
            },
        ),
        law(
            "total-localization-is-groupoid",
            "present",
            "localizing at every morphism yields a groupoid",
            Recipe {
                generate: gen_category,
                check: |c, s| {
                    let loc = localization_case(&Marking::maximal(c.clone()), s)?;
                    let l = loc.cat();
                    match l.morphisms().find(|&f| !l.is_iso(f)) {
                        None => Ok(()),
                        Some(f) => fail(json!({ "not_invertible": label_of(l, f) })),
                    }
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        ),
        law(
            "growth-certificate-sound",
            "present",
            "a divergence certificate re-expands to pairwise distinct normal forms under the completed rewriting system",
            Recipe {
                generate: gen_marking,
                check: |m, s| match localize(m, s.budget) {
                    Err(PresentError::Divergent(cert)) => {
                        let (pres, _) = localization_presentation(m);
                        let sys = RewriteSystem::complete(&pres, s.budget.rewrite_steps)
                            .expect("completion succeeded before divergence was detected");
                        let rounds = (2 * cert.verified_up_to).max(8);
                        if check_certificate(&sys, &cert, rounds) {
                            Ok(())
                        } else {
                            fail(json!({ "certificate": cert }))
                        }
                    }
                    _ => Ok(()),
                },
                shrink: no_shrink,
                show: show_marking,
            },
        ),
    ]
}

/// `F: X -> E` over the discrete fibration `Q: E -> C`.
struct OverDiscrete {
    f: Functor,
    q: Functor,
}

fn fib_laws() -> Vec<Law> {
    vec![
        law(
            "discrete-fibration-cancellation",
            "fib",
            "for a discrete fibration Q, a functor F is a discrete fibration iff Q ∘ F is",
            Recipe {
                generate: |r, s| {
                    let base = random::category(r, s.caps.base());
                    let q = elements(&random::presheaf_set(r, &base, s.caps.max_objects))
                        .slice
                        .proj()
                        .clone();
                    let f = random::slice_over(r, q.dom(), s.caps, s.max_nodes)
                        .proj()
                        .clone();
                    OverDiscrete { f, q }
                },
                check: |i, _| {
                    let a = is_discrete_fibration(&i.f);
                    let b = is_discrete_fibration(&i.q.after(&i.f));
                    if a.is_ok() != b.is_ok() {
                        return fail(json!({ "f": a.err(), "qf": b.err() }));
                    }
                    Ok(())
                },
                shrink: |i| {
                    smaller_categories(i.f.dom())
                        .into_iter()
                        .map(|inc| OverDiscrete {
                            f: i.f.after(&inc),
                            q: i.q.clone(),
                        })
                        .collect()
                },
                show: |i| {
                    json!({
                        "f": FunctorJson::from_functor(&i.f),
                        "q": FunctorJson::from_functor(&i.q)
                    })
                },
            },
        ),
        law(
            "cartesian-composition",
            "fib",
            "a composite of two P-cartesian morphisms is P-cartesian",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let t = p.total();
                    let cart = cartesian_morphisms(p.proj());
                    for f in t.morphisms().filter(|f| cart[f.idx()]) {
                        for &g in t.out_of(t.tgt(f)) {
                            if cart[g.idx()] && !cart[t.compose(g, f).idx()] {
                                return fail(json!({
                                    "g": label_of(t, g),
                                    "f": label_of(t, f)
                                }));
                            }
                        }
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "cartesian-iso-lifts",
            "fib",
            "g is an isomorphism iff it is P-cartesian and P g is an isomorphism",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let (t, b) = (p.total(), p.base());
                    for g in t.morphisms() {
                        let lhs = t.is_iso(g);
                        let rhs = is_p_cartesian(p.proj(), g) && b.is_iso(p.p_mor(g));
                        if lhs != rhs {
                            return fail(json!({ "morphism": label_of(t, g), "iso": lhs }));
                        }
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "cartesian-lift-uniqueness",
            "fib",
            "two cartesian lifts of the same morphism with the same target differ by a unique vertical isomorphism",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let (t, b) = (p.total(), p.base());
                    for a in t.objects() {
                        for &f in b.incoming(p.p_obj(a)) {
                            let lifts = cartesian_lifts(p.proj(), f, a);
                            for &g1 in &lifts {
                                for &g2 in &lifts {
                                    let hs = vertical_comparisons(p.proj(), g1, g2);
                                    if hs.len() != 1 || !t.is_iso(hs[0]) {
                                        return fail(json!({
                                            "g1": label_of(t, g1),
                                            "g2": label_of(t, g2),
                                            "comparisons": hs.len()
                                        }));
                                    }
                                }
                            }
                        }
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "trivial-fibration-cartesian-transfer",
            "fib",
            "along a trivial fibration F, g is cartesian for Q ∘ F iff F g is cartesian for Q",
            Recipe {
                generate: |r, s| {
                    let q = gen_slice(r, s);
                    let f = random::inflate(r, q.total(), s.caps.max_morphisms);
                    (q, f)
                },
                check: |(q, f), _| {
                    let p = q.proj().after(f);
                    for g in f.dom().morphisms() {
                        let a = is_p_cartesian(&p, g);
                        let b = is_p_cartesian(q.proj(), f.mor(g));
                        if a != b {
                            return fail(json!({ "morphism": label_of(f.dom(), g), "upstairs": a }));
                        }
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: |(q, f)| {
                    json!({ "q": show_slice(q), "f": FunctorJson::from_functor(f) })
                },
            },
        ),
        law(
            "discrete-fibrations-are-cartesian",
            "fib",
            "a discrete fibration is a Grothendieck fibration all of whose morphisms are cartesian",
            Recipe {
                generate: |r, s| {
                    if r.gen_bool(0.5) {
                        Slice::new(elements(&gen_set(r, s)).slice.proj().clone())
                    } else {
                        gen_slice(r, s)
                    }
                },
                check: |p, _| {
                    if is_discrete_fibration(p.proj()).is_err() {
                        return Ok(());
                    }
                    if let Err(w) = is_grothendieck_fibration(p.proj()) {
                        return fail(json!(w));
                    }
                    let t = p.total();
                    match t.morphisms().find(|&g| !is_p_cartesian(p.proj(), g)) {
                        None => Ok(()),
                        Some(g) => fail(json!({ "not_cartesian": label_of(t, g) })),
                    }
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
    ]
}

/// A marking-preserving map between marked slices over one base.
pub struct SliceMapCase {
    pub p: MarkedSlice,
    pub q: MarkedSlice,
    pub f: Functor,
}

impl SliceMapCase {
    fn marked_map(&self) -> MarkedMap {
        MarkedMap {
            functor: self.f.clone(),
            src: self.p.marking().clone(),
            tgt: self.q.marking().clone(),
        }
    }

    fn show(&self) -> Value {
        json!({
            "src": show_marked(&self.p),
            "tgt": show_marked(&self.q),
            "map": FunctorJson::from_functor(&self.f).map
        })
    }
}

/// `Q ∘ F` for a collapse `F` onto the total of `Q`, marked by preimage.
fn inflated(r: &mut CaseRng, q: &MarkedSlice, s: &Settings) -> (MarkedSlice, Functor) {
    let f = random::inflate(r, q.total(), s.caps.max_morphisms);
    let marked = f.dom().morphisms().map(|m| q.is_marked(f.mor(m))).collect();
    let marking = Marking::new(f.dom().clone(), marked).expect("identities lie over identities");
    let p = MarkedSlice::new(q.proj().after(&f), marking).expect("marking on the total");
    (p, f)
}

/// Maps between fibrant marked slices: collapses, random maps, projections
/// to the terminal object and endomaps.
fn gen_fibrant_map(r: &mut CaseRng, s: &Settings) -> SliceMapCase {
    let base = random::category(r, s.caps.base());
    for _ in 0..16 {
        let q = random::fibrant(r, &base, s.caps);
        match r.gen_range(0..4) {
            0 => {
                let (p, f) = inflated(r, &q, s);
                return SliceMapCase { p, q, f };
            }
            1 => {
                let p = random::fibrant(r, &base, s.caps);
                if let Some(f) = random::slice_map(r, &p, &q, s.max_nodes) {
                    return SliceMapCase { p, q, f };
                }
            }
            2 => {
                let t = terminal_marked(&base);
                let f = q.proj().clone();
                return SliceMapCase { p: q, q: t, f };
            }
            _ => {
                if let Some(f) = random::slice_map(r, &q, &q, s.max_nodes) {
                    return SliceMapCase { p: q.clone(), q, f };
                }
            }
        }
    }
    let q = terminal_marked(&base);
    SliceMapCase {
        p: q.clone(),
        f: Functor::identity(base),
        q,
    }
}

/// A marked trivial fibration `f: A -> B` and a marked cofibration
/// `g: A -> A'` to push it along.
pub struct PushoutCase {
    pub f: MarkedMap,
    pub g: MarkedMap,
}

fn gen_pushout(r: &mut CaseRng, s: &Settings) -> PushoutCase {
    let small = Caps {
        max_objects: 3,
        max_morphisms: 8,
    };
    let b = random::category(r, small);
    let mb = random::marking(r, &b);
    let q = MarkedSlice::new(Functor::identity(b.clone()), mb.clone()).expect("marking on b");
    let (pa, f) = inflated(r, &q, s);
    let ma = pa.marking().clone();
    let a = f.dom().clone();
    let (g, extra): (Functor, Vec<MorId>) = match r.gen_range(0..3) {
        0 => {
            let d = random::category(r, small);
            let (_, il, ir) = coproduct(&a, &d);
            let md = random::marking(r, &d);
            let extra = md.marked_morphisms().map(|m| ir.mor(m)).collect();
            (il, extra)
        }
        1 if !a.is_empty() => {
            let o = ObjId(r.gen_range(0..a.num_objects() as u32));
            let (_, inc, e) = adjoin_free_arrow(&a, o, "new", "e");
            let extra = if r.gen_bool(0.5) { vec![e] } else { Vec::new() };
            (inc, extra)
        }
        _ => {
            let e: Vec<MorId> = a.morphisms().filter(|_| r.gen_bool(0.5)).collect();
            (Functor::identity(a.clone()), e)
        }
    };
    let pushed = ma.marked_morphisms().map(|m| g.mor(m)).chain(extra);
    let mg = Marking::generated_by(g.cod().clone(), pushed.collect::<Vec<_>>());
    PushoutCase {
        f: MarkedMap {
            functor: f,
            src: ma.clone(),
            tgt: mb,
        },
        g: MarkedMap {
            functor: g,
            src: ma,
            tgt: mg,
        },
    }
}

/// The same case with every marking replaced by its closure under
/// composition; `f` keeps reflecting the marking.
fn close_pushout_case(c: PushoutCase) -> PushoutCase {
    let tgt = c.f.tgt.closure();
    let a = c.f.functor.dom().clone();
    let src = Marking::new(
        a.clone(),
        a.morphisms()
            .map(|m| tgt.is_marked(c.f.functor.mor(m)))
            .collect(),
    )
    .expect("identities lie over identities");
    let pushed: Vec<MorId> = src
        .marked_morphisms()
        .map(|m| c.g.functor.mor(m))
        .chain(c.g.tgt.marked_morphisms())
        .collect();
    let mg = Marking::generated_by(c.g.functor.cod().clone(), pushed).closure();
    PushoutCase {
        f: MarkedMap {
            functor: c.f.functor,
            src: src.clone(),
            tgt,
        },
        g: MarkedMap {
            functor: c.g.functor,
            src,
            tgt: mg,
        },
    }
}

fn show_pushout(c: &PushoutCase) -> Value {
    json!({
        "f": FunctorJson::from_functor(&c.f.functor),
        "g": FunctorJson::from_functor(&c.g.functor),
        "marked_b": show_marking(&c.f.tgt),
        "marked_a2": show_marking(&c.g.tgt)
    })
}

fn model_laws() -> Vec<Law> {
    vec![
        law(
            "naive-discrete-fibration",
            "model",
            "P -> C has the right lifting property against the discrete generators iff P is a discrete fibration",
            Recipe {
                generate: |r, s| {
                    if r.gen_bool(0.4) {
                        Slice::new(elements(&gen_set(r, s)).slice.proj().clone())
                    } else {
                        gen_slice(r, s)
                    }
                },
                check: |p, s| {
                    let m = MarkedSlice::minimal(p.clone());
                    let naive = match is_naive_fibrant(Kind::Discrete, &m, s.max_nodes) {
                        Ok(v) => v,
                        Err(_) => return skip("lifting search exhausted"),
                    };
                    let df = is_discrete_fibration(p.proj());
                    if naive.is_ok() != df.is_ok() {
                        return fail(json!({ "lifting": naive.err(), "discrete": df.err() }));
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "naive-fibrant-cart-marked",
            "model",
            "a marked slice is naive fibrant iff it is a cart-marked Grothendieck fibration",
            Recipe {
                generate: gen_marked_slice,
                check: |p, s| {
                    let naive = match is_naive_fibrant(Kind::Marked, p, s.max_nodes) {
                        Ok(v) => v,
                        Err(_) => return skip("lifting search exhausted"),
                    };
                    let cm = is_cart_marked_fibration(p.proj(), p.marking());
                    if naive.is_ok() != cm.is_ok() {
                        return fail(json!({ "lifting": naive.err(), "cart_marked": cm.err() }));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: show_marked,
            },
        ),
        law(
            "naive-fibration-isofibration",
            "model",
            "between fibrant marked slices, a map is a naive fibration iff it is an isofibration",
            Recipe {
                generate: gen_fibrant_map,
                check: |c, s| {
                    let naive = match is_naive_fibration(
                        Kind::Marked,
                        &c.marked_map(),
                        c.p.proj(),
                        c.q.proj(),
                        s.max_nodes,
                    ) {
                        Ok(v) => v,
                        Err(_) => return skip("lifting search exhausted"),
                    };
                    let iso = is_isofibration(&c.f);
                    if naive.is_ok() != iso.is_ok() {
                        return fail(json!({ "lifting": naive.err(), "isofibration": iso.err() }));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: SliceMapCase::show,
            },
        ),
        law(
            "marked-trivial-fibration-equivalence",
            "model",
            "between fibrant marked slices, a map is a marked trivial fibration iff it is an equivalence and an isofibration",
            Recipe {
                generate: gen_fibrant_map,
                check: |c, _| {
                    let t = is_marked_trivial_fibration(&c.f, c.p.marking(), c.q.marking());
                    let e = is_equivalence(&c.f);
                    let i = is_isofibration(&c.f);
                    if t.is_ok() != (e.is_ok() && i.is_ok()) {
                        return fail(json!({
                            "trivial": t.err(),
                            "equivalence": e.err(),
                            "isofibration": i.err()
                        }));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: SliceMapCase::show,
            },
        ),
        law(
            "pushout-of-trivial-fibration",
            "model",
            "the pushout of a marked trivial fibration along a marked cofibration is a marked trivial fibration",
            Recipe {
                generate: gen_pushout,
                check: |c, s| {
                    let po = marked_pushout(&c.f.functor, &c.f.tgt, &c.g.functor, &c.g.tgt, s.budget)
                        .map_err(|e| present_skip(&e))?;
                    let marking = po.marking.expect("marked pushout");
                    match is_marked_trivial_fibration(&po.right, &c.g.tgt, &marking) {
                        Ok(()) => Ok(()),
                        Err(w) => fail(json!(w)),
                    }
                },
                shrink: no_shrink,
                show: show_pushout,
            },
        ),
        law(
            "pushout-of-trivial-fibration-underlying",
            "model",
            "the underlying functor of the pushout of a marked trivial fibration along a marked cofibration is a trivial fibration of categories",
            Recipe {
                generate: gen_pushout,
                check: |c, s| {
                    let po = marked_pushout(&c.f.functor, &c.f.tgt, &c.g.functor, &c.g.tgt, s.budget)
                        .map_err(|e| present_skip(&e))?;
                    match crate::fib::is_trivial_fibration(&po.right) {
                        Ok(()) => Ok(()),
                        Err(w) => fail(json!(w)),
                    }
                },
                shrink: no_shrink,
                show: show_pushout,
            },
        ),
        law(
            "pushout-of-trivial-fibration-closed-markings",
            "model",
            "with all markings closed under composition, the pushout of a marked trivial fibration along a marked cofibration is a marked trivial fibration",
            Recipe {
                generate: |r, s| close_pushout_case(gen_pushout(r, s)),
                check: |c, s| {
                    let po = marked_pushout(&c.f.functor, &c.f.tgt, &c.g.functor, &c.g.tgt, s.budget)
                        .map_err(|e| present_skip(&e))?;
                    let marking = po.marking.expect("marked pushout").closure();
                    match is_marked_trivial_fibration(&po.right, &c.g.tgt, &marking) {
                        Ok(()) => Ok(()),
                        Err(w) => fail(json!(w)),
                    }
                },
                shrink: no_shrink,
                show: show_pushout,
            },
        ),
        law(
            "trivial-fibration-codomain-fibrant",
            "model",
            "if P is fibrant and P -> Q is a marked trivial fibration over C then Q is fibrant",
            Recipe {
                generate: |r, s| {
                    let q = gen_marked_slice(r, s);
                    let (p, f) = inflated(r, &q, s);
                    SliceMapCase { p, q, f }
                },
                check: |c, _| {
                    if let Err(w) = is_marked_trivial_fibration(&c.f, c.p.marking(), c.q.marking()) {
                        return fail(json!({ "not_trivial": w }));
                    }
                    let p = is_cart_marked_fibration(c.p.proj(), c.p.marking());
                    let q = is_cart_marked_fibration(c.q.proj(), c.q.marking());
                    if p.is_ok() && q.is_err() {
                        return fail(json!({ "codomain": q.err() }));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: SliceMapCase::show,
            },
        ),
    ]
}

fn groth_laws() -> Vec<Law> {
    vec![
        law(
            "set-round-trip",
            "groth",
            "the presheaf recovered from the category of elements of F is naturally isomorphic to F",
            Recipe {
                generate: gen_set,
                check: |f, _| {
                    let el = elements(f);
                    let (t, eps) = counit_discrete(&el);
                    for c in f.base().objects() {
                        if t.presheaf.size(c) != f.size(c) {
                            return fail(json!({
                                "object": f.base().obj_label(c),
                                "recovered": t.presheaf.size(c),
                                "original": f.size(c)
                            }));
                        }
                    }
                    if !eps.is_iso() {
                        return fail(json!("counit is not invertible"));
                    }
                    Ok(())
                },
                shrink: shrink_presheaf_set,
                show: show_set,
            },
        ),
        law(
            "elements-discrete-fibration",
            "groth",
            "the projection from the category of elements is a discrete fibration",
            Recipe {
                generate: gen_set,
                check: |f, _| match is_discrete_fibration(elements(f).proj()) {
                    Ok(()) => Ok(()),
                    Err(w) => fail(json!(w)),
                },
                shrink: shrink_presheaf_set,
                show: show_set,
            },
        ),
        law(
            "marked-elements-fibrant",
            "groth",
            "the marked Grothendieck construction is a cart-marked Grothendieck fibration",
            Recipe {
                generate: gen_pcat,
                check: |f, _| {
                    let el = marked_elements(f);
                    if let Err(w) = is_grothendieck_fibration(el.proj()) {
                        return fail(json!(w));
                    }
                    match crate::fib::is_cart_marked(el.proj(), el.slice.marking()) {
                        Ok(()) => Ok(()),
                        Err(w) => fail(json!(w)),
                    }
                },
                shrink: shrink_presheaf_cat,
                show: show_pcat,
            },
        ),
        law(
            "comprehensive-factorization",
            "groth",
            "the unit factors P as a final functor followed by a discrete fibration, and is an isomorphism iff P is a discrete fibration",
            Recipe {
                generate: gen_slice,
                check: |p, _| {
                    let fac = unit_discrete(p.proj());
                    if let Err(w) = &fac.unit_final {
                        return fail(json!({ "unit_not_final": w }));
                    }
                    if let Err(w) = &fac.second_leg_discrete {
                        return fail(json!({ "second_leg": w }));
                    }
                    if fac.elements.proj().after(&fac.unit) != *p.proj() {
                        return fail(json!("factorization does not compose to P"));
                    }
                    let df = is_discrete_fibration(p.proj()).is_ok();
                    if fac.unit_is_iso != df {
                        return fail(json!({ "unit_iso": fac.unit_is_iso, "discrete_fibration": df }));
                    }
                    Ok(())
                },
                shrink: shrink_slice,
                show: show_slice,
            },
        ),
        law(
            "triangles-discrete",
            "groth",
            "both triangle identities hold for the discrete adjunction",
            Recipe {
                generate: |r, s| {
                    let p = gen_slice(r, s);
                    let f = random::presheaf_set(r, p.base(), s.caps.max_objects);
                    (p, f)
                },
                check: |(p, f), _| {
                    let w = verify_triangles_discrete(p.proj(), f);
                    if w.holds() {
                        Ok(())
                    } else {
                        fail(json!({ "left": w.left_triangle, "right": w.right_triangle }))
                    }
                },
                shrink: no_shrink,
                show: |(p, f)| json!({ "slice": show_slice(p), "presheaf": show_set(f) }),
            },
        ),
        law(
            "triangles-marked",
            "groth",
            "both triangle identities hold for the marked adjunction",
            Recipe {
                generate: |r, s| {
                    let p = gen_marked_slice(r, s);
                    let f = random::presheaf_cat(r, p.base(), s.caps);
                    (p, f)
                },
                check: |(p, f), s| {
                    let w = verify_triangles_marked(p, f, s.budget).map_err(|e| groth_skip(&e))?;
                    if w.holds() {
                        Ok(())
                    } else {
                        fail(json!({ "left": w.left_triangle, "right": w.right_triangle }))
                    }
                },
                shrink: no_shrink,
                show: |(p, f)| json!({ "slice": show_marked(p), "presheaf": show_pcat(f) }),
            },
        ),
        law(
            "unit-marked-equivalence",
            "groth",
            "for a fibrant marked slice the marked unit is an equivalence",
            Recipe {
                generate: gen_fibrant,
                check: |p, s| {
                    let u = unit_marked(p, s.budget).map_err(|e| groth_skip(&e))?;
                    if let Err(w) = &u.preserves_marking {
                        return fail(json!({ "unit_marking": w }));
                    }
                    match is_equivalence(&u.unit) {
                        Ok(()) => Ok(()),
                        Err(w) => fail(json!(w)),
                    }
                },
                shrink: no_shrink,
                show: show_marked,
            },
        ),
        law(
            "unit-naturality-discrete",
            "groth",
            "the discrete unit is natural in maps of slices",
            Recipe {
                generate: |r, s| {
                    let p = gen_slice(r, s);
                    let q = random::slice_over(r, p.base(), s.caps, s.max_nodes);
                    let (mp, mq) = (MarkedSlice::minimal(p), MarkedSlice::minimal(q));
                    let f = random::slice_map(r, &mp, &mq, s.max_nodes)
                        .unwrap_or_else(|| Functor::identity(mp.total().clone()));
                    let mq = if f.is_identity() { mp.clone() } else { mq };
                    SliceMapCase { p: mp, q: mq, f }
                },
                check: |c, _| {
                    let up = unit_discrete(c.p.proj());
                    let uq = unit_discrete(c.q.proj());
                    let t = t_set_map(&c.f, &up.tset, &uq.tset);
                    let el = elements_map(&t, &up.elements, &uq.elements);
                    if uq.unit.after(&c.f) != el.after(&up.unit) {
                        return fail(json!("unit square does not commute"));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: SliceMapCase::show,
            },
        ),
        law(
            "unit-naturality-marked",
            "groth",
            "the marked unit is natural in marking-preserving maps of slices",
            Recipe {
                generate: gen_fibrant_map,
                check: |c, s| {
                    let up = unit_marked(&c.p, s.budget).map_err(|e| groth_skip(&e))?;
                    let uq = unit_marked(&c.q, s.budget).map_err(|e| groth_skip(&e))?;
                    let t = t_marked_map(&c.f, &up.t, &uq.t);
                    let el = marked_elements_map(&t, &up.elements, &uq.elements);
                    if uq.unit.after(&c.f) != el.after(&up.unit) {
                        return fail(json!("unit square does not commute"));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: SliceMapCase::show,
            },
        ),
        law(
            "counit-naturality-discrete",
            "groth",
            "the discrete counit is natural in maps of presheaves",
            Recipe {
                generate: |r, s| {
                    let f = gen_set(r, s);
                    let g = random::presheaf_set(r, f.base(), s.caps.max_objects);
                    let all = all_set_nat_trans(&f, &g, 64);
                    if all.is_empty() {
                        SetNatTrans::identity(f)
                    } else {
                        all[r.gen_range(0..all.len())].clone()
                    }
                },
                check: |alpha, _| {
                    let (ef, eg) = (elements(alpha.src()), elements(alpha.tgt()));
                    let (tf, eps_f) = counit_discrete(&ef);
                    let (tg, eps_g) = counit_discrete(&eg);
                    let el = elements_map(alpha, &ef, &eg);
                    let t = t_set_map(&el, &tf, &tg);
                    if eps_g.after(&t) != alpha.after(&eps_f) {
                        return fail(json!("counit square does not commute"));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: |a| json!({ "src": show_set(a.src()), "tgt": show_set(a.tgt()) }),
            },
        ),
        law(
            "counit-naturality-marked",
            "groth",
            "the marked counit is natural in maps of presheaves of categories",
            Recipe {
                generate: |r, s| {
                    if r.gen_bool(0.5) {
                        return CatNatTrans::identity(gen_pcat(r, s));
                    }
                    let f = gen_set(r, s);
                    let g = random::presheaf_set(r, f.base(), s.caps.max_objects);
                    let all = all_set_nat_trans(&f, &g, 64);
                    let alpha = if all.is_empty() {
                        SetNatTrans::identity(f)
                    } else {
                        all[r.gen_range(0..all.len())].clone()
                    };
                    discrete_nat_trans(&alpha)
                },
                check: |alpha, s| {
                    let (ef, eg) = (marked_elements(alpha.src()), marked_elements(alpha.tgt()));
                    let (tf, eps_f) = counit_marked(&ef, s.budget).map_err(|e| groth_skip(&e))?;
                    let (tg, eps_g) = counit_marked(&eg, s.budget).map_err(|e| groth_skip(&e))?;
                    let el = marked_elements_map(alpha, &ef, &eg);
                    let t = t_marked_map(&el, &tf, &tg);
                    for c in alpha.src().base().objects() {
                        if eps_g.at(c).after(t.at(c)) != alpha.at(c).after(eps_f.at(c)) {
                            return fail(json!({
                                "object": alpha.src().base().obj_label(c)
                            }));
                        }
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: |a| json!({ "src": show_pcat(a.src()), "tgt": show_pcat(a.tgt()) }),
            },
        ),
        law(
            "path-object",
            "groth",
            "the path object factors the diagonal as an equivalence followed by a map with the right lifting property against the marked generators",
            Recipe {
                generate: gen_fibrant,
                check: |p, s| match crate::model::verify_path_object(p, s.max_nodes) {
                    Err(_) => skip("lifting search exhausted"),
                    Ok(Err(w)) => fail(json!({ "not_fibrant": w })),
                    Ok(Ok(r)) if r.holds() => Ok(()),
                    Ok(Ok(r)) => fail(json!({
                        "first_is_equivalence": r.path.first_is_equivalence.err(),
                        "second_is_isofibration": r.path.second_is_isofibration.err(),
                        "path_is_fibrant": r.path.path_is_fibrant.err(),
                        "legs_are_marked": r.path.legs_are_marked.err(),
                        "composite_is_diagonal": r.path.composite_is_diagonal,
                        "second_leg_lifting": r.second_leg_naive.err()
                    })),
                },
                shrink: no_shrink,
                show: show_marked,
            },
        ),
    ]
}

/// The natural transformation between discrete presheaves of categories
/// induced by `alpha`.
fn discrete_nat_trans(alpha: &SetNatTrans) -> CatNatTrans {
    let (f, g) = (
        PresheafCat::discrete(alpha.src()),
        PresheafCat::discrete(alpha.tgt()),
    );
    let comps = f
        .base()
        .objects()
        .map(|c| {
            let (a, b) = (f.fiber(c), g.fiber(c));
            let obj: Vec<ObjId> = alpha.component(c).iter().map(|&y| ObjId(y)).collect();
            let mor = a.objects().map(|o| b.id(obj[o.idx()])).collect();
            Functor::new(a.clone(), b.clone(), obj, mor).expect("discrete categories")
        })
        .collect();
    CatNatTrans::new(f, g, comps).expect("naturality of alpha")
}

/// `sigma: A -> C`, `F` on `A` and `G` on `C`.
pub struct ExtensionCase {
    pub sigma: Functor,
    pub f: PresheafSet,
    pub g: PresheafSet,
}

/// A monotone map from `[n]` into a random poset with at most four elements.
fn gen_ordinal_map(r: &mut CaseRng, s: &Settings) -> Functor {
    let n = r.gen_range(0..=3usize);
    let k = r.gen_range(1..=4usize);
    let mut rel = vec![vec![false; k]; k];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for j in 0..k {
        for i in 0..j {
            rel[i][j] = r.gen_bool(0.5);
        }
    }
    for m in 0..k {
        for i in 0..k {
            for j in 0..k {
                if rel[i][m] && rel[m][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let labels: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
    let q = Arc::new(shapes::poset(&labels, |i, j| rel[i][j]));
    let ord = Arc::new(shapes::ordinal(n));
    random::functor(r, &ord, &q, s.max_nodes).expect("constant maps exist")
}

fn lke_laws() -> Vec<Law> {
    vec![
        law(
            "lke-set-adjunction",
            "lke",
            "natural transformations out of the left Kan extension correspond bijectively to transformations into the restriction",
            Recipe {
                generate: |r, s| {
                    let small = Caps {
                        max_objects: 3,
                        max_morphisms: 6,
                    };
                    loop {
                        let a = random::category(r, small);
                        let c = random::category(r, small);
                        if let Some(sigma) = random::functor(r, &a, &c, s.max_nodes) {
                            let f = random::presheaf_set(r, &a, 4);
                            let g = random::presheaf_set(r, &c, 4);
                            return ExtensionCase { sigma, f, g };
                        }
                    }
                },
                check: |c, _| {
                    const CAP: usize = 4096;
                    let ext = lke_set(&c.f, &c.sigma);
                    let unit = lke_set_unit(&c.f, &c.sigma, &ext);
                    let restricted = c.g.restrict(&c.sigma);
                    let left = all_set_nat_trans(&ext.presheaf, &c.g, CAP);
                    let right = all_set_nat_trans(&c.f, &restricted, CAP);
                    if left.len() >= CAP || right.len() >= CAP {
                        return skip("too many transformations");
                    }
                    if left.len() != right.len() {
                        return fail(json!({ "out_of_extension": left.len(), "into_restriction": right.len() }));
                    }
                    let mut images: Vec<SetNatTrans> =
                        left.iter().map(|phi| transpose(phi, &c.sigma, &unit)).collect();
                    for t in &images {
                        if !right.contains(t) {
                            return fail(json!("a transpose is not among the enumerated transformations"));
                        }
                    }
                    let n = images.len();
                    images.sort_by_key(|t| format!("{t:?}"));
                    images.dedup();
                    if images.len() != n {
                        return fail(json!("transposition is not injective"));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: |c| {
                    json!({
                        "sigma": FunctorJson::from_functor(&c.sigma),
                        "f": show_set(&c.f),
                        "g": show_set(&c.g)
                    })
                },
            },
        ),
        law(
            "slice-extension",
            "lke",
            "the left Kan extension of the slices of [n] along sigma is naturally isomorphic to the slices of sigma",
            Recipe {
                generate: gen_ordinal_map,
                check: |sigma, s| match verify_slice_extension(sigma, s.budget, s.max_nodes) {
                    Ok(r) if r.holds() => Ok(()),
                    Ok(r) => fail(json!(r)),
                    Err(_) => skip("extension not computable within limits"),
                },
                shrink: no_shrink,
                show: |f| json!(FunctorJson::from_functor(f)),
            },
        ),
        law(
            "slice-extension-explicit-inverse",
            "lke",
            "the explicit comparison functors between the extension and the slices compose to identities",
            Recipe {
                generate: gen_ordinal_map,
                check: |sigma, s| match verify_slice_extension(sigma, s.budget, s.max_nodes) {
                    Ok(r) => match r.per_object.iter().find(|o| !o.explicit_inverse) {
                        None => Ok(()),
                        Some(o) => fail(json!(o)),
                    },
                    Err(_) => skip("extension not computable within limits"),
                },
                shrink: no_shrink,
                show: |f| json!(FunctorJson::from_functor(f)),
            },
        ),
    ]
}

fn small_caps() -> Caps {
    Caps {
        max_objects: 4,
        max_morphisms: 10,
    }
}

/// A marked truncated simplicial set: a horn, a simplex, or the marked
/// nerve of a small category.
fn gen_marked_sset(r: &mut CaseRng) -> MarkedTruncSSet {
    match r.gen_range(0..3) {
        0 => {
            let n = r.gen_range(1..=MAX_DIM);
            let t = r.gen_range(0..=n);
            let (h, _) = horn(n, t);
            let edges: Vec<u32> = (0..h.count(1) as u32).filter(|_| r.gen_bool(0.3)).collect();
            MarkedTruncSSet::new(h, &edges).expect("edges exist")
        }
        1 => {
            let d = crate::simplicial::delta(r.gen_range(0..=2));
            MarkedTruncSSet::flat(d.sset)
        }
        _ => {
            let c = random::category(
                r,
                Caps {
                    max_objects: 3,
                    max_morphisms: 6,
                },
            );
            let m = random::marking(r, &c);
            marked_nerve(&nerve(&c), &m)
        }
    }
}

fn revalidate(x: &TruncSSet) -> bool {
    let labels: Vec<Vec<String>> = (0..=MAX_DIM).map(|d| x.labels(d).to_vec()).collect();
    let faces = (0..=MAX_DIM)
        .map(|d| {
            (0..x.count(d) as u32)
                .map(|s| x.faces_of(d, s).to_vec())
                .collect()
        })
        .collect();
    matches!(TruncSSet::new(labels, faces), Ok(y) if y == *x)
}

fn simplicial_laws() -> Vec<Law> {
    vec![
        law(
            "nerve-round-trip",
            "simplicial",
            "categorifying the nerve of C gives back C through the counit",
            Recipe {
                generate: |r, _| random::category(r, small_caps()),
                check: |c, s| {
                    let n = nerve(c);
                    let cn = categorify(&n.sset, s.budget).map_err(|e| present_skip(&e))?;
                    if counit(&n, &cn).is_isomorphism() {
                        Ok(())
                    } else {
                        fail(json!("counit is not an isomorphism"))
                    }
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        ),
        law(
            "marked-nerve-round-trip",
            "simplicial",
            "categorifying the marked nerve of a marked category gives it back, marking included",
            Recipe {
                generate: |r, _| {
                    let c = random::category(r, small_caps());
                    random::marking(r, &c)
                },
                check: |m, s| {
                    let n = nerve(m.carrier());
                    let x = marked_nerve(&n, m);
                    let (cn, e) = categorify_marked(&x, s.budget).map_err(|e| present_skip(&e))?;
                    let eps = counit(&n, &cn);
                    if !eps.is_isomorphism() {
                        return fail(json!("counit is not an isomorphism"));
                    }
                    for f in cn.cat.morphisms() {
                        if e.is_marked(f) != m.is_marked(eps.mor(f)) {
                            return fail(json!({ "marking_differs": label_of(&cn.cat, f) }));
                        }
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: show_marking,
            },
        ),
        law(
            "nerve-transpose",
            "simplicial",
            "maps X -> N C correspond bijectively to functors c X -> C, and marking is preserved on one side iff on the other",
            Recipe {
                generate: |r, _| {
                    let x = gen_marked_sset(r);
                    let c = random::category(
                        r,
                        Caps {
                            max_objects: 3,
                            max_morphisms: 6,
                        },
                    );
                    let m = random::marking(r, &c);
                    (x, m)
                },
                check: |(x, m), s| {
                    match check_transpose(x, m.carrier(), m, s.budget, 20_000) {
                        Ok(t) if t.bijective && t.marking_agrees => Ok(()),
                        Ok(t) => fail(json!(t)),
                        Err(_) => skip("transpose enumeration not within limits"),
                    }
                },
                shrink: no_shrink,
                show: |(x, m)| json!({ "sset": SSetJson::from_marked(x), "category": show_marking(m) }),
            },
        ),
        law(
            "simplicial-identities",
            "simplicial",
            "constructed truncated simplicial sets pass the simplicial identities on re-validation",
            Recipe {
                generate: |r, _| gen_marked_sset(r),
                check: |x, s| {
                    if !revalidate(&x.sset) {
                        return fail(json!("re-validation failed"));
                    }
                    let cx = categorify(&x.sset, s.budget).map_err(|e| present_skip(&e))?;
                    if !revalidate(&nerve(&cx.cat).sset) {
                        return fail(json!("nerve of the categorification fails re-validation"));
                    }
                    Ok(())
                },
                shrink: no_shrink,
                show: |x| json!(SSetJson::from_marked(x)),
            },
        ),
    ]
}

/// Every law, grouped by module.
pub fn registry() -> Vec<Law> {
    let mut v = fincat_laws();
    v.extend(present_laws());
    v.extend(fib_laws());
    v.extend(groth_laws());
    v.extend(model_laws());
    v.extend(lke_laws());
    v.extend(simplicial_laws());
    v
}

pub fn find_law(name: &str) -> Option<Law> {
    registry().into_iter().find(|l| l.name == name)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseFailure {
    pub case: u64,
    pub witness: Value,
    pub shrink_steps: usize,
    pub instance: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub module: String,
    pub statement: String,
    pub cases: u64,
    pub passed: u64,
    pub skipped: u64,
    pub failed: u64,
    pub skip_reasons: BTreeMap<String, u64>,
    /// The first failures by case index.
    pub failures: Vec<CaseFailure>,
}

impl LawReport {
    pub fn holds(&self) -> bool {
        self.failed == 0
    }
}

const REPORTED_FAILURES: usize = 5;

/// Runs `cases` cases in parallel; the report depends only on the inputs.
pub fn run_law(law: &Law, seed: u64, cases: u64, settings: &Settings) -> LawReport {
    let outcomes: Vec<CaseOutcome> = (0..cases)
        .into_par_iter()
        .map(|case| law.run_case(seed, case, settings))
        .collect();
    let mut report = LawReport {
        law: law.name.into(),
        module: law.module.into(),
        statement: law.statement.into(),
        cases,
        passed: 0,
        skipped: 0,
        failed: 0,
        skip_reasons: BTreeMap::new(),
        failures: Vec::new(),
    };
    for (case, o) in outcomes.into_iter().enumerate() {
        match o {
            CaseOutcome::Pass => report.passed += 1,
            CaseOutcome::Skip(why) => {
                report.skipped += 1;
                *report.skip_reasons.entry(why).or_default() += 1;
            }
            CaseOutcome::Fail {
                witness,
                instance,
                shrink_steps,
            } => {
                report.failed += 1;
                if report.failures.len() < REPORTED_FAILURES {
                    report.failures.push(CaseFailure {
                        case: case as u64,
                        witness,
                        shrink_steps,
                        instance,
                    });
                }
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub cases: u64,
    pub settings: Settings,
    pub status: String,
    pub laws: Vec<LawReport>,
}

pub fn run_laws(laws: &[Law], seed: u64, cases: u64, settings: &Settings) -> FuzzReport {
    let reports: Vec<LawReport> = laws
        .iter()
        .map(|l| run_law(l, seed, cases, settings))
        .collect();
    let ok = reports.iter().all(LawReport::holds);
    FuzzReport {
        tool: "fibcat".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        cases,
        settings: *settings,
        status: if ok { "pass" } else { "fail" }.into(),
        laws: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = registry().iter().map(|l| l.name).collect();
        let n = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), n);
    }

    #[test]
    fn shrinking_reaches_a_smaller_instance() {
        let l = law(
            "has-a-non-identity",
            "test",
            "every category has at most its identities",
            Recipe {
                generate: |_, _| Arc::new(shapes::ordinal(3)),
                check: |c, _| {
                    if c.num_morphisms() > c.num_objects() {
                        fail(json!(c.num_morphisms()))
                    } else {
                        Ok(())
                    }
                },
                shrink: shrink_cat,
                show: show_cat,
            },
        );
        match l.run_case(0, 0, &Settings::default()) {
            CaseOutcome::Fail { witness, .. } => assert_eq!(witness, json!(3)),
            other => panic!("expected a failure, got {other:?}"),
        }
    }
}
