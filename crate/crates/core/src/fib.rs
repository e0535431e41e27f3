//! Fibration-theoretic predicates, each decided by exhausting its defining
//! quantifiers. Failures come with the offending instance.

use serde::{Deserialize, Serialize};

use crate::fincat::{comma, pi0, FinCat, Functor, Marking, MorId, ObjId, Slice};

/// The quantifier instance that makes a predicate false. Objects and
/// morphisms are reported by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `f: c -> P a` has `lifts` lifts with target `a` (a discrete
    /// fibration needs exactly one).
    LiftCount {
        object: String,
        morphism: String,
        lifts: usize,
    },
    /// For `h: b -> a` and `f` with `P h = P g ∘ f` there are `solutions`
    /// factorizations `h = g ∘ h'` with `P h' = f`.
    NotCartesian {
        morphism: String,
        h: String,
        f: String,
        solutions: usize,
    },
    /// `f: c -> P a` has no cartesian lift with target `a`.
    NoCartesianLift { object: String, morphism: String },
    /// The marking differs from the set of cartesian morphisms at `morphism`.
    MarkingMismatch {
        morphism: String,
        marked: bool,
        cartesian: bool,
    },
    /// The isomorphism `iso` into `F object` has no isomorphism lift.
    IsoNotLifted { object: String, iso: String },
    /// `F: Hom(src, tgt) -> Hom(F src, F tgt)` is not a bijection.
    HomMismatch {
        src: String,
        tgt: String,
        dom_homs: usize,
        hits: usize,
        cod_homs: usize,
    },
    /// No object maps to `object`.
    NotSurjective { object: String },
    /// No object maps to something isomorphic to `object`.
    NotEssentiallySurjective { object: String },
    /// `morphism` is marked but its image is not.
    MarkingNotPreserved { morphism: String },
    /// `morphism` is unmarked but its image is marked.
    MarkingNotReflected { morphism: String },
    /// The comma category `object↓F` has `components` connected components.
    CommaNotConnected { object: String, components: usize },
}

pub type Verdict = Result<(), Witness>;

/// All `g` with target `a` and `P g = f`.
pub fn p_lifts(p: &Functor, f: MorId, a: ObjId) -> Vec<MorId> {
    assert_eq!(p.cod().tgt(f), p.obj(a), "target of f must be P(a)");
    let total = p.dom();
    total
        .incoming(a)
        .iter()
        .copied()
        .filter(|&g| p.mor(g) == f)
        .collect()
}

fn base_incoming<'a>(p: &'a Functor, a: ObjId) -> impl Iterator<Item = MorId> + 'a {
    p.cod().incoming(p.obj(a)).iter().copied()
}

pub fn is_discrete_fibration(p: &Functor) -> Verdict {
    for a in p.dom().objects() {
        for f in base_incoming(p, a) {
            let lifts = p_lifts(p, f, a).len();
            if lifts != 1 {
                return Err(Witness::LiftCount {
                    object: p.dom().obj_label(a).into(),
                    morphism: p.cod().mor_label(f).into(),
                    lifts,
                });
            }
        }
    }
    Ok(())
}

/// Checks that `g: a' -> a` is `P`-cartesian: every `h: b -> a` with
/// `P h = P g ∘ f` factors uniquely as `g ∘ h'` with `P h' = f`.
pub fn cartesian_failure(p: &Functor, g: MorId) -> Verdict {
    let (total, base) = (p.dom(), p.cod());
    let (a2, a) = (total.src(g), total.tgt(g));
    let pg = p.mor(g);
    for &h in total.incoming(a) {
        let b = total.src(h);
        let ph = p.mor(h);
        for &f in base.hom(p.obj(b), p.obj(a2)) {
            if base.compose(pg, f) != ph {
                continue;
            }
            let solutions = total
                .hom(b, a2)
                .iter()
                .filter(|&&h2| p.mor(h2) == f && total.compose(g, h2) == h)
                .count();
            if solutions != 1 {
                return Err(Witness::NotCartesian {
                    morphism: total.mor_label(g).into(),
                    h: total.mor_label(h).into(),
                    f: base.mor_label(f).into(),
                    solutions,
                });
            }
        }
    }
    Ok(())
}

pub fn is_p_cartesian(p: &Functor, g: MorId) -> bool {
    cartesian_failure(p, g).is_ok()
}

/// Every cartesian lift of `f` with target `a`, in id order.
pub fn cartesian_lifts(p: &Functor, f: MorId, a: ObjId) -> Vec<MorId> {
    p_lifts(p, f, a)
        .into_iter()
        .filter(|&g| is_p_cartesian(p, g))
        .collect()
}

/// The cartesian lift of `f` with target `a` of smallest id.
pub fn cartesian_lift(p: &Functor, f: MorId, a: ObjId) -> Option<MorId> {
    p_lifts(p, f, a).into_iter().find(|&g| is_p_cartesian(p, g))
}

/// The vertical morphisms `h` with `g2 = g1 ∘ h`, for two lifts `g1`, `g2`
/// of the same base morphism with the same target.
pub fn vertical_comparisons(p: &Functor, g1: MorId, g2: MorId) -> Vec<MorId> {
    let total = p.dom();
    let base = p.cod();
    total
        .hom(total.src(g2), total.src(g1))
        .iter()
        .copied()
        .filter(|&h| base.is_identity(p.mor(h)) && total.compose(g1, h) == g2)
        .collect()
}

pub fn is_grothendieck_fibration(p: &Functor) -> Verdict {
    for a in p.dom().objects() {
        for f in base_incoming(p, a) {
            if cartesian_lift(p, f, a).is_none() {
                return Err(Witness::NoCartesianLift {
                    object: p.dom().obj_label(a).into(),
                    morphism: p.cod().mor_label(f).into(),
                });
            }
        }
    }
    Ok(())
}

/// The cartesian morphisms of `p`.
pub fn cartesian_morphisms(p: &Functor) -> Vec<bool> {
    p.dom().morphisms().map(|g| is_p_cartesian(p, g)).collect()
}

/// The marking consists exactly of the cartesian morphisms.
pub fn is_cart_marked(p: &Functor, marking: &Marking) -> Verdict {
    for g in p.dom().morphisms() {
        let cartesian = is_p_cartesian(p, g);
        let marked = marking.is_marked(g);
        if cartesian != marked {
            return Err(Witness::MarkingMismatch {
                morphism: p.dom().mor_label(g).into(),
                marked,
                cartesian,
            });
        }
    }
    Ok(())
}

/// A cart-marked Grothendieck fibration.
pub fn is_cart_marked_fibration(p: &Functor, marking: &Marking) -> Verdict {
    is_grothendieck_fibration(p)?;
    is_cart_marked(p, marking)
}

pub fn is_isofibration(f: &Functor) -> Verdict {
    let (c, d) = (f.dom(), f.cod());
    for o in c.objects() {
        for &g in d.incoming(f.obj(o)) {
            if !d.is_iso(g) {
                continue;
            }
            let lifted = c.incoming(o).iter().any(|&h| f.mor(h) == g && c.is_iso(h));
            if !lifted {
                return Err(Witness::IsoNotLifted {
                    object: c.obj_label(o).into(),
                    iso: d.mor_label(g).into(),
                });
            }
        }
    }
    Ok(())
}

pub fn is_fully_faithful(f: &Functor) -> Verdict {
    let (c, d) = (f.dom(), f.cod());
    let mut hit = vec![false; d.num_morphisms()];
    for a in c.objects() {
        for b in c.objects() {
            let homs = c.hom(a, b);
            let mut hits = 0;
            for &m in homs {
                let fm = f.mor(m);
                if !hit[fm.idx()] {
                    hit[fm.idx()] = true;
                    hits += 1;
                }
            }
            let target = d.hom(f.obj(a), f.obj(b));
            for &m in homs {
                hit[f.mor(m).idx()] = false;
            }
            if hits != homs.len() || hits != target.len() {
                return Err(Witness::HomMismatch {
                    src: c.obj_label(a).into(),
                    tgt: c.obj_label(b).into(),
                    dom_homs: homs.len(),
                    hits,
                    cod_homs: target.len(),
                });
            }
        }
    }
    Ok(())
}

pub fn is_surjective_on_objects(f: &Functor) -> Verdict {
    let mut hit = vec![false; f.cod().num_objects()];
    for o in f.dom().objects() {
        hit[f.obj(o).idx()] = true;
    }
    match hit.iter().position(|h| !h) {
        Some(i) => Err(Witness::NotSurjective {
            object: f.cod().obj_label(ObjId(i as u32)).into(),
        }),
        None => Ok(()),
    }
}

pub fn is_essentially_surjective(f: &Functor) -> Verdict {
    let d = f.cod();
    let mut hit = vec![false; d.num_objects()];
    for o in f.dom().objects() {
        let x = f.obj(o);
        hit[x.idx()] = true;
        for &g in d.incoming(x) {
            if d.is_iso(g) {
                hit[d.src(g).idx()] = true;
            }
        }
    }
    match hit.iter().position(|h| !h) {
        Some(i) => Err(Witness::NotEssentiallySurjective {
            object: d.obj_label(ObjId(i as u32)).into(),
        }),
        None => Ok(()),
    }
}

/// Fully faithful and essentially surjective.
pub fn is_equivalence(f: &Functor) -> Verdict {
    is_fully_faithful(f)?;
    is_essentially_surjective(f)
}

/// Surjective on objects and fully faithful.
pub fn is_trivial_fibration(f: &Functor) -> Verdict {
    is_surjective_on_objects(f)?;
    is_fully_faithful(f)
}

/// `f` preserves the marking.
pub fn is_marked_functor(f: &Functor, src: &Marking, tgt: &Marking) -> Verdict {
    for m in f.dom().morphisms() {
        if src.is_marked(m) && !tgt.is_marked(f.mor(m)) {
            return Err(Witness::MarkingNotPreserved {
                morphism: f.dom().mor_label(m).into(),
            });
        }
    }
    Ok(())
}

/// A trivial fibration on underlying categories that also reflects the
/// marking: `m` is marked iff `F m` is.
pub fn is_marked_trivial_fibration(f: &Functor, src: &Marking, tgt: &Marking) -> Verdict {
    is_marked_functor(f, src, tgt)?;
    is_trivial_fibration(f)?;
    for m in f.dom().morphisms() {
        if !src.is_marked(m) && tgt.is_marked(f.mor(m)) {
            return Err(Witness::MarkingNotReflected {
                morphism: f.dom().mor_label(m).into(),
            });
        }
    }
    Ok(())
}

/// Every comma category `d↓F` is nonempty and connected.
pub fn is_final(f: &Functor) -> Verdict {
    let slice = Slice::new(f.clone());
    for d in f.cod().objects() {
        let k = comma(d, &slice);
        let components = pi0(&k.cat).count();
        if components != 1 {
            return Err(Witness::CommaNotConnected {
                object: f.cod().obj_label(d).into(),
                components,
            });
        }
    }
    Ok(())
}

/// The functor `C -> [0]`.
pub fn to_point(c: &std::sync::Arc<FinCat>) -> Functor {
    Functor::to_terminal(
        c.clone(),
        std::sync::Arc::new(crate::fincat::shapes::point()),
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fincat::{coproduct, product, shapes};

    fn ord(n: usize) -> Arc<FinCat> {
        Arc::new(shapes::ordinal(n))
    }

    fn map(dom: &Arc<FinCat>, cod: &Arc<FinCat>, obj: &[u32]) -> Functor {
        Functor::from_objects(
            dom.clone(),
            cod.clone(),
            obj.iter().map(|&o| ObjId(o)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn lifts_of_collapse() {
        let p = to_point(&ord(1));
        let l = p_lifts(&p, MorId(0), ObjId(1));
        assert_eq!(l.len(), 2);
        assert!(matches!(
            is_discrete_fibration(&p),
            Err(Witness::LiftCount { lifts: 2, .. })
        ));
    }

    #[test]
    fn two_points_over_interval() {
        let two = Arc::new(shapes::discrete(2));
        let i = ord(1);
        let p = map(&two, &i, &[0, 1]);
        let f = i.mor_by_label("0->1").unwrap();
        assert!(p_lifts(&p, f, ObjId(1)).is_empty());
        assert!(cartesian_lift(&p, f, ObjId(1)).is_none());
        assert!(is_grothendieck_fibration(&p).is_err());
    }

    #[test]
    fn product_projection() {
        let (c, d) = (ord(1), ord(1));
        let (cd, pr, pr2) = product(&c, &d);
        assert!(is_grothendieck_fibration(&pr).is_ok());
        for g in cd.morphisms() {
            assert_eq!(is_p_cartesian(&pr, g), d.is_iso(pr2.mor(g)));
        }
    }

    #[test]
    fn isofibrations() {
        let iso = Arc::new(shapes::walking_iso());
        let pt = Arc::new(shapes::point());
        let inc = map(&pt, &iso, &[0]);
        assert!(matches!(
            is_isofibration(&inc),
            Err(Witness::IsoNotLifted { .. })
        ));
        assert!(is_isofibration(&Functor::identity(iso.clone())).is_ok());
        assert!(is_isofibration(&to_point(&ord(2))).is_ok());
    }

    #[test]
    fn equivalences() {
        let iso = Arc::new(shapes::walking_iso());
        assert!(is_equivalence(&to_point(&iso)).is_ok());
        assert!(is_trivial_fibration(&to_point(&iso)).is_ok());
        let two = Arc::new(shapes::discrete(2));
        assert!(matches!(
            is_equivalence(&to_point(&two)),
            Err(Witness::HomMismatch { .. })
        ));
        let pt = Arc::new(shapes::point());
        assert!(matches!(
            is_trivial_fibration(&map(&pt, &ord(1), &[0])),
            Err(Witness::NotSurjective { .. })
        ));
    }

    #[test]
    fn marked_trivial_fibrations() {
        let iso = Arc::new(shapes::walking_iso());
        let pt = Arc::new(shapes::point());
        let p = to_point(&iso);
        let sharp = Marking::maximal(pt.clone());
        assert!(is_marked_trivial_fibration(&p, &Marking::natural(iso.clone()), &sharp).is_ok());
        assert!(matches!(
            is_marked_trivial_fibration(&p, &Marking::minimal(iso.clone()), &sharp),
            Err(Witness::MarkingNotReflected { .. })
        ));
    }

    #[test]
    fn finality() {
        let pt = Arc::new(shapes::point());
        assert!(is_final(&map(&pt, &ord(1), &[1])).is_ok());
        assert!(matches!(
            is_final(&map(&pt, &ord(1), &[0])),
            Err(Witness::CommaNotConnected { components: 0, .. })
        ));
        let (sum, _, _) = coproduct(&pt, &pt);
        assert!(is_final(&to_point(&sum)).is_err());
    }

    #[test]
    fn empty_inputs_are_vacuous() {
        let e = Arc::new(shapes::empty());
        let p = Functor::identity(e.clone());
        assert!(is_discrete_fibration(&p).is_ok());
        assert!(is_grothendieck_fibration(&p).is_ok());
        assert!(is_cart_marked(&p, &Marking::minimal(e)).is_ok());
    }
}
