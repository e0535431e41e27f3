//! JSON formats for categories, functors, slices, presheaves,
//! presentations and truncated simplicial sets.
//!
//! Everything is addressed by label. Words in presentations are written in
//! composition order (`["g","f"]` is `g ∘ f`) and reversed on the way in.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::fincat::{
    FinCat, Functor, MarkedSlice, Marking, ObjId, PresheafCat, PresheafSet, RawCategory, Slice,
};
use crate::present::{letter, Generator, Presentation, Relation, Word};
use crate::simplicial::{MarkedTruncSSet, SRef, TruncSSet, MAX_DIM};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

fn invalid(msg: impl std::fmt::Display) -> IoError {
    IoError::Invalid(msg.to_string())
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
}

/// Pretty JSON with a trailing newline.
pub fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismJson>,
    #[serde(default)]
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
}

impl CategoryJson {
    pub fn from_cat(c: &FinCat) -> CategoryJson {
        let raw = RawCategory::from_cat(c);
        // identities are listed too so that morphism order survives a round trip
        CategoryJson {
            objects: raw.objects,
            morphisms: c
                .morphisms()
                .map(|m| MorphismJson {
                    id: c.mor_label(m).into(),
                    src: c.obj_label(c.src(m)).into(),
                    tgt: c.obj_label(c.tgt(m)).into(),
                })
                .collect(),
            identities: raw.identities.into_iter().collect(),
            compose: raw
                .compose
                .into_iter()
                .map(|(g, f, gf)| [g, f, gf])
                .collect(),
            marked: None,
        }
    }

    /// Lists the non-identity marked morphisms.
    pub fn from_marked(m: &Marking) -> CategoryJson {
        let c = m.carrier();
        let mut out = CategoryJson::from_cat(c);
        out.marked = Some(
            m.marked_morphisms()
                .filter(|&f| !c.is_identity(f))
                .map(|f| c.mor_label(f).to_string())
                .collect(),
        );
        out
    }

    pub fn to_cat(&self) -> Result<Arc<FinCat>, IoError> {
        let mut raw = RawCategory {
            objects: self.objects.clone(),
            ..Default::default()
        };
        raw.morphisms = self
            .morphisms
            .iter()
            .map(|m| (m.id.clone(), m.src.clone(), m.tgt.clone()))
            .collect();
        // identities keyed by object in object order
        for o in &self.objects {
            if let Some(i) = self.identities.get(o) {
                raw.identities.push((o.clone(), i.clone()));
            }
        }
        for o in self.identities.keys() {
            if !self.objects.contains(o) {
                return Err(invalid(format_args!("identity for unknown object `{o}`")));
            }
        }
        raw.compose = self
            .compose
            .iter()
            .map(|[g, f, gf]| (g.clone(), f.clone(), gf.clone()))
            .collect();
        raw.validate().map(Arc::new).map_err(invalid)
    }

    /// The category with its marking; unmarked input gets the minimal one.
    pub fn to_marked(&self) -> Result<Marking, IoError> {
        let c = self.to_cat()?;
        marking_from_labels(&c, self.marked.as_deref().unwrap_or(&[]))
    }
}

pub fn marking_from_labels(c: &Arc<FinCat>, labels: &[String]) -> Result<Marking, IoError> {
    let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    Marking::from_labels(c.clone(), &refs).map_err(invalid)
}

/// Object and morphism assignments by label. Identities may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentJson {
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, String>,
}

impl AssignmentJson {
    pub fn from_functor(f: &Functor) -> AssignmentJson {
        let (d, c) = (f.dom(), f.cod());
        AssignmentJson {
            objects: d
                .objects()
                .map(|o| (d.obj_label(o).into(), c.obj_label(f.obj(o)).into()))
                .collect(),
            morphisms: d
                .morphisms()
                .filter(|&m| !d.is_identity(m))
                .map(|m| (d.mor_label(m).into(), c.mor_label(f.mor(m)).into()))
                .collect(),
        }
    }

    pub fn to_functor(&self, dom: &Arc<FinCat>, cod: &Arc<FinCat>) -> Result<Functor, IoError> {
        for k in self.objects.keys() {
            if dom.obj_by_label(k).is_none() {
                return Err(invalid(format_args!("unknown object `{k}`")));
            }
        }
        for k in self.morphisms.keys() {
            if dom.mor_by_label(k).is_none() {
                return Err(invalid(format_args!("unknown morphism `{k}`")));
            }
        }
        let mut obj = Vec::with_capacity(dom.num_objects());
        for o in dom.objects() {
            let l = dom.obj_label(o);
            let t = self
                .objects
                .get(l)
                .ok_or_else(|| invalid(format_args!("object `{l}` is not assigned")))?;
            obj.push(
                cod.obj_by_label(t)
                    .ok_or_else(|| invalid(format_args!("unknown object `{t}`")))?,
            );
        }
        let mut mor = Vec::with_capacity(dom.num_morphisms());
        for m in dom.morphisms() {
            let l = dom.mor_label(m);
            let image = match self.morphisms.get(l) {
                Some(t) => cod
                    .mor_by_label(t)
                    .ok_or_else(|| invalid(format_args!("unknown morphism `{t}`")))?,
                None if dom.is_identity(m) => cod.id(obj[dom.src(m).idx()]),
                None => return Err(invalid(format_args!("morphism `{l}` is not assigned"))),
            };
            mor.push(image);
        }
        Functor::new(dom.clone(), cod.clone(), obj, mor).map_err(invalid)
    }
}

/// A functor with both endpoints. As a slice, `dom` is the total category
/// (its `marked` list is the slice marking) and `cod` the base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorJson {
    pub dom: CategoryJson,
    pub cod: CategoryJson,
    #[serde(flatten)]
    pub map: AssignmentJson,
}

impl FunctorJson {
    pub fn from_functor(f: &Functor) -> FunctorJson {
        FunctorJson {
            dom: CategoryJson::from_cat(f.dom()),
            cod: CategoryJson::from_cat(f.cod()),
            map: AssignmentJson::from_functor(f),
        }
    }

    pub fn from_marked_slice(p: &MarkedSlice) -> FunctorJson {
        let mut out = FunctorJson::from_functor(p.proj());
        out.dom = CategoryJson::from_marked(p.marking());
        out
    }

    pub fn to_functor(&self) -> Result<Functor, IoError> {
        let dom = self.dom.to_cat()?;
        let cod = self.cod.to_cat()?;
        self.map.to_functor(&dom, &cod)
    }

    pub fn to_slice(&self) -> Result<Slice, IoError> {
        Ok(Slice::new(self.to_functor()?))
    }

    pub fn to_marked_slice(&self) -> Result<MarkedSlice, IoError> {
        let proj = self.to_functor()?;
        let marking = marking_from_labels(proj.dom(), self.dom.marked.as_deref().unwrap_or(&[]))?;
        MarkedSlice::new(proj, marking).map_err(invalid)
    }
}

/// A functor between the totals of two slices over the same base.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceMapJson {
    pub src: FunctorJson,
    pub tgt: FunctorJson,
    #[serde(flatten)]
    pub map: AssignmentJson,
}

pub struct MarkedSliceMap {
    pub src: MarkedSlice,
    pub tgt: MarkedSlice,
    pub functor: Functor,
}

impl SliceMapJson {
    pub fn from_parts(src: &MarkedSlice, tgt: &MarkedSlice, f: &Functor) -> SliceMapJson {
        SliceMapJson {
            src: FunctorJson::from_marked_slice(src),
            tgt: FunctorJson::from_marked_slice(tgt),
            map: AssignmentJson::from_functor(f),
        }
    }

    pub fn to_map(&self) -> Result<MarkedSliceMap, IoError> {
        let src = self.src.to_marked_slice()?;
        let mut tgt = self.tgt.to_marked_slice()?;
        if **src.base() != **tgt.base() {
            return Err(invalid("slices have different bases"));
        }
        // share the base so that composites over it compare equal
        let proj = tgt.proj().with_cod(src.base().clone());
        tgt = MarkedSlice::new(proj, tgt.marking().clone()).map_err(invalid)?;
        let functor = self.map.to_functor(src.total(), tgt.total())?;
        for a in src.total().morphisms() {
            if tgt.proj().mor(functor.mor(a)) != src.proj().mor(a) {
                return Err(invalid(format_args!(
                    "functor is not over the base at `{}`",
                    src.total().mor_label(a)
                )));
            }
        }
        Ok(MarkedSliceMap { src, tgt, functor })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FiberJson {
    Set(Vec<String>),
    Cat(CategoryJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionJson {
    Functor(AssignmentJson),
    Map(BTreeMap<String, String>),
}

/// `F: C^op -> Set` or `C^op -> Cat`. `action[f]` for `f: c -> d` goes
/// from the value at `d` to the value at `c`; identities may be omitted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub base: CategoryJson,
    pub at: BTreeMap<String, FiberJson>,
    #[serde(default)]
    pub action: BTreeMap<String, ActionJson>,
}

#[derive(Clone, Debug)]
pub enum Presheaf {
    Set(PresheafSet),
    Cat(PresheafCat),
}

impl PresheafJson {
    pub fn from_set(f: &PresheafSet) -> PresheafJson {
        let c = f.base();
        let at = c
            .objects()
            .map(|o| {
                (
                    c.obj_label(o).to_string(),
                    FiberJson::Set(f.labels(o).to_vec()),
                )
            })
            .collect();
        let action = c
            .morphisms()
            .filter(|&m| !c.is_identity(m))
            .map(|m| {
                let (s, t) = (c.src(m), c.tgt(m));
                let map = (0..f.size(t) as u32)
                    .map(|y| {
                        (
                            f.elem_label(t, y).into(),
                            f.elem_label(s, f.act(m, y)).into(),
                        )
                    })
                    .collect();
                (c.mor_label(m).to_string(), ActionJson::Map(map))
            })
            .collect();
        PresheafJson {
            base: CategoryJson::from_cat(c),
            at,
            action,
        }
    }

    pub fn from_cat(f: &PresheafCat) -> PresheafJson {
        let c = f.base();
        let at = c
            .objects()
            .map(|o| {
                let fiber = CategoryJson::from_cat(f.fiber(o));
                (c.obj_label(o).to_string(), FiberJson::Cat(fiber))
            })
            .collect();
        let action = c
            .morphisms()
            .filter(|&m| !c.is_identity(m))
            .map(|m| {
                let a = AssignmentJson::from_functor(f.act(m));
                (c.mor_label(m).to_string(), ActionJson::Functor(a))
            })
            .collect();
        PresheafJson {
            base: CategoryJson::from_cat(c),
            at,
            action,
        }
    }

    pub fn to_presheaf(&self) -> Result<Presheaf, IoError> {
        let base = self.base.to_cat()?;
        for k in self.at.keys() {
            if base.obj_by_label(k).is_none() {
                return Err(invalid(format_args!("value at unknown object `{k}`")));
            }
        }
        for k in self.action.keys() {
            if base.mor_by_label(k).is_none() {
                return Err(invalid(format_args!("action of unknown morphism `{k}`")));
            }
        }
        let mut fibers = Vec::new();
        for o in base.objects() {
            let l = base.obj_label(o);
            fibers.push(
                self.at
                    .get(l)
                    .ok_or_else(|| invalid(format_args!("no value at `{l}`")))?,
            );
        }
        let all_sets = fibers.iter().all(|f| matches!(f, FiberJson::Set(_)));
        let all_cats = fibers.iter().all(|f| matches!(f, FiberJson::Cat(_)));
        if all_sets
            && !(all_cats
                && self
                    .action
                    .values()
                    .any(|a| matches!(a, ActionJson::Functor(_))))
        {
            self.to_set_presheaf(&base, &fibers).map(Presheaf::Set)
        } else if all_cats {
            self.to_cat_presheaf(&base, &fibers).map(Presheaf::Cat)
        } else {
            Err(invalid("values mix sets and categories"))
        }
    }

    fn to_set_presheaf(
        &self,
        base: &Arc<FinCat>,
        fibers: &[&FiberJson],
    ) -> Result<PresheafSet, IoError> {
        let elems: Vec<Vec<String>> = fibers
            .iter()
            .map(|f| match f {
                FiberJson::Set(s) => s.clone(),
                FiberJson::Cat(_) => unreachable!(),
            })
            .collect();
        let index: Vec<HashMap<&str, u32>> = elems
            .iter()
            .enumerate()
            .map(|(o, s)| {
                let m: HashMap<&str, u32> = s
                    .iter()
                    .enumerate()
                    .map(|(i, l)| (l.as_str(), i as u32))
                    .collect();
                if m.len() != s.len() {
                    return Err(invalid(format_args!(
                        "repeated element at `{}`",
                        base.obj_label(ObjId(o as u32))
                    )));
                }
                Ok(m)
            })
            .collect::<Result<_, _>>()?;
        let mut action = Vec::new();
        for m in base.morphisms() {
            let (s, t) = (base.src(m).idx(), base.tgt(m).idx());
            let label = base.mor_label(m);
            let table = match self.action.get(label) {
                None if base.is_identity(m) => (0..elems[t].len() as u32).collect(),
                None => return Err(invalid(format_args!("no action for `{label}`"))),
                Some(ActionJson::Functor(_)) => {
                    return Err(invalid(format_args!(
                        "action of `{label}` is not a function"
                    )))
                }
                Some(ActionJson::Map(map)) => {
                    let mut table = Vec::new();
                    for y in &elems[t] {
                        let x = map
                            .get(y)
                            .ok_or_else(|| invalid(format_args!("`{label}` misses `{y}`")))?;
                        table.push(*index[s].get(x.as_str()).ok_or_else(|| {
                            invalid(format_args!("`{label}` sends `{y}` to unknown `{x}`"))
                        })?);
                    }
                    if map.len() != elems[t].len() {
                        return Err(invalid(format_args!("`{label}` has extra entries")));
                    }
                    table
                }
            };
            action.push(table);
        }
        PresheafSet::new(base.clone(), elems, action).map_err(invalid)
    }

    fn to_cat_presheaf(
        &self,
        base: &Arc<FinCat>,
        fibers: &[&FiberJson],
    ) -> Result<PresheafCat, IoError> {
        let cats: Vec<Arc<FinCat>> = fibers
            .iter()
            .map(|f| match f {
                FiberJson::Cat(c) => c.to_cat(),
                FiberJson::Set(_) => unreachable!(),
            })
            .collect::<Result<_, _>>()?;
        let mut action = Vec::new();
        for m in base.morphisms() {
            let (s, t) = (&cats[base.src(m).idx()], &cats[base.tgt(m).idx()]);
            let label = base.mor_label(m);
            let f = match self.action.get(label) {
                None if base.is_identity(m) => Functor::identity(t.clone()),
                None => return Err(invalid(format_args!("no action for `{label}`"))),
                Some(ActionJson::Functor(a)) => a.to_functor(t, s)?,
                // an empty object map parses as a function table
                Some(ActionJson::Map(map)) if map.is_empty() => {
                    AssignmentJson::default().to_functor(t, s)?
                }
                Some(ActionJson::Map(_)) => {
                    return Err(invalid(format_args!(
                        "action of `{label}` is not a functor"
                    )))
                }
            };
            action.push(f);
        }
        PresheafCat::new(base.clone(), cats, action).map_err(invalid)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub invertible: bool,
}

/// Words list generator ids in composition order; `f^-1` names the formal
/// inverse of an invertible generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub objects: Vec<String>,
    #[serde(default)]
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub relations: Vec<[Vec<String>; 2]>,
}

impl PresentationJson {
    pub fn from_presentation(p: &Presentation) -> PresentationJson {
        let word = |w: &Word| w.iter().rev().map(|&l| p.letter_label(l)).collect();
        PresentationJson {
            objects: p.objects.clone(),
            generators: p
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    id: g.label.clone(),
                    src: p.objects[g.src.idx()].clone(),
                    tgt: p.objects[g.tgt.idx()].clone(),
                    invertible: g.invertible,
                })
                .collect(),
            relations: p
                .relations
                .iter()
                .map(|r| [word(&r.lhs), word(&r.rhs)])
                .collect(),
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation, IoError> {
        let obj = |l: &str| {
            self.objects
                .iter()
                .position(|o| o == l)
                .map(|i| ObjId(i as u32))
                .ok_or_else(|| invalid(format_args!("unknown object `{l}`")))
        };
        let mut p = Presentation {
            objects: self.objects.clone(),
            ..Default::default()
        };
        for g in &self.generators {
            p.generators.push(Generator {
                label: g.id.clone(),
                src: obj(&g.src)?,
                tgt: obj(&g.tgt)?,
                invertible: g.invertible,
            });
        }
        let read_word = |w: &[String]| -> Result<Word, IoError> {
            w.iter()
                .rev()
                .map(|l| {
                    let (name, inv) = match l.strip_suffix("^-1") {
                        Some(n) => (n, true),
                        None => (l.as_str(), false),
                    };
                    let g = p
                        .generator_by_label(name)
                        .ok_or_else(|| invalid(format_args!("unknown generator `{name}`")))?;
                    Ok(letter(g, inv))
                })
                .collect()
        };
        let mut relations = Vec::new();
        for [lhs, rhs] in &self.relations {
            let (l, r) = (read_word(lhs)?, read_word(rhs)?);
            let ends = p.path_endpoints(&l).or_else(|| p.path_endpoints(&r));
            let Some((src, tgt)) = ends else {
                if l.is_empty() && r.is_empty() {
                    continue;
                }
                return Err(invalid(format_args!(
                    "relation {lhs:?} = {rhs:?} is not a path"
                )));
            };
            relations.push(Relation {
                src,
                tgt,
                lhs: l,
                rhs: r,
            });
        }
        p.relations = relations;
        p.check().map_err(invalid)?;
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FaceJson {
    Simplex(String),
    Degenerate { of: String, degeneracy: Vec<u8> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexJson {
    pub id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub faces: Vec<FaceJson>,
}

/// `simplices[d]` lists the non-degenerate `d`-simplices with faces
/// `d_0, ..., d_d`. A degenerate face names its non-degenerate simplex and
/// the surjection `[d-1] -> [k]` as a list of images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SSetJson {
    pub simplices: Vec<Vec<SimplexJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub marked: Vec<String>,
}

impl SSetJson {
    pub fn from_sset(x: &TruncSSet, marked: &[u32]) -> SSetJson {
        let face = |r: &SRef| {
            let l = x.label(r.dim as usize, r.simplex).to_string();
            if r.is_degenerate() {
                FaceJson::Degenerate {
                    of: l,
                    degeneracy: r.degeneracy.clone(),
                }
            } else {
                FaceJson::Simplex(l)
            }
        };
        let mut top = MAX_DIM;
        while top > 0 && x.count(top) == 0 {
            top -= 1;
        }
        let simplices = (0..=top)
            .map(|d| {
                (0..x.count(d) as u32)
                    .map(|s| SimplexJson {
                        id: x.label(d, s).to_string(),
                        faces: x.faces_of(d, s).iter().map(face).collect(),
                    })
                    .collect()
            })
            .collect();
        SSetJson {
            simplices,
            marked: marked.iter().map(|&e| x.label(1, e).to_string()).collect(),
        }
    }

    pub fn from_marked(x: &MarkedTruncSSet) -> SSetJson {
        SSetJson::from_sset(&x.sset, &x.marked_edges())
    }

    pub fn to_marked(&self) -> Result<MarkedTruncSSet, IoError> {
        if self.simplices.len() > MAX_DIM + 1 {
            return Err(invalid(format_args!("dimension above {MAX_DIM}")));
        }
        let mut index: HashMap<&str, (u8, u32)> = HashMap::new();
        for (d, level) in self.simplices.iter().enumerate() {
            for (i, s) in level.iter().enumerate() {
                if index.insert(&s.id, (d as u8, i as u32)).is_some() {
                    return Err(invalid(format_args!("repeated simplex `{}`", s.id)));
                }
            }
        }
        let lookup = |l: &str| {
            index
                .get(l)
                .copied()
                .ok_or_else(|| invalid(format_args!("unknown simplex `{l}`")))
        };
        let mut labels = Vec::new();
        let mut faces = Vec::new();
        for level in &self.simplices {
            labels.push(level.iter().map(|s| s.id.clone()).collect());
            let mut fs = Vec::new();
            for s in level {
                let mut refs = Vec::new();
                for f in &s.faces {
                    refs.push(match f {
                        FaceJson::Simplex(l) => {
                            let (dim, simplex) = lookup(l)?;
                            SRef::nondegenerate(dim as usize, simplex)
                        }
                        FaceJson::Degenerate { of, degeneracy } => {
                            let (dim, simplex) = lookup(of)?;
                            SRef {
                                simplex,
                                dim,
                                degeneracy: degeneracy.clone(),
                            }
                        }
                    });
                }
                fs.push(refs);
            }
            faces.push(fs);
        }
        let sset = Arc::new(TruncSSet::new(labels, faces).map_err(invalid)?);
        let mut edges = Vec::new();
        for l in &self.marked {
            match lookup(l)? {
                (1, e) => edges.push(e),
                _ => return Err(invalid(format_args!("marked simplex `{l}` is not an edge"))),
            }
        }
        MarkedTruncSSet::new(sset, &edges).map_err(invalid)
    }
}

/// A marking given as a bare list of morphism labels.
pub type MarkingJson = Vec<String>;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::are_isomorphic;
    use crate::fincat::shapes::{ordinal, walking_iso, z2};
    use crate::simplicial::{delta, horn};

    #[test]
    fn category_round_trip_keeps_tables() {
        for c in [ordinal(3), walking_iso(), z2()] {
            let j = CategoryJson::from_cat(&c);
            let back = parse::<CategoryJson>(&render(&j))
                .unwrap()
                .to_cat()
                .unwrap();
            assert_eq!(*back, c);
        }
    }

    #[test]
    fn documented_example_parses() {
        let text = r#"{"objects":["a","b"], "morphisms":[{"id":"f","src":"a","tgt":"b"}],
            "identities":{"a":"id_a","b":"id_b"}, "compose":[], "marked":["id_a","id_b","f"]}"#;
        let m = parse::<CategoryJson>(text).unwrap().to_marked().unwrap();
        assert_eq!(m.carrier().num_morphisms(), 3);
        assert!(m.is_maximal());
    }

    #[test]
    fn bad_category_is_invalid_not_parse_error() {
        let text = r#"{"objects":["a"], "morphisms":[{"id":"f","src":"a","tgt":"a"}],
            "identities":{"a":"id_a"}}"#;
        let j = parse::<CategoryJson>(text).unwrap();
        assert!(matches!(j.to_cat(), Err(IoError::Invalid(_))));
        assert!(matches!(parse::<CategoryJson>("{"), Err(IoError::Parse(_))));
    }

    #[test]
    fn presheaf_round_trips() {
        let c = Arc::new(ordinal(1));
        let elems = vec![vec!["x".into(), "y".into()], vec!["z".into()]];
        let action = vec![vec![0, 1], vec![1], vec![0]];
        let f = PresheafSet::new(c, elems, action).unwrap();
        let j = PresheafJson::from_set(&f);
        match parse::<PresheafJson>(&render(&j))
            .unwrap()
            .to_presheaf()
            .unwrap()
        {
            Presheaf::Set(g) => assert_eq!(g, f),
            Presheaf::Cat(_) => panic!("expected a set-valued presheaf"),
        }
        let fc = PresheafCat::discrete(&f);
        let j = PresheafJson::from_cat(&fc);
        match parse::<PresheafJson>(&render(&j))
            .unwrap()
            .to_presheaf()
            .unwrap()
        {
            Presheaf::Cat(g) => assert_eq!(g, fc),
            Presheaf::Set(_) => panic!("expected a category-valued presheaf"),
        }
    }

    #[test]
    fn presentation_words_read_in_composition_order() {
        let text = r#"{"objects":["0","1","2"],
            "generators":[{"id":"f","src":"0","tgt":"1"},{"id":"g","src":"1","tgt":"2"},
                          {"id":"h","src":"0","tgt":"2"}],
            "relations":[[["g","f"],["h"]]]}"#;
        let p = parse::<PresentationJson>(text)
            .unwrap()
            .to_presentation()
            .unwrap();
        assert_eq!(p.relations[0].lhs, vec![letter(0, false), letter(1, false)]);
        let back = PresentationJson::from_presentation(&p);
        assert_eq!(back.relations[0][0], vec!["g".to_string(), "f".to_string()]);
        let r = crate::present::realize(&p, Default::default()).unwrap();
        assert!(are_isomorphic(&r.cat, &Arc::new(ordinal(2))).unwrap());
    }

    #[test]
    fn sset_round_trip() {
        let (h, _) = horn(2, 1);
        let j = SSetJson::from_sset(&h, &[0]);
        let back = parse::<SSetJson>(&render(&j)).unwrap().to_marked().unwrap();
        assert_eq!(*back.sset, *h);
        assert_eq!(back.marked_edges(), vec![0]);
        let d = delta(3);
        let back = SSetJson::from_sset(&d.sset, &[]).to_marked().unwrap();
        assert_eq!(*back.sset, *d.sset);
    }

    #[test]
    fn functor_omits_identities() {
        let c = Arc::new(ordinal(1));
        let f = Functor::identity(c);
        let j = FunctorJson::from_functor(&f);
        assert_eq!(j.map.morphisms.len(), 1);
        let g = parse::<FunctorJson>(&render(&j))
            .unwrap()
            .to_functor()
            .unwrap();
        assert!(g.is_identity());
    }
}
