//! Finite categories stored as dense tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

/// Dense object id inside one [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjId(pub u32);

/// Dense morphism id inside one [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MorId(pub u32);

impl ObjId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl MorId {
    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MorData {
    pub label: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// A validated finite category.
///
/// Objects and morphisms are dense integer ids with human-readable labels.
/// Composition is total on composable pairs. All values are immutable once
/// built, so a `FinCat` can be shared freely between threads.
pub struct FinCat {
    obj_labels: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<MorId>,
    /// Morphisms out of each object, sorted by `(tgt, id)`.
    out: Vec<Vec<MorId>>,
    /// Morphisms into each object, sorted by `(src, id)`.
    inc: Vec<Vec<MorId>>,
    out_pos: Vec<u32>,
    /// `comp[f][out_pos[g]] = g ∘ f`.
    comp: Vec<Vec<MorId>>,
    inverse: OnceLock<Vec<Option<MorId>>>,
}

impl Clone for FinCat {
    fn clone(&self) -> Self {
        FinCat {
            obj_labels: self.obj_labels.clone(),
            mors: self.mors.clone(),
            identity: self.identity.clone(),
            out: self.out.clone(),
            inc: self.inc.clone(),
            out_pos: self.out_pos.clone(),
            comp: self.comp.clone(),
            inverse: OnceLock::new(),
        }
    }
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.obj_labels == other.obj_labels
            && self.mors == other.mors
            && self.identity == other.identity
            && self.comp == other.comp
            && self.out == other.out
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.obj_labels)
            .field(
                "morphisms",
                &self
                    .mors
                    .iter()
                    .map(|m| {
                        format!(
                            "{}: {} -> {}",
                            m.label,
                            self.obj_labels[m.src.idx()],
                            self.obj_labels[m.tgt.idx()]
                        )
                    })
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

impl FinCat {
    pub fn num_objects(&self) -> usize {
        self.obj_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.obj_labels.is_empty()
    }

    pub fn objects(&self) -> impl DoubleEndedIterator<Item = ObjId> + ExactSizeIterator + Clone {
        (0..self.obj_labels.len() as u32).map(ObjId)
    }

    pub fn morphisms(&self) -> impl DoubleEndedIterator<Item = MorId> + ExactSizeIterator + Clone {
        (0..self.mors.len() as u32).map(MorId)
    }

    pub fn obj_label(&self, o: ObjId) -> &str {
        &self.obj_labels[o.idx()]
    }

    pub fn mor_label(&self, m: MorId) -> &str {
        &self.mors[m.idx()].label
    }

    pub fn obj_by_label(&self, label: &str) -> Option<ObjId> {
        self.obj_labels
            .iter()
            .position(|l| l == label)
            .map(|i| ObjId(i as u32))
    }

    pub fn mor_by_label(&self, label: &str) -> Option<MorId> {
        self.mors
            .iter()
            .position(|m| m.label == label)
            .map(|i| MorId(i as u32))
    }

    #[inline]
    pub fn src(&self, m: MorId) -> ObjId {
        self.mors[m.idx()].src
    }

    #[inline]
    pub fn tgt(&self, m: MorId) -> ObjId {
        self.mors[m.idx()].tgt
    }

    #[inline]
    pub fn id(&self, o: ObjId) -> MorId {
        self.identity[o.idx()]
    }

    #[inline]
    pub fn is_identity(&self, m: MorId) -> bool {
        let d = &self.mors[m.idx()];
        d.src == d.tgt && self.identity[d.src.idx()] == m
    }

    /// `g ∘ f`, or `None` when `tgt(f) != src(g)`.
    #[inline]
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.tgt(f) != self.src(g) {
            return None;
        }
        Some(self.comp[f.idx()][self.out_pos[g.idx()] as usize])
    }

    /// `g ∘ f`. Panics when the pair is not composable.
    #[inline]
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "compose: {} after {} not composable",
                self.mor_label(g),
                self.mor_label(f)
            )
        })
    }

    /// Composes a path given in application order (first element applied first).
    pub fn compose_path(&self, start: ObjId, path: &[MorId]) -> MorId {
        path.iter()
            .fold(self.id(start), |acc, &m| self.compose(m, acc))
    }

    /// All morphisms out of `a`, ordered by target then id.
    pub fn out_of(&self, a: ObjId) -> &[MorId] {
        &self.out[a.idx()]
    }

    /// All morphisms into `b`, ordered by source then id.
    pub fn incoming(&self, b: ObjId) -> &[MorId] {
        &self.inc[b.idx()]
    }

    /// `Hom(a, b)` ordered by id.
    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        let out = &self.out[a.idx()];
        let lo = out.partition_point(|&m| self.tgt(m) < b);
        let hi = out.partition_point(|&m| self.tgt(m) <= b);
        &out[lo..hi]
    }

    fn inverse_table(&self) -> &[Option<MorId>] {
        self.inverse.get_or_init(|| {
            self.morphisms()
                .map(|m| {
                    let (a, b) = (self.src(m), self.tgt(m));
                    self.hom(b, a).iter().copied().find(|&n| {
                        self.compose(n, m) == self.id(a) && self.compose(m, n) == self.id(b)
                    })
                })
                .collect()
        })
    }

    /// The two-sided inverse of `m`, if `m` is an isomorphism.
    pub fn inverse(&self, m: MorId) -> Option<MorId> {
        self.inverse_table()[m.idx()]
    }

    pub fn is_iso(&self, m: MorId) -> bool {
        self.inverse(m).is_some()
    }

    /// True when every morphism has a two-sided inverse.
    pub fn is_groupoid(&self) -> bool {
        self.morphisms().all(|m| self.is_iso(m))
    }

    /// Full re-scan of the category axioms over all composable pairs and
    /// triples. An empty result means the tables describe a category.
    pub fn check_axioms(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for o in self.objects() {
            let i = self.id(o);
            if self.src(i) != o || self.tgt(i) != o {
                out.push(Violation::IdentityNotEndo {
                    object: self.obj_label(o).to_string(),
                    morphism: self.mor_label(i).to_string(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt(f)) {
                let gf = self.compose(g, f);
                if self.src(gf) != self.src(f) || self.tgt(gf) != self.tgt(g) {
                    out.push(Violation::CompositeEndpoints {
                        g: self.mor_label(g).into(),
                        f: self.mor_label(f).into(),
                        composite: self.mor_label(gf).into(),
                    });
                }
            }
            let (a, b) = (self.src(f), self.tgt(f));
            if self.compose(self.id(b), f) != f || self.compose(f, self.id(a)) != f {
                out.push(Violation::UnitLaw {
                    morphism: self.mor_label(f).into(),
                });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for f in self.morphisms() {
            for &g in self.out_of(self.tgt(f)) {
                let gf = self.compose(g, f);
                for &h in self.out_of(self.tgt(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        out.push(Violation::Associativity {
                            h: self.mor_label(h).into(),
                            g: self.mor_label(g).into(),
                            f: self.mor_label(f).into(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Opposite category; object ids are kept and morphism ids are kept.
    pub fn opposite(&self) -> FinCat {
        let mut b = CatBuilder::new();
        for o in self.objects() {
            b.add_object(self.obj_label(o));
        }
        for m in self.morphisms() {
            b.add_morphism(self.mor_label(m), self.tgt(m), self.src(m));
        }
        for o in self.objects() {
            b.set_identity(o, self.id(o));
        }
        b.build(|g, f| self.compose(f, g))
    }
}

/// A single violated category axiom with its witnesses (by label).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    UnknownObject {
        label: String,
    },
    UnknownMorphism {
        label: String,
    },
    DuplicateObject {
        label: String,
    },
    DuplicateMorphism {
        label: String,
    },
    MissingIdentity {
        object: String,
    },
    IdentityNotEndo {
        object: String,
        morphism: String,
    },
    NotComposable {
        g: String,
        f: String,
    },
    ConflictingComposite {
        g: String,
        f: String,
        first: String,
        second: String,
    },
    MissingComposite {
        g: String,
        f: String,
    },
    CompositeEndpoints {
        g: String,
        f: String,
        composite: String,
    },
    UnitLaw {
        morphism: String,
    },
    Associativity {
        h: String,
        g: String,
        f: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownObject { label } => write!(f, "unknown object `{label}`"),
            Violation::UnknownMorphism { label } => write!(f, "unknown morphism `{label}`"),
            Violation::DuplicateObject { label } => write!(f, "duplicate object `{label}`"),
            Violation::DuplicateMorphism { label } => write!(f, "duplicate morphism `{label}`"),
            Violation::MissingIdentity { object } => write!(f, "object `{object}` has no identity"),
            Violation::IdentityNotEndo { object, morphism } => {
                write!(
                    f,
                    "identity `{morphism}` of `{object}` is not an endomorphism of it"
                )
            }
            Violation::NotComposable { g, f: ff } => {
                write!(f, "compose entry ({g}, {ff}) is not a composable pair")
            }
            Violation::ConflictingComposite {
                g,
                f: ff,
                first,
                second,
            } => {
                write!(
                    f,
                    "composite of ({g}, {ff}) given twice: `{first}` and `{second}`"
                )
            }
            Violation::MissingComposite { g, f: ff } => write!(f, "missing composite {g} ∘ {ff}"),
            Violation::CompositeEndpoints {
                g,
                f: ff,
                composite,
            } => {
                write!(
                    f,
                    "composite {g} ∘ {ff} = `{composite}` has the wrong source or target"
                )
            }
            Violation::UnitLaw { morphism } => write!(f, "unit law fails at `{morphism}`"),
            Violation::Associativity { h, g, f: ff } => {
                write!(f, "associativity fails at ({h}, {g}, {ff})")
            }
        }
    }
}

/// All violations found while validating raw tables.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("invalid category: {} violation(s), first: {}", .violations.len(), .violations.first().map(|v| v.to_string()).unwrap_or_default())]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

/// Trusted builder used by constructions whose composition is known to be
/// lawful. Raw, untrusted tables go through [`RawCategory::validate`].
#[derive(Clone, Debug, Default)]
pub struct CatBuilder {
    objects: Vec<String>,
    mors: Vec<MorData>,
    identity: Vec<Option<MorId>>,
}

impl CatBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, label: impl Into<String>) -> ObjId {
        self.objects.push(label.into());
        self.identity.push(None);
        ObjId(self.objects.len() as u32 - 1)
    }

    pub fn add_morphism(&mut self, label: impl Into<String>, src: ObjId, tgt: ObjId) -> MorId {
        self.mors.push(MorData {
            label: label.into(),
            src,
            tgt,
        });
        MorId(self.mors.len() as u32 - 1)
    }

    /// Adds an object together with an identity morphism labelled `id_<label>`.
    pub fn add_object_with_identity(&mut self, label: impl Into<String>) -> ObjId {
        let label = label.into();
        let o = self.add_object(label.clone());
        let i = self.add_morphism(format!("id_{label}"), o, o);
        self.set_identity(o, i);
        o
    }

    pub fn set_identity(&mut self, o: ObjId, m: MorId) {
        self.identity[o.idx()] = Some(m);
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.mors.len()
    }

    pub fn src(&self, m: MorId) -> ObjId {
        self.mors[m.idx()].src
    }

    pub fn tgt(&self, m: MorId) -> ObjId {
        self.mors[m.idx()].tgt
    }

    /// Builds the category, filling the composition table from `compose(g, f)`
    /// for every composable pair. Panics if an identity is missing.
    pub fn build(self, mut compose: impl FnMut(MorId, MorId) -> MorId) -> FinCat {
        let identity: Vec<MorId> = self
            .identity
            .iter()
            .enumerate()
            .map(|(i, m)| m.unwrap_or_else(|| panic!("object {} has no identity", self.objects[i])))
            .collect();
        let (out, inc, out_pos) = index_tables(self.objects.len(), &self.mors);
        let mut comp = Vec::with_capacity(self.mors.len());
        for (fi, f) in self.mors.iter().enumerate() {
            let row: Vec<MorId> = out[f.tgt.idx()]
                .iter()
                .map(|&g| compose(g, MorId(fi as u32)))
                .collect();
            comp.push(row);
        }
        FinCat {
            obj_labels: self.objects,
            mors: self.mors,
            identity,
            out,
            inc,
            out_pos,
            comp,
            inverse: OnceLock::new(),
        }
    }
}

fn index_tables(n_obj: usize, mors: &[MorData]) -> (Vec<Vec<MorId>>, Vec<Vec<MorId>>, Vec<u32>) {
    let mut out: Vec<Vec<MorId>> = vec![Vec::new(); n_obj];
    let mut inc: Vec<Vec<MorId>> = vec![Vec::new(); n_obj];
    for (i, m) in mors.iter().enumerate() {
        out[m.src.idx()].push(MorId(i as u32));
        inc[m.tgt.idx()].push(MorId(i as u32));
    }
    for list in out.iter_mut() {
        list.sort_by_key(|&m| (mors[m.idx()].tgt, m));
    }
    for list in inc.iter_mut() {
        list.sort_by_key(|&m| (mors[m.idx()].src, m));
    }
    let mut out_pos = vec![0u32; mors.len()];
    for list in &out {
        for (p, &m) in list.iter().enumerate() {
            out_pos[m.idx()] = p as u32;
        }
    }
    (out, inc, out_pos)
}

/// Untrusted category tables, referencing objects and morphisms by label.
///
/// Identities are declared by the `identities` map and need not be listed
/// among `morphisms`. Composites with an identity on either side may be
/// omitted; every other composable pair must have an entry.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: Vec<(String, String)>,
    pub compose: Vec<(String, String, String)>,
}

impl RawCategory {
    /// Checks every axiom and returns the category, or all violations.
    pub fn validate(&self) -> Result<FinCat, ValidationReport> {
        let mut v = Vec::new();
        let mut obj_index: HashMap<&str, ObjId> = HashMap::new();
        for (i, o) in self.objects.iter().enumerate() {
            if obj_index.insert(o.as_str(), ObjId(i as u32)).is_some() {
                v.push(Violation::DuplicateObject { label: o.clone() });
            }
        }
        let mut b = CatBuilder::new();
        for o in &self.objects {
            b.add_object(o.clone());
        }
        let mut mor_index: HashMap<String, MorId> = HashMap::new();
        let lookup_obj = |label: &str, v: &mut Vec<Violation>| -> Option<ObjId> {
            let r = obj_index.get(label).copied();
            if r.is_none() {
                v.push(Violation::UnknownObject {
                    label: label.to_string(),
                });
            }
            r
        };
        for (label, s, t) in &self.morphisms {
            let (s, t) = (lookup_obj(s, &mut v), lookup_obj(t, &mut v));
            if let (Some(s), Some(t)) = (s, t) {
                if mor_index.contains_key(label) {
                    v.push(Violation::DuplicateMorphism {
                        label: label.clone(),
                    });
                    continue;
                }
                let m = b.add_morphism(label.clone(), s, t);
                mor_index.insert(label.clone(), m);
            }
        }
        let mut ident: Vec<Option<MorId>> = vec![None; self.objects.len()];
        for (o, m) in &self.identities {
            let Some(oid) = lookup_obj(o, &mut v) else {
                continue;
            };
            let mid = match mor_index.get(m) {
                Some(&mid) => {
                    if b.src(mid) != oid || b.tgt(mid) != oid {
                        v.push(Violation::IdentityNotEndo {
                            object: o.clone(),
                            morphism: m.clone(),
                        });
                        continue;
                    }
                    mid
                }
                None => {
                    let mid = b.add_morphism(m.clone(), oid, oid);
                    mor_index.insert(m.clone(), mid);
                    mid
                }
            };
            if ident[oid.idx()].is_some() {
                v.push(Violation::DuplicateMorphism { label: m.clone() });
            }
            ident[oid.idx()] = Some(mid);
        }
        for (i, id) in ident.iter().enumerate() {
            match id {
                Some(m) => b.set_identity(ObjId(i as u32), *m),
                None => v.push(Violation::MissingIdentity {
                    object: self.objects[i].clone(),
                }),
            }
        }
        if !v.is_empty() {
            return Err(ValidationReport { violations: v });
        }

        let mut table: HashMap<(MorId, MorId), MorId> = HashMap::new();
        for (g, f, gf) in &self.compose {
            let ids: Vec<Option<MorId>> = [g, f, gf]
                .iter()
                .map(|l| {
                    let r = mor_index.get(l.as_str()).copied();
                    if r.is_none() {
                        v.push(Violation::UnknownMorphism {
                            label: l.to_string(),
                        });
                    }
                    r
                })
                .collect();
            let (Some(gi), Some(fi), Some(gfi)) = (ids[0], ids[1], ids[2]) else {
                continue;
            };
            if b.tgt(fi) != b.src(gi) {
                v.push(Violation::NotComposable {
                    g: g.clone(),
                    f: f.clone(),
                });
                continue;
            }
            if let Some(&prev) = table.get(&(gi, fi)) {
                if prev != gfi {
                    v.push(Violation::ConflictingComposite {
                        g: g.clone(),
                        f: f.clone(),
                        first: b.mors[prev.idx()].label.clone(),
                        second: gf.clone(),
                    });
                }
                continue;
            }
            table.insert((gi, fi), gfi);
        }
        if !v.is_empty() {
            return Err(ValidationReport { violations: v });
        }
        let is_id = |m: MorId| ident.contains(&Some(m));
        let n_mor = b.num_morphisms();
        for fi in 0..n_mor as u32 {
            let f = MorId(fi);
            for gi in 0..n_mor as u32 {
                let g = MorId(gi);
                if b.tgt(f) != b.src(g) || table.contains_key(&(g, f)) {
                    continue;
                }
                if is_id(g) {
                    table.insert((g, f), f);
                } else if is_id(f) {
                    table.insert((g, f), g);
                } else {
                    v.push(Violation::MissingComposite {
                        g: b.mors[g.idx()].label.clone(),
                        f: b.mors[f.idx()].label.clone(),
                    });
                }
            }
        }
        if !v.is_empty() {
            return Err(ValidationReport { violations: v });
        }
        let cat = b.build(|g, f| table[&(g, f)]);
        let violations = cat.check_axioms();
        if violations.is_empty() {
            Ok(cat)
        } else {
            Err(ValidationReport { violations })
        }
    }

    /// Tables of an existing category (composites with identities omitted).
    pub fn from_cat(c: &FinCat) -> RawCategory {
        let mut raw = RawCategory {
            objects: c.objects().map(|o| c.obj_label(o).to_string()).collect(),
            ..Default::default()
        };
        for m in c.morphisms() {
            if !c.is_identity(m) {
                raw.morphisms.push((
                    c.mor_label(m).into(),
                    c.obj_label(c.src(m)).into(),
                    c.obj_label(c.tgt(m)).into(),
                ));
            }
        }
        for o in c.objects() {
            raw.identities
                .push((c.obj_label(o).into(), c.mor_label(c.id(o)).into()));
        }
        for f in c.morphisms() {
            if c.is_identity(f) {
                continue;
            }
            for &g in c.out_of(c.tgt(f)) {
                if c.is_identity(g) {
                    continue;
                }
                raw.compose.push((
                    c.mor_label(g).into(),
                    c.mor_label(f).into(),
                    c.mor_label(c.compose(g, f)).into(),
                ));
            }
        }
        raw
    }
}
