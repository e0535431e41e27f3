//! Simplicial sets truncated at dimension 3, nerves and categorification,
//! with marked variants, and the images of the generating simplicial
//! anodyne maps under categorification.
//!
//! Nerves of categories are 2-coskeletal and every generating shape used
//! here lives in dimension at most 3, so nothing above dimension 3 is kept.
//! Only nondegenerate simplices are stored; a degenerate simplex is a
//! nondegenerate one together with a surjection of vertex sets.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::fincat::{
    shapes, FinCat, Functor, FunctorSearch, Marking, MorId, ObjId, SearchExhausted,
};
use crate::model::{anodyne_generators, GeneratorSet, Kind, MarkedMap, Shape};
use crate::present::{
    letter, marked_pushout, Budget, Generator, PresentError, Presentation, Realized, Relation, Word,
};

pub const MAX_DIM: usize = 3;

/// `s^* x` for a nondegenerate `x` of dimension `dim` and a surjection
/// `s: [k] -> [dim]` listed as its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SRef {
    pub simplex: u32,
    pub dim: u8,
    pub degeneracy: Vec<u8>,
}

impl SRef {
    pub fn nondegenerate(dim: usize, simplex: u32) -> SRef {
        SRef {
            simplex,
            dim: dim as u8,
            degeneracy: (0..=dim as u8).collect(),
        }
    }

    /// Dimension of the simplex referred to.
    pub fn level(&self) -> usize {
        self.degeneracy.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.level() > self.dim as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
pub enum SSetError {
    #[error("expected at most {MAX_DIM} dimensions above 0, got {0}")]
    TooManyDimensions(usize),
    #[error("simplex {simplex} of dimension {dim} has a malformed face list")]
    FaceShape { dim: usize, simplex: usize },
    #[error("face {face} of simplex {simplex} in dimension {dim} is not a valid simplex")]
    FaceRange {
        dim: usize,
        simplex: usize,
        face: usize,
    },
    #[error("d_{i} d_{j} differs from d_{}d_{i} on simplex {simplex} of dimension {dim}", j - 1)]
    Identity {
        dim: usize,
        simplex: usize,
        i: usize,
        j: usize,
    },
    #[error("map image of simplex {simplex} in dimension {dim} is invalid")]
    MapImage { dim: usize, simplex: usize },
    #[error("map does not commute with face {face} of simplex {simplex} in dimension {dim}")]
    MapFace {
        dim: usize,
        simplex: usize,
        face: usize,
    },
    #[error("edge {0} is not a nondegenerate edge")]
    Marking(usize),
}

/// A simplicial set truncated at dimension 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncSSet {
    labels: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<SRef>>>,
}

fn is_surjection(s: &[u8], m: u8) -> bool {
    s.first() == Some(&0)
        && s.last() == Some(&m)
        && s.windows(2).all(|w| w[1] == w[0] || w[1] == w[0] + 1)
}

impl TruncSSet {
    /// `faces[d][x]` lists `d_0 x, ..., d_d x`; dimension 0 has empty lists.
    pub fn new(
        labels: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<SRef>>>,
    ) -> Result<TruncSSet, SSetError> {
        if labels.len() > MAX_DIM + 1 || faces.len() != labels.len() {
            return Err(SSetError::TooManyDimensions(labels.len().saturating_sub(1)));
        }
        let mut labels = labels;
        let mut faces = faces;
        labels.resize(MAX_DIM + 1, Vec::new());
        faces.resize(MAX_DIM + 1, Vec::new());
        for d in 0..=MAX_DIM {
            if faces[d].len() != labels[d].len() {
                return Err(SSetError::FaceShape {
                    dim: d,
                    simplex: faces[d].len().min(labels[d].len()),
                });
            }
            for (x, fs) in faces[d].iter().enumerate() {
                let expected = if d == 0 { 0 } else { d + 1 };
                if fs.len() != expected {
                    return Err(SSetError::FaceShape { dim: d, simplex: x });
                }
                for (i, r) in fs.iter().enumerate() {
                    let ok = r.level() == d - 1
                        && (r.dim as usize) < d
                        && (r.simplex as usize) < labels[r.dim as usize].len()
                        && is_surjection(&r.degeneracy, r.dim);
                    if !ok {
                        return Err(SSetError::FaceRange {
                            dim: d,
                            simplex: x,
                            face: i,
                        });
                    }
                }
            }
        }
        let s = TruncSSet { labels, faces };
        for d in 2..=MAX_DIM {
            for x in 0..s.count(d) {
                let r = SRef::nondegenerate(d, x as u32);
                for j in 1..=d {
                    for i in 0..j {
                        if s.face(&s.face(&r, j), i) != s.face(&s.face(&r, i), j - 1) {
                            return Err(SSetError::Identity {
                                dim: d,
                                simplex: x,
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn count(&self, dim: usize) -> usize {
        self.labels[dim].len()
    }

    pub fn label(&self, dim: usize, x: u32) -> &str {
        &self.labels[dim][x as usize]
    }

    pub fn labels(&self, dim: usize) -> &[String] {
        &self.labels[dim]
    }

    /// Stored faces of a nondegenerate simplex.
    pub fn faces_of(&self, dim: usize, x: u32) -> &[SRef] {
        &self.faces[dim][x as usize]
    }

    /// `d_i r`, computed through the degeneracy when `r` is degenerate.
    pub fn face(&self, r: &SRef, i: usize) -> SRef {
        let s = &r.degeneracy;
        let t: Vec<u8> = s
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &v)| v)
            .collect();
        let m = r.dim;
        if is_surjection(&t, m) {
            return SRef {
                simplex: r.simplex,
                dim: m,
                degeneracy: t,
            };
        }
        let j = s[i];
        let lowered: Vec<u8> = t.iter().map(|&v| if v > j { v - 1 } else { v }).collect();
        let y = &self.faces[m as usize][r.simplex as usize][j as usize];
        SRef {
            simplex: y.simplex,
            dim: y.dim,
            degeneracy: lowered.iter().map(|&q| y.degeneracy[q as usize]).collect(),
        }
    }

    /// The face spanned by the listed vertices, in increasing order.
    pub fn restrict(&self, r: &SRef, keep: &[usize]) -> SRef {
        let mut cur = r.clone();
        for v in (0..=r.level()).rev() {
            if !keep.contains(&v) {
                cur = self.face(&cur, v);
            }
        }
        cur
    }

    /// Vertex `i` of `r`.
    pub fn vertex(&self, r: &SRef, i: usize) -> u32 {
        self.restrict(r, &[i]).simplex
    }

    pub fn vertices(&self, r: &SRef) -> Vec<u32> {
        (0..=r.level()).map(|i| self.vertex(r, i)).collect()
    }

    /// Keeps the listed nondegenerate simplices, which must be closed under
    /// faces, and returns the sub-object with its inclusion.
    pub fn sub(self: &Arc<Self>, keep: &[Vec<bool>]) -> (Arc<TruncSSet>, SMap) {
        let mut new_id: Vec<Vec<u32>> = Vec::new();
        for d in 0..=MAX_DIM {
            let mut k = 0;
            new_id.push(
                (0..self.count(d))
                    .map(|x| {
                        if keep[d][x] {
                            k += 1;
                            k - 1
                        } else {
                            u32::MAX
                        }
                    })
                    .collect(),
            );
        }
        let mut labels = Vec::new();
        let mut faces = Vec::new();
        let mut images = Vec::new();
        for d in 0..=MAX_DIM {
            let mut ls = Vec::new();
            let mut fs = Vec::new();
            let mut im = Vec::new();
            for x in 0..self.count(d) {
                if !keep[d][x] {
                    continue;
                }
                ls.push(self.labels[d][x].clone());
                fs.push(
                    self.faces[d][x]
                        .iter()
                        .map(|r| {
                            let n = new_id[r.dim as usize][r.simplex as usize];
                            assert_ne!(n, u32::MAX, "kept simplices are closed under faces");
                            SRef {
                                simplex: n,
                                ..r.clone()
                            }
                        })
                        .collect(),
                );
                im.push(SRef::nondegenerate(d, x as u32));
            }
            labels.push(ls);
            faces.push(fs);
            images.push(im);
        }
        let src =
            Arc::new(TruncSSet::new(labels, faces).expect("sub-object of a valid simplicial set"));
        let map = SMap {
            src: src.clone(),
            tgt: self.clone(),
            images,
        };
        (src, map)
    }
}

/// A simplicial map, given on nondegenerate simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMap {
    pub src: Arc<TruncSSet>,
    pub tgt: Arc<TruncSSet>,
    /// `images[d][x]` is a `d`-simplex of the target.
    pub images: Vec<Vec<SRef>>,
}

impl SMap {
    pub fn new(
        src: Arc<TruncSSet>,
        tgt: Arc<TruncSSet>,
        images: Vec<Vec<SRef>>,
    ) -> Result<SMap, SSetError> {
        for d in 0..=MAX_DIM {
            let im = images.get(d).map(Vec::as_slice).unwrap_or(&[]);
            if im.len() != src.count(d) {
                return Err(SSetError::MapImage {
                    dim: d,
                    simplex: im.len().min(src.count(d)),
                });
            }
            for (x, r) in im.iter().enumerate() {
                let ok = r.level() == d
                    && (r.simplex as usize) < tgt.count(r.dim as usize)
                    && is_surjection(&r.degeneracy, r.dim);
                if !ok {
                    return Err(SSetError::MapImage { dim: d, simplex: x });
                }
            }
        }
        let mut images = images;
        images.resize(MAX_DIM + 1, Vec::new());
        let m = SMap { src, tgt, images };
        for d in 1..=MAX_DIM {
            for x in 0..m.src.count(d) {
                let r = SRef::nondegenerate(d, x as u32);
                for i in 0..=d {
                    if m.tgt.face(&m.apply(&r), i) != m.apply(&m.src.face(&r, i)) {
                        return Err(SSetError::MapFace {
                            dim: d,
                            simplex: x,
                            face: i,
                        });
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn apply(&self, r: &SRef) -> SRef {
        let y = &self.images[r.dim as usize][r.simplex as usize];
        SRef {
            simplex: y.simplex,
            dim: y.dim,
            degeneracy: r
                .degeneracy
                .iter()
                .map(|&q| y.degeneracy[q as usize])
                .collect(),
        }
    }

    pub fn after(&self, first: &SMap) -> SMap {
        let images = first
            .images
            .iter()
            .map(|im| im.iter().map(|r| self.apply(r)).collect())
            .collect();
        SMap {
            src: first.src.clone(),
            tgt: self.tgt.clone(),
            images,
        }
    }

    pub fn is_injective(&self) -> bool {
        self.images.iter().all(|im| {
            let mut v: Vec<&SRef> = im.iter().collect();
            v.sort();
            v.dedup();
            v.len() == im.len() && im.iter().all(|r| !r.is_degenerate())
        })
    }
}

/// A truncated simplicial set with a set of marked nondegenerate edges;
/// degenerate edges count as marked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedTruncSSet {
    pub sset: Arc<TruncSSet>,
    pub marked: Vec<bool>,
}

impl MarkedTruncSSet {
    pub fn new(sset: Arc<TruncSSet>, marked_edges: &[u32]) -> Result<MarkedTruncSSet, SSetError> {
        let mut marked = vec![false; sset.count(1)];
        for &e in marked_edges {
            *marked
                .get_mut(e as usize)
                .ok_or(SSetError::Marking(e as usize))? = true;
        }
        Ok(MarkedTruncSSet { sset, marked })
    }

    pub fn flat(sset: Arc<TruncSSet>) -> MarkedTruncSSet {
        let marked = vec![false; sset.count(1)];
        MarkedTruncSSet { sset, marked }
    }

    pub fn sharp(sset: Arc<TruncSSet>) -> MarkedTruncSSet {
        let marked = vec![true; sset.count(1)];
        MarkedTruncSSet { sset, marked }
    }

    pub fn is_marked(&self, e: &SRef) -> bool {
        e.is_degenerate() || self.marked[e.simplex as usize]
    }

    pub fn marked_edges(&self) -> Vec<u32> {
        (0..self.marked.len() as u32)
            .filter(|&e| self.marked[e as usize])
            .collect()
    }
}

/// `NC` with its simplices identified as chains of non-identity morphisms.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub sset: Arc<TruncSSet>,
    pub cat: Arc<FinCat>,
    /// `chains[d][x]` for `d ≥ 1`; vertices are the objects.
    pub chains: Vec<Vec<Vec<MorId>>>,
    index: Vec<HashMap<Vec<MorId>, u32>>,
}

impl Nerve {
    /// The simplex of a chain that may contain identities.
    pub fn simplex_of(&self, start: ObjId, chain: &[MorId]) -> SRef {
        let c = &self.cat;
        let nondeg: Vec<MorId> = chain
            .iter()
            .copied()
            .filter(|&f| !c.is_identity(f))
            .collect();
        let mut degeneracy = vec![0u8];
        let mut k = 0u8;
        for &f in chain {
            if !c.is_identity(f) {
                k += 1;
            }
            degeneracy.push(k);
        }
        let simplex = if nondeg.is_empty() {
            start.0
        } else {
            self.index[nondeg.len()][&nondeg]
        };
        SRef {
            simplex,
            dim: nondeg.len() as u8,
            degeneracy,
        }
    }

    /// The chain of morphisms along the spine of `r`.
    pub fn chain_of(&self, r: &SRef) -> (ObjId, Vec<MorId>) {
        let start = ObjId(self.sset.vertex(r, 0));
        let chain = (0..r.level())
            .map(|j| {
                let e = self.sset.restrict(r, &[j, j + 1]);
                if e.is_degenerate() {
                    self.cat.id(ObjId(e.simplex))
                } else {
                    self.chains[1][e.simplex as usize][0]
                }
            })
            .collect();
        (start, chain)
    }
}

/// Composable chains of non-identity morphisms of length at most 3.
pub fn nerve(c: &Arc<FinCat>) -> Nerve {
    let mut chains: Vec<Vec<Vec<MorId>>> = vec![Vec::new(); MAX_DIM + 1];
    chains[1] = c
        .morphisms()
        .filter(|&f| !c.is_identity(f))
        .map(|f| vec![f])
        .collect();
    for d in 2..=MAX_DIM {
        let mut next = Vec::new();
        for ch in &chains[d - 1] {
            for &g in c.out_of(c.tgt(*ch.last().unwrap())) {
                if !c.is_identity(g) {
                    let mut v = ch.clone();
                    v.push(g);
                    next.push(v);
                }
            }
        }
        chains[d] = next;
    }
    let index: Vec<HashMap<Vec<MorId>, u32>> = chains
        .iter()
        .map(|cs| {
            cs.iter()
                .enumerate()
                .map(|(i, ch)| (ch.clone(), i as u32))
                .collect()
        })
        .collect();
    let mut labels = vec![c
        .objects()
        .map(|o| c.obj_label(o).to_string())
        .collect::<Vec<_>>()];
    let mut faces = vec![vec![Vec::new(); c.num_objects()]];
    let stub = Nerve {
        sset: Arc::new(TruncSSet {
            labels: Vec::new(),
            faces: Vec::new(),
        }),
        cat: c.clone(),
        chains: Vec::new(),
        index,
    };
    for d in 1..=MAX_DIM {
        labels.push(
            chains[d]
                .iter()
                .map(|ch| {
                    if d == 1 {
                        c.mor_label(ch[0]).to_string()
                    } else {
                        format!(
                            "({})",
                            ch.iter()
                                .map(|&f| c.mor_label(f))
                                .collect::<Vec<_>>()
                                .join(",")
                        )
                    }
                })
                .collect(),
        );
        faces.push(
            chains[d]
                .iter()
                .map(|ch| {
                    (0..=d)
                        .map(|i| {
                            let (start, rest): (ObjId, Vec<MorId>) = if i == 0 {
                                (c.tgt(ch[0]), ch[1..].to_vec())
                            } else if i == d {
                                (c.src(ch[0]), ch[..d - 1].to_vec())
                            } else {
                                let mut v = ch[..i - 1].to_vec();
                                v.push(c.compose(ch[i], ch[i - 1]));
                                v.extend_from_slice(&ch[i + 1..]);
                                (c.src(ch[0]), v)
                            };
                            stub.simplex_of(start, &rest)
                        })
                        .collect()
                })
                .collect(),
        );
    }
    let sset =
        Arc::new(TruncSSet::new(labels, faces).expect("nerves satisfy the simplicial identities"));
    Nerve {
        sset,
        cat: c.clone(),
        chains,
        index: stub.index,
    }
}

/// `N(F)`.
pub fn nerve_map(f: &Functor, nx: &Nerve, ny: &Nerve) -> SMap {
    let c = &nx.cat;
    let mut images = vec![c
        .objects()
        .map(|o| SRef::nondegenerate(0, f.obj(o).0))
        .collect::<Vec<_>>()];
    for d in 1..=MAX_DIM {
        images.push(
            nx.chains[d]
                .iter()
                .map(|ch| {
                    let img: Vec<MorId> = ch.iter().map(|&m| f.mor(m)).collect();
                    ny.simplex_of(f.obj(c.src(ch[0])), &img)
                })
                .collect(),
        );
    }
    SMap {
        src: nx.sset.clone(),
        tgt: ny.sset.clone(),
        images,
    }
}

/// `(NC, E)`.
pub fn marked_nerve(n: &Nerve, e: &Marking) -> MarkedTruncSSet {
    let marked = n.chains[1].iter().map(|ch| e.is_marked(ch[0])).collect();
    MarkedTruncSSet {
        sset: n.sset.clone(),
        marked,
    }
}

/// `Δ[n] = N[n]`.
pub fn delta(n: usize) -> Nerve {
    nerve(&Arc::new(shapes::ordinal(n)))
}

/// `Λᵗ[n] ⊂ Δ[n]`: the simplices missing some vertex other than `t`.
pub fn horn(n: usize, t: usize) -> (Arc<TruncSSet>, SMap) {
    let d = delta(n);
    let s = &d.sset;
    let keep: Vec<Vec<bool>> = (0..=MAX_DIM)
        .map(|k| {
            (0..s.count(k))
                .map(|x| {
                    let mut vs = s.vertices(&SRef::nondegenerate(k, x as u32));
                    vs.push(t as u32);
                    vs.sort();
                    vs.dedup();
                    vs.len() < n + 1
                })
                .collect()
        })
        .collect();
    s.sub(&keep)
}

/// `cX` presented by the edges modulo `d₁ s = d₀ s ∘ d₂ s` for every
/// 2-simplex `s`; degenerate edges are identities.
#[derive(Clone, Debug)]
pub struct Categorified {
    pub cat: Arc<FinCat>,
    pub realized: Realized,
}

impl Categorified {
    /// The morphism represented by an edge.
    pub fn edge(&self, e: &SRef) -> MorId {
        if e.is_degenerate() {
            self.cat.id(ObjId(e.simplex))
        } else {
            self.realized.letter_morphism(letter(e.simplex, false))
        }
    }
}

pub fn categorify(x: &TruncSSet, budget: Budget) -> Result<Categorified, PresentError> {
    let word = |e: &SRef| -> Word {
        if e.is_degenerate() {
            Vec::new()
        } else {
            vec![letter(e.simplex, false)]
        }
    };
    let generators = (0..x.count(1) as u32)
        .map(|e| {
            let fs = x.faces_of(1, e);
            Generator {
                label: x.label(1, e).to_string(),
                src: ObjId(fs[1].simplex),
                tgt: ObjId(fs[0].simplex),
                invertible: false,
            }
        })
        .collect();
    let mut relations = Vec::new();
    for s in 0..x.count(2) as u32 {
        let fs = x.faces_of(2, s);
        let lhs = [word(&fs[2]), word(&fs[0])].concat();
        let rhs = word(&fs[1]);
        if lhs != rhs {
            let r = SRef::nondegenerate(2, s);
            relations.push(Relation {
                src: ObjId(x.vertex(&r, 0)),
                tgt: ObjId(x.vertex(&r, 2)),
                lhs,
                rhs,
            });
        }
    }
    let pres = Presentation {
        objects: x.labels(0).to_vec(),
        generators,
        relations,
    };
    let realized = crate::present::realize(&pres, budget)?;
    Ok(Categorified {
        cat: realized.cat.clone(),
        realized,
    })
}

/// `c⁺(X, E)`: `cX` with the morphisms represented by marked edges marked.
pub fn categorify_marked(
    x: &MarkedTruncSSet,
    budget: Budget,
) -> Result<(Categorified, Marking), PresentError> {
    let c = categorify(&x.sset, budget)?;
    let marking = Marking::generated_by(
        c.cat.clone(),
        x.marked_edges()
            .into_iter()
            .map(|e| c.edge(&SRef::nondegenerate(1, e))),
    );
    Ok((c, marking))
}

/// `c(f)`.
pub fn categorify_map(f: &SMap, cx: &Categorified, cy: &Categorified) -> Functor {
    let (a, b) = (&cx.cat, &cy.cat);
    let obj: Vec<ObjId> = a
        .objects()
        .map(|o| ObjId(f.images[0][o.idx()].simplex))
        .collect();
    let mor = a
        .morphisms()
        .map(|m| {
            cx.realized.words[m.idx()]
                .iter()
                .fold(b.id(obj[a.src(m).idx()]), |acc, &l| {
                    let e = crate::present::generator_of(l);
                    b.compose(cy.edge(&f.images[1][e as usize]), acc)
                })
        })
        .collect();
    Functor::new_unchecked(a.clone(), b.clone(), obj, mor)
}

/// The counit `cNC -> C`.
pub fn counit(n: &Nerve, cn: &Categorified) -> Functor {
    let (a, c) = (&cn.cat, &n.cat);
    let obj: Vec<ObjId> = a.objects().collect();
    let mor = a
        .morphisms()
        .map(|m| {
            cn.realized.words[m.idx()]
                .iter()
                .fold(c.id(a.src(m)), |acc, &l| {
                    c.compose(
                        n.chains[1][crate::present::generator_of(l) as usize][0],
                        acc,
                    )
                })
        })
        .collect();
    Functor::new_unchecked(a.clone(), c.clone(), obj, mor)
}

/// The unit `X -> NcX`.
pub fn unit(x: &Arc<TruncSSet>, cx: &Categorified, ncx: &Nerve) -> SMap {
    let images = (0..=MAX_DIM)
        .map(|d| {
            (0..x.count(d) as u32)
                .map(|s| {
                    let r = SRef::nondegenerate(d, s);
                    let chain: Vec<MorId> = (0..d)
                        .map(|j| cx.edge(&x.restrict(&r, &[j, j + 1])))
                        .collect();
                    ncx.simplex_of(ObjId(x.vertex(&r, 0)), &chain)
                })
                .collect()
        })
        .collect();
    SMap {
        src: x.clone(),
        tgt: ncx.sset.clone(),
        images,
    }
}

/// Every simplicial map `X -> NC`, by assigning vertices and edges and
/// filling higher simplices along their spines.
pub fn maps_to_nerve(x: &Arc<TruncSSet>, n: &Nerve, cap: usize) -> Vec<SMap> {
    let c = &n.cat;
    let mut out = Vec::new();
    let nv = x.count(0);
    let ne = x.count(1);
    let mut verts = vec![ObjId(0); nv];
    let mut edges = vec![MorId(0); ne];
    fn go(
        k: usize,
        x: &Arc<TruncSSet>,
        n: &Nerve,
        c: &FinCat,
        verts: &mut Vec<ObjId>,
        edges: &mut Vec<MorId>,
        out: &mut Vec<SMap>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        let (nv, ne) = (verts.len(), edges.len());
        if k < nv {
            for o in c.objects() {
                verts[k] = o;
                go(k + 1, x, n, c, verts, edges, out, cap);
            }
            return;
        }
        if k < nv + ne {
            let e = (k - nv) as u32;
            let fs = x.faces_of(1, e);
            for &m in c.hom(verts[fs[1].simplex as usize], verts[fs[0].simplex as usize]) {
                edges[e as usize] = m;
                go(k + 1, x, n, c, verts, edges, out, cap);
            }
            return;
        }
        let edge = |r: &SRef| {
            if r.is_degenerate() {
                c.id(verts[r.simplex as usize])
            } else {
                edges[r.simplex as usize]
            }
        };
        let images = (0..=MAX_DIM)
            .map(|d| {
                (0..x.count(d) as u32)
                    .map(|s| {
                        let r = SRef::nondegenerate(d, s);
                        let chain: Vec<MorId> =
                            (0..d).map(|j| edge(&x.restrict(&r, &[j, j + 1]))).collect();
                        n.simplex_of(verts[x.vertex(&r, 0) as usize], &chain)
                    })
                    .collect()
            })
            .collect();
        if let Ok(m) = SMap::new(x.clone(), n.sset.clone(), images) {
            out.push(m);
        }
    }
    go(0, x, n, c, &mut verts, &mut edges, &mut out, cap);
    out
}

/// Outcome of comparing maps `X -> NC` with functors `cX -> C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransposeReport {
    pub simplicial_maps: usize,
    pub functors: usize,
    /// Transposes `N(F) ∘ η` are pairwise distinct and each is a map found
    /// by direct enumeration.
    pub bijective: bool,
    /// `F` preserves the marking exactly when its transpose does.
    pub marking_agrees: bool,
}

impl TransposeReport {
    pub fn holds(&self) -> bool {
        self.simplicial_maps == self.functors && self.bijective && self.marking_agrees
    }
}

pub fn check_transpose(
    x: &MarkedTruncSSet,
    c: &Arc<FinCat>,
    e: &Marking,
    budget: Budget,
    cap: usize,
) -> Result<TransposeReport, SimplicialError> {
    let (cx, ex) = categorify_marked(x, budget)?;
    let ncx = nerve(&cx.cat);
    let nc = nerve(c);
    let eta = unit(&x.sset, &cx, &ncx);
    let direct = maps_to_nerve(&x.sset, &nc, cap);
    let functors = FunctorSearch::new(&cx.cat, c).all(cap)?;
    let mut transposes: Vec<SMap> = Vec::new();
    let mut marking_agrees = true;
    let target = marked_nerve(&nc, e);
    for f in &functors {
        let t = nerve_map(f, &ncx, &nc).after(&eta);
        let f_marked = ex.marked_morphisms().all(|m| e.is_marked(f.mor(m)));
        let t_marked = x
            .marked_edges()
            .iter()
            .all(|&k| target.is_marked(&t.apply(&SRef::nondegenerate(1, k))));
        marking_agrees &= f_marked == t_marked;
        transposes.push(t);
    }
    let key = |m: &SMap| m.images.clone();
    let mut keys: Vec<_> = transposes.iter().map(key).collect();
    keys.sort();
    keys.dedup();
    let found = transposes
        .iter()
        .all(|t| direct.iter().any(|d| d.images == t.images));
    Ok(TransposeReport {
        simplicial_maps: direct.len(),
        functors: functors.len(),
        bijective: keys.len() == transposes.len() && found,
        marking_agrees,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SimplicialError {
    #[error(transparent)]
    Present(#[from] PresentError),
    #[error(transparent)]
    Search(#[from] SearchExhausted),
}

/// A generating simplicial anodyne shape `A -> B` with `B` the nerve of a
/// small category.
#[derive(Clone, Debug)]
pub struct SimplicialShape {
    pub name: String,
    pub nerve: Nerve,
    pub inclusion: SMap,
    pub src: MarkedTruncSSet,
    pub tgt: MarkedTruncSSet,
}

fn horn_shape(n: usize, t: usize, name: String, marked: Option<usize>) -> SimplicialShape {
    let d = delta(n);
    let (a, inc) = horn(n, t);
    let (src, tgt) = match marked {
        None => (
            MarkedTruncSSet::flat(a),
            MarkedTruncSSet::flat(d.sset.clone()),
        ),
        Some(k) => {
            let label = format!("{}->{}", k - 1, k);
            let e = d.sset.labels(1).iter().position(|l| *l == label).unwrap() as u32;
            let src_edges: Vec<u32> = (0..a.count(1) as u32)
                .filter(|&x| inc.images[1][x as usize] == SRef::nondegenerate(1, e))
                .collect();
            (
                MarkedTruncSSet::new(a, &src_edges).unwrap(),
                MarkedTruncSSet::new(d.sset.clone(), &[e]).unwrap(),
            )
        }
    };
    SimplicialShape {
        name,
        nerve: d,
        inclusion: inc,
        src,
        tgt,
    }
}

fn identity_shape(
    nerve: Nerve,
    name: &str,
    src: MarkedTruncSSet,
    tgt: MarkedTruncSSet,
) -> SimplicialShape {
    let s = &nerve.sset;
    let images = (0..=MAX_DIM)
        .map(|d| {
            (0..s.count(d) as u32)
                .map(|x| SRef::nondegenerate(d, x))
                .collect()
        })
        .collect();
    let inclusion = SMap {
        src: s.clone(),
        tgt: s.clone(),
        images,
    };
    SimplicialShape {
        name: name.to_string(),
        nerve,
        inclusion,
        src,
        tgt,
    }
}

/// The generating shapes of the contravariant (discrete) or cartesian
/// (marked) model structure on simplicial sets over a nerve, up to
/// dimension 3.
pub fn simplicial_shapes(kind: Kind) -> Vec<SimplicialShape> {
    match kind {
        Kind::Discrete => (1..=MAX_DIM)
            .flat_map(|n| (1..=n).map(move |t| horn_shape(n, t, format!("horn({n},{t})"), None)))
            .collect(),
        Kind::Marked => {
            let mut v: Vec<SimplicialShape> = (2..=MAX_DIM)
                .flat_map(|n| {
                    (1..n).map(move |t| horn_shape(n, t, format!("inner-horn({n},{t})"), None))
                })
                .collect();
            v.extend((1..=MAX_DIM).map(|n| horn_shape(n, n, format!("marked-horn({n})"), Some(n))));
            let d2 = delta(2);
            let spine: Vec<u32> = ["0->1", "1->2"]
                .iter()
                .map(|l| d2.sset.labels(1).iter().position(|x| x == l).unwrap() as u32)
                .collect();
            let src = MarkedTruncSSet::new(d2.sset.clone(), &spine).unwrap();
            let tgt = MarkedTruncSSet::sharp(d2.sset.clone());
            v.push(identity_shape(d2, "spine-marking", src, tgt));
            let ni = nerve(&Arc::new(shapes::walking_iso()));
            let (src, tgt) = (
                MarkedTruncSSet::flat(ni.sset.clone()),
                MarkedTruncSSet::sharp(ni.sset.clone()),
            );
            v.push(identity_shape(ni, "iso-marking", src, tgt));
            v
        }
    }
}

/// How the categorified generator sits among the categorical generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", content = "shapes", rename_all = "kebab-case")]
pub enum ImageClass {
    /// An isomorphism of marked categories.
    Identity,
    /// Isomorphic, under the domain, to the generator itself.
    Generator(Shape),
    /// A single pushout of the generator.
    Pushout(Shape),
    /// A composite of pushouts, first to last.
    PushoutComposite(Vec<Shape>),
    Unclassified,
}

impl std::fmt::Display for ImageClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ImageClass::Identity => write!(f, "identity"),
            ImageClass::Generator(s) => write!(f, "generator {}", s.name()),
            ImageClass::Pushout(s) => write!(f, "pushout of {}", s.name()),
            ImageClass::PushoutComposite(v) => {
                write!(
                    f,
                    "pushouts of {}",
                    v.iter()
                        .map(|s| s.name())
                        .collect::<Vec<_>>()
                        .join(" then ")
                )
            }
            ImageClass::Unclassified => write!(f, "unclassified"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageRow {
    pub shape: String,
    /// Images of the vertices of the structure map into the base.
    pub structure: Vec<String>,
    pub class: ImageClass,
    /// Instantiated generators used, in order.
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorImages {
    pub kind: Kind,
    pub rows: Vec<ImageRow>,
    /// Per shape, the classes seen across all structure maps.
    pub summary: Vec<(String, Vec<String>)>,
}

/// Maximum number of pushout steps tried when classifying.
pub const MAX_PUSHOUT_STEPS: usize = 2;

fn is_marked_iso(m: &MarkedMap) -> bool {
    m.functor.is_isomorphism()
        && m.functor
            .dom()
            .morphisms()
            .all(|x| m.src.is_marked(x) == m.tgt.is_marked(m.functor.mor(x)))
}

struct Step {
    shape: Shape,
    generator: String,
    attaching_iso: bool,
}

fn decompose(
    kind: Kind,
    map: &MarkedMap,
    s: &Functor,
    gens: &GeneratorSet,
    depth: usize,
    budget: Budget,
    max_nodes: u64,
) -> Result<Option<Vec<Step>>, SimplicialError> {
    if depth == 0 {
        return Ok(is_marked_iso(map).then(Vec::new));
    }
    let (x, y) = (map.functor.dom(), map.functor.cod());
    for &shape in Shape::all(kind) {
        let g = shape.map();
        let (a_shape, b_shape) = (g.functor.dom().clone(), g.functor.cod().clone());
        let tgt = map.tgt.clone();
        let gt = g.tgt.clone();
        let bs = FunctorSearch::new(&b_shape, y)
            .max_nodes(max_nodes)
            .filter(move |mb, my| !gt.is_marked(mb) || tgt.is_marked(my))
            .all(usize::MAX)?;
        for b in bs {
            let bi = b.after(&g.functor);
            let mut search = FunctorSearch::new(&a_shape, x).max_nodes(max_nodes);
            for o in a_shape.objects() {
                let want = bi.obj(o);
                let f = map.functor.clone();
                search = search.restrict_object(o, move |t| f.obj(t) == want);
            }
            let (f, gs, ms) = (map.functor.clone(), g.src.clone(), map.src.clone());
            let bi2 = bi.clone();
            let attachments = search
                .filter(move |ma, mx| {
                    f.mor(mx) == bi2.mor(ma) && (!gs.is_marked(ma) || ms.is_marked(mx))
                })
                .all(usize::MAX)?;
            for a in attachments {
                // an infinite pushout cannot map isomorphically onto a finite category
                let po = match marked_pushout(&g.functor, &g.tgt, &a, &map.src, budget) {
                    Ok(po) => po,
                    Err(PresentError::Divergent(_)) => continue,
                    Err(e) => return Err(e.into()),
                };
                let po_marking = po.marking.clone().expect("marked pushout");
                let right = MarkedMap {
                    functor: po.right.clone(),
                    src: map.src.clone(),
                    tgt: po_marking.clone(),
                };
                if is_marked_iso(&right) {
                    continue;
                }
                let k = po.induced(&b, &map.functor, y);
                let next = MarkedMap {
                    functor: k,
                    src: po_marking,
                    tgt: map.tgt.clone(),
                };
                if let Some(mut rest) =
                    decompose(kind, &next, s, gens, depth - 1, budget, max_nodes)?
                {
                    let inst = s.after(&b);
                    let generator = gens
                        .generators
                        .iter()
                        .find(|gen| {
                            gen.shape == shape
                                && gen.structure.mor_table() == inst.mor_table()
                                && gen.structure.obj_table() == inst.obj_table()
                        })
                        .map(|gen| gen.name.clone())
                        .unwrap_or_else(|| shape.name().to_string());
                    let attaching = MarkedMap {
                        functor: a.clone(),
                        src: g.src.clone(),
                        tgt: map.src.clone(),
                    };
                    rest.insert(
                        0,
                        Step {
                            shape,
                            generator,
                            attaching_iso: is_marked_iso(&attaching),
                        },
                    );
                    return Ok(Some(rest));
                }
            }
        }
    }
    Ok(None)
}

/// Classifies the categorified map `c(A) -> c(B)` over `C`.
pub fn classify(
    kind: Kind,
    map: &MarkedMap,
    structure: &Functor,
    gens: &GeneratorSet,
    budget: Budget,
    max_nodes: u64,
) -> Result<(ImageClass, Vec<String>), SimplicialError> {
    for depth in 0..=MAX_PUSHOUT_STEPS {
        if let Some(steps) = decompose(kind, map, structure, gens, depth, budget, max_nodes)? {
            let names = steps.iter().map(|s| s.generator.clone()).collect();
            let class = match steps.as_slice() {
                [] => ImageClass::Identity,
                [s] if s.attaching_iso => ImageClass::Generator(s.shape),
                [s] => ImageClass::Pushout(s.shape),
                v => ImageClass::PushoutComposite(v.iter().map(|s| s.shape).collect()),
            };
            return Ok((class, names));
        }
    }
    Ok((ImageClass::Unclassified, Vec::new()))
}

/// Applies `c` (or `c⁺`) to every generating shape over every structure
/// map into `N base` and classifies the result.
pub fn generator_images(
    kind: Kind,
    base: &Arc<FinCat>,
    budget: Budget,
    max_nodes: u64,
) -> Result<GeneratorImages, SimplicialError> {
    let gens = anodyne_generators(kind, base);
    let mut rows = Vec::new();
    let mut summary: Vec<(String, Vec<String>)> = Vec::new();
    for shape in simplicial_shapes(kind) {
        let (ca, ma) = categorify_marked(&shape.src, budget)?;
        let (cb, mb) = categorify_marked(&shape.tgt, budget)?;
        let image = MarkedMap {
            functor: categorify_map(&shape.inclusion, &ca, &cb),
            src: ma,
            tgt: mb,
        };
        let back = counit(&shape.nerve, &cb);
        let mut seen = Vec::new();
        let structures = FunctorSearch::new(&shape.nerve.cat, base)
            .max_nodes(max_nodes)
            .all(usize::MAX)?;
        for sigma in structures {
            let s = sigma.after(&back);
            let (class, generators) = classify(kind, &image, &s, &gens, budget, max_nodes)?;
            let text = class.to_string();
            if !seen.contains(&text) {
                seen.push(text);
            }
            rows.push(ImageRow {
                shape: shape.name.clone(),
                structure: shape
                    .nerve
                    .cat
                    .objects()
                    .map(|o| base.obj_label(sigma.obj(o)).to_string())
                    .collect(),
                class,
                generators,
            });
        }
        summary.push((shape.name.clone(), seen));
    }
    Ok(GeneratorImages {
        kind,
        rows,
        summary,
    })
}
