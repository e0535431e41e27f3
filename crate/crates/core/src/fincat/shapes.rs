//! Small named categories and marked categories.

use std::sync::Arc;

use super::category::{CatBuilder, FinCat, MorId, ObjId};
use super::marking::Marking;

/// The category of a finite poset on `labels`, with `leq(i, j)` giving the
/// order. Morphisms are labelled `i->j`, identities `id_i`.
pub fn poset(labels: &[String], leq: impl Fn(usize, usize) -> bool) -> FinCat {
    let n = labels.len();
    let mut b = CatBuilder::new();
    for l in labels {
        b.add_object(l.clone());
    }
    let mut table = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if leq(i, j) {
                let label = if i == j {
                    format!("id_{}", labels[i])
                } else {
                    format!("{}->{}", labels[i], labels[j])
                };
                let m = b.add_morphism(label, ObjId(i as u32), ObjId(j as u32));
                table[i][j] = Some(m);
                if i == j {
                    b.set_identity(ObjId(i as u32), m);
                }
            }
        }
    }
    let src: Vec<usize> = (0..b.num_morphisms())
        .map(|m| b.src(MorId(m as u32)).idx())
        .collect();
    let tgt: Vec<usize> = (0..b.num_morphisms())
        .map(|m| b.tgt(MorId(m as u32)).idx())
        .collect();
    b.build(|g, f| table[src[f.idx()]][tgt[g.idx()]].expect("poset is transitive"))
}

/// The ordinal `[n]` = `0 < 1 < … < n`.
pub fn ordinal(n: usize) -> FinCat {
    let labels: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    poset(&labels, |i, j| i <= j)
}

/// The terminal category `[0]`.
pub fn point() -> FinCat {
    ordinal(0)
}

pub fn empty() -> FinCat {
    CatBuilder::new().build(|_, _| unreachable!())
}

/// `n` objects and only identities.
pub fn discrete(n: usize) -> FinCat {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    poset(&labels, |i, j| i == j)
}

/// The free-living isomorphism: objects `0`, `1`; arrows `u: 0 -> 1`,
/// `u^-1: 1 -> 0`.
pub fn walking_iso() -> FinCat {
    let mut b = CatBuilder::new();
    let o0 = b.add_object_with_identity("0");
    let o1 = b.add_object_with_identity("1");
    let u = b.add_morphism("u", o0, o1);
    let v = b.add_morphism("u^-1", o1, o0);
    let (i0, i1) = (MorId(0), MorId(1));
    b.build(|g, f| match (g.0, f.0) {
        (_, 0) | (_, 1) => g,
        (0, _) | (1, _) => f,
        (3, 2) => i0,
        (2, 3) => i1,
        _ => unreachable!("{g:?} {f:?} {u:?} {v:?}"),
    })
}

/// The horn `0 -> 2 <- 1`. Also the pushout `[1] ⊔_[0] [1]` glued along
/// the targets.
pub fn horn() -> FinCat {
    let labels: Vec<String> = (0..3).map(|i| i.to_string()).collect();
    poset(&labels, |i, j| i == j || j == 2)
}

/// Two parallel arrows `a, b: 0 -> 1`, i.e. `[1] ⊔_{[0]⊔[0]} [1]`.
pub fn parallel_pair() -> FinCat {
    let mut b = CatBuilder::new();
    let o0 = b.add_object_with_identity("0");
    let o1 = b.add_object_with_identity("1");
    b.add_morphism("a", o0, o1);
    b.add_morphism("b", o0, o1);
    b.build(|g, f| if g.0 < 2 { f } else { g })
}

/// Two fillers of the horn `0 -> 2 <- 1`: arrows `a, a': 0 -> 1`,
/// `1->2`, `0->2` with both composites through `1` equal to `0->2`.
pub fn double_filler() -> FinCat {
    let mut b = CatBuilder::new();
    let o: Vec<ObjId> = (0..3)
        .map(|i| b.add_object_with_identity(i.to_string()))
        .collect();
    let a = b.add_morphism("a", o[0], o[1]);
    let a2 = b.add_morphism("a'", o[0], o[1]);
    let g = b.add_morphism("1->2", o[1], o[2]);
    let k = b.add_morphism("0->2", o[0], o[2]);
    b.build(|gg, ff| {
        if gg.0 < 3 {
            ff
        } else if ff.0 < 3 {
            gg
        } else {
            assert!(gg == g && (ff == a || ff == a2));
            k
        }
    })
}

/// A one-object category given by a finite monoid multiplication table on
/// `0..n`, with `0` the unit; `mul(x, y)` is `x ∘ y`.
pub fn monoid(labels: &[&str], mul: impl Fn(usize, usize) -> usize) -> FinCat {
    let mut b = CatBuilder::new();
    let o = b.add_object("*");
    for l in labels {
        b.add_morphism(*l, o, o);
    }
    b.set_identity(o, MorId(0));
    b.build(|g, f| MorId(mul(g.idx(), f.idx()) as u32))
}

/// The cyclic group of order two as a one-object category.
pub fn z2() -> FinCat {
    monoid(&["1", "t"], |x, y| (x + y) % 2)
}

/// The monoid `{1, e}` with `e ∘ e = e`.
pub fn idempotent() -> FinCat {
    monoid(&["1", "e"], |x, y| x.max(y))
}

/// A marked category given by labels of its marked non-identity morphisms.
pub fn marked(c: FinCat, labels: &[&str]) -> Marking {
    Marking::from_labels(Arc::new(c), labels).expect("shape labels exist")
}

/// Parses a shape name: `[n]`, `I`, `horn`, `parallel`, `double-filler`,
/// `empty`, `discrete:n`, optionally followed by `^flat`, `^sharp` or
/// `^natural`. Markings given by label lists use the form
/// `[2]{1->2}` (identities implied).
pub fn standard(name: &str) -> Result<Marking, String> {
    let name = name.trim();
    let (base, decoration) = match name.rsplit_once('^') {
        Some((b, d)) if matches!(d, "flat" | "sharp" | "natural") => (b, Some(d)),
        _ => (name, None),
    };
    let (base, marks) = match base.find('{') {
        Some(i) if base.ends_with('}') => {
            let inner = &base[i + 1..base.len() - 1];
            let labels: Vec<&str> = inner
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect();
            (&base[..i], Some(labels))
        }
        _ => (base, None),
    };
    let cat = match base {
        "I" => walking_iso(),
        "horn" | "Lambda2[2]" => horn(),
        "[1]+_[0][1]" => horn(),
        "parallel" | "[1]+_[0]+[0][1]" => parallel_pair(),
        "double-filler" | "[2]+_Lambda2[2][2]" => double_filler(),
        "empty" => empty(),
        "Z2" => z2(),
        "idempotent" => idempotent(),
        _ => {
            if let Some(n) = base.strip_prefix("discrete:") {
                discrete(n.parse().map_err(|_| format!("unknown shape `{name}`"))?)
            } else if let Some(n) = base.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                ordinal(n.parse().map_err(|_| format!("unknown shape `{name}`"))?)
            } else {
                return Err(format!("unknown shape `{name}`"));
            }
        }
    };
    let cat = Arc::new(cat);
    let marking = match (decoration, marks) {
        (Some(_), Some(_)) => return Err(format!("shape `{name}` has two markings")),
        (Some("sharp"), None) => Marking::maximal(cat),
        (Some("natural"), None) => Marking::natural(cat),
        (_, Some(labels)) => Marking::from_labels(cat, &labels).map_err(|e| e.to_string())?,
        _ => Marking::minimal(cat),
    };
    Ok(marking)
}
