//! Categories of elements and the marked Grothendieck construction, their
//! left adjoints, units, counits and triangle identities, the comprehensive
//! factorization and path objects for cart-marked fibrations.

mod discrete;
mod marked;
mod path;

use serde::{Deserialize, Serialize};

pub use discrete::{
    counit_discrete, elements, elements_map, t_set, t_set_map, unit_discrete,
    verify_triangles_discrete, Elements, Factorization, TSet,
};
pub use marked::{
    counit_marked, marked_elements, marked_elements_map, t_marked, t_marked_map, unit_marked,
    verify_triangles_marked, GrothError, MarkedElements, TMarked, UnitMarked,
};
pub use path::{path_object, PathObject};

/// Unit and counit components together with the residuals of both triangle
/// identities. Empty residuals mean the identities hold.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionWitness {
    /// Object part of the unit: `(a, η a)`.
    pub unit: Vec<(String, String)>,
    /// Object part of each counit component: `(c, [(x, ε_c x)])`.
    pub counit: Vec<(String, Vec<(String, String)>)>,
    /// Mismatches of `ε T ∘ T η = id`.
    pub left_triangle: Vec<String>,
    /// Mismatches of `∫ ε ∘ η ∫ = id`.
    pub right_triangle: Vec<String>,
}

impl AdjunctionWitness {
    pub fn holds(&self) -> bool {
        self.left_triangle.is_empty() && self.right_triangle.is_empty()
    }
}

/// Lists where two functors with the same domain differ, as
/// human-readable lines.
pub(crate) fn functor_residuals(
    what: &str,
    lhs: &crate::fincat::Functor,
    rhs: &crate::fincat::Functor,
    out: &mut Vec<String>,
) {
    let d = lhs.dom();
    for o in d.objects() {
        if lhs.obj(o) != rhs.obj(o) {
            out.push(format!(
                "{what}: object {} goes to {} instead of {}",
                d.obj_label(o),
                lhs.cod().obj_label(lhs.obj(o)),
                rhs.cod().obj_label(rhs.obj(o))
            ));
        }
    }
    for m in d.morphisms() {
        if lhs.mor(m) != rhs.mor(m) {
            out.push(format!(
                "{what}: morphism {} goes to {} instead of {}",
                d.mor_label(m),
                lhs.cod().mor_label(lhs.mor(m)),
                rhs.cod().mor_label(rhs.mor(m))
            ));
        }
    }
}
