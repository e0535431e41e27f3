//! Finite categories, functors, markings, slices and presheaves.

pub mod category;
pub mod construct;
pub mod functor;
pub mod marking;
pub mod presheaf;
pub mod search;
pub mod shapes;
pub mod slice;

pub use category::{CatBuilder, FinCat, MorId, ObjId, RawCategory, ValidationReport, Violation};
pub use construct::{
    comma, comma_restrict, coproduct, full_subcategory, marked_comma, marked_product_over, pi0,
    product, product_over, subcategory, Comma, Components, Pullback, UnionFind,
};
pub use functor::{Functor, FunctorError};
pub use marking::{Marking, MarkingError};
pub use presheaf::{
    all_set_nat_trans, CatNatTrans, PresheafCat, PresheafError, PresheafSet, SetNatTrans,
};
pub use search::{
    are_isomorphic, find_isomorphism, FunctorSearch, SearchExhausted, DEFAULT_SEARCH_NODES,
};
pub use slice::{MarkedSlice, MarkedSliceMorphism, Slice, SliceError, SliceMorphism};
