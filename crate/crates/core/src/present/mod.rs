//! Finitely presented categories: rewriting, realization as finite
//! categories, localizations and colimits.

pub mod colimit;
pub mod localize;
pub mod realize;
pub mod rewrite;
pub mod word;

pub use colimit::{
    adjoin_free_arrow, marked_pushout, pushout, quotient_parallel, Colimit, ColimitBuilder, Pushout,
};
pub use localize::{localization_presentation, localize, FactorError, Localization};
pub use realize::{
    check_certificate, realize, realize_with, Budget, GrowthCertificate, PresentError, Realized,
    DEFAULT_NORMAL_FORMS,
};
pub use rewrite::{CompletionFailed, RewriteSystem, DEFAULT_REWRITE_STEPS};
pub use word::{
    generator_of, is_inverse, letter, Generator, Letter, Presentation, PresentationError, Relation,
    Word,
};
