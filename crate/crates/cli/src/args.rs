use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fibcat",
    version,
    about = "Checks, constructions and law fuzzing for finite categories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub verb: Verb,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug)]
pub enum Verb {
    /// Decide a property of a functor, slice or map of slices.
    Check {
        target: CheckTarget,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Build a category, presheaf or simplicial set.
    Construct {
        target: ConstructTarget,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Run an end-to-end verification on concrete input.
    Verify {
        target: VerifyTarget,
        #[command(flatten)]
        inputs: Inputs,
    },
    /// Check a named law on seeded random instances (`all` runs every law).
    Fuzz { law: String },
    /// List the fuzzable laws.
    Laws,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckTarget {
    DiscreteFibration,
    GrothendieckFibration,
    CartMarked,
    Isofibration,
    Equivalence,
    TrivialFibration,
    MarkedTrivialFibration,
    Final,
    NaiveFibration,
    WeakEquivalence,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstructTarget {
    Elements,
    TSet,
    MarkedElements,
    TMarked,
    PathObject,
    Factorize,
    Localize,
    Pushout,
    Lke,
    Nerve,
    Categorify,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyTarget {
    TrianglesDiscrete,
    TrianglesMarked,
    SliceExtension,
    PathObject,
    GeneratorImages,
    UnitEquivalence,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum KindArg {
    Discrete,
    Marked,
}

#[derive(Args, Debug, Default)]
pub struct Inputs {
    /// Category file.
    #[arg(long)]
    pub cat: Option<PathBuf>,
    /// List of marked morphism labels, overriding the category's own.
    #[arg(long)]
    pub marking: Option<PathBuf>,
    /// Functor file; also accepted as `--slice`.
    #[arg(long, visible_alias = "slice")]
    pub functor: Option<PathBuf>,
    /// Map between two slices over the same base.
    #[arg(long)]
    pub map: Option<PathBuf>,
    #[arg(long)]
    pub presheaf: Option<PathBuf>,
    /// Truncated simplicial set file.
    #[arg(long)]
    pub sset: Option<PathBuf>,
    /// Left leg of a span (pushout).
    #[arg(long)]
    pub left: Option<PathBuf>,
    /// Right leg of a span (pushout).
    #[arg(long)]
    pub right: Option<PathBuf>,
    /// Base category for generator tables.
    #[arg(long)]
    pub base: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Also write the constructed object to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct Options {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub cases: u64,
    #[arg(long, global = true, default_value_t = 6)]
    pub max_objects: usize,
    #[arg(long, global = true, default_value_t = 25)]
    pub max_morphisms: usize,
    #[arg(long, global = true, default_value_t = 10_000)]
    pub rewrite_steps: usize,
    #[arg(long, global = true, default_value_t = fibcat::DEFAULT_SEARCH_NODES)]
    pub search_nodes: u64,
}
