//! A workbench for finite categories.
//!
//! Categories are stored as dense tables; every construction here produces
//! validated finite data: categories of elements and their marked variant,
//! left adjoints computed through comma categories and localization,
//! decision procedures for the various flavours of fibration, a lifting
//! solver against generating anodyne maps, pointwise left Kan extensions,
//! and 3-truncated simplicial sets with nerve and categorification.

pub mod fib;
pub mod fincat;
pub mod groth;
pub mod io;
pub mod laws;
pub mod lke;
pub mod model;
pub mod present;
pub mod random;
pub mod simplicial;

pub use fincat::*;
