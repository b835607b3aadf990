//! Constructions and exhaustive checks for clique partitions of the
//! complete `r`-uniform hypergraph on `n` vertices.
//!
//! A clique partition of `C([n], r)` is a family of proper subsets of
//! `0..n` such that every `r`-set lies in exactly one of them. The crate
//! builds the classical finite-geometry families that come close to the
//! minimum (inversive planes, polynomial curves, conics, Witt designs),
//! verifies them by exact census, evaluates the matching lower bounds in
//! exact arithmetic and solves tiny instances outright.
//!
//! The [`design::Design`] type is the common currency: every builder
//! returns one, and every checker takes one.

pub mod combin;
pub mod design;
pub mod error;
pub mod field;
pub mod inversive;
pub mod curves;
pub mod conics;
pub mod witt;
pub mod bounds;
pub mod zarankiewicz;
pub mod search;

pub use design::{Design, Mode};
pub use error::{Error, Result};
pub use field::{FieldElement, FieldSpec};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/intro.md")]
    mod intro {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/designs.md")]
    mod designs {}
    #[doc = include_str!("../../../book/src/inversive.md")]
    mod inversive {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/witt.md")]
    mod witt {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/zarankiewicz.md")]
    mod zarankiewicz {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
