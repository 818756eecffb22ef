//! Finite quantale-enriched categories.
//!
//! Everything here is finite and exhaustive: quantales are small complete
//! lattices with a commutative multiplication, V-categories are hom matrices
//! over them, and the constructions (presheaves, colimits, tensor products of
//! cocomplete V-categories, complete distributivity, nuclearity) are computed
//! by enumeration with pruning.

pub mod caps;
pub mod ccd;
pub mod classical;
pub mod cocomplete;
pub mod corpus;
pub mod dist;
pub mod enumerate;
pub mod error;
pub mod par;
pub mod presheaf;
pub mod quantale;
pub mod tensorprod;
pub mod text;
pub mod vcat;

pub use error::{Error, Result};
pub use quantale::{builtin, Elem, Quantale};
pub use vcat::VCategory;
