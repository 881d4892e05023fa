//! Finitely presented algebras, their finite tables, and Hom enumeration.

mod hom;
mod presentation;
mod table;

pub use hom::*;
pub use presentation::*;
pub use table::*;
