//! Beck modules and torsors in the category of finite groups.

mod ext;
mod fixtures;
mod table;

pub use ext::*;
pub use fixtures::*;
pub use table::*;
