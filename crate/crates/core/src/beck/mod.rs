//! Beck modules and torsors over finite rings, Kähler differentials, and
//! the lifting tests that decide formal unramifiedness.

mod kahler;
mod module;
mod pullback;
mod torsor;

pub use kahler::*;
pub use module::*;
pub use pullback::*;
pub use torsor::*;
