pub mod beck;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod exactnum;
pub mod fpalg;
pub mod grpbeck;
pub mod modgb;
pub mod polyring;
pub mod report;

pub use error::{Error, Result};
