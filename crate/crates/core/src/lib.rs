pub mod algebra;
pub mod cli;
pub mod error;
pub mod jacobian;
pub mod koszul;
pub mod local;
pub mod par;

pub use error::{Error, Result};
