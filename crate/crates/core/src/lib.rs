pub mod automata;
pub mod conjugacy;
pub mod error;
pub mod escape;
pub mod perturbation;
pub mod poly;
pub mod shifts;
pub mod system;
pub mod word;

pub use error::{Error, ErrorKind, Result};
