pub mod circuits;
pub mod error;
pub mod fock;
pub mod measurement;
pub mod oracles;
pub mod par;
pub mod spin;
pub mod states;
pub mod witness;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
