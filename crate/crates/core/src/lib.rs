pub mod error;
pub mod fields;
pub mod hyperelliptic;
pub mod jacobian;
pub mod cohomology;
pub mod surface_lattice;
pub mod obstruction;

pub use error::{Error, Result};
