//! Exact arithmetic over finite fields of odd characteristic.

pub mod field;
pub mod linalg;
pub mod poly;
pub mod ratfunc;

pub use field::{Fe, Field};
pub use poly::Poly;
pub use ratfunc::RationalFunction;
