//! Genus-2 curves `y^2 = f(x)` with `deg f = 5`: places, divisors, function
//! field elements, differentials, valuations and residues.

pub mod curve;
pub mod divisor;
pub mod function;
pub mod local;

pub use curve::{Curve, Place, PlaceKind, DEFAULT_COUNT_GUARD};
pub use divisor::Divisor;
pub use function::{
    canonical_divisor, divisor_of_function, residue, valuation, Differential, FunctionElement,
};
pub use local::{Local, LocalElt};
