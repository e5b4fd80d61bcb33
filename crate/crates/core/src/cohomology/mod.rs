//! Riemann–Roch spaces, `H^1` through principal parts, Serre duality,
//! Frobenius on `H^1` and the Cartier class of a `p`-torsion bundle.

pub mod frobenius;
pub mod rr;
pub mod tails;

pub use frobenius::{
    cartier_class, cartier_manin, frobenius_h1, frobenius_power_h1, holomorphic_coords, p_rank,
    PTorsionBundle, SemilinearMap,
};
pub use rr::{h0_dim, h1_dim, rr_space, RRSpace};
pub use tails::{serre_pairing, tail_reduce, H1Space, Tail, TailClass};

#[cfg(test)]
mod tests;
