//! Embedding of a genus-2 curve as a `(2,3)` curve in `P^1 x P^1`, the
//! first-order obstruction to moving it, and certificates built from it.

mod beta;
mod certificate;
mod embedding;

pub use beta::{
    beta_functional, beta_functional_with, choose_delta, delta_divisor, is_reduced_rational,
    obstruction_scalar, BetaFunctional, DeltaChoice, Splitting,
};
pub use certificate::*;
pub use embedding::{embed_bidegree_2_3, embed_with_function, normal_bundle_divisor, BiForm, EmbeddingData, NormalBundle};

#[cfg(test)]
mod tests;
