//! Polyvector fields with the Schouten bracket, and the Hochschild layer of
//! finite-dimensional commutative algebras.

pub mod hochschild;
mod polyvector;

pub use hochschild::{
    associator, bracket_on_first_factor, check_chain_map, check_gerstenhaber,
    check_mm_associativity, check_tau, gerstenhaber_bracket, kappa, random_algebra, random_reduced,
    shuffle_component, shuffle_map, tensor_differential, AlgebraError, Cochain, FinAlgebra,
};
pub use polyvector::{
    check_d_squared, check_schouten, hp_smooth, kb_differential, random_polyvector,
    schouten_bracket, so3_bivector, HpCell, Polyvector, SchoutenError,
};
