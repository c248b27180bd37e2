//! Markov perfect equilibria of a dynamic persuasion game in which a
//! sender controls the direction of Poisson news and a receiver pays a
//! flow cost for attention until taking one of two actions.
//!
//! The closed-form layers ([`model`], [`value`], [`cutoffs`],
//! [`equilibrium`]) are generic over the [`Scalar`] type; the crate-root
//! aliases fix it to `f64`, which the numerical layers ([`verify`],
//! [`simulate`], [`analysis`]) use throughout.

pub mod analysis;
pub mod cutoffs;
pub mod equilibrium;
pub mod model;
pub mod scalar;
pub mod simulate;
pub mod value;
pub mod verify;

pub use scalar::Scalar;

pub type Params = model::ModelParams<f64>;
pub type Info = model::InformationStructure<f64>;
pub type Profile = equilibrium::EquilibriumProfile<f64>;
