//! Exact per-momentum simulation of dynamical quantum phase transitions (DQPT)
//! in quenched two-band fermionic models.
//!
//! Every momentum mode of a two-band Hamiltonian `h(k) = d0(k) + d(k)·σ` is an
//! independent spin-1/2. After a sudden quench the mode's Bloch vector precesses
//! about `d̂_f(k)`, so the whole many-body problem reduces to closed-form rotations
//! on the Bloch sphere. On top of that the crate provides:
//!
//! - [`models`]: d(k) maps for the transverse-field Ising, SSH, Kitaev and tabulated models,
//! - [`dynamics`]: per-mode evolution, Loschmidt amplitudes and a 2×2 unitary oracle,
//! - [`observables`]: rate functions, critical momenta/times, dynamical Chern numbers,
//!   Skyrmion textures and Bloch-sphere coverage,
//! - [`emulation`]: a statistical stand-in for a single-transmon experiment
//!   (shot noise, decoherence, error bars).
//!
//! Time is dimensionless with the Ising coupling set to one.

// `!(x > 0.0)` is used on purpose so NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bloch;
pub mod dynamics;
pub mod emulation;
mod error;
pub mod models;
pub mod numeric;
pub mod observables;

pub use bloch::{BlochState, MomentumGrid, QuenchSpec, TimeGrid, Vec3};
pub use error::{Error, Result};
pub use models::ModelParams;
