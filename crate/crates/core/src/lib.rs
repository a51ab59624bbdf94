//! Discrete-time quantum walks on a synthetic frequency lattice.
//!
//! A ring resonator under strong resonant phase modulation acts, once per
//! roundtrip, as the step operator `U = T·R(θ)`: a polarization rotation
//! followed by a polarization-dependent translation whose hop amplitudes are
//! `i^l J_l(Γ) e^{ilφ}`. In quasimomentum space `U` is a 2×2 matrix at every
//! `q`, which gives both the Floquet band structure and single-roundtrip
//! quantum gates on the polarization qubit.
//!
//! The crate is `no_std` and only needs `alloc`. All transcendental functions
//! go through [`libm`] so results are bit-identical across targets.
//!
//! Module map:
//!
//! - [`lattice`]: lattice geometry, states, and observables.
//! - [`bessel`], [`kernel`], [`fft`], [`step`]: the step operator and its two
//!   engines (direct convolution and spectral multiplication), plus [`evolve`].
//! - [`band`]: quasienergy bands, eigenspinors and group velocities.
//! - [`baselines`]: classical random walk and Hadamard walk references.
//! - [`gates`] and [`two_qubit`]: quasimomentum-space gates, state
//!   preparation, and the path⊗polarization CNOT.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod band;
pub mod baselines;
pub mod bessel;
mod error;
pub mod fft;
pub mod gates;
pub mod kernel;
pub mod lattice;
mod math;
pub mod matrix;
pub mod step;
pub mod trajectory;
pub mod two_qubit;

pub use error::WalkError;
pub use lattice::{Boundary, LatticeConfig, LatticeState, Polarization, WavepacketSpec};
pub use math::{reduce_angle, C64};
pub use matrix::{Mat2, Mat4, SquareMatrix};
pub use step::{evolve, step, Engine, ModulationParams, Record, Schedule, Stepper};
pub use trajectory::{StepRecord, Trajectory};

/// Result alias used throughout the crate.
pub type Result<T, E = WalkError> = core::result::Result<T, E>;
