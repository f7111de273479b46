//! Operator-splitting time integrators for split linear systems
//! `c' = (A + B) c`, as they arise from semidiscretized
//! convection-diffusion-reaction equations.
//!
//! The crate provides
//!
//! * dense linear algebra with a scaling-and-squaring matrix exponential
//!   ([`linalg`]),
//! * classical product propagators (Lie-Trotter, Strang) and
//!   Zassenhaus-corrected products of local order up to five
//!   ([`propagator`], [`zassenhaus`]),
//! * iterative (relaxation) splitting with pluggable initialization,
//!   including Zassenhaus-product seeding of the sweep ladder
//!   ([`iterative`]),
//! * generators for the benchmark problems ([`model`]) and observed-order
//!   fitting utilities ([`convergence`]).
//!
//! Everything is pure computation on owned values; the crate is
//! `no_std` (with `alloc`) and all types are safe to share across
//! threads. IO, the CLI and file formats live in the companion
//! `opsplit-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod convergence;
pub mod error;
pub mod iterative;
pub mod linalg;
pub mod model;
pub mod propagator;
pub mod zassenhaus;

pub use convergence::{
    estimate_order, march, operator_error_max, scheme_step, scheme_step_with_substeps,
    SchemeDescriptor, ERROR_FIT_FLOOR,
};
pub use error::{Error, Result};
pub use iterative::{
    combined_step, iterative_step, InitStrategy, IterativeConfig, SampledTrajectory, SweepSide,
    DEFAULT_SUBSTEPS,
};
pub use linalg::{commutator, matrix_exp, Matrix, Vector, VectorNorm};
pub use model::{
    build_multiphase, build_one_phase, matrix_demo, matrix_demo_exact_u1, pulse_profile,
    reference_solution, MultiphaseSpec, OnePhaseSpec,
};
pub use propagator::{
    exact_step, lie_trotter_step, strang_step, zassenhaus_step, zassenhaus_step_with, SplitProblem,
};
pub use zassenhaus::ZassenhausExpansion;
