//! Density-matrix simulation of CNOT-noisy circuits and zero-noise
//! extrapolation by identity insertion.
//!
//! A CNOT squared is the identity, so replacing a CNOT by an odd number of
//! copies leaves the noiseless circuit unchanged while amplifying its gate
//! noise by a known factor. Measuring an observable at several insertion
//! levels and extrapolating to the zero-noise point removes depolarizing
//! contributions order by order. The crate provides:
//!
//! - [`circuit`]: the gate set, benchmark circuit builders (CNOT chains,
//!   a two-qubit Fourier transform, split-step oscillator evolution and a
//!   Gaussian state preparation) and CNOT-pair cancellation;
//! - [`density`] / [`noise`]: exact density-matrix evolution with per-CNOT
//!   Pauli channels, optional thermal relaxation and seeded shot sampling;
//! - [`insertion`]: fixed (uniform) and random (Poisson or combinatorial
//!   placement) identity insertion plans;
//! - [`extrapolation`] / [`estimators`]: combination weights in exact
//!   rational arithmetic, polynomial extrapolation, operator-set
//!   coefficients and the mitigated estimators built from them;
//! - [`experiment`]: declarative sweep runner with CSV output, used by the
//!   `zne` binary.

pub mod circuit;
pub mod density;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod extrapolation;
pub mod grid;
pub mod insertion;
pub mod matrix;
pub mod noise;

pub use circuit::{
    build_double_cnot, build_four_cnot, build_qft, build_state_prep, build_trotter_step,
    cancel_adjacent_cnots, cnot_count, Circuit, Gate,
};
pub use density::{expectation, DensityMatrix, Observable};
pub use error::{Result, ZneError};
pub use estimators::{
    fiim_estimate, riim_estimate, riim_poisson_estimate, riim_poisson_study, MeasureMode,
    ZneEstimate,
};
pub use extrapolation::{
    combined_error, poly_fit_extrapolate, poly_weights, richardson_weights, riim_coefficients,
    stat_error, RichardsonWeights, RiimCoefficientSet,
};
pub use grid::PositionGrid;
pub use insertion::{
    apply_plan, enumerate_placements, fiim_transform, plan_gate_count, riim_random_plan,
    sample_placement, InsertionPlan, OperatorSet,
};
pub use noise::{
    apply_noisy_cnot, apply_relaxation, evolve, sample_shots, NoiseModel, PauliNoiseSpec,
    Relaxation, SampleStats,
};
