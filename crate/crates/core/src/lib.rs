//! Discrete phase-space representations of quantum states in prime dimension.
//!
//! The crate builds the `N + 1` mutually unbiased bases of an `N`-dimensional
//! Hilbert space (`N` an odd prime), the line operators `P(q,p)` they induce,
//! and from those the discrete Wigner function. Kirkwood's complex joint
//! quasi-distribution of position and momentum is computed alongside, with
//! exact conversions in both directions, and the [`probe`] module simulates a
//! sequential two-probe von Neumann measurement whose correlations recover
//! the Wigner function in the weak-coupling limit.
//!
//! Everything hangs off a [`PhaseSpace`], which owns the basis family and the
//! cached line-operator table for one [`Dimension`].

pub mod error;
pub mod field;
pub mod kirkwood;
pub mod mub;
pub mod operator;
pub mod probe;
pub mod verify;
pub mod wigner;

pub use error::{Error, Result};
pub use field::{BasisIndex, Dimension};
pub use kirkwood::KirkwoodGrid;
pub use mub::MubFamily;
pub use operator::{DensityMatrix, Operator, StateVector};
pub use probe::{
    CorrelationGrid, CorrelationRecord, ProbeConfig, ProbeMeasurements, SimulatedProbes,
};
pub use wigner::{CharacteristicTable, LineOperator, PhaseSpace, WignerGrid};

pub use num_complex::Complex64 as C64;

/// Absolute tolerance used when validating states and asserting reality.
pub const DEFAULT_TOL: f64 = 1e-10;
