//! Geometric phases of mixed quantum states.
//!
//! A mixed state ρ evolving along a curve in the space of invertible density
//! operators picks up a holonomy whose argument is a geometric phase. This
//! crate computes three of them, all through horizontal lifts of the curve
//! into the purification space {ψ invertible, ‖ψ‖_HS = 1, ψψ† = ρ}:
//!
//! * the **Uhlmann phase**, from the lift satisfying ψ̇†ψ = ψ†ψ̇;
//! * the **interferometric (Sjöqvist) phase** for unitary evolution, from the
//!   mechanical connection on a momentum level set, evaluated by a positively
//!   time-ordered exponential correction;
//! * the **open-system (Tong) phase** for arbitrary evolution, from
//!   parallel-transported spectral frames.
//!
//! See the `examples/` directory for runnable demonstrations of each
//! capability, and the `holonomy` binary for the scriptable interface.

pub mod bundle;
pub mod config;
pub mod curves;
pub mod error;
pub mod expr;
pub mod lifts;
pub mod linalg;
pub mod phases;
pub mod random;
pub mod report;
pub mod run;
pub mod scenarios;
pub mod tol;
pub mod verify;

pub use bundle::{DensityOperator, MomentumValue, Purification, Subspace, TangentVector};
pub use curves::{DensityCurve, SampledCurve, SpectralPath, TimeGrid, UnitaryCurve};
pub use error::{Error, Result};
pub use lifts::{LiftMethod, LiftResult};
pub use linalg::{CMat, CVec, EigenSystem, HermitianMatrix, SkewHermitianMatrix, C64};
pub use phases::{PhaseMethod, PhaseResult};
pub use scenarios::{PhaseExpectation, Scenario};
pub use tol::{Tolerances, HBAR};
