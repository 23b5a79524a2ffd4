//! Simulation and local weak observability analysis of sensorless AC
//! machine drives.
//!
//! The crate models the induction machine and the synchronous machine
//! family (wound-rotor, interior and surface permanent-magnet, and
//! reluctance variants), integrates open-loop excitation scenarios with a
//! fixed-step RK4 scheme, and evaluates pointwise observability along the
//! resulting trajectories: closed-form observability matrices and
//! determinants, SVD rank analysis, geometric margins (flux-angle rate for
//! the induction machine, observability-vector rotation for the synchronous
//! machines), all cross-checked against a finite-difference Jacobian oracle.
//!
//! All numerics are generic over the scalar type via [`num::Real`]
//! (`f32`/`f64`); the aliases below fix `f64` for ordinary use.

pub mod error;
pub mod linalg;
pub mod models;
pub mod num;
pub mod obsv;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};

/// Double-precision aliases for the main library types.
pub type ImParams64 = models::ImParams<f64>;
pub type ImState64 = models::ImState<f64>;
pub type SmParams64 = models::SmParams<f64>;
pub type SmState64 = models::SmState<f64>;
pub type Scenario64 = sim::Scenario<f64>;
pub type TrajectoryData64 = sim::TrajectoryData<f64>;
pub type ObservabilityReport64 = obsv::ObservabilityReport<f64>;
