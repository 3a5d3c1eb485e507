//! Pulse-level synthesis, calibration and noise benchmarking of geometric
//! two-qubit gates for exchange-coupled spin qubits in a silicon double
//! quantum dot.
//!
//! Units: ħ = 1, time in ns, every energy/frequency in rad/ns. Use
//! [`units::mhz`] to convert the usual "2π × MHz" figures.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] / [`propagate`]: dense 2×2 and 4×4 complex algebra, exact
//!   Hermitian exponentials and the midpoint time-ordered propagator.
//! * [`hamiltonian`]: lab-frame, rotating-frame (RWA), adiabatic-basis and
//!   exchange-driven Hamiltonians built from device parameters.
//! * [`geometry`]: Bloch-sphere dressed-state paths, inverse pulse
//!   engineering and phase bookkeeping.
//! * [`gates`]: targets, local invariants, CZ calibration and the
//!   iSWAP/SWAP synthesis.
//! * [`noise`]: quasistatic exchange-noise Monte Carlo and sweeps.

pub mod error;
pub mod gates;
pub mod geometry;
pub mod hamiltonian;
pub mod linalg;
pub mod noise;
pub mod propagate;
pub mod units;

pub use error::{Error, Result};
pub use linalg::{Mat2, Mat4, C64};
pub use propagate::{propagate, Hamiltonian, TimeGrid};
