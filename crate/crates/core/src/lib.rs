//! Simulation of Shor's order-finding step under imperfect gate operations.
//!
//! The crate computes the distribution of Fourier-transform outcomes `P_c`
//! when the Walsh-Hadamard and controlled-rotation gates are miscalibrated,
//! three ways: a closed form for constant (systematic) phase errors, direct
//! summation for arbitrary per-term errors, and a gate-level state-vector
//! simulation of the noisy QFT. On top of that it measures peak shifts,
//! order-recovery success and error thresholds.
//!
//! The floating-point code is generic over [`Real`] (`f32` or `f64`); the
//! `*64` aliases below are what the command-line tool uses.

pub mod errmodel;
pub mod error;
pub mod experiment;
pub mod io;
pub mod numth;
pub mod qcircuit;
pub mod scalar;
pub mod spectrum;

pub use errmodel::{sample_amplitude_errors, sample_phase_errors, ErrorMode, ErrorModel, RngState};
pub use error::{Error, Result};
pub use experiment::{
    ensemble_spectrum, peak_report, success_probability, threshold_sweep, Ensemble, PeakReport, RecoveryTable,
    SweepResult,
};
pub use numth::ShorInstance;
pub use qcircuit::{circuit_spectrum, qft_noisy, GateErrorPlan, StateVector};
pub use scalar::Real;
pub use spectrum::{
    combined_spectrum, direct_spectrum, init_error_weights, noiseless_spectrum, systematic_spectrum_closed_form,
    Method, Spectrum,
};

pub type ErrorModel64 = ErrorModel<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type StateVector64 = StateVector<f64>;
pub type GateErrorPlan64 = GateErrorPlan<f64>;
pub type Ensemble64 = Ensemble<f64>;
pub type PeakReport64 = PeakReport<f64>;
pub type SweepResult64 = SweepResult<f64>;

pub type ErrorModel32 = ErrorModel<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type StateVector32 = StateVector<f32>;
