//! Simulation core for the Grover-inspired quantum hard attention network.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the numerical
//! pieces: state-vector and density-matrix kernels, the gate set, amplitude
//! encoding, the flexible oracle / adaptive diffusion ansatz, Kraus noise
//! channels and the training loop. File formats, dataset ingestion and the
//! command line live in the `gqhan` crate.
//!
//! # Conventions
//!
//! * Qubit 0 is the ancilla that drives the discrete primitives. Qubits
//!   `1..=n` form the data register.
//! * Basis states are indexed least-significant-bit first: qubit `q` is bit
//!   `q` of the basis index. A data-register index `d` therefore lives at the
//!   global index `ancilla | (d << 1)`.
//! * The classifier reads out the Pauli-Z expectation of the last data qubit
//!   `q_n`, i.e. `p(0) - p(1)`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod ansatz;
pub mod encoding;
pub mod error;
pub mod gate;
pub mod gates;
pub mod matrix;
pub mod noise;
pub mod qhas;
pub mod state;
pub mod train;

pub use ansatz::{Circuit, OracleOrder, ParamVector};
pub use encoding::FeatureVector;
pub use error::{Error, Result};
pub use gate::GateOp;
pub use matrix::CMatrix;
pub use noise::{NoiseKind, NoisePlacement, NoiseSpec};
pub use qhas::{QhasEntry, QhasReport};
pub use state::{DensityMatrix, Measurable, StateVector};
pub use train::{GradientMethod, Label, RunRecord, Sample, StepMetrics, TrainConfig};

/// Double precision complex amplitude.
pub type C64 = num_complex::Complex64;
