//! Dense state-vector quantum circuit simulation with end-to-end pipelines
//! for Simon's period finding, Shor's order-finding factoring and Grover
//! search, plus the quantum Fourier transform circuit builder they share.

pub mod cli;
pub mod error;
pub mod gates;
pub mod grover;
pub mod matrix;
pub mod qft;
pub mod rng;
pub mod shor;
pub mod simon;
pub mod statevec;

pub use error::{Error, Result};
pub use gates::{Circuit, GateKind, GateMatrix, GateOp, PhaseFlip};
pub use matrix::ComplexMatrix;
pub use statevec::{Distribution, StateVector, MAX_QUBITS};
