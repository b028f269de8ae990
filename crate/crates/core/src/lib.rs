//! Grover search simulated on two backends: a dense statevector and a
//! matrix product state (MPS) with SVD truncation.
//!
//! The crate is organised bottom-up:
//!
//! - [`numeric`]: precision-generic complex matrices, a one-sided Jacobi SVD
//!   and spectrum truncation.
//! - [`statevector`]: exact dense simulation, used as the reference.
//! - [`mps`]: canonical-form MPS with two-site updates, diagonal MPOs and
//!   perfect sampling.
//! - [`grover`]: problem definition, iteration-count policies, and the
//!   layered ("common") versus re-applied ("iterative") execution schemes.
//!
//! Qubit `q` corresponds to character `q` of a bitstring and to bit
//! `n - 1 - q` of a basis index, so qubit 0 is the most significant bit and
//! MPS site 0 is the leftmost site.

pub mod bits;
pub mod error;
pub mod gates;
pub mod grover;
pub mod mps;
pub mod numeric;
pub mod rng;
pub mod statevector;

pub use bits::{Bitstring, Histogram};
pub use error::{Error, Result};
pub use gates::GateOp;
pub use grover::{
    Backend, BackendStats, ExecutionMode, GroverOutcome, GroverProgram, GroverResult, GroverSpec,
    IterationPolicy,
};
pub use mps::{DiagonalMpo, MpsState, SiteTensor};
pub use numeric::{ComplexMatrix, Precision, Real, SvdResult, Truncation};
pub use statevector::StateVector;
