//! Simulation of hyperentangled GHZ state analysis, generation and
//! entanglement swapping with quantum-dot spins in optical microcavities.
//!
//! Photons carry a polarization qubit (R, L) and a path qubit (modes 1, 2).
//! Two spin-cavity units act on them: a double-sided cavity that swaps the GHZ
//! classes of the two degrees of freedom, and a single-sided cavity acting as a
//! photon-spin phase gate.

pub mod analyzer;
pub mod cavity;
pub mod error;
pub mod exec;
pub mod generator;
pub mod ghz;
pub mod metrics;
pub mod operator;
pub mod optics;
pub mod roots;
pub mod state;
pub mod swapping;

pub use error::{Error, Result};
pub use ghz::{Classification, Sign};
pub use operator::Operator;
pub use state::{Basis, Kind, Label, PureState};
