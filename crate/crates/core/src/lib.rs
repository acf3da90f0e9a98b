//! Decohered topological color codes on the honeycomb torus.
//!
//! Stabilizer states are tracked as sign-free generator lists over GF(2).
//! Red-link XX dephasing, gauge-group centers, entanglement negativity and
//! Monte Carlo sweeps over the dephasing probability are built on top.

pub mod channels;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod f2;
pub mod gauging;
pub mod lattice;
pub mod negativity;
pub mod pauli;
pub mod region;

pub use error::{Error, Result};
pub use lattice::{Color, HoneycombTorus};
pub use negativity::HalfInt;
pub use pauli::{PauliWord, StabilizerState};
pub use region::{Region, TenComplex};
