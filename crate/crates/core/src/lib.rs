//! Correlation measures for two-qubit Bell-diagonal states.
//!
//! The crate computes the original quantum discord, the relative-entropy
//! discord and the Hilbert-Schmidt geometric discord of Bell-diagonal states,
//! evolves those states under independent non-Markovian dephasing channels,
//! and locates the sudden-change time in closed form through the Lambert W
//! function. Every closed form has a brute-force counterpart in [`oracle`].

pub mod bellstate;
pub mod channel;
pub mod cli;
pub mod correlations;
pub mod critical;
pub mod error;
pub mod linalg;
pub mod oracle;

pub use bellstate::{BellDiagonalState, BellSpectrum, BlochDecomposition, DensityMatrix};
pub use channel::{Bandwidth, DephasingChannel, KrausSet};
pub use correlations::{ClosestClassicalState, MeasureSet};
pub use critical::CriticalPoint;
pub use error::{Error, Result};
