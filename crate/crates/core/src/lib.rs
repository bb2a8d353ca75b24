//! Exact leader election among anonymous processors, simulated on a dense
//! statevector backend.
//!
//! Two quantum protocols are provided: the one-shot W-state election and the
//! consistency-check election that breaks symmetry with a local unitary
//! (`U` for an even number of candidates, `V_k` for an odd number). A
//! classical coin-flipping baseline and a pairwise tournament share the same
//! transcript format so their round counts can be compared directly.

pub mod baseline;
pub mod circuits;
pub mod cli;
pub mod election;
mod error;
pub mod identities;
pub mod metrics;
pub mod network;
pub mod qsim;

pub use error::{Error, Result};
