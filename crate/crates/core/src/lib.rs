//! Landau-de Gennes Q-tensor dynamics on periodic grids.
//!
//! The crate implements the isotropic-nematic phase-transition model at small
//! interface width: the bulk potential and its critical-point structure
//! ([`qtensor`]), the 1D transition profile and the interface constants it
//! induces ([`profile`]), periodic field discretizations with spectral and
//! finite-difference operators ([`field`]), gradient-flow and Beris-Edwards
//! time integration ([`dynamics`]), interface extraction plus jump and
//! boundary-layer probes ([`interface`]), and the closed-form coefficient maps
//! to the director-based limit theories ([`limits`]).
//!
//! The [`verify`] module bundles the quantitative checks that tie the solvers
//! to the sharp-interface predictions; it backs both the `acceptance`
//! integration test and the `verify` CLI subcommand.

pub mod dynamics;
pub mod error;
pub mod field;
pub mod interface;
pub mod limits;
pub mod presets;
pub mod profile;
pub mod qtensor;
pub mod verify;

pub use error::{CoreError, Result};
pub use qtensor::{BulkParams, CriticalSet, QTensor};
