//! One-dimensional compressible gas dynamics with skew-symmetric form diagnostics.
//!
//! The crate is organised bottom-up:
//!
//! * [`thermo`]: ideal-gas state, first/second-law bookkeeping on process
//!   paths, the heat-form commutator and the `1/T` integrating factor.
//! * [`forms`]: degree-1 forms on 2D parameter grids, their commutators,
//!   line integrals, Stokes consistency and potential reconstruction.
//! * [`euler1d`]: exact Riemann solver, first-order Godunov scheme,
//!   particle-trajectory tracing and entropy transport.
//! * [`characteristics`]: characteristic speeds, the homogeneous system for
//!   jumps of normal derivatives and simple-wave shock formation.
//! * [`diagnostics`]: the evolutionary form built from flow fields, its
//!   commutator, source breakdown, instability classes and transition events.

pub mod characteristics;
pub mod diagnostics;
pub mod euler1d;
mod error;
pub mod forms;
pub(crate) mod stencil;
pub mod thermo;

pub use error::{Error, Result};
pub use thermo::GasParams;
