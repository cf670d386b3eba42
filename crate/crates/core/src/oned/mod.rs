//! One-dimensional oracles: overbarrier reflection from a cosh⁻² barrier,
//! Stokes lines of the 1D WKB phase, and the zero-field wire.

pub mod scatter;
pub mod stokes1d;
pub mod wire;

pub use scatter::{reflect_cosh_barrier, scatter, Reflection1DResult, ScatterOptions, ScatterResult};
pub use stokes1d::{stokes_lines_1d, turning_point};
pub use wire::{wire_overbarrier_reflection, WireProfile, WireShape, WireSweep, WireZeroFieldResult};
