//! Numerical toolkit for monogamy and polygamy relations of superpositions of
//! generalized W-class states and vacuum (GWV states).
//!
//! The crate is layered bottom-up:
//!
//! - [`qcore`]: dense complex matrices, tensor products, partial traces and
//!   spectral functions.
//! - [`states`]: W-class, GW and GWV state constructors, partitions,
//!   coarse-graining and reduced density matrices.
//! - [`entanglement`]: concurrence (pure, Wootters, convex roof) and the
//!   Tsallis-q / Rényi-α entanglement measures.
//! - [`bounds`]: every monogamy/polygamy bound family with precondition
//!   checks and feasible-k intervals.
//! - [`harness`]: presets, scenario files, figure datasets, random fuzzing and
//!   CSV/table reports.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod entanglement;
mod error;
pub mod harness;
pub mod qcore;
pub mod states;

pub use error::{Error, Result};

pub use bounds::{BoundFamily, BoundReport, BoundSpec, KInterval, PairProfile, Relation};
pub use entanglement::{ConvexRoofConfig, Family, MeasureParams, RoofDirection, StateRef, Variant};
pub use qcore::{ComplexMatrix, DimList, C64};
pub use states::{DensityMatrix, GwvSpec, Partition, StateVector};
