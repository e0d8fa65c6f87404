//! Simulation engine for hybrid memristor-CMOS logic.
//!
//! The crate is organized bottom-up: [`device`] holds the compact models,
//! [`netlist`] the circuit description language, [`engine`] the nodal
//! solver, [`cells`] the gate and flip-flop generators, and [`measure`] the
//! waveform metrics and reports.

// NaN-rejecting range checks are written as `!(x > 0.0)` on purpose, and the
// dense solver indexes several arrays in lockstep.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cells;
pub mod device;
pub mod engine;
pub mod measure;
pub mod netlist;

pub use cells::{CellConfig, CellKind, StimulusPlan};
pub use device::{MemristorParams, MosfetParams, Polarity, SourceSpec};
pub use engine::{SolverConfig, Waveform};
pub use netlist::{ComponentCount, Element, Netlist};
