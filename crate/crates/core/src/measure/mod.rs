//! Waveform metrics: logic sampling, propagation delay, average power,
//! power-delay product, oracle verification, and comparison reports.

mod logic;
mod report;
mod run;
mod timing;

pub use logic::{to_logic, verify_circuit, Logic, Mismatch, ThresholdConfig, Verdict};
pub use report::{build_report, reference_for, CellReport, PublishedReference, ReportFormat};
pub use run::{characterize, simulate_cell, CellRun, RunError};
pub use timing::{average_power, crossings, pdp, propagation_delay, propagation_delay_with, Crossing, DelayOptions, Edge};

use thiserror::Error;

use crate::cells::CellError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("waveform has no node '{0}'")]
    UnknownNode(String),
    #[error("time {time:.6e} s lies outside the waveform span [0, {end:.6e}] s")]
    OutOfSpan { time: f64, end: f64 },
    #[error("unmeasurable delay: {0}")]
    Unmeasurable(String),
    #[error("empty measurement window [{start:.6e}, {end:.6e}] s")]
    EmptyWindow { start: f64, end: f64 },
    #[error("invalid thresholds: {0}")]
    Thresholds(String),
    #[error("waveform ends at {end:.6e} s but the stimulus needs {needed:.6e} s")]
    ShortWaveform { end: f64, needed: f64 },
    #[error(transparent)]
    Cell(#[from] CellError),
}
