//! Parametric generators for the hybrid memristor-CMOS gates and
//! sequential cells, their stimulus plans, and behavioral golden models.
//!
//! Every cell is built from three primitives: the hybrid inverter (a
//! memristor pull-up with an NMOS pull-down), the passive memristor AND/OR
//! pair, and pass devices (transmission gates and NMOS feedback switches).

mod golden;
mod stimulus;
mod topology;

pub use golden::{golden_sequence, truth_table};
pub use stimulus::{default_stimulus, default_stimulus_for, exhaustive_stimulus, testbench, ClockSpec, InputSequence, StimulusPlan};
pub use topology::{build_cell, build_d_latch, build_flipflop, build_gate, TransparentPhase};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::device::{MemristorParams, MosfetParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellKind {
    Not,
    And,
    Or,
    Nand,
    Nor,
    Xor,
    DLatch,
    DFf,
    TFf,
    SrFf,
    JkFf,
}

impl CellKind {
    /// Every kind, in declaration order.
    pub const ALL: [CellKind; 11] = [
        CellKind::Not,
        CellKind::And,
        CellKind::Or,
        CellKind::Nand,
        CellKind::Nor,
        CellKind::Xor,
        CellKind::DLatch,
        CellKind::DFf,
        CellKind::TFf,
        CellKind::SrFf,
        CellKind::JkFf,
    ];

    pub const GATES: [CellKind; 6] = [
        CellKind::Not,
        CellKind::And,
        CellKind::Or,
        CellKind::Nand,
        CellKind::Nor,
        CellKind::Xor,
    ];

    pub const SEQUENTIAL: [CellKind; 5] = [
        CellKind::DLatch,
        CellKind::DFf,
        CellKind::TFf,
        CellKind::SrFf,
        CellKind::JkFf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CellKind::Not => "not",
            CellKind::And => "and",
            CellKind::Or => "or",
            CellKind::Nand => "nand",
            CellKind::Nor => "nor",
            CellKind::Xor => "xor",
            CellKind::DLatch => "d_latch",
            CellKind::DFf => "d_ff",
            CellKind::TFf => "t_ff",
            CellKind::SrFf => "sr_ff",
            CellKind::JkFf => "jk_ff",
        }
    }

    pub fn is_gate(self) -> bool {
        Self::GATES.contains(&self)
    }

    pub fn is_flipflop(self) -> bool {
        matches!(self, CellKind::DFf | CellKind::TFf | CellKind::SrFf | CellKind::JkFf)
    }

    /// Data input node names, in stimulus order.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            CellKind::Not => &["a"],
            CellKind::And | CellKind::Or | CellKind::Nand | CellKind::Nor | CellKind::Xor => &["a", "b"],
            CellKind::DLatch | CellKind::DFf => &["d"],
            CellKind::TFf => &["t"],
            CellKind::SrFf => &["s", "r"],
            CellKind::JkFf => &["j", "k"],
        }
    }

    /// Node whose value is verified and timed.
    pub fn output(self) -> &'static str {
        if self.is_gate() {
            "out"
        } else {
            "q"
        }
    }

    /// Whether an input combination is allowed in stimulus plans.
    pub fn is_legal(self, bits: &[bool]) -> bool {
        !(self == CellKind::SrFf && bits == [true, true])
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CellKind {
    type Err = CellError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.to_ascii_lowercase().replace('-', "_");
        CellKind::ALL
            .into_iter()
            .find(|k| k.name() == wanted)
            .ok_or_else(|| CellError::UnknownCell(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CellError {
    #[error("unknown cell '{0}'; valid names: not, and, or, nand, nor, xor, d_latch, d_ff, t_ff, sr_ff, jk_ff")]
    UnknownCell(String),
    #[error("invalid cell configuration: {0}")]
    Config(String),
    #[error("invalid stimulus: {0}")]
    Stimulus(String),
}

/// Drive conditions and device choices shared by every generated cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellConfig {
    pub vdd: f64,
    pub clock_period: f64,
    /// Rise and fall time of clock and data edges.
    pub edge_time: f64,
    pub w0: f64,
    /// Multiplier on the state-rate prefactor.
    pub time_scale: f64,
    /// Distance the memristor state keeps from 0 and 1.
    pub state_margin: f64,
    /// Transient step used by testbenches.
    pub time_step: f64,
    pub nmos_model: String,
    pub pmos_model: String,
    pub memristor_model: String,
}

impl Default for CellConfig {
    fn default() -> Self {
        Self {
            vdd: 1.2,
            clock_period: 10e-9,
            edge_time: 0.1e-9,
            w0: 0.5,
            time_scale: 1e14,
            state_margin: 5e-3,
            time_step: 10e-12,
            nmos_model: "nch".into(),
            pmos_model: "pch".into(),
            memristor_model: "mem".into(),
        }
    }
}

impl CellConfig {
    pub fn validate(&self) -> Result<(), CellError> {
        let fail = |msg: String| Err(CellError::Config(msg));
        let vth = MosfetParams::nmos().vth.max(MosfetParams::pmos().vth);
        if !(self.vdd > vth && self.vdd.is_finite()) {
            return fail(format!("vdd must exceed the MOSFET threshold {vth} V, got {}", self.vdd));
        }
        if !(self.clock_period > 0.0 && self.clock_period.is_finite()) {
            return fail(format!("clock period must be positive, got {}", self.clock_period));
        }
        if !(self.edge_time > 0.0 && self.edge_time < 0.05 * self.clock_period) {
            return fail(format!(
                "edge time must be positive and below 5% of the clock period, got {}",
                self.edge_time
            ));
        }
        if !(self.time_step > 0.0 && self.time_step <= self.clock_period / 20.0) {
            return fail(format!(
                "time step must be positive and at most 1/20 of the clock period, got {}",
                self.time_step
            ));
        }
        if !(self.w0 > 0.0 && self.w0 < 1.0) {
            return fail(format!("w0 must lie strictly inside (0, 1), got {}", self.w0));
        }
        self.memristor_params()
            .validate()
            .map_err(|e| CellError::Config(e.to_string()))?;
        Ok(())
    }

    /// Default device parameters with this configuration's scale and margin.
    pub fn memristor_params(&self) -> MemristorParams {
        MemristorParams {
            time_scale: self.time_scale,
            state_margin: self.state_margin,
            ..MemristorParams::default()
        }
    }
}
