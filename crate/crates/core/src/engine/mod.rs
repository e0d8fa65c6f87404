//! Nonlinear circuit solver: DC operating point and fixed-step transient
//! analysis over a validated [`Circuit`](crate::netlist::Circuit).

mod linalg;
mod mna;
mod newton;
mod transient;
mod waveform;

pub use linalg::DenseMatrix;
pub use mna::{Mna, Mode, StampContext};
pub use newton::{dc_operating_point, OperatingPoint};
pub use transient::run_transient;
pub use waveform::{SourceTrace, Waveform};

use thiserror::Error;

use crate::device::DeviceError;
use crate::netlist::Circuit;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Largest accepted Newton voltage update (V).
    pub voltage_tolerance: f64,
    /// Largest accepted nodal current residual (A).
    pub current_tolerance: f64,
    pub max_newton_iterations: usize,
    /// Conductance from every node to ground (S).
    pub gmin: f64,
    /// Transient step (s).
    pub dt: Option<f64>,
    /// Transient stop time (s).
    pub t_stop: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            voltage_tolerance: 1e-6,
            current_tolerance: 1e-9,
            max_newton_iterations: 100,
            gmin: 1e-12,
            dt: None,
            t_stop: None,
        }
    }
}

impl SolverConfig {
    /// Defaults with the step and stop time taken from the `.TRAN` card.
    pub fn for_circuit(circuit: &Circuit) -> Self {
        let (dt, t_stop) = circuit.tran().map_or((None, None), |(s, t)| (Some(s), Some(t)));
        Self {
            dt,
            t_stop,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let positive = [
            ("voltage_tolerance", self.voltage_tolerance),
            ("current_tolerance", self.current_tolerance),
            ("gmin", self.gmin),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(EngineError::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_newton_iterations == 0 {
            return Err(EngineError::Config("max_newton_iterations must be >= 1".into()));
        }
        if let (Some(dt), Some(stop)) = (self.dt, self.t_stop) {
            if !(dt > 0.0 && dt < stop) {
                return Err(EngineError::Config(format!("need 0 < dt < t_stop, got dt={dt} t_stop={stop}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Error)]
pub enum EngineError {
    #[error("invalid solver configuration: {0}")]
    Config(String),
    #[error("no .TRAN directive or transient settings")]
    MissingTran,
    #[error("{}: singular system, zero pivot at unknown {unknown}", when(*.time))]
    Singular { time: Option<f64>, unknown: String },
    #[error("{}: Newton did not converge, worst residual {residual:.3e} at {worst}", when(*.time))]
    NoConvergence {
        time: Option<f64>,
        worst: String,
        residual: f64,
    },
    #[error("device {element}: {source}")]
    Device {
        element: String,
        #[source]
        source: DeviceError,
    },
}

/// `None` marks the DC operating point.
fn when(time: Option<f64>) -> String {
    match time {
        Some(t) => format!("t = {t:.6e} s"),
        None => "operating point".to_string(),
    }
}

#[cfg(test)]
mod tests;
