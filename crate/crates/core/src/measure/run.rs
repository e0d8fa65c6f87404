use thiserror::Error;

use super::{average_power, pdp, propagation_delay_with, reference_for, verify_circuit};
use super::{CellReport, DelayOptions, Edge, MeasureError, ThresholdConfig, Verdict};
use crate::cells::{testbench, CellConfig, CellError, CellKind, StimulusPlan};
use crate::engine::{run_transient, EngineError, SolverConfig, Waveform};
use crate::netlist::{validate_for_simulation, Diagnostic, Netlist};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Cell(#[from] CellError),
    #[error("generated netlist failed validation: {0:?}")]
    Netlist(Vec<Diagnostic>),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Measure(#[from] MeasureError),
}

/// A simulated testbench.
#[derive(Debug, Clone)]
pub struct CellRun {
    pub kind: CellKind,
    pub netlist: Netlist,
    pub plan: StimulusPlan,
    pub waveform: Waveform,
}

pub fn simulate_cell(kind: CellKind, config: &CellConfig, plan: &StimulusPlan) -> Result<CellRun, RunError> {
    let netlist = testbench(kind, config, plan)?;
    let circuit = validate_for_simulation(&netlist).map_err(RunError::Netlist)?;
    let waveform = run_transient(&circuit, &SolverConfig::for_circuit(&circuit))?;
    Ok(CellRun {
        kind,
        netlist,
        plan: plan.clone(),
        waveform,
    })
}

impl CellRun {
    pub fn verify(&self, thresholds: &ThresholdConfig) -> Result<Verdict, MeasureError> {
        verify_circuit(self.kind, &self.waveform, &self.plan, thresholds)
    }

    /// Measures power over `[T, end]` and delay from the clock (sequential
    /// cells) or any input (gates) to the output.
    pub fn report(&self, vdd: f64, thresholds: &ThresholdConfig) -> Result<CellReport, MeasureError> {
        let period = self.plan.clock.period;
        let end = self.plan.stop_time(self.kind);
        let verdict = self.verify(thresholds)?;
        let avg_power = average_power(&self.waveform, period, end)?;
        let inputs: Vec<&str> = if self.kind.is_gate() {
            self.kind.inputs().to_vec()
        } else {
            vec!["clk"]
        };
        let edge = match self.kind {
            k if k.is_gate() => None,
            CellKind::DLatch => Some(Edge::Falling),
            _ => Some(Edge::Rising),
        };
        let options = DelayOptions {
            edge,
            window: Some((if self.kind.is_gate() { 0.0 } else { period }, end)),
            max_delay: Some(0.5 * period),
        };
        let delay = propagation_delay_with(&self.waveform, &inputs, self.kind.output(), vdd, options)?;
        Ok(CellReport {
            kind: self.kind,
            counts: self.netlist.count_components(),
            avg_power,
            delay,
            pdp: pdp(avg_power, delay),
            verified: verdict.passed(),
            first_mismatch: verdict.first_mismatch().cloned(),
            reference: reference_for(self.kind),
        })
    }
}

/// Simulates a cell under `plan` and measures it.
pub fn characterize(
    kind: CellKind,
    config: &CellConfig,
    plan: &StimulusPlan,
    thresholds: &ThresholdConfig,
) -> Result<CellReport, RunError> {
    let run = simulate_cell(kind, config, plan)?;
    Ok(run.report(config.vdd, thresholds)?)
}
