#![allow(dead_code)]

use memsim_core::cells::{testbench, CellConfig, CellKind, ClockSpec, InputSequence, StimulusPlan};
use memsim_core::engine::{run_transient, SolverConfig, Waveform};
use memsim_core::netlist::{validate_for_simulation, Element, Netlist};
use memsim_core::SourceSpec;

pub fn simulate(netlist: &Netlist) -> Waveform {
    let circuit = validate_for_simulation(netlist).expect("netlist validates");
    run_transient(&circuit, &SolverConfig::for_circuit(&circuit)).expect("transient converges")
}

/// Result of driving a D flip-flop with glitches that never straddle a
/// rising clock edge, followed by one genuine capture.
#[derive(Debug)]
pub struct GlitchOutcome {
    /// Highest `q` before the capturing edge.
    pub q_peak_before_capture: f64,
    /// `q` one clock phase after the capturing edge.
    pub q_after_capture: f64,
}

/// Pulses D high while the clock is low (master open) and again while it is
/// high (master closed), then raises D for real before the edge at 5.5 T.
pub fn d_ff_glitch(config: &CellConfig) -> GlitchOutcome {
    let t = config.clock_period;
    let e = config.edge_time;
    let plan = StimulusPlan::new(
        vec![InputSequence {
            name: "d".into(),
            bits: vec![false; 6],
        }],
        ClockSpec::from_config(config),
    );
    let mut netlist = testbench(CellKind::DFf, config, &plan).expect("testbench");
    let vdd = config.vdd;
    let pulse = |on: f64, off: f64| [(on, 0.0), (on + e, vdd), (off, vdd), (off + e, 0.0)];
    let mut points = vec![(0.0, 0.0)];
    points.extend(pulse(2.1 * t, 2.3 * t));
    points.extend(pulse(3.6 * t, 3.8 * t));
    points.extend([(4.75 * t, 0.0), (4.75 * t + e, vdd)]);
    match netlist.element_mut("VD") {
        Some(Element::VSource { spec, .. }) => *spec = SourceSpec::Pwl(points),
        _ => panic!("D flip-flop has no VD source"),
    }
    let w = simulate(&netlist);
    let q = w.voltage("q").expect("q trace");
    let capture = 5.5 * t;
    let q_peak_before_capture = w
        .times()
        .iter()
        .zip(q)
        .filter(|(time, _)| **time >= t && **time < capture)
        .map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    GlitchOutcome {
        q_peak_before_capture,
        q_after_capture: w.sample(q, capture + 0.45 * t),
    }
}
