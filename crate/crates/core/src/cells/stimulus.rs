use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_cell, CellConfig, CellError, CellKind};
use crate::device::SourceSpec;
use crate::netlist::{Directive, Element, Netlist};

/// Square-wave clock: low for the first half period, rising edge centred
/// on the half period, falling edge at the period boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSpec {
    pub period: f64,
    pub edge: f64,
}

impl ClockSpec {
    pub fn from_config(config: &CellConfig) -> Self {
        Self {
            period: config.clock_period,
            edge: config.edge_time,
        }
    }

    pub fn source(&self, vdd: f64) -> SourceSpec {
        SourceSpec::Pulse {
            v_low: 0.0,
            v_high: vdd,
            delay: self.period / 2.0,
            rise: self.edge,
            fall: self.edge,
            width: self.period / 2.0 - self.edge,
            period: self.period,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSequence {
    pub name: String,
    pub bits: Vec<bool>,
}

/// Logic stimulus for one cell: a bit per clock cycle on each input.
///
/// Combinational cells hold bit `k` on their inputs for cycle `k`.
/// Sequential cells run a one-cycle preamble that establishes
/// `initial_q`; bit `k` is then applied in the middle of the clock's high
/// phase so that the next rising edge captures it.
#[derive(Debug, Clone, PartialEq)]
pub struct StimulusPlan {
    pub inputs: Vec<InputSequence>,
    pub clock: ClockSpec,
    /// Position of each sample within its sampled phase, in `(0, 1)`.
    pub sample_fraction: f64,
    pub initial_q: bool,
}

impl StimulusPlan {
    pub fn new(inputs: Vec<InputSequence>, clock: ClockSpec) -> Self {
        Self {
            inputs,
            clock,
            sample_fraction: 0.9,
            initial_q: false,
        }
    }

    pub fn cycles(&self) -> usize {
        self.inputs.first().map_or(0, |s| s.bits.len())
    }

    /// Input bits of cycle `k`, in input order.
    pub fn combination(&self, k: usize) -> Vec<bool> {
        self.inputs.iter().map(|s| s.bits[k]).collect()
    }

    pub fn validate(&self, kind: CellKind) -> Result<(), CellError> {
        let fail = |msg: String| Err(CellError::Stimulus(msg));
        let names: Vec<&str> = self.inputs.iter().map(|s| s.name.as_str()).collect();
        if names != kind.inputs() {
            return fail(format!("{kind} expects inputs {:?}, plan has {names:?}", kind.inputs()));
        }
        let n = self.cycles();
        if n == 0 {
            return fail("input sequences must not be empty".into());
        }
        if self.inputs.iter().any(|s| s.bits.len() != n) {
            return fail("input sequences must have equal length".into());
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction < 1.0) {
            return fail(format!("sample fraction must lie in (0, 1), got {}", self.sample_fraction));
        }
        if !(self.clock.edge > 0.0 && self.clock.edge < 0.05 * self.clock.period) {
            return fail("clock edge must be positive and below 5% of the period".into());
        }
        for k in 0..n {
            let combo = self.combination(k);
            if !kind.is_legal(&combo) {
                return fail(format!("cycle {k}: input combination {combo:?} is not allowed for {kind}"));
            }
        }
        Ok(())
    }

    /// Start of the transition to bit `k`.
    pub fn transition_time(&self, kind: CellKind, k: usize) -> f64 {
        let t = self.clock.period;
        if kind.is_gate() {
            k as f64 * t
        } else {
            (k as f64 + 0.75) * t
        }
    }

    /// When the output for bit `k` is sampled.
    pub fn sample_time(&self, kind: CellKind, k: usize) -> f64 {
        let t = self.clock.period;
        let k = k as f64;
        match kind {
            _ if kind.is_gate() => (k + self.sample_fraction) * t,
            CellKind::DLatch => (k + 1.0 + 0.5 * self.sample_fraction) * t,
            _ => (k + 1.5 + 0.5 * self.sample_fraction) * t,
        }
    }

    pub fn sample_times(&self, kind: CellKind) -> Vec<f64> {
        (0..self.cycles()).map(|k| self.sample_time(kind, k)).collect()
    }

    /// Simulation length covering every sample.
    pub fn stop_time(&self, kind: CellKind) -> f64 {
        let n = self.cycles() as f64;
        if kind.is_gate() {
            n * self.clock.period
        } else {
            (n + 1.0) * self.clock.period
        }
    }

    /// Input values held before the first bit: whatever keeps the
    /// flip-flop at `initial_q`.
    fn preamble(&self, kind: CellKind) -> Vec<bool> {
        match kind {
            CellKind::DLatch | CellKind::DFf => vec![self.initial_q],
            CellKind::TFf => vec![false],
            CellKind::SrFf | CellKind::JkFf => vec![false, false],
            _ => self.combination(0),
        }
    }

    fn waveform(&self, kind: CellKind, input: usize, vdd: f64) -> SourceSpec {
        let level = |b: bool| if b { vdd } else { 0.0 };
        let mut current = self.preamble(kind)[input];
        let mut points = vec![(0.0, level(current))];
        for (k, &bit) in self.inputs[input].bits.iter().enumerate() {
            if bit == current {
                continue;
            }
            let t = self.transition_time(kind, k);
            if t > 0.0 {
                points.push((t, level(current)));
            }
            points.push((t + self.clock.edge, level(bit)));
            current = bit;
        }
        if points.len() == 1 {
            SourceSpec::Dc(points[0].1)
        } else {
            SourceSpec::Pwl(points)
        }
    }
}

/// Seeded stimulus under default drive conditions.
pub fn default_stimulus(kind: CellKind, cycles: usize, seed: u64) -> Result<StimulusPlan, CellError> {
    default_stimulus_for(kind, cycles, seed, &CellConfig::default())
}

/// Seeded pseudo-random stimulus. The first cycles walk every legal input
/// combination in shuffled order; the rest are drawn uniformly from the
/// legal combinations.
pub fn default_stimulus_for(
    kind: CellKind,
    cycles: usize,
    seed: u64,
    config: &CellConfig,
) -> Result<StimulusPlan, CellError> {
    if cycles < 4 {
        return Err(CellError::Stimulus(format!("at least 4 cycles required, got {cycles}")));
    }
    let width = kind.inputs().len();
    let legal: Vec<Vec<bool>> = (0..1usize << width)
        .map(|code| (0..width).map(|i| code >> (width - 1 - i) & 1 == 1).collect())
        .filter(|combo: &Vec<bool>| kind.is_legal(combo))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order = legal.clone();
    order.shuffle(&mut rng);
    let mut combos: Vec<Vec<bool>> = order.into_iter().take(cycles).collect();
    while combos.len() < cycles {
        combos.push(legal[rng.gen_range(0..legal.len())].clone());
    }
    let inputs = kind
        .inputs()
        .iter()
        .enumerate()
        .map(|(i, name)| InputSequence {
            name: (*name).to_string(),
            bits: combos.iter().map(|c| c[i]).collect(),
        })
        .collect();
    let mut plan = StimulusPlan::new(inputs, ClockSpec::from_config(config));
    if !kind.is_gate() {
        plan.initial_q = rng.gen();
    }
    Ok(plan)
}

/// Every input combination of a gate in binary counting order (first input
/// most significant), repeated until at least `cycles` cycles are filled.
pub fn exhaustive_stimulus(kind: CellKind, cycles: usize, config: &CellConfig) -> Result<StimulusPlan, CellError> {
    if !kind.is_gate() {
        return Err(CellError::Stimulus(format!("{kind} is sequential; exhaustive tables apply to gates")));
    }
    let width = kind.inputs().len();
    let rows = 1usize << width;
    let total = cycles.max(4).div_ceil(rows) * rows;
    let inputs = kind
        .inputs()
        .iter()
        .enumerate()
        .map(|(i, name)| InputSequence {
            name: (*name).to_string(),
            bits: (0..total).map(|k| (k % rows) >> (width - 1 - i) & 1 == 1).collect(),
        })
        .collect();
    Ok(StimulusPlan::new(inputs, ClockSpec::from_config(config)))
}

/// Cell netlist with its inputs and clock driven by `plan`, a `.TRAN`
/// covering every sample, and the slave latch pinned to the plan's
/// initial state.
pub fn testbench(kind: CellKind, config: &CellConfig, plan: &StimulusPlan) -> Result<Netlist, CellError> {
    plan.validate(kind)?;
    let mut netlist = build_cell(kind, config)?;
    for (i, input) in plan.inputs.iter().enumerate() {
        let spec = plan.waveform(kind, i, config.vdd);
        set_source(&mut netlist, &format!("V{}", input.name.to_ascii_uppercase()), spec)?;
    }
    if !kind.is_gate() {
        set_source(&mut netlist, "VCLK", plan.clock.source(config.vdd))?;
    }
    if kind.is_flipflop() {
        let volts = if plan.initial_q { config.vdd } else { 0.0 };
        netlist.analyses.push(Directive::Ic { node: "x".into(), volts });
    }
    netlist.set_tran(config.time_step, plan.stop_time(kind));
    Ok(netlist)
}

fn set_source(netlist: &mut Netlist, name: &str, new_spec: SourceSpec) -> Result<(), CellError> {
    match netlist.element_mut(name) {
        Some(Element::VSource { spec, .. }) => {
            *spec = new_spec;
            Ok(())
        }
        _ => Err(CellError::Stimulus(format!("cell has no source {name}"))),
    }
}
