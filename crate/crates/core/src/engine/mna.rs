//! Modified nodal analysis: unknown layout and Jacobian/right-hand-side
//! stamping for every device.

use super::linalg::DenseMatrix;
use super::EngineError;
use crate::device::{memristor_eval, DeviceError};
use crate::netlist::{Circuit, Device};

/// How dynamic elements and initial conditions are treated during assembly.
#[derive(Debug, Clone, Copy)]
pub enum Mode<'a> {
    /// Operating point: capacitors open. With `force_ic`, `.IC` nodes and
    /// capacitor `IC=` values are pinned by auxiliary branch equations.
    Dc { force_ic: bool },
    /// One backward-Euler step of length `dt` from the solution `prev`.
    Transient { dt: f64, prev: &'a [f64] },
}

#[derive(Debug, Clone, Copy)]
pub struct StampContext<'a> {
    pub time: f64,
    pub mode: Mode<'a>,
    /// Conductance from every node to ground.
    pub gmin: f64,
    /// Multiplier on independent source values (source stepping).
    pub source_scale: f64,
}

#[derive(Debug, Clone, Copy)]
enum Forcing {
    Node { node: usize, volts: f64 },
    Capacitor { a: usize, b: usize, volts: f64 },
}

/// Unknown layout for one circuit: node voltages first (ground excluded),
/// then one current per voltage source, then the DC-only forcing branches.
#[derive(Debug, Clone)]
pub struct Mna<'c> {
    circuit: &'c Circuit,
    node_unknowns: usize,
    source_branch: Vec<Option<usize>>,
    source_count: usize,
    forcings: Vec<Forcing>,
    memristor_slots: Vec<Option<usize>>,
    memristor_count: usize,
}

#[inline]
fn volt(x: &[f64], node: usize) -> f64 {
    if node == 0 {
        0.0
    } else {
        x[node - 1]
    }
}

impl<'c> Mna<'c> {
    pub fn new(circuit: &'c Circuit) -> Self {
        let node_unknowns = circuit.nodes().len() - 1;
        let mut source_branch = Vec::with_capacity(circuit.devices().len());
        let mut memristor_slots = Vec::with_capacity(circuit.devices().len());
        let mut next_branch = node_unknowns;
        let mut memristor_count = 0;
        let mut forcings = Vec::new();
        for device in circuit.devices() {
            match device {
                Device::VSource { .. } => {
                    source_branch.push(Some(next_branch));
                    next_branch += 1;
                    memristor_slots.push(None);
                }
                Device::Memristor { .. } => {
                    source_branch.push(None);
                    memristor_slots.push(Some(memristor_count));
                    memristor_count += 1;
                }
                Device::Capacitor {
                    a,
                    b,
                    initial_volts: Some(v),
                    ..
                } => {
                    forcings.push(Forcing::Capacitor { a: *a, b: *b, volts: *v });
                    source_branch.push(None);
                    memristor_slots.push(None);
                }
                _ => {
                    source_branch.push(None);
                    memristor_slots.push(None);
                }
            }
        }
        for &(node, volts) in circuit.initial_conditions() {
            forcings.push(Forcing::Node { node, volts });
        }
        Self {
            circuit,
            node_unknowns,
            source_branch,
            source_count: next_branch - node_unknowns,
            forcings,
            memristor_slots,
            memristor_count,
        }
    }

    pub fn circuit(&self) -> &'c Circuit {
        self.circuit
    }

    pub fn node_unknowns(&self) -> usize {
        self.node_unknowns
    }

    pub fn source_count(&self) -> usize {
        self.source_count
    }

    pub fn memristor_count(&self) -> usize {
        self.memristor_count
    }

    /// Unknowns excluding the DC forcing branches.
    pub fn size(&self) -> usize {
        self.node_unknowns + self.source_count
    }

    pub fn size_for(&self, mode: Mode<'_>) -> usize {
        match mode {
            Mode::Dc { force_ic: true } => self.size() + self.forcings.len(),
            _ => self.size(),
        }
    }

    pub fn has_forcings(&self) -> bool {
        !self.forcings.is_empty()
    }

    /// Human-readable name of an unknown, for diagnostics.
    pub fn unknown_name(&self, index: usize) -> String {
        if index < self.node_unknowns {
            return format!("v({})", self.circuit.nodes()[index + 1]);
        }
        if let Some(dev) = self.source_branch.iter().position(|b| *b == Some(index)) {
            return format!("i({})", self.circuit.element_name(dev));
        }
        format!("ic-branch#{}", index - self.size())
    }

    /// Initial memristor states in device order.
    pub fn initial_states(&self) -> Vec<f64> {
        self.circuit
            .devices()
            .iter()
            .filter_map(|d| match d {
                Device::Memristor { w0, .. } => Some(*w0),
                _ => None,
            })
            .collect()
    }

    /// Stamps the Newton linearization at `x` into `matrix`/`rhs`, both of
    /// size [`Mna::size_for`]. `A x - b` evaluated at the same `x` is the
    /// nonlinear residual.
    pub fn assemble(
        &self,
        x: &[f64],
        states: &[f64],
        ctx: &StampContext<'_>,
        matrix: &mut DenseMatrix,
        rhs: &mut [f64],
    ) -> Result<(), EngineError> {
        matrix.clear();
        rhs.fill(0.0);
        let nu = self.node_unknowns;
        let row = |node: usize| if node == 0 { None } else { Some(node - 1) };

        for i in 0..nu {
            matrix.add(i, i, ctx.gmin);
        }

        let stamp_g = |m: &mut DenseMatrix, a: usize, b: usize, g: f64| {
            if let Some(ra) = row(a) {
                m.add(ra, ra, g);
                if let Some(rb) = row(b) {
                    m.add(ra, rb, -g);
                }
            }
            if let Some(rb) = row(b) {
                m.add(rb, rb, g);
                if let Some(ra) = row(a) {
                    m.add(rb, ra, -g);
                }
            }
        };
        // Current `i` injected into node `into` and drawn from node `from`.
        let inject = |rhs: &mut [f64], from: usize, into: usize, i: f64| {
            if let Some(r) = row(into) {
                rhs[r] += i;
            }
            if let Some(r) = row(from) {
                rhs[r] -= i;
            }
        };

        for (idx, device) in self.circuit.devices().iter().enumerate() {
            match device {
                Device::Resistor { a, b, conductance } => stamp_g(matrix, *a, *b, *conductance),
                Device::Capacitor { a, b, farads, .. } => {
                    if let Mode::Transient { dt, prev } = ctx.mode {
                        let g = farads / dt;
                        stamp_g(matrix, *a, *b, g);
                        let history = g * (volt(prev, *a) - volt(prev, *b));
                        inject(rhs, *b, *a, history);
                    }
                }
                Device::VSource { pos, neg, spec } => {
                    let k = self.source_branch[idx].expect("source branch");
                    if let Some(p) = row(*pos) {
                        matrix.add(p, k, 1.0);
                        matrix.add(k, p, 1.0);
                    }
                    if let Some(n) = row(*neg) {
                        matrix.add(n, k, -1.0);
                        matrix.add(k, n, -1.0);
                    }
                    rhs[k] = ctx.source_scale * spec.value(ctx.time);
                }
                Device::Mosfet {
                    drain,
                    gate,
                    source,
                    params,
                } => {
                    let vd = volt(x, *drain);
                    let vg = volt(x, *gate);
                    let vs = volt(x, *source);
                    let (vgs, vds) = (vg - vs, vd - vs);
                    let op = params.evaluate(vgs, vds);
                    let ieq = op.id - op.gm * vgs - op.gds * vds;
                    for (node, sign) in [(*drain, 1.0), (*source, -1.0)] {
                        if let Some(r) = row(node) {
                            if let Some(c) = row(*gate) {
                                matrix.add(r, c, sign * op.gm);
                            }
                            if let Some(c) = row(*drain) {
                                matrix.add(r, c, sign * op.gds);
                            }
                            if let Some(c) = row(*source) {
                                matrix.add(r, c, -sign * (op.gm + op.gds));
                            }
                        }
                    }
                    inject(rhs, *drain, *source, ieq);
                }
                Device::Memristor { pos, neg, params, .. } => {
                    let slot = self.memristor_slots[idx].expect("memristor slot");
                    let v = volt(x, *pos) - volt(x, *neg);
                    let op = memristor_eval(states[slot], v, params).map_err(|source| EngineError::Device {
                        element: self.circuit.element_name(idx).to_string(),
                        source,
                    })?;
                    stamp_g(matrix, *pos, *neg, op.conductance);
                    inject(rhs, *pos, *neg, op.current - op.conductance * v);
                }
            }
        }

        if let Mode::Dc { force_ic: true } = ctx.mode {
            for (j, forcing) in self.forcings.iter().enumerate() {
                let k = self.size() + j;
                let (a, b, volts) = match *forcing {
                    Forcing::Node { node, volts } => (node, 0, volts),
                    Forcing::Capacitor { a, b, volts } => (a, b, volts),
                };
                if let Some(ra) = row(a) {
                    matrix.add(ra, k, 1.0);
                    matrix.add(k, ra, 1.0);
                }
                if let Some(rb) = row(b) {
                    matrix.add(rb, k, -1.0);
                    matrix.add(k, rb, -1.0);
                }
                rhs[k] = volts;
            }
        }
        Ok(())
    }

    /// Voltage across every memristor (positive minus negative terminal).
    pub fn memristor_voltages(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        for device in self.circuit.devices() {
            if let Device::Memristor { pos, neg, .. } = device {
                out.push(volt(x, *pos) - volt(x, *neg));
            }
        }
    }

    /// Advances every memristor state over `dt` with its terminal voltage
    /// taken from the converged solution `x`.
    pub fn advance_states(&self, x: &[f64], dt: f64, states: &mut [f64]) -> Result<(), EngineError> {
        for (idx, device) in self.circuit.devices().iter().enumerate() {
            if let Device::Memristor { pos, neg, params, .. } = device {
                let slot = self.memristor_slots[idx].expect("memristor slot");
                let v = volt(x, *pos) - volt(x, *neg);
                states[slot] = crate::device::advance_state(states[slot], v, dt, params).map_err(
                    |source: DeviceError| EngineError::Device {
                        element: self.circuit.element_name(idx).to_string(),
                        source,
                    },
                )?;
            }
        }
        Ok(())
    }

    /// Branch current unknown of each voltage source, in device order.
    pub fn source_branches(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.source_branch
            .iter()
            .enumerate()
            .filter_map(|(dev, b)| b.map(|b| (dev, b)))
    }
}
