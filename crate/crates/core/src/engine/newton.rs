use super::linalg::DenseMatrix;
use super::mna::{Mna, Mode, StampContext};
use super::{EngineError, SolverConfig};
use crate::netlist::Circuit;

/// Largest per-iteration change applied to a node voltage (V).
const MAX_VOLTAGE_STEP: f64 = 0.5;

/// Scratch buffers reused across Newton solves.
pub(crate) struct Workspace {
    pub matrix: DenseMatrix,
    pub rhs: Vec<f64>,
    pub residual: Vec<f64>,
    pub perm: Vec<usize>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Self {
            matrix: DenseMatrix::zeros(n),
            rhs: vec![0.0; n],
            residual: vec![0.0; n],
            perm: Vec::with_capacity(n),
        }
    }

    fn resize(&mut self, n: usize) {
        if self.matrix.size() != n {
            *self = Self::new(n);
        }
    }
}

pub(crate) struct NewtonFailure {
    pub worst: usize,
    pub residual: f64,
}

pub(crate) enum NewtonError {
    Engine(EngineError),
    Diverged(NewtonFailure),
}

/// Newton iteration from the guess in `x` (updated in place).
///
/// Accepts when every nodal residual is within the current tolerance, every
/// branch equation within the voltage tolerance, and the last update was
/// within the voltage tolerance.
pub(crate) fn newton_solve(
    mna: &Mna<'_>,
    x: &mut [f64],
    states: &[f64],
    ctx: &StampContext<'_>,
    config: &SolverConfig,
    ws: &mut Workspace,
) -> Result<usize, NewtonError> {
    let n = x.len();
    ws.resize(n);
    let nodes = mna.node_unknowns();
    let mut last_update = f64::INFINITY;
    let mut worst = (0usize, f64::INFINITY);
    for iteration in 0..=config.max_newton_iterations {
        mna.assemble(x, states, ctx, &mut ws.matrix, &mut ws.rhs)
            .map_err(NewtonError::Engine)?;
        ws.matrix.mul_vec(x, &mut ws.residual);
        let mut node_ok = true;
        let mut branch_ok = true;
        worst = (0, 0.0);
        for (i, (ax, b)) in ws.residual.iter().zip(&ws.rhs).enumerate() {
            let r = (ax - b).abs();
            if !r.is_finite() {
                node_ok = false;
                worst = (i, r);
                break;
            }
            if i < nodes {
                node_ok &= r <= config.current_tolerance;
                if r > worst.1 {
                    worst = (i, r);
                }
            } else {
                branch_ok &= r <= config.voltage_tolerance;
            }
        }
        if iteration > 0 && node_ok && branch_ok && last_update <= config.voltage_tolerance {
            return Ok(iteration);
        }
        if iteration == config.max_newton_iterations {
            break;
        }
        let mut solution = std::mem::take(&mut ws.rhs);
        let solved = ws.matrix.solve_in_place(&mut solution, &mut ws.perm);
        ws.rhs = solution;
        if let Err(col) = solved {
            return Err(NewtonError::Engine(EngineError::Singular {
                time: matches!(ctx.mode, Mode::Transient { .. }).then_some(ctx.time),
                unknown: mna.unknown_name(col),
            }));
        }
        last_update = 0.0;
        for i in 0..n {
            let mut delta = ws.rhs[i] - x[i];
            if i < nodes {
                delta = delta.clamp(-MAX_VOLTAGE_STEP, MAX_VOLTAGE_STEP);
                last_update = last_update.max(delta.abs());
            }
            x[i] += delta;
        }
        if x.iter().any(|v| !v.is_finite()) {
            break;
        }
    }
    Err(NewtonError::Diverged(NewtonFailure {
        worst: worst.0,
        residual: worst.1,
    }))
}

/// Node voltages and source currents at the DC operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatingPoint {
    /// `(node, volts)` for every non-ground node, in circuit node order.
    pub node_voltages: Vec<(String, f64)>,
    /// `(source, amps)`; positive current flows into the `+` terminal.
    pub source_currents: Vec<(String, f64)>,
    /// Solution vector in engine unknown order (nodes, then source branches).
    pub solution: Vec<f64>,
}

impl OperatingPoint {
    pub fn voltage(&self, node: &str) -> Option<f64> {
        if node == crate::netlist::GROUND {
            return Some(0.0);
        }
        self.node_voltages.iter().find(|(n, _)| n == node).map(|(_, v)| *v)
    }

    pub fn current(&self, source: &str) -> Option<f64> {
        self.source_currents
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(source))
            .map(|(_, i)| *i)
    }
}

/// Solves the operating point with memristor states frozen at `w0`.
/// `.IC` overrides are honored as pinned node voltages.
pub fn dc_operating_point(circuit: &Circuit, config: &SolverConfig) -> Result<OperatingPoint, EngineError> {
    config.validate()?;
    let mna = Mna::new(circuit);
    let states = mna.initial_states();
    let x = solve_dc(&mna, &states, config, true)?;
    Ok(operating_point(&mna, &x))
}

pub(crate) fn operating_point(mna: &Mna<'_>, x: &[f64]) -> OperatingPoint {
    let circuit = mna.circuit();
    let node_voltages = circuit.nodes()[1..]
        .iter()
        .cloned()
        .zip(x.iter().copied())
        .collect();
    let source_currents = mna
        .source_branches()
        .map(|(dev, k)| (circuit.element_name(dev).to_string(), x[k]))
        .collect();
    OperatingPoint {
        node_voltages,
        source_currents,
        solution: x[..mna.size()].to_vec(),
    }
}

/// DC solve with gmin stepping, then source stepping, as fallbacks.
/// Returns the solution truncated to [`Mna::size`] unknowns.
pub(crate) fn solve_dc(
    mna: &Mna<'_>,
    states: &[f64],
    config: &SolverConfig,
    force_ic: bool,
) -> Result<Vec<f64>, EngineError> {
    let mode = Mode::Dc { force_ic };
    let n = mna.size_for(mode);
    let mut ws = Workspace::new(n);
    let mut guess = vec![0.0; n];
    for &(node, volts) in mna.circuit().initial_conditions() {
        guess[node - 1] = volts;
    }
    let ctx = |gmin: f64, source_scale: f64| StampContext {
        time: 0.0,
        mode,
        gmin,
        source_scale,
    };

    let mut x = guess.clone();
    let first = match newton_solve(mna, &mut x, states, &ctx(config.gmin, 1.0), config, &mut ws) {
        Ok(_) => return Ok(finish(mna, x)),
        Err(NewtonError::Engine(e)) => return Err(e),
        Err(NewtonError::Diverged(f)) => f,
    };

    // gmin stepping: start three decades above gmin and walk down.
    let mut x = guess.clone();
    let mut stepped = true;
    for decade in (0..=3).rev() {
        let gmin = config.gmin * 10f64.powi(decade);
        match newton_solve(mna, &mut x, states, &ctx(gmin, 1.0), config, &mut ws) {
            Ok(_) => {}
            Err(NewtonError::Engine(e)) => return Err(e),
            Err(NewtonError::Diverged(_)) => {
                stepped = false;
                break;
            }
        }
    }
    if stepped {
        return Ok(finish(mna, x));
    }

    log::debug!("gmin stepping failed; trying source stepping");
    let mut x = guess;
    for step in 1..=20 {
        let scale = f64::from(step) / 20.0;
        match newton_solve(mna, &mut x, states, &ctx(config.gmin, scale), config, &mut ws) {
            Ok(_) => {}
            Err(NewtonError::Engine(e)) => return Err(e),
            Err(NewtonError::Diverged(_)) => {
                return Err(EngineError::NoConvergence {
                    time: None,
                    worst: mna.unknown_name(first.worst),
                    residual: first.residual,
                })
            }
        }
    }
    Ok(finish(mna, x))
}

fn finish(mna: &Mna<'_>, mut x: Vec<f64>) -> Vec<f64> {
    x.truncate(mna.size());
    x
}
