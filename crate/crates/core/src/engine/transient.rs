use super::mna::{Mna, Mode, StampContext};
use super::newton::{newton_solve, solve_dc, NewtonError, Workspace};
use super::waveform::{Recorder, Waveform};
use super::{EngineError, SolverConfig};
use crate::netlist::Circuit;

/// Maximum number of times a failing step is halved.
const MAX_HALVINGS: u32 = 8;

/// Fixed-step transient analysis.
///
/// The initial point is the DC solution with `.IC` overrides applied. Each
/// step solves the nodal equations with backward-Euler capacitor companions
/// and memristor states frozen at their start-of-step values; states then
/// advance using the converged terminal voltages.
pub fn run_transient(circuit: &Circuit, config: &SolverConfig) -> Result<Waveform, EngineError> {
    config.validate()?;
    let (Some(dt), Some(t_stop)) = (config.dt, config.t_stop) else {
        return Err(EngineError::MissingTran);
    };
    let mna = Mna::new(circuit);
    let mut states = mna.initial_states();
    let mut x = solve_dc(&mna, &states, config, true)?;
    let steps = (t_stop / dt).round() as usize;

    let mut recorder = Recorder::new(&mna, steps + 1);
    recorder.record(0.0, &x, &states);

    let mut stepper = Stepper {
        mna: &mna,
        config,
        ws: Workspace::new(mna.size()),
        prev: vec![0.0; mna.size()],
    };
    for n in 1..=steps {
        let t0 = (n - 1) as f64 * dt;
        let t1 = n as f64 * dt;
        stepper.step(&mut x, &mut states, t0, t1 - t0, 0)?;
        recorder.record(t1, &x, &states);
    }
    Ok(recorder.finish(dt))
}

struct Stepper<'m, 'c> {
    mna: &'m Mna<'c>,
    config: &'m SolverConfig,
    ws: Workspace,
    prev: Vec<f64>,
}

impl Stepper<'_, '_> {
    fn step(&mut self, x: &mut Vec<f64>, states: &mut [f64], t0: f64, h: f64, depth: u32) -> Result<(), EngineError> {
        self.prev.clone_from(x);
        let prev = std::mem::take(&mut self.prev);
        let ctx = StampContext {
            time: t0 + h,
            mode: Mode::Transient { dt: h, prev: &prev },
            gmin: self.config.gmin,
            source_scale: 1.0,
        };
        let outcome = newton_solve(self.mna, x, states, &ctx, self.config, &mut self.ws);
        self.prev = prev;
        match outcome {
            Ok(_) => self.mna.advance_states(x, h, states),
            Err(NewtonError::Engine(e)) => Err(e),
            Err(NewtonError::Diverged(failure)) => {
                x.clone_from(&self.prev);
                if depth >= MAX_HALVINGS {
                    return Err(EngineError::NoConvergence {
                        time: Some(t0 + h),
                        worst: self.mna.unknown_name(failure.worst),
                        residual: failure.residual,
                    });
                }
                log::debug!("step at t = {:.6e} s failed; halving to {:.3e} s", t0 + h, h / 2.0);
                let half = h / 2.0;
                self.step(x, states, t0, half, depth + 1)?;
                self.step(x, states, t0 + half, half, depth + 1)
            }
        }
    }
}
