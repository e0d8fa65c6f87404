use std::fmt;

use serde::Serialize;

use super::MeasureError;
use crate::cells::{golden_sequence, CellKind, StimulusPlan};
use crate::engine::Waveform;

/// Logic decision levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdConfig {
    pub v_high: f64,
    pub v_low: f64,
}

impl ThresholdConfig {
    /// 70% / 30% of the supply.
    pub fn for_vdd(vdd: f64) -> Self {
        Self::from_fractions(vdd, 0.7, 0.3)
    }

    pub fn from_fractions(vdd: f64, high: f64, low: f64) -> Self {
        Self {
            v_high: high * vdd,
            v_low: low * vdd,
        }
    }

    pub fn validate(&self, vdd: f64) -> Result<(), MeasureError> {
        if self.v_low < self.v_high && self.v_high < vdd && self.v_low.is_finite() {
            Ok(())
        } else {
            Err(MeasureError::Thresholds(format!(
                "need v_low < v_high < vdd, got {} / {} / {vdd}",
                self.v_low, self.v_high
            )))
        }
    }

    pub fn classify(&self, volts: f64) -> Logic {
        if volts >= self.v_high {
            Logic::High
        } else if volts <= self.v_low {
            Logic::Low
        } else {
            Logic::Indeterminate
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Logic {
    Low,
    High,
    Indeterminate,
}

impl Logic {
    pub fn bit(self) -> Option<bool> {
        match self {
            Logic::Low => Some(false),
            Logic::High => Some(true),
            Logic::Indeterminate => None,
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::Low => "0",
            Logic::High => "1",
            Logic::Indeterminate => "X",
        })
    }
}

/// Samples `node` at each time and classifies it against the thresholds.
pub fn to_logic(
    waveform: &Waveform,
    node: &str,
    thresholds: &ThresholdConfig,
    times: &[f64],
) -> Result<Vec<Logic>, MeasureError> {
    let trace = waveform
        .voltage(node)
        .ok_or_else(|| MeasureError::UnknownNode(node.to_string()))?;
    let end = waveform.t_end();
    let start = waveform.times().first().copied().unwrap_or(0.0);
    times
        .iter()
        .map(|&t| {
            if t < start || t > end {
                Err(MeasureError::OutOfSpan { time: t, end })
            } else {
                Ok(thresholds.classify(waveform.sample(trace, t)))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mismatch {
    pub cycle: usize,
    pub expected: bool,
    pub got: Logic,
    pub volts: f64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cycle {}: expected {}, got {} ({:.4} V)",
            self.cycle,
            u8::from(self.expected),
            self.got,
            self.volts
        )
    }
}

/// Outcome of comparing sampled outputs with the golden model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub expected: Vec<bool>,
    pub sampled: Vec<Logic>,
    pub volts: Vec<f64>,
    pub mismatches: Vec<Mismatch>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn first_mismatch(&self) -> Option<&Mismatch> {
        self.mismatches.first()
    }

    /// Sampled outputs as `0`/`1`/`X` joined by commas.
    pub fn sampled_string(&self) -> String {
        self.sampled.iter().map(Logic::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Samples the kind's output once per stimulus cycle and compares against
/// the golden sequence. Indeterminate samples count as mismatches.
pub fn verify_circuit(
    kind: CellKind,
    waveform: &Waveform,
    plan: &StimulusPlan,
    thresholds: &ThresholdConfig,
) -> Result<Verdict, MeasureError> {
    let needed = plan.stop_time(kind);
    if waveform.t_end() + 0.5 * waveform.dt() < needed {
        return Err(MeasureError::ShortWaveform {
            end: waveform.t_end(),
            needed,
        });
    }
    let expected = golden_sequence(kind, plan, plan.initial_q)?;
    let times = plan.sample_times(kind);
    let sampled = to_logic(waveform, kind.output(), thresholds, &times)?;
    let trace = waveform.voltage(kind.output()).expect("checked by to_logic");
    let volts: Vec<f64> = times.iter().map(|&t| waveform.sample(trace, t)).collect();
    let mismatches = expected
        .iter()
        .zip(&sampled)
        .zip(&volts)
        .enumerate()
        .filter(|(_, ((e, s), _))| s.bit() != Some(**e))
        .map(|(cycle, ((e, s), v))| Mismatch {
            cycle,
            expected: *e,
            got: *s,
            volts: *v,
        })
        .collect();
    Ok(Verdict {
        expected,
        sampled,
        volts,
        mismatches,
    })
}
