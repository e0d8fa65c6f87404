use std::io::{self, Write};

use super::mna::Mna;
use crate::netlist::{Device, GROUND};

/// Branch current of one voltage source plus its terminal nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SourceTrace {
    pub name: String,
    pub pos: String,
    pub neg: String,
    /// Current into the `+` terminal through the source (A).
    pub current: Vec<f64>,
}

/// Uniformly sampled transient result. Every trace shares `times`.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    times: Vec<f64>,
    dt: f64,
    node_names: Vec<String>,
    voltages: Vec<Vec<f64>>,
    sources: Vec<SourceTrace>,
    memristor_names: Vec<String>,
    states: Vec<Vec<f64>>,
}

impl Waveform {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn t_end(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn node_names(&self) -> &[String] {
        &self.node_names
    }

    pub fn voltage(&self, node: &str) -> Option<&[f64]> {
        self.node_names
            .iter()
            .position(|n| n == node)
            .map(|i| self.voltages[i].as_slice())
    }

    pub fn sources(&self) -> &[SourceTrace] {
        &self.sources
    }

    pub fn current(&self, source: &str) -> Option<&[f64]> {
        self.sources
            .iter()
            .find(|s| s.name.eq_ignore_ascii_case(source))
            .map(|s| s.current.as_slice())
    }

    pub fn memristor_names(&self) -> &[String] {
        &self.memristor_names
    }

    pub fn state(&self, memristor: &str) -> Option<&[f64]> {
        self.memristor_names
            .iter()
            .position(|n| n.eq_ignore_ascii_case(memristor))
            .map(|i| self.states[i].as_slice())
    }

    pub fn states(&self) -> impl Iterator<Item = (&str, &[f64])> {
        self.memristor_names
            .iter()
            .map(String::as_str)
            .zip(self.states.iter().map(Vec::as_slice))
    }

    /// Voltage of `node` (ground allowed) at sample `index`.
    pub fn voltage_at_index(&self, node: &str, index: usize) -> Option<f64> {
        if node == GROUND {
            return Some(0.0);
        }
        self.voltage(node).map(|v| v[index])
    }

    /// Linear interpolation of `trace` at time `t`, clamped to the span.
    pub fn sample(&self, trace: &[f64], t: f64) -> f64 {
        let n = self.times.len();
        if n == 0 {
            return f64::NAN;
        }
        let t0 = self.times[0];
        if t <= t0 {
            return trace[0];
        }
        let pos = (t - t0) / self.dt;
        let i = pos.floor() as usize;
        if i + 1 >= n {
            return trace[n - 1];
        }
        let frac = pos - i as f64;
        trace[i] + (trace[i + 1] - trace[i]) * frac
    }

    /// Copy with every time stamp shifted by `offset`.
    pub fn time_shifted(&self, offset: f64) -> Self {
        let mut w = self.clone();
        for t in &mut w.times {
            *t += offset;
        }
        w
    }

    /// Writes `time_s,v(node)...,i(source)...,w(memristor)...`, one row per
    /// sample, each value in scientific notation with ten significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut header = vec!["time_s".to_string()];
        header.extend(self.node_names.iter().map(|n| format!("v({n})")));
        header.extend(self.sources.iter().map(|s| format!("i({})", s.name)));
        header.extend(self.memristor_names.iter().map(|m| format!("w({m})")));
        writeln!(out, "{}", header.join(","))?;
        let mut line = String::new();
        for (k, t) in self.times.iter().enumerate() {
            line.clear();
            push_value(&mut line, *t);
            for trace in &self.voltages {
                line.push(',');
                push_value(&mut line, trace[k]);
            }
            for s in &self.sources {
                line.push(',');
                push_value(&mut line, s.current[k]);
            }
            for trace in &self.states {
                line.push(',');
                push_value(&mut line, trace[k]);
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

fn push_value(line: &mut String, v: f64) {
    use std::fmt::Write as _;
    let _ = write!(line, "{v:.9e}");
}

pub(crate) struct Recorder {
    times: Vec<f64>,
    node_names: Vec<String>,
    voltages: Vec<Vec<f64>>,
    sources: Vec<(SourceTrace, usize)>,
    memristor_names: Vec<String>,
    states: Vec<Vec<f64>>,
}

impl Recorder {
    pub fn new(mna: &Mna<'_>, capacity: usize) -> Self {
        let circuit = mna.circuit();
        let node_names: Vec<String> = circuit.nodes()[1..].to_vec();
        let voltages = node_names.iter().map(|_| Vec::with_capacity(capacity)).collect();
        let sources = mna
            .source_branches()
            .map(|(dev, k)| {
                let (pos, neg) = match &circuit.devices()[dev] {
                    Device::VSource { pos, neg, .. } => (*pos, *neg),
                    _ => unreachable!("source branch on a non-source device"),
                };
                (
                    SourceTrace {
                        name: circuit.element_name(dev).to_string(),
                        pos: circuit.nodes()[pos].clone(),
                        neg: circuit.nodes()[neg].clone(),
                        current: Vec::with_capacity(capacity),
                    },
                    k,
                )
            })
            .collect();
        let memristor_names: Vec<String> = circuit
            .devices()
            .iter()
            .enumerate()
            .filter(|(_, d)| matches!(d, Device::Memristor { .. }))
            .map(|(i, _)| circuit.element_name(i).to_string())
            .collect();
        let states = memristor_names.iter().map(|_| Vec::with_capacity(capacity)).collect();
        Self {
            times: Vec::with_capacity(capacity),
            node_names,
            voltages,
            sources,
            memristor_names,
            states,
        }
    }

    pub fn record(&mut self, t: f64, x: &[f64], states: &[f64]) {
        self.times.push(t);
        for (trace, v) in self.voltages.iter_mut().zip(x) {
            trace.push(*v);
        }
        for (src, k) in &mut self.sources {
            src.current.push(x[*k]);
        }
        for (trace, w) in self.states.iter_mut().zip(states) {
            trace.push(*w);
        }
    }

    pub fn finish(self, dt: f64) -> Waveform {
        Waveform {
            times: self.times,
            dt,
            node_names: self.node_names,
            voltages: self.voltages,
            sources: self.sources.into_iter().map(|(s, _)| s).collect(),
            memristor_names: self.memristor_names,
            states: self.states,
        }
    }
}

#[cfg(test)]
impl Waveform {
    /// Builds a waveform directly from traces, for metric tests.
    pub(crate) fn from_traces(dt: f64, nodes: Vec<(&str, Vec<f64>)>, sources: Vec<SourceTrace>) -> Self {
        let len = nodes.first().map_or(0, |(_, v)| v.len());
        Self {
            times: (0..len).map(|k| k as f64 * dt).collect(),
            dt,
            node_names: nodes.iter().map(|(n, _)| n.to_string()).collect(),
            voltages: nodes.into_iter().map(|(_, v)| v).collect(),
            sources,
            memristor_names: Vec::new(),
            states: Vec::new(),
        }
    }
}
