use super::MeasureError;
use crate::engine::Waveform;

/// A threshold crossing located by linear interpolation between samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub time: f64,
    pub rising: bool,
}

/// Every crossing of `level`. A sample sitting exactly on the level counts
/// once, when the trace leaves the other side.
pub fn crossings(times: &[f64], trace: &[f64], level: f64) -> Vec<Crossing> {
    let mut out = Vec::new();
    let mut side: Option<bool> = None;
    let mut last_off = 0usize;
    for (k, &v) in trace.iter().enumerate() {
        if v == level {
            continue;
        }
        let above = v > level;
        if let Some(prev) = side {
            if prev != above {
                let (t0, v0) = (times[last_off], trace[last_off]);
                let (t1, v1) = (times[k], v);
                let time = if k == last_off + 1 {
                    t0 + (level - v0) * (t1 - t0) / (v1 - v0)
                } else {
                    times[last_off + 1]
                };
                out.push(Crossing { time, rising: above });
            }
        }
        side = Some(above);
        last_off = k;
    }
    out
}

/// Direction of a threshold crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Rising,
    Falling,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DelayOptions {
    /// Only input crossings in this direction start a measurement.
    pub edge: Option<Edge>,
    /// Only input crossings inside `[start, end]` are paired.
    pub window: Option<(f64, f64)>,
    /// Output crossings later than this after the input are not paired.
    pub max_delay: Option<f64>,
}

/// Mean 50%-of-supply input-to-output delay over the whole waveform.
pub fn propagation_delay(waveform: &Waveform, input: &str, output: &str, vdd: f64) -> Result<f64, MeasureError> {
    propagation_delay_with(waveform, &[input], output, vdd, DelayOptions::default())
}

/// Mean delay between input and output crossings of `vdd / 2`.
///
/// Input crossings from all `inputs` are merged in time order. Each is
/// paired with the first output crossing at or after it, provided that
/// crossing comes before the next input crossing and within `max_delay`.
/// Input events that do not switch the output are skipped; at least one
/// pair must exist.
pub fn propagation_delay_with(
    waveform: &Waveform,
    inputs: &[&str],
    output: &str,
    vdd: f64,
    options: DelayOptions,
) -> Result<f64, MeasureError> {
    let level = 0.5 * vdd;
    let times = waveform.times();
    let trace = |node: &str| waveform.voltage(node).ok_or_else(|| MeasureError::UnknownNode(node.to_string()));
    let mut events: Vec<f64> = Vec::new();
    for input in inputs {
        events.extend(
            crossings(times, trace(input)?, level)
                .iter()
                .filter(|c| options.edge.is_none_or(|e| c.rising == (e == Edge::Rising)))
                .map(|c| c.time),
        );
    }
    events.sort_by(f64::total_cmp);
    if let Some((start, end)) = options.window {
        events.retain(|t| *t >= start && *t <= end);
    }
    let outs: Vec<f64> = crossings(times, trace(output)?, level).iter().map(|c| c.time).collect();
    if events.is_empty() {
        return Err(MeasureError::Unmeasurable(format!(
            "inputs {inputs:?} never cross {level:.3} V in the window"
        )));
    }
    let mut total = 0.0;
    let mut pairs = 0usize;
    for (i, &t_in) in events.iter().enumerate() {
        let next = events.get(i + 1).copied().unwrap_or(f64::INFINITY);
        let idx = outs.partition_point(|&t| t < t_in);
        let Some(&t_out) = outs.get(idx) else {
            break;
        };
        let in_range = options.max_delay.is_none_or(|m| t_out - t_in <= m);
        if t_out < next && in_range {
            total += t_out - t_in;
            pairs += 1;
        }
    }
    if pairs == 0 {
        return Err(MeasureError::Unmeasurable(format!(
            "output '{output}' never crosses {level:.3} V after an input crossing"
        )));
    }
    Ok(total / pairs as f64)
}

/// Mean power delivered by all voltage sources over `[start, end]`,
/// integrating the piecewise-linear sample interpolation exactly.
pub fn average_power(waveform: &Waveform, start: f64, end: f64) -> Result<f64, MeasureError> {
    let times = waveform.times();
    let t_end = waveform.t_end();
    if !(end > start) || times.is_empty() {
        return Err(MeasureError::EmptyWindow { start, end });
    }
    if start < times[0] || end > t_end + 0.5 * waveform.dt() {
        return Err(MeasureError::OutOfSpan {
            time: if start < times[0] { start } else { end },
            end: t_end,
        });
    }
    let end = end.min(t_end);
    let mut power = vec![0.0; times.len()];
    for source in waveform.sources() {
        for (k, p) in power.iter_mut().enumerate() {
            let v = waveform.voltage_at_index(&source.pos, k).unwrap_or(0.0)
                - waveform.voltage_at_index(&source.neg, k).unwrap_or(0.0);
            *p -= v * source.current[k];
        }
    }
    let at = |t: f64| waveform.sample(&power, t);
    let first = times.partition_point(|&t| t <= start);
    let last = times.partition_point(|&t| t < end);
    let mut knots = vec![(start, at(start))];
    knots.extend((first..last).map(|k| (times[k], power[k])));
    knots.push((end, at(end)));
    let energy: f64 = knots
        .windows(2)
        .map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1))
        .sum();
    Ok(energy / (end - start))
}

/// Power-delay product (J).
pub fn pdp(power: f64, delay: f64) -> f64 {
    power * delay
}
