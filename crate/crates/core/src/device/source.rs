//! Independent voltage source waveforms.

use super::DeviceError;

#[derive(Debug, Clone, PartialEq)]
pub enum SourceSpec {
    Dc(f64),
    Pulse {
        v_low: f64,
        v_high: f64,
        delay: f64,
        rise: f64,
        fall: f64,
        width: f64,
        period: f64,
    },
    /// Breakpoints `(time, value)` with strictly increasing times.
    Pwl(Vec<(f64, f64)>),
    Sin {
        offset: f64,
        amplitude: f64,
        frequency: f64,
    },
}

impl SourceSpec {
    pub fn validate(&self) -> Result<(), DeviceError> {
        let bad = |what: &'static str, value: f64, range: &'static str| {
            Err(DeviceError::Domain { what, value, range })
        };
        match self {
            SourceSpec::Dc(v) if !v.is_finite() => bad("dc level", *v, "finite"),
            SourceSpec::Dc(_) => Ok(()),
            SourceSpec::Pulse {
                delay,
                rise,
                fall,
                width,
                period,
                ..
            } => {
                if !(*rise > 0.0) {
                    return bad("pulse rise", *rise, "(0, inf)");
                }
                if !(*fall > 0.0) {
                    return bad("pulse fall", *fall, "(0, inf)");
                }
                if !(*width >= 0.0) {
                    return bad("pulse width", *width, "[0, inf)");
                }
                if !(*delay >= 0.0) {
                    return bad("pulse delay", *delay, "[0, inf)");
                }
                if !(*period >= rise + width + fall) {
                    return bad("pulse period", *period, "period >= rise + width + fall");
                }
                Ok(())
            }
            SourceSpec::Pwl(points) => {
                if points.is_empty() {
                    return bad("pwl points", 0.0, "at least one breakpoint");
                }
                for pair in points.windows(2) {
                    if !(pair[1].0 > pair[0].0) {
                        return bad("pwl time", pair[1].0, "strictly increasing");
                    }
                }
                Ok(())
            }
            SourceSpec::Sin { frequency, .. } if !(*frequency >= 0.0) => {
                bad("sin frequency", *frequency, "[0, inf)")
            }
            SourceSpec::Sin { .. } => Ok(()),
        }
    }

    /// Source voltage at time `t` (s).
    pub fn value(&self, t: f64) -> f64 {
        match self {
            SourceSpec::Dc(v) => *v,
            SourceSpec::Pulse {
                v_low,
                v_high,
                delay,
                rise,
                fall,
                width,
                period,
            } => {
                if t < *delay {
                    return *v_low;
                }
                let tt = (t - delay) % period;
                let swing = v_high - v_low;
                if tt < *rise {
                    v_low + swing * tt / rise
                } else if tt < rise + width {
                    *v_high
                } else if tt < rise + width + fall {
                    v_high - swing * (tt - rise - width) / fall
                } else {
                    *v_low
                }
            }
            SourceSpec::Pwl(points) => pwl_value(points, t),
            SourceSpec::Sin {
                offset,
                amplitude,
                frequency,
            } => offset + amplitude * (2.0 * std::f64::consts::PI * frequency * t).sin(),
        }
    }
}

fn pwl_value(points: &[(f64, f64)], t: f64) -> f64 {
    let Some(&(t0, v0)) = points.first() else {
        return 0.0;
    };
    if t <= t0 {
        return v0;
    }
    let idx = points.partition_point(|&(tp, _)| tp <= t);
    if idx >= points.len() {
        return points[points.len() - 1].1;
    }
    let (ta, va) = points[idx - 1];
    let (tb, vb) = points[idx];
    va + (vb - va) * (t - ta) / (tb - ta)
}

/// Free-function form of [`SourceSpec::value`].
pub fn source_value(spec: &SourceSpec, t: f64) -> f64 {
    spec.value(t)
}
