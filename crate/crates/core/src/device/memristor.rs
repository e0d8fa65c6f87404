//! Compact memristor model: exponential current law with a state-dependent
//! prefactor, a piecewise logarithmic window, and an odd-power state rate.

use super::DeviceError;

/// Largest exponent evaluated directly. Beyond it the exponential is
/// continued linearly so Newton keeps a finite, nonzero slope.
pub const EXP_LIMIT: f64 = 80.0;

/// Largest change of `w` allowed in one explicit sub-step of [`advance_state`].
pub const MAX_STATE_STEP: f64 = 0.01;

/// Model constants. Defaults reproduce the fitted device parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorParams {
    /// Fitting coefficient of the positive branch (A).
    pub b1: f64,
    /// Fitting coefficient of the negative branch (A).
    pub b2: f64,
    /// State exponent under positive bias.
    pub a1: f64,
    /// State exponent under negative bias.
    pub a2: f64,
    /// Hysteresis-area parameter under positive bias (1/V).
    pub alpha1: f64,
    /// Hysteresis-area parameter under negative bias (1/V).
    pub alpha2: f64,
    /// Diode magnitude (A).
    pub chi: f64,
    /// Diode exponent (1/V).
    pub gamma: f64,
    /// State-rate prefactor (V^-m s^-1).
    pub a_rate: f64,
    /// Odd exponent applied to the drive voltage in the state rate.
    pub m: u32,
    /// Window exponent, `0 < p <= 10`.
    pub p: f64,
    /// Multiplier on `a_rate`. 1 reproduces the fitted device; cell
    /// benchmarks raise it so switching completes within a clock phase.
    pub time_scale: f64,
    /// Distance kept between `w` and the hard bounds 0 and 1 during
    /// integration. Zero keeps the plain `[0, 1]` clamp.
    pub state_margin: f64,
}

impl Default for MemristorParams {
    fn default() -> Self {
        Self {
            b1: 1.59e-3,
            b2: -6.2e-4,
            a1: 1.2,
            a2: 0.3,
            alpha1: 0.60,
            alpha2: -0.68,
            chi: 1e-11,
            gamma: 1.0,
            a_rate: 5e-4,
            m: 5,
            p: 2.0,
            time_scale: 1.0,
            state_margin: 0.0,
        }
    }
}

impl MemristorParams {
    /// Checks the model constraints, returning the parameters unchanged when
    /// they hold.
    pub fn validate(self) -> Result<Self, DeviceError> {
        let reject = |name: &'static str, value: f64, constraint: &'static str| {
            Err(DeviceError::Constraint {
                name,
                value,
                constraint,
            })
        };
        let finite = [
            ("b1", self.b1),
            ("b2", self.b2),
            ("a1", self.a1),
            ("a2", self.a2),
            ("alpha1", self.alpha1),
            ("alpha2", self.alpha2),
            ("chi", self.chi),
            ("gamma", self.gamma),
            ("a", self.a_rate),
            ("p", self.p),
            ("tscale", self.time_scale),
            ("wmargin", self.state_margin),
        ];
        for (name, value) in finite {
            if !value.is_finite() {
                return reject(name, value, "must be finite");
            }
        }
        if !(self.p > 0.0 && self.p <= 10.0) {
            // p above 10 lifts the window plateau p*ln(1.1) above 1.
            return reject("p", self.p, "0 < p <= 10");
        }
        if self.m == 0 || self.m.is_multiple_of(2) {
            return reject("m", f64::from(self.m), "m must be an odd integer >= 1");
        }
        if self.time_scale <= 0.0 {
            return reject("tscale", self.time_scale, "time_scale > 0");
        }
        if self.chi < 0.0 {
            return reject("chi", self.chi, "chi >= 0");
        }
        if self.gamma <= 0.0 {
            return reject("gamma", self.gamma, "gamma > 0");
        }
        if !(0.0..0.5).contains(&self.state_margin) {
            return reject("wmargin", self.state_margin, "0 <= state_margin < 0.5");
        }
        Ok(self)
    }

    /// Lower and upper integration bounds for `w`.
    pub fn state_bounds(&self) -> (f64, f64) {
        (self.state_margin, 1.0 - self.state_margin)
    }
}

/// Free-function form of [`MemristorParams::validate`].
pub fn validate_params(params: MemristorParams) -> Result<MemristorParams, DeviceError> {
    params.validate()
}

/// `e^x`, continued linearly above [`EXP_LIMIT`]. Returns the value, its
/// derivative, and whether the limit was hit.
fn limited_exp(x: f64) -> (f64, f64, bool) {
    if x > EXP_LIMIT {
        let e = EXP_LIMIT.exp();
        (e * (1.0 + (x - EXP_LIMIT)), e, true)
    } else {
        let e = x.exp();
        (e, e, false)
    }
}

fn check_state(w: f64) -> Result<(), DeviceError> {
    if !w.is_finite() {
        return Err(DeviceError::NonFinite { what: "w", value: w });
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(DeviceError::Domain {
            what: "w",
            value: w,
            range: "[0, 1]",
        });
    }
    Ok(())
}

fn check_voltage(v: f64) -> Result<(), DeviceError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(DeviceError::NonFinite { what: "v", value: v })
    }
}

/// Piecewise window: `p ln(1+w)` near 0, `p ln(1.1)` on the plateau and
/// `p ln(2-w)` near 1.
pub fn window(w: f64, p: f64) -> Result<f64, DeviceError> {
    check_state(w)?;
    if !(p > 0.0 && p <= 10.0) {
        return Err(DeviceError::Domain {
            what: "p",
            value: p,
            range: "(0, 10]",
        });
    }
    let f = if w <= 0.1 {
        p * w.ln_1p()
    } else if w <= 0.9 {
        p * 1.1f64.ln()
    } else {
        p * (2.0 - w).ln()
    };
    Ok(f)
}

/// Current and small-signal conductance at one bias point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorOp {
    pub current: f64,
    pub conductance: f64,
    /// An exponent exceeded [`EXP_LIMIT`] and was continued linearly.
    pub saturated: bool,
}

/// Evaluates the current law and its exact derivative in `v`.
///
/// `v` is the voltage from the positive to the negative terminal; the branch
/// is chosen by its sign.
pub fn memristor_eval(w: f64, v: f64, params: &MemristorParams) -> Result<MemristorOp, DeviceError> {
    check_state(w)?;
    check_voltage(v)?;
    let (b, a, alpha) = if v >= 0.0 {
        (params.b1, params.a1, params.alpha1)
    } else {
        (params.b2, params.a2, params.alpha2)
    };
    let prefactor = b * w.powf(a);
    let (em, dem, sat_m) = limited_exp(alpha * v);
    let (ed, ded, sat_d) = limited_exp(params.gamma * v);
    let current = prefactor * (em - 1.0) + params.chi * (ed - 1.0);
    let conductance = prefactor * alpha * dem + params.chi * params.gamma * ded;
    let saturated = sat_m || sat_d;
    if saturated {
        log::warn!("memristor exponent above {EXP_LIMIT} at v = {v:.4} V; continued linearly");
    }
    Ok(MemristorOp {
        current,
        conductance,
        saturated,
    })
}

/// Device current (A) at state `w` and terminal voltage `v`.
pub fn memristor_current(w: f64, v: f64, params: &MemristorParams) -> Result<f64, DeviceError> {
    memristor_eval(w, v, params).map(|op| op.current)
}

/// Analytic `dI/dV` (S) of the active branch.
pub fn memristor_conductance(w: f64, v: f64, params: &MemristorParams) -> Result<f64, DeviceError> {
    memristor_eval(w, v, params).map(|op| op.conductance)
}

/// `dw/dt = time_scale * A * v^m * f(w)` in 1/s.
pub fn state_rate(w: f64, v: f64, params: &MemristorParams) -> Result<f64, DeviceError> {
    check_voltage(v)?;
    let f = window(w, params.p)?;
    // powi keeps (-v)^m == -(v^m) bit for bit when m is odd.
    let drive = v.powi(params.m as i32);
    let rate = params.time_scale * params.a_rate * drive * f;
    if rate.is_finite() {
        Ok(rate)
    } else {
        Err(DeviceError::NonFinite {
            what: "state rate",
            value: rate,
        })
    }
}

/// Integrates the state over `dt` with the terminal voltage held at `v`.
///
/// Explicit sub-steps never move `w` by more than [`MAX_STATE_STEP`]; the
/// result is clamped to the integration bounds.
pub fn advance_state(w: f64, v: f64, dt: f64, params: &MemristorParams) -> Result<f64, DeviceError> {
    check_state(w)?;
    check_voltage(v)?;
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DeviceError::Domain {
            what: "dt",
            value: dt,
            range: "(0, inf)",
        });
    }
    let (lo, hi) = params.state_bounds();
    let mut w = w.clamp(lo, hi);
    let mut remaining = dt;
    while remaining > 0.0 {
        let rate = state_rate(w, v, params)?;
        if rate == 0.0 || (rate < 0.0 && w <= lo) || (rate > 0.0 && w >= hi) {
            break;
        }
        let h = remaining.min(MAX_STATE_STEP / rate.abs());
        if h <= remaining * f64::EPSILON {
            return Err(DeviceError::NonFinite {
                what: "state sub-step",
                value: h,
            });
        }
        w = (w + rate * h).clamp(lo, hi);
        remaining -= h;
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> MemristorParams {
        MemristorParams::default()
    }

    #[test]
    fn window_examples() {
        assert_eq!(window(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(window(1.0, 2.0).unwrap(), 0.0);
        assert!((window(0.5, 2.0).unwrap() - 0.190_620_360_4).abs() < 1e-9);
        assert!((window(0.05, 2.0).unwrap() - 0.097_580_328_4).abs() < 1e-9);
    }

    #[test]
    fn window_is_continuous_at_breakpoints() {
        for p in [0.5, 2.0, 10.0] {
            let plateau = p * 1.1f64.ln();
            assert!((window(0.1, p).unwrap() - plateau).abs() < 1e-15);
            assert!((window(0.1 + 1e-12, p).unwrap() - plateau).abs() < 1e-11);
            assert!((window(0.9, p).unwrap() - plateau).abs() < 1e-15);
            assert!((window(0.9 + 1e-12, p).unwrap() - plateau).abs() < 1e-11);
        }
    }

    #[test]
    fn window_rejects_out_of_range() {
        assert!(window(-0.01, 2.0).is_err());
        assert!(window(1.01, 2.0).is_err());
        assert!(window(0.5, 0.0).is_err());
        assert!(window(0.5, 10.5).is_err());
    }

    #[test]
    fn current_examples() {
        let p = defaults();
        assert_eq!(memristor_current(0.3, 0.0, &p).unwrap(), 0.0);
        let pos = memristor_current(0.5, 1.0, &p).unwrap();
        assert!((pos - 5.690e-4).abs() < 5e-7, "{pos}");
        let neg = memristor_current(0.5, -1.0, &p).unwrap();
        assert!((neg + 4.904e-4).abs() < 5e-7, "{neg}");
    }

    #[test]
    fn conductance_examples() {
        let p = defaults();
        let g0 = memristor_conductance(0.5, 0.0, &p).unwrap();
        assert!((g0 - 4.153e-4).abs() < 5e-7, "{g0}");
        let g_off = memristor_conductance(0.0, 1.0, &p).unwrap();
        assert!((g_off - 2.718e-11).abs() < 1e-14, "{g_off}");
    }

    #[test]
    fn state_rate_examples() {
        let p = defaults();
        assert_eq!(state_rate(0.5, 0.0, &p).unwrap(), 0.0);
        assert_eq!(state_rate(0.0, 1.3, &p).unwrap(), 0.0);
        assert_eq!(state_rate(1.0, -0.7, &p).unwrap(), 0.0);
        let r = state_rate(0.5, 1.0, &p).unwrap();
        assert!((r - 9.531e-5).abs() < 1e-8, "{r}");
    }

    #[test]
    fn advance_state_zero_drive_is_identity() {
        assert_eq!(advance_state(0.5, 0.0, 1e-9, &defaults()).unwrap(), 0.5);
    }

    #[test]
    fn advance_state_rejects_bad_dt() {
        assert!(advance_state(0.5, 1.0, 0.0, &defaults()).is_err());
        assert!(advance_state(0.5, 1.0, -1.0, &defaults()).is_err());
    }

    #[test]
    fn advance_state_respects_margin() {
        let p = MemristorParams {
            time_scale: 1e13,
            state_margin: 1e-3,
            ..defaults()
        };
        let down = advance_state(0.5, -1.2, 1e-6, &p).unwrap();
        assert_eq!(down, 1e-3);
        let up = advance_state(0.5, 1.2, 1e-6, &p).unwrap();
        assert_eq!(up, 1.0 - 1e-3);
        // A margin-pinned state can still leave the bound.
        assert!(advance_state(down, 1.2, 1e-10, &p).unwrap() > down);
    }

    #[test]
    fn validation() {
        assert!(defaults().validate().is_ok());
        let err = MemristorParams { p: 11.0, ..defaults() }.validate().unwrap_err();
        assert!(err.to_string().contains('p'));
        let err = MemristorParams { m: 4, ..defaults() }.validate().unwrap_err();
        assert!(err.to_string().contains("odd"));
        assert!(MemristorParams { time_scale: 0.0, ..defaults() }.validate().is_err());
        assert!(MemristorParams { chi: -1.0, ..defaults() }.validate().is_err());
        assert!(MemristorParams { gamma: 0.0, ..defaults() }.validate().is_err());
    }

    #[test]
    fn exponent_overflow_continues_linearly() {
        let p = defaults();
        let op = memristor_eval(0.5, 100.0, &p).unwrap();
        assert!(op.saturated);
        assert!(op.current.is_finite() && op.conductance > 0.0);
        assert!(memristor_eval(0.5, f64::NAN, &p).is_err());
    }
}
