//! Level-1 square-law MOSFET used as the CMOS stand-in.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    N,
    P,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MosfetParams {
    pub polarity: Polarity,
    /// Threshold voltage; for P devices this is |Vth|.
    pub vth: f64,
    /// Process transconductance k' (A/V^2).
    pub kprime: f64,
    /// Channel-length modulation (1/V).
    pub lambda: f64,
    pub w_over_l: f64,
}

impl MosfetParams {
    pub fn nmos() -> Self {
        Self {
            polarity: Polarity::N,
            vth: 0.25,
            kprime: 300e-6,
            lambda: 0.1,
            w_over_l: 10.0,
        }
    }

    pub fn pmos() -> Self {
        Self {
            polarity: Polarity::P,
            kprime: 120e-6,
            ..Self::nmos()
        }
    }

    pub fn default_for(polarity: Polarity) -> Self {
        match polarity {
            Polarity::N => Self::nmos(),
            Polarity::P => Self::pmos(),
        }
    }

    pub fn validate(self) -> Result<Self, super::DeviceError> {
        use super::DeviceError::Constraint;
        if !(self.kprime > 0.0 && self.kprime.is_finite()) {
            return Err(Constraint {
                name: "kp",
                value: self.kprime,
                constraint: "kprime > 0",
            });
        }
        if !(self.w_over_l > 0.0 && self.w_over_l.is_finite()) {
            return Err(Constraint {
                name: "wl",
                value: self.w_over_l,
                constraint: "w_over_l > 0",
            });
        }
        if !(self.vth > 0.0 && self.vth.is_finite()) {
            return Err(Constraint {
                name: "vth",
                value: self.vth,
                constraint: "vth > 0",
            });
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Constraint {
                name: "lambda",
                value: self.lambda,
                constraint: "lambda >= 0",
            });
        }
        Ok(self)
    }

    fn beta(&self) -> f64 {
        self.kprime * self.w_over_l
    }

    /// Forward-mode drain current for an N-type view with `vds >= 0`.
    fn forward(&self, vgs: f64, vds: f64) -> MosfetOp {
        let vov = vgs - self.vth;
        if vov <= 0.0 {
            return MosfetOp::default();
        }
        let beta = self.beta();
        let clm = 1.0 + self.lambda * vds;
        if vds < vov {
            let core = vov * vds - 0.5 * vds * vds;
            MosfetOp {
                id: beta * core * clm,
                gm: beta * vds * clm,
                gds: beta * ((vov - vds) * clm + core * self.lambda),
            }
        } else {
            let core = 0.5 * vov * vov;
            MosfetOp {
                id: beta * core * clm,
                gm: beta * vov * clm,
                gds: beta * core * self.lambda,
            }
        }
    }

    /// Drain current and its partial derivatives at the given terminal
    /// voltages. Handles P polarity and source/drain reversal (`vds < 0`).
    pub fn evaluate(&self, vgs: f64, vds: f64) -> MosfetOp {
        let sign = match self.polarity {
            Polarity::N => 1.0,
            Polarity::P => -1.0,
        };
        let (vgs_n, vds_n) = (sign * vgs, sign * vds);
        let op = if vds_n >= 0.0 {
            self.forward(vgs_n, vds_n)
        } else {
            // Terminals swap roles: the drain acts as the source.
            let r = self.forward(vgs_n - vds_n, -vds_n);
            MosfetOp {
                id: -r.id,
                gm: -r.gm,
                gds: r.gm + r.gds,
            }
        };
        // d(sign*f(sign*x))/dx = f'(sign*x), so only the current flips.
        MosfetOp {
            id: sign * op.id,
            gm: op.gm,
            gds: op.gds,
        }
    }
}

/// Drain current (A) flowing into the drain terminal.
pub fn mosfet_current(params: &MosfetParams, vgs: f64, vds: f64) -> f64 {
    params.evaluate(vgs, vds).id
}

/// Drain current with `gm = dId/dVgs` and `gds = dId/dVds`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct MosfetOp {
    pub id: f64,
    pub gm: f64,
    pub gds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_n() -> MosfetParams {
        MosfetParams {
            polarity: Polarity::N,
            vth: 0.25,
            kprime: 300e-6,
            lambda: 0.1,
            w_over_l: 10.0,
        }
    }

    #[test]
    fn cutoff() {
        assert_eq!(mosfet_current(&MosfetParams::nmos(), 0.0, 1.2), 0.0);
        assert_eq!(mosfet_current(&MosfetParams::nmos(), 0.25, 1.2), 0.0);
    }

    #[test]
    fn saturation_value() {
        let id = mosfet_current(&reference_n(), 1.2, 1.2);
        let expected = 0.5 * 300e-6 * 10.0 * 0.95f64.powi(2) * 1.12;
        assert!((id - expected).abs() < 1e-15);
        assert!((id - 1.5162e-3).abs() < 1e-7);
    }

    #[test]
    fn region_boundary_agrees() {
        let p = reference_n();
        let vgs = 0.9;
        let vov = vgs - p.vth;
        let beta = p.kprime * p.w_over_l;
        let clm = 1.0 + p.lambda * vov;
        let triode = beta * (vov * vov - 0.5 * vov * vov) * clm;
        let sat = 0.5 * beta * vov * vov * clm;
        assert_eq!(triode, sat);
        let below = mosfet_current(&p, vgs, vov * (1.0 - 1e-12));
        let at = mosfet_current(&p, vgs, vov);
        assert!((below - at).abs() < 1e-15);
    }

    #[test]
    fn pmos_mirrors_nmos() {
        let p = MosfetParams {
            polarity: Polarity::P,
            ..reference_n()
        };
        let n = reference_n();
        assert_eq!(mosfet_current(&p, -1.0, -0.3), -mosfet_current(&n, 1.0, 0.3));
    }

    #[test]
    fn reversed_channel_is_antisymmetric() {
        let n = reference_n();
        // Swapping drain and source negates the current.
        let fwd = mosfet_current(&n, 1.0, 0.4);
        let rev = mosfet_current(&n, 1.0 - 0.4, -0.4);
        assert!((fwd + rev).abs() < 1e-18);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-7;
        for params in [reference_n(), MosfetParams::pmos()] {
            let s = if params.polarity == Polarity::N { 1.0 } else { -1.0 };
            for &(vgs, vds) in &[(1.0, 0.2), (1.0, 1.1), (0.6, -0.3), (1.2, -1.0), (0.8, 0.57)] {
                let (vgs, vds) = (s * vgs, s * vds);
                let op = params.evaluate(vgs, vds);
                let gm = (mosfet_current(&params, vgs + h, vds) - mosfet_current(&params, vgs - h, vds)) / (2.0 * h);
                let gds = (mosfet_current(&params, vgs, vds + h) - mosfet_current(&params, vgs, vds - h)) / (2.0 * h);
                assert!((op.gm - gm).abs() <= 1e-6 * gm.abs().max(1e-6), "gm {} vs {gm}", op.gm);
                assert!((op.gds - gds).abs() <= 1e-6 * gds.abs().max(1e-6), "gds {} vs {gds}", op.gds);
            }
        }
    }
}
