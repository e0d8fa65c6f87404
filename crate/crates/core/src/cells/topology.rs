use super::{CellConfig, CellError, CellKind};
use crate::device::{MosfetParams, Polarity, SourceSpec};
use crate::netlist::{Element, ModelCard, ModelDevice, Netlist};

/// Pull-down sizing of a hybrid inverter. The memristor pull-up conducts
/// about 1.4 mA near its low-resistance bound, so the NMOS must be wide
/// enough to pull the output well under the low threshold.
const INVERTER_WL: f64 = 40.0;
/// Latch inverters are wider still, which lowers their switching threshold
/// toward the degraded high levels that passive front-end logic delivers.
const LATCH_INVERTER_WL: f64 = 160.0;
/// The XOR pull-down fights two parallel pull-up memristors.
const XOR_PULLDOWN_WL: f64 = 80.0;
const PASS_WL: f64 = 10.0;
/// Parasitic capacitance placed on every internal node.
const NODE_CAP: f64 = 2e-15;
/// Load on each cell output.
const LOAD_CAP: f64 = 200e-15;

/// Clock phase during which a latch follows its input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransparentPhase {
    High,
    Low,
}

struct Builder<'c> {
    config: &'c CellConfig,
    netlist: Netlist,
    elements: Vec<Element>,
    nmos: usize,
    pmos: usize,
    memristors: usize,
    caps: usize,
}

impl<'c> Builder<'c> {
    fn new(kind: CellKind, config: &'c CellConfig) -> Self {
        let mut netlist = Netlist::new(format!("{} cell", kind.name()));
        let n = MosfetParams::nmos();
        let p = MosfetParams::pmos();
        netlist.models.push(
            ModelCard::new(&config.memristor_model, Some(ModelDevice::Memristor))
                .with("tscale", config.time_scale)
                .with("wmargin", config.state_margin),
        );
        for (name, device, params) in [
            (&config.nmos_model, ModelDevice::Nmos, n),
            (&config.pmos_model, ModelDevice::Pmos, p),
        ] {
            netlist.models.push(
                ModelCard::new(name, Some(device))
                    .with("vth", params.vth)
                    .with("kp", params.kprime)
                    .with("lambda", params.lambda),
            );
        }
        let mut b = Self {
            config,
            netlist,
            elements: Vec::new(),
            nmos: 0,
            pmos: 0,
            memristors: 0,
            caps: 0,
        };
        b.source("VDD", "vdd", SourceSpec::Dc(config.vdd));
        b
    }

    /// Input placeholders start at 0 V; testbenches replace their waveforms.
    fn source(&mut self, name: &str, node: &str, spec: SourceSpec) {
        self.elements.push(Element::VSource {
            name: name.into(),
            pos: node.into(),
            neg: "0".into(),
            spec,
        });
    }

    fn input(&mut self, node: &str) {
        self.source(&format!("V{}", node.to_ascii_uppercase()), node, SourceSpec::Dc(0.0));
    }

    fn nmos(&mut self, drain: &str, gate: &str, source: &str, wl: f64) {
        self.nmos += 1;
        self.elements.push(Element::Mosfet {
            name: format!("MN{}", self.nmos),
            polarity: Polarity::N,
            drain: drain.into(),
            gate: gate.into(),
            source: source.into(),
            body: "0".into(),
            model: Some(self.config.nmos_model.clone()),
            w_over_l: Some(wl),
        });
    }

    fn pmos(&mut self, drain: &str, gate: &str, source: &str, wl: f64) {
        self.pmos += 1;
        self.elements.push(Element::Mosfet {
            name: format!("MP{}", self.pmos),
            polarity: Polarity::P,
            drain: drain.into(),
            gate: gate.into(),
            source: source.into(),
            body: "vdd".into(),
            model: Some(self.config.pmos_model.clone()),
            w_over_l: Some(wl),
        });
    }

    fn memristor(&mut self, pos: &str, neg: &str) {
        self.memristors += 1;
        self.elements.push(Element::Memristor {
            name: format!("YM{}", self.memristors),
            pos: pos.into(),
            neg: neg.into(),
            w0: self.config.w0,
            model: Some(self.config.memristor_model.clone()),
        });
    }

    fn cap(&mut self, node: &str, farads: f64) {
        self.caps += 1;
        self.elements.push(Element::Capacitor {
            name: format!("C{}", self.caps),
            a: node.into(),
            b: "0".into(),
            farads,
            initial_volts: None,
        });
    }

    /// Memristor pull-up from the rail with an NMOS pull-down.
    fn inverter(&mut self, input: &str, output: &str) {
        self.sized_inverter(input, output, INVERTER_WL);
    }

    fn sized_inverter(&mut self, input: &str, output: &str, wl: f64) {
        self.memristor("vdd", output);
        self.nmos(output, input, "0", wl);
    }

    /// Two memristors whose negative terminals meet at `out`.
    fn or_pair(&mut self, a: &str, b: &str, out: &str) {
        self.memristor(a, out);
        self.memristor(b, out);
    }

    /// Two memristors whose positive terminals meet at `out`.
    fn and_pair(&mut self, a: &str, b: &str, out: &str) {
        self.memristor(out, a);
        self.memristor(out, b);
    }

    fn transmission_gate(&mut self, from: &str, to: &str, n_gate: &str, p_gate: &str) {
        self.nmos(to, n_gate, from, PASS_WL);
        self.pmos(to, p_gate, from, PASS_WL);
    }

    /// Six-transistor, four-memristor latch body without its clock inverter.
    /// Output nodes are `{prefix}q` and `{prefix}qb`.
    fn latch(&mut self, prefix: &str, d: &str, phase: TransparentPhase) {
        let (on, off) = match phase {
            TransparentPhase::High => ("clk", "clkb"),
            TransparentPhase::Low => ("clkb", "clk"),
        };
        let x = format!("{prefix}x");
        let y = format!("{prefix}y");
        let qb = format!("{prefix}qb");
        let q = format!("{prefix}q");
        self.transmission_gate(d, &x, on, off);
        self.nmos(&x, off, &y, PASS_WL);
        self.sized_inverter(&x, &qb, LATCH_INVERTER_WL);
        self.sized_inverter(&qb, &q, LATCH_INVERTER_WL);
        self.memristor(&q, &y);
        for node in [&x, &y, &qb] {
            self.cap(node, NODE_CAP);
        }
        self.cap(&q, if prefix.is_empty() { LOAD_CAP } else { NODE_CAP });
    }

    fn clock(&mut self) {
        self.source("VCLK", "clk", SourceSpec::Dc(0.0));
        self.inverter("clk", "clkb");
        self.cap("clkb", NODE_CAP);
    }

    /// The rail source is emitted only when something connects to it.
    fn finish(mut self) -> Netlist {
        let uses_rail = self
            .elements
            .iter()
            .any(|e| e.name() != "VDD" && e.terminals().contains(&"vdd"));
        if !uses_rail {
            self.elements.retain(|e| e.name() != "VDD");
        }
        for element in self.elements {
            self.netlist.push(element);
        }
        self.netlist
    }
}

/// Combinational cell with inputs `a` (and `b`) and output `out`.
pub fn build_gate(kind: CellKind, config: &CellConfig) -> Result<Netlist, CellError> {
    config.validate()?;
    if !kind.is_gate() {
        return Err(CellError::Config(format!("{kind} is not a combinational gate")));
    }
    let mut b = Builder::new(kind, config);
    for input in kind.inputs() {
        b.input(input);
    }
    match kind {
        CellKind::Not => b.inverter("a", "out"),
        CellKind::Or => b.or_pair("a", "b", "out"),
        CellKind::And => b.and_pair("a", "b", "out"),
        CellKind::Nand => {
            b.and_pair("a", "b", "n1");
            b.inverter("n1", "out");
            b.cap("n1", NODE_CAP);
        }
        CellKind::Nor => {
            b.or_pair("a", "b", "n1");
            b.inverter("n1", "out");
            b.cap("n1", NODE_CAP);
        }
        CellKind::Xor => {
            b.or_pair("a", "b", "out");
            b.and_pair("a", "b", "n1");
            b.nmos("out", "n1", "0", XOR_PULLDOWN_WL);
            b.cap("n1", NODE_CAP);
        }
        _ => unreachable!("sequential kinds rejected above"),
    }
    b.cap("out", LOAD_CAP);
    Ok(b.finish())
}

/// Standalone latch with data input `d`, clock `clk`, outputs `q`/`qb`.
pub fn build_d_latch(config: &CellConfig, phase: TransparentPhase) -> Result<Netlist, CellError> {
    config.validate()?;
    let mut b = Builder::new(CellKind::DLatch, config);
    b.input("d");
    b.clock();
    b.latch("", "d", phase);
    Ok(b.finish())
}

/// Rising-edge master-slave flip-flop. The master is transparent while the
/// clock is low, the slave while it is high; the D input is derived from
/// the cell inputs and the slave outputs by the kind's front-end logic.
pub fn build_flipflop(kind: CellKind, config: &CellConfig) -> Result<Netlist, CellError> {
    config.validate()?;
    if !kind.is_flipflop() {
        return Err(CellError::Config(format!("{kind} is not a flip-flop")));
    }
    let mut b = Builder::new(kind, config);
    for input in kind.inputs() {
        b.input(input);
    }
    b.clock();
    let d = match kind {
        CellKind::DFf => "d",
        CellKind::TFf => {
            // The XOR pull-down would drag a loaded Q below the high
            // threshold, so the XOR reads QB and the master's inverted
            // output restores the polarity.
            b.or_pair("t", "qb", "dn");
            b.and_pair("t", "qb", "tq");
            b.nmos("dn", "tq", "0", XOR_PULLDOWN_WL);
            b.cap("tq", NODE_CAP);
            "dn"
        }
        CellKind::SrFf => {
            b.inverter("r", "rb");
            b.and_pair("rb", "q", "hold");
            b.or_pair("s", "hold", "dn");
            b.cap("rb", NODE_CAP);
            b.cap("hold", NODE_CAP);
            "dn"
        }
        CellKind::JkFf => {
            b.inverter("k", "kb");
            b.and_pair("j", "qb", "set");
            b.and_pair("kb", "q", "hold");
            b.or_pair("set", "hold", "dn");
            b.cap("kb", NODE_CAP);
            b.cap("set", NODE_CAP);
            b.cap("hold", NODE_CAP);
            "dn"
        }
        _ => unreachable!("non flip-flop kinds rejected above"),
    };
    if d != "d" {
        b.cap(d, NODE_CAP);
    }
    b.latch("m_", d, TransparentPhase::Low);
    let master_out = if kind == CellKind::TFf { "m_qb" } else { "m_q" };
    b.latch("", master_out, TransparentPhase::High);
    Ok(b.finish())
}

/// Generator dispatch. The D latch is built transparent-low so that its
/// sampling phase aligns with the master of the flip-flops.
pub fn build_cell(kind: CellKind, config: &CellConfig) -> Result<Netlist, CellError> {
    match kind {
        CellKind::DLatch => build_d_latch(config, TransparentPhase::Low),
        k if k.is_gate() => build_gate(k, config),
        k => build_flipflop(k, config),
    }
}
