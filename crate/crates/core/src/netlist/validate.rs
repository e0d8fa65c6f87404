use std::collections::{HashMap, HashSet};
use std::fmt;

use super::{Directive, Element, Netlist};
use crate::device::{MemristorParams, MosfetParams, SourceSpec};

/// Name of the reference node.
pub const GROUND: &str = "0";

/// A structured validation finding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub element: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(e) = &self.element {
            write!(f, "{e}: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for Diagnostic {}

/// An element with node names resolved to indices (0 is ground) and model
/// parameters resolved against the netlist's `.MODEL` cards.
#[derive(Debug, Clone, PartialEq)]
pub enum Device {
    VSource {
        pos: usize,
        neg: usize,
        spec: SourceSpec,
    },
    Resistor {
        a: usize,
        b: usize,
        conductance: f64,
    },
    Capacitor {
        a: usize,
        b: usize,
        farads: f64,
        initial_volts: Option<f64>,
    },
    Mosfet {
        drain: usize,
        gate: usize,
        source: usize,
        params: MosfetParams,
    },
    Memristor {
        pos: usize,
        neg: usize,
        w0: f64,
        params: MemristorParams,
    },
}

/// A validated netlist ready for simulation. Immutable once built.
#[derive(Debug, Clone)]
pub struct Circuit {
    netlist: Netlist,
    nodes: Vec<String>,
    node_index: HashMap<String, usize>,
    devices: Vec<Device>,
    initial_conditions: Vec<(usize, f64)>,
}

impl Circuit {
    pub fn netlist(&self) -> &Netlist {
        &self.netlist
    }

    /// Node names; index 0 is ground.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node(&self, name: &str) -> Option<usize> {
        self.node_index.get(name).copied()
    }

    /// Devices in element order.
    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn element_name(&self, index: usize) -> &str {
        self.netlist.elements[index].name()
    }

    /// `.IC` node overrides as `(node index, volts)`.
    pub fn initial_conditions(&self) -> &[(usize, f64)] {
        &self.initial_conditions
    }

    pub fn tran(&self) -> Option<(f64, f64)> {
        self.netlist.tran()
    }
}

/// Validates a parsed netlist and resolves it into a [`Circuit`].
pub fn validate(netlist: &Netlist) -> Result<Circuit, Vec<Diagnostic>> {
    validate_inner(netlist, false)
}

/// As [`validate`], additionally requiring a `.TRAN` directive.
pub fn validate_for_simulation(netlist: &Netlist) -> Result<Circuit, Vec<Diagnostic>> {
    validate_inner(netlist, true)
}

fn validate_inner(netlist: &Netlist, require_analysis: bool) -> Result<Circuit, Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut nodes = vec![GROUND.to_string()];
    let mut node_index: HashMap<String, usize> = HashMap::from([(GROUND.to_string(), 0)]);
    let mut attachments: Vec<usize> = vec![0];
    let mut gate_only_ok: Vec<bool> = vec![false];
    let mut names = HashSet::new();
    let mut devices = Vec::with_capacity(netlist.elements.len());

    let mut intern = |name: &str, attachments: &mut Vec<usize>, gate_ok: &mut Vec<bool>| -> usize {
        if let Some(&i) = node_index.get(name) {
            return i;
        }
        let i = nodes.len();
        nodes.push(name.to_string());
        node_index.insert(name.to_string(), i);
        attachments.push(0);
        gate_ok.push(false);
        i
    };

    for (idx, element) in netlist.elements.iter().enumerate() {
        let line = netlist.element_line(idx);
        let name = element.name().to_string();
        let mut report = |message: String| {
            diags.push(Diagnostic {
                line,
                element: Some(name.clone()),
                message,
            })
        };
        if !names.insert(name.to_ascii_lowercase()) {
            report("duplicate element name".to_string());
        }
        let terminals: Vec<usize> = element
            .terminals()
            .into_iter()
            .map(|n| intern(n, &mut attachments, &mut gate_only_ok))
            .collect();
        for (k, &t) in terminals.iter().enumerate() {
            attachments[t] += 1;
            if matches!(element, Element::Mosfet { .. }) && k == 1 {
                gate_only_ok[t] = true;
            }
        }
        let device = match element {
            Element::VSource { spec, .. } => {
                if let Err(e) = spec.validate() {
                    report(e.to_string());
                }
                Some(Device::VSource {
                    pos: terminals[0],
                    neg: terminals[1],
                    spec: spec.clone(),
                })
            }
            Element::Resistor { ohms, .. } => {
                if !(*ohms > 0.0) || !ohms.is_finite() {
                    report(format!("resistance must be positive, got {ohms}"));
                }
                Some(Device::Resistor {
                    a: terminals[0],
                    b: terminals[1],
                    conductance: 1.0 / ohms,
                })
            }
            Element::Capacitor {
                farads, initial_volts, ..
            } => {
                if !(*farads > 0.0) || !farads.is_finite() {
                    report(format!("capacitance must be positive, got {farads}"));
                }
                Some(Device::Capacitor {
                    a: terminals[0],
                    b: terminals[1],
                    farads: *farads,
                    initial_volts: *initial_volts,
                })
            }
            Element::Mosfet {
                polarity,
                model,
                w_over_l,
                ..
            } => {
                let params = match model {
                    None => Ok(MosfetParams::default_for(*polarity)),
                    Some(m) => match netlist.model(m) {
                        Some(card) => card.mosfet_params(*polarity),
                        None => Err(format!("unknown model '{m}'")),
                    },
                };
                match params {
                    Ok(mut params) => {
                        if let Some(wl) = w_over_l {
                            params.w_over_l = *wl;
                        }
                        match params.validate() {
                            Ok(params) => Some(Device::Mosfet {
                                drain: terminals[0],
                                gate: terminals[1],
                                source: terminals[2],
                                params,
                            }),
                            Err(e) => {
                                report(e.to_string());
                                None
                            }
                        }
                    }
                    Err(msg) => {
                        report(msg);
                        None
                    }
                }
            }
            Element::Memristor { w0, model, .. } => {
                if !(0.0..=1.0).contains(w0) {
                    report(format!("initial state w0 = {w0} outside [0, 1]"));
                }
                let params = match model {
                    None => Ok(MemristorParams::default()),
                    Some(m) => match netlist.model(m) {
                        Some(card) => card.memristor_params(),
                        None => Err(format!("unknown model '{m}'")),
                    },
                };
                match params {
                    Ok(params) => Some(Device::Memristor {
                        pos: terminals[0],
                        neg: terminals[1],
                        w0: *w0,
                        params,
                    }),
                    Err(msg) => {
                        report(msg);
                        None
                    }
                }
            }
        };
        if let Some(d) = device {
            devices.push(d);
        }
    }

    let has_ground = netlist
        .elements
        .iter()
        .any(|e| e.terminals().contains(&GROUND));
    if !has_ground {
        diags.push(Diagnostic {
            line: None,
            element: None,
            message: "no ground node: no element connects to node 0".to_string(),
        });
    }
    for (i, name) in nodes.iter().enumerate().skip(1) {
        if attachments[i] < 2 && !gate_only_ok[i] {
            diags.push(Diagnostic {
                line: None,
                element: None,
                message: format!("dangling node '{name}' has only {} terminal(s) attached", attachments[i]),
            });
        }
    }

    let mut initial_conditions = Vec::new();
    let mut has_tran = false;
    for directive in &netlist.analyses {
        match directive {
            Directive::Tran { step, stop } => {
                has_tran = true;
                if !(*step > 0.0 && step.is_finite()) {
                    diags.push(Diagnostic {
                        line: None,
                        element: None,
                        message: format!(".TRAN step must be positive, got {step}"),
                    });
                } else if !(stop > step) || !stop.is_finite() {
                    diags.push(Diagnostic {
                        line: None,
                        element: None,
                        message: format!(".TRAN stop {stop} must exceed step {step}"),
                    });
                }
            }
            Directive::Ic { node, volts } => match node_index.get(node) {
                Some(0) => diags.push(Diagnostic {
                    line: None,
                    element: None,
                    message: ".IC cannot set the ground node".to_string(),
                }),
                Some(&i) if volts.is_finite() => initial_conditions.push((i, *volts)),
                Some(_) => diags.push(Diagnostic {
                    line: None,
                    element: None,
                    message: format!(".IC {node} is not finite"),
                }),
                None => diags.push(Diagnostic {
                    line: None,
                    element: None,
                    message: format!(".IC refers to unknown node '{node}'"),
                }),
            },
        }
    }
    if require_analysis && !has_tran {
        diags.push(Diagnostic {
            line: None,
            element: None,
            message: "no analysis directive: .TRAN is required for simulation".to_string(),
        });
    }

    if diags.is_empty() {
        Ok(Circuit {
            netlist: netlist.clone(),
            nodes,
            node_index,
            devices,
            initial_conditions,
        })
    } else {
        Err(diags)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netlist::parse;

    #[test]
    fn missing_ground() {
        let n = parse("V1 a b DC 1\nR1 a b 1k\n").unwrap();
        let diags = validate(&n).unwrap_err();
        assert!(diags.iter().any(|d| d.message.contains("no ground node")));
    }

    #[test]
    fn w0_out_of_range() {
        let n = parse("V1 a 0 DC 1\nYM1 a 0 w0=1.5\n").unwrap();
        let diags = validate(&n).unwrap_err();
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("w0"));
        assert_eq!(diags[0].line, Some(2));
    }

    #[test]
    fn dangling_node_rejected_but_gate_allowed() {
        let n = parse("V1 a 0 DC 1\nR1 a b 1k\n").unwrap();
        let diags = validate(&n).unwrap_err();
        assert!(diags[0].message.contains("dangling node 'b'"));

        let n = parse("V1 a 0 DC 1\nR1 a 0 1k\nMN1 a g 0 0\n").unwrap();
        assert!(validate(&n).is_ok());
    }

    #[test]
    fn simulation_requires_tran() {
        let n = parse("V1 a 0 DC 1\nR1 a 0 1k\n").unwrap();
        assert!(validate(&n).is_ok());
        assert!(validate_for_simulation(&n).is_err());
    }

    #[test]
    fn resolves_models_and_nodes() {
        let n = parse(".MODEL fast (tscale=1e13)\nV1 a 0 DC 1\nYM1 a 0 model=fast\n.IC a=0.5\n").unwrap();
        let c = validate(&n).unwrap();
        assert_eq!(c.node("a"), Some(1));
        match &c.devices()[1] {
            Device::Memristor { params, w0, .. } => {
                assert_eq!(params.time_scale, 1e13);
                assert_eq!(*w0, 0.5);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(c.initial_conditions(), &[(1, 0.5)]);
    }

    #[test]
    fn unknown_model_and_ic_node() {
        let n = parse("V1 a 0 DC 1\nYM1 a 0 model=nope\n.IC zz=1\n").unwrap();
        let diags = validate(&n).unwrap_err();
        assert_eq!(diags.len(), 2);
    }
}
