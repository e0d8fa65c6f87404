//! Textual circuit description: data model, parser, serializer and
//! validation into a solver-ready [`Circuit`].

mod model;
mod parse;
mod serialize;
mod validate;
mod value;

pub use model::{ModelCard, ModelDevice, MEMRISTOR_KEYS, MOSFET_KEYS};
pub use parse::{parse, ParseError};
pub use serialize::{format_value, serialize};
pub use validate::{validate, validate_for_simulation, Circuit, Device, Diagnostic, GROUND};
pub use value::parse_value;

use serde::Serialize;

use crate::device::{Polarity, SourceSpec};

/// Default initial memristor state when a card omits `w0`.
pub const DEFAULT_W0: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    VSource {
        name: String,
        pos: String,
        neg: String,
        spec: SourceSpec,
    },
    Resistor {
        name: String,
        a: String,
        b: String,
        ohms: f64,
    },
    Capacitor {
        name: String,
        a: String,
        b: String,
        farads: f64,
        initial_volts: Option<f64>,
    },
    Mosfet {
        name: String,
        polarity: Polarity,
        drain: String,
        gate: String,
        source: String,
        body: String,
        model: Option<String>,
        w_over_l: Option<f64>,
    },
    /// Positive current flows from `pos` to `neg` through the device when
    /// `V(pos) > V(neg)`.
    Memristor {
        name: String,
        pos: String,
        neg: String,
        w0: f64,
        model: Option<String>,
    },
}

impl Element {
    pub fn name(&self) -> &str {
        match self {
            Element::VSource { name, .. }
            | Element::Resistor { name, .. }
            | Element::Capacitor { name, .. }
            | Element::Mosfet { name, .. }
            | Element::Memristor { name, .. } => name,
        }
    }

    /// Node names in terminal order.
    pub fn terminals(&self) -> Vec<&str> {
        match self {
            Element::VSource { pos, neg, .. } | Element::Memristor { pos, neg, .. } => vec![pos, neg],
            Element::Resistor { a, b, .. } | Element::Capacitor { a, b, .. } => vec![a, b],
            Element::Mosfet {
                drain,
                gate,
                source,
                body,
                ..
            } => vec![drain, gate, source, body],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Directive {
    Tran { step: f64, stop: f64 },
    Ic { node: String, volts: f64 },
}

/// A circuit description. Element order is significant and preserved by
/// parsing and serialization.
#[derive(Debug, Clone, Default)]
pub struct Netlist {
    pub title: Option<String>,
    pub elements: Vec<Element>,
    pub analyses: Vec<Directive>,
    pub models: Vec<ModelCard>,
    /// Source line of each element, when parsed from text.
    element_lines: Vec<Option<usize>>,
}

/// Structural equality; source line bookkeeping is ignored.
impl PartialEq for Netlist {
    fn eq(&self, other: &Self) -> bool {
        self.title == other.title
            && self.elements == other.elements
            && self.analyses == other.analyses
            && self.models == other.models
    }
}

impl Netlist {
    pub fn new(title: impl Into<String>) -> Self {
        Self {
            title: Some(title.into()),
            ..Self::default()
        }
    }

    pub fn push(&mut self, element: Element) -> &mut Self {
        self.elements.push(element);
        self.element_lines.push(None);
        self
    }

    pub(crate) fn push_at(&mut self, element: Element, line: usize) {
        self.elements.push(element);
        self.element_lines.push(Some(line));
    }

    /// Line number an element was parsed from.
    pub fn element_line(&self, index: usize) -> Option<usize> {
        self.element_lines.get(index).copied().flatten()
    }

    pub fn element(&self, name: &str) -> Option<&Element> {
        self.elements.iter().find(|e| e.name().eq_ignore_ascii_case(name))
    }

    pub fn element_mut(&mut self, name: &str) -> Option<&mut Element> {
        self.elements
            .iter_mut()
            .find(|e| e.name().eq_ignore_ascii_case(name))
    }

    pub fn model(&self, name: &str) -> Option<&ModelCard> {
        self.models.iter().find(|m| m.name.eq_ignore_ascii_case(name))
    }

    pub fn tran(&self) -> Option<(f64, f64)> {
        self.analyses.iter().find_map(|d| match d {
            Directive::Tran { step, stop } => Some((*step, *stop)),
            _ => None,
        })
    }

    /// Replaces any existing `.TRAN` directive.
    pub fn set_tran(&mut self, step: f64, stop: f64) {
        self.analyses.retain(|d| !matches!(d, Directive::Tran { .. }));
        self.analyses.insert(0, Directive::Tran { step, stop });
    }

    pub fn initial_conditions(&self) -> impl Iterator<Item = (&str, f64)> {
        self.analyses.iter().filter_map(|d| match d {
            Directive::Ic { node, volts } => Some((node.as_str(), *volts)),
            _ => None,
        })
    }

    pub fn count_components(&self) -> ComponentCount {
        count_components(self)
    }
}

/// Active-device tally. Passives and sources are not components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ComponentCount {
    pub transistors: usize,
    pub memristors: usize,
    pub total: usize,
}

impl ComponentCount {
    pub fn new(transistors: usize, memristors: usize) -> Self {
        Self {
            transistors,
            memristors,
            total: transistors + memristors,
        }
    }
}

pub fn count_components(netlist: &Netlist) -> ComponentCount {
    let transistors = netlist
        .elements
        .iter()
        .filter(|e| matches!(e, Element::Mosfet { .. }))
        .count();
    let memristors = netlist
        .elements
        .iter()
        .filter(|e| matches!(e, Element::Memristor { .. }))
        .count();
    ComponentCount::new(transistors, memristors)
}
