use std::collections::HashSet;
use std::fmt;

use super::model::{ModelCard, ModelDevice, MEMRISTOR_KEYS, MOSFET_KEYS};
use super::value::parse_value;
use super::{Directive, Element, Netlist, DEFAULT_W0};
use crate::device::{Polarity, SourceSpec};

/// A problem found while reading netlist text. Lines and columns are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits a line on whitespace, parentheses and commas; `=` is a token of
/// its own.
fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<usize> = None;
    for (i, c) in line.char_indices() {
        let separator = c.is_whitespace() || matches!(c, '(' | ')' | ',');
        if separator || c == '=' {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
            if c == '=' {
                tokens.push(Token {
                    text: "=",
                    column: line[..i].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    tokens
}

struct LineParser<'a, 'e> {
    line: usize,
    tokens: Vec<Token<'a>>,
    pos: usize,
    /// Column just past the last token, for "missing field" errors.
    end_column: usize,
    errors: &'e mut Vec<ParseError>,
}

impl<'a, 'e> LineParser<'a, 'e> {
    fn error_at(&mut self, column: usize, message: impl Into<String>) {
        self.errors.push(ParseError {
            line: self.line,
            column,
            message: message.into(),
        });
    }

    fn peek(&self) -> Option<Token<'a>> {
        self.tokens.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<Token<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, what: &str) -> Option<Token<'a>> {
        let t = self.next();
        if t.is_none() {
            let col = self.end_column;
            self.error_at(col, format!("missing {what}"));
        }
        t
    }

    fn node(&mut self, what: &str) -> Option<String> {
        let t = self.expect(what)?;
        if t.text == "=" {
            self.error_at(t.column, format!("expected {what}, found '='"));
            return None;
        }
        Some(t.text.to_string())
    }

    fn number(&mut self, what: &str) -> Option<f64> {
        let t = self.expect(what)?;
        match parse_value(t.text) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.error_at(t.column, msg);
                None
            }
        }
    }

    /// Reads a `key = value` option if the next tokens form one.
    fn option(&mut self) -> Option<(Token<'a>, Option<Token<'a>>)> {
        let key = self.peek()?;
        if self.tokens.get(self.pos + 1).map(|t| t.text) != Some("=") {
            return None;
        }
        self.pos += 2;
        let value = self.next();
        if value.is_none() {
            let col = self.end_column;
            self.error_at(col, format!("missing value for '{}'", key.text));
        }
        Some((key, value))
    }

    fn option_number(&mut self, key: Token<'a>, value: Option<Token<'a>>) -> Option<f64> {
        let value = value?;
        match parse_value(value.text) {
            Ok(v) => Some(v),
            Err(msg) => {
                self.error_at(value.column, format!("{}: {msg}", key.text));
                None
            }
        }
    }

    fn finish(&mut self) {
        if let Some(t) = self.peek() {
            self.error_at(t.column, format!("unexpected token '{}'", t.text));
        }
    }
}

/// Parses netlist text. All problems are collected and returned together.
pub fn parse(text: &str) -> Result<Netlist, Vec<ParseError>> {
    let mut netlist = Netlist::default();
    let mut errors = Vec::new();
    let mut seen_elements: HashSet<String> = HashSet::new();
    let mut seen_models: HashSet<String> = HashSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('*') {
            continue;
        }
        let tokens = tokenize(raw);
        let end_column = raw.chars().count() + 1;
        let head = tokens[0];
        let mut p = LineParser {
            line: line_no,
            tokens,
            pos: 1,
            end_column,
            errors: &mut errors,
        };
        let lower = head.text.to_ascii_lowercase();
        if lower.starts_with('.') {
            match lower.as_str() {
                ".end" => break,
                ".title" => {
                    let rest = raw.trim_start()[head.text.len()..].trim();
                    netlist.title = Some(rest.to_string());
                }
                ".tran" => {
                    let step = p.number("time step");
                    let stop = p.number("stop time");
                    p.finish();
                    if let (Some(step), Some(stop)) = (step, stop) {
                        netlist.analyses.push(Directive::Tran { step, stop });
                    }
                }
                ".ic" => {
                    let mut any = false;
                    while let Some((key, value)) = p.option() {
                        any = true;
                        if let Some(volts) = p.option_number(key, value) {
                            netlist.analyses.push(Directive::Ic {
                                node: key.text.to_string(),
                                volts,
                            });
                        }
                    }
                    if !any {
                        let col = p.peek().map_or(end_column, |t| t.column);
                        p.error_at(col, "expected node=volts");
                    }
                    p.finish();
                }
                ".model" => {
                    if let Some(card) = parse_model(&mut p) {
                        if !seen_models.insert(card.name.to_ascii_lowercase()) {
                            p.error_at(p.tokens[1].column, format!("duplicate model '{}'", card.name));
                        } else {
                            netlist.models.push(card);
                        }
                    }
                }
                _ => p.error_at(head.column, format!("unknown directive '{}'", head.text)),
            }
            continue;
        }

        let element = parse_element(&mut p, head.text, &lower);
        if let Some(element) = element {
            if !seen_elements.insert(element.name().to_ascii_lowercase()) {
                p.error_at(head.column, format!("duplicate element name '{}'", head.text));
            } else {
                netlist.push_at(element, line_no);
            }
        }
    }

    if errors.is_empty() {
        Ok(netlist)
    } else {
        Err(errors)
    }
}

fn parse_element(p: &mut LineParser<'_, '_>, name: &str, lower: &str) -> Option<Element> {
    let errors_before = p.errors.len();
    let element = if lower.starts_with("ym") {
        parse_memristor(p, name)
    } else if lower.starts_with("mn") || lower.starts_with("mp") {
        let polarity = if lower.starts_with("mn") { Polarity::N } else { Polarity::P };
        parse_mosfet(p, name, polarity)
    } else if lower.starts_with('v') {
        parse_vsource(p, name)
    } else if lower.starts_with('r') {
        let a = p.node("first node");
        let b = p.node("second node");
        let ohms = p.number("resistance");
        p.finish();
        match (a, b, ohms) {
            (Some(a), Some(b), Some(ohms)) => Some(Element::Resistor {
                name: name.to_string(),
                a,
                b,
                ohms,
            }),
            _ => None,
        }
    } else if lower.starts_with('c') {
        parse_capacitor(p, name)
    } else {
        let col = p.tokens[0].column;
        let hint = if lower.starts_with('m') {
            " (MOSFETs are MN/MP, memristors YM)"
        } else {
            ""
        };
        p.error_at(col, format!("unknown element letter in '{name}'{hint}"));
        return None;
    };
    if p.errors.len() > errors_before {
        None
    } else {
        element
    }
}

fn parse_capacitor(p: &mut LineParser<'_, '_>, name: &str) -> Option<Element> {
    let a = p.node("first node");
    let b = p.node("second node");
    let farads = p.number("capacitance");
    let mut initial_volts = None;
    while let Some((key, value)) = p.option() {
        if key.text.eq_ignore_ascii_case("ic") {
            initial_volts = p.option_number(key, value);
        } else {
            p.error_at(key.column, format!("unknown capacitor option '{}'", key.text));
        }
    }
    p.finish();
    Some(Element::Capacitor {
        name: name.to_string(),
        a: a?,
        b: b?,
        farads: farads?,
        initial_volts,
    })
}

fn parse_mosfet(p: &mut LineParser<'_, '_>, name: &str, polarity: Polarity) -> Option<Element> {
    let drain = p.node("drain node");
    let gate = p.node("gate node");
    let source = p.node("source node");
    let body = p.node("body node");
    let mut model = None;
    if let Some(t) = p.peek() {
        if p.tokens.get(p.pos + 1).map(|t| t.text) != Some("=") && t.text != "=" {
            model = Some(t.text.to_string());
            p.pos += 1;
        }
    }
    let mut w_over_l = None;
    while let Some((key, value)) = p.option() {
        if key.text.eq_ignore_ascii_case("wl") {
            w_over_l = p.option_number(key, value);
        } else {
            p.error_at(key.column, format!("unknown MOSFET option '{}'", key.text));
        }
    }
    p.finish();
    Some(Element::Mosfet {
        name: name.to_string(),
        polarity,
        drain: drain?,
        gate: gate?,
        source: source?,
        body: body?,
        model,
        w_over_l,
    })
}

fn parse_memristor(p: &mut LineParser<'_, '_>, name: &str) -> Option<Element> {
    let pos = p.node("positive node");
    let neg = p.node("negative node");
    let mut w0 = Some(DEFAULT_W0);
    let mut model = None;
    while let Some((key, value)) = p.option() {
        match key.text.to_ascii_lowercase().as_str() {
            "w0" => w0 = p.option_number(key, value),
            "model" => model = value.map(|v| v.text.to_string()),
            _ => p.error_at(key.column, format!("unknown memristor option '{}'", key.text)),
        }
    }
    p.finish();
    Some(Element::Memristor {
        name: name.to_string(),
        pos: pos?,
        neg: neg?,
        w0: w0?,
        model,
    })
}

fn parse_vsource(p: &mut LineParser<'_, '_>, name: &str) -> Option<Element> {
    let pos = p.node("positive node");
    let neg = p.node("negative node");
    let kind = p.expect("source value")?;
    let spec = match kind.text.to_ascii_lowercase().as_str() {
        "dc" => p.number("DC level").map(SourceSpec::Dc),
        "pulse" => {
            let fields = ["v1", "v2", "td", "tr", "tf", "pw", "per"];
            let values: Vec<Option<f64>> = fields.iter().map(|f| p.number(f)).collect();
            if values.iter().all(Option::is_some) {
                let v: Vec<f64> = values.into_iter().flatten().collect();
                Some(SourceSpec::Pulse {
                    v_low: v[0],
                    v_high: v[1],
                    delay: v[2],
                    rise: v[3],
                    fall: v[4],
                    width: v[5],
                    period: v[6],
                })
            } else {
                None
            }
        }
        "pwl" => {
            let mut points = Vec::new();
            let mut ok = true;
            while p.peek().is_some() {
                let t = p.number("PWL time");
                let v = p.number("PWL value");
                match (t, v) {
                    (Some(t), Some(v)) => points.push((t, v)),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            if points.is_empty() && ok {
                let col = p.end_column;
                p.error_at(col, "PWL needs at least one time/value pair");
                ok = false;
            }
            ok.then_some(SourceSpec::Pwl(points))
        }
        "sin" => {
            let offset = p.number("SIN offset");
            let amplitude = p.number("SIN amplitude");
            let frequency = p.number("SIN frequency");
            match (offset, amplitude, frequency) {
                (Some(offset), Some(amplitude), Some(frequency)) => Some(SourceSpec::Sin {
                    offset,
                    amplitude,
                    frequency,
                }),
                _ => None,
            }
        }
        _ => match parse_value(kind.text) {
            Ok(v) => Some(SourceSpec::Dc(v)),
            Err(msg) => {
                p.error_at(kind.column, msg);
                None
            }
        },
    };
    p.finish();
    if let Some(spec) = &spec {
        if let Err(e) = spec.validate() {
            p.error_at(kind.column, e.to_string());
            return None;
        }
    }
    Some(Element::VSource {
        name: name.to_string(),
        pos: pos?,
        neg: neg?,
        spec: spec?,
    })
}

fn parse_model(p: &mut LineParser<'_, '_>) -> Option<ModelCard> {
    let name = p.node("model name")?;
    let mut device = None;
    if let Some(t) = p.peek() {
        if p.tokens.get(p.pos + 1).map(|t| t.text) != Some("=") {
            match ModelDevice::from_keyword(t.text) {
                Some(d) => {
                    device = Some(d);
                    p.pos += 1;
                }
                None => {
                    p.error_at(t.column, format!("unknown model type '{}'", t.text));
                    return None;
                }
            }
        }
    }
    let mut card = ModelCard::new(name, device);
    let errors_before = p.errors.len();
    while let Some((key, value)) = p.option() {
        let k = key.text.to_ascii_lowercase();
        let allowed: &[&str] = match device {
            Some(ModelDevice::Memristor) => MEMRISTOR_KEYS,
            Some(_) => MOSFET_KEYS,
            None if MEMRISTOR_KEYS.contains(&k.as_str()) => MEMRISTOR_KEYS,
            None => MOSFET_KEYS,
        };
        if !allowed.contains(&k.as_str()) {
            p.error_at(key.column, format!("unknown model parameter '{}'", key.text));
            continue;
        }
        if let Some(v) = p.option_number(key, value) {
            card.params.push((k, v));
        }
    }
    p.finish();
    if p.errors.len() > errors_before {
        return None;
    }
    let mixed = !card.is_memristor_card() && !card.is_mosfet_card();
    if mixed {
        let col = p.tokens[0].column;
        p.error_at(col, "model mixes memristor and MOSFET parameters");
        return None;
    }
    Some(card)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resistor_card() {
        let n = parse("R1 a b 1k").unwrap();
        assert_eq!(
            n.elements,
            vec![Element::Resistor {
                name: "R1".into(),
                a: "a".into(),
                b: "b".into(),
                ohms: 1000.0
            }]
        );
    }

    #[test]
    fn memristor_card() {
        let n = parse("YM1 in out w0=0.3").unwrap();
        assert_eq!(
            n.elements[0],
            Element::Memristor {
                name: "YM1".into(),
                pos: "in".into(),
                neg: "out".into(),
                w0: 0.3,
                model: None
            }
        );
    }

    #[test]
    fn double_suffix_is_reported_at_value() {
        let errs = parse("C1 x 0 10ff").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!((errs[0].line, errs[0].column), (1, 8));
    }

    #[test]
    fn keywords_are_case_insensitive_nodes_are_not() {
        let n = parse("v1 In 0 pulse(0 1.2 0 1n 1n 4n 10n)\nr1 In in 1K\n.tran 1p 1n\n").unwrap();
        match &n.elements[1] {
            Element::Resistor { a, b, .. } => assert_ne!(a, b),
            other => panic!("{other:?}"),
        }
        assert_eq!(n.tran(), Some((1e-12, 1e-9)));
    }

    #[test]
    fn collects_every_error() {
        let text = "R1 a b\nQ1 a b c\nR1 a 0 1k\nR1 a 0 2k\nC2 a 0 1x\n";
        let errs = parse(text).unwrap_err();
        let lines: Vec<usize> = errs.iter().map(|e| e.line).collect();
        assert_eq!(lines, vec![1, 2, 4, 5]);
    }

    #[test]
    fn sources_and_options() {
        let text = "\
* comment
V1 a 0 DC 1.2
V2 b 0 PWL(0 0 1n 1.2)
V3 c 0 SIN(0 1 1meg)
V4 d 0 0.6
C1 a 0 1f IC=0.3
MN1 a b 0 0 fast WL=20
MP1 a b vdd vdd
.MODEL fast (vth=0.3 kp=400u)
.MODEL slow MEMRISTOR (tscale=1e13)
YM2 b c w0=0.25 model=slow
.IC a=0.1 b=0.2
.END
R9 this is ignored
";
        let n = parse(text).unwrap();
        assert_eq!(n.elements.len(), 8);
        assert_eq!(n.models.len(), 2);
        assert_eq!(n.initial_conditions().count(), 2);
        match &n.elements[5] {
            Element::Mosfet { model, w_over_l, .. } => {
                assert_eq!(model.as_deref(), Some("fast"));
                assert_eq!(*w_over_l, Some(20.0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(n.element_line(0), Some(2));
    }

    #[test]
    fn bare_m_is_rejected_with_hint() {
        let errs = parse("M1 d g s b").unwrap_err();
        assert!(errs[0].message.contains("MN/MP"));
    }
}
