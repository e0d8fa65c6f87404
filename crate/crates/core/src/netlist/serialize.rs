use std::fmt::Write;

use super::{Directive, Element, Netlist};
use crate::device::{Polarity, SourceSpec};

/// Formats a number in scientific notation with at least nine significant
/// digits and enough digits to parse back to the identical `f64`.
pub fn format_value(x: f64) -> String {
    let shortest = format!("{x:e}");
    let mantissa = shortest.split('e').next().unwrap_or("");
    let digits = mantissa.chars().filter(char::is_ascii_digit).count();
    let precision = digits.max(9) - 1;
    format!("{x:.precision$e}")
}

/// Emits canonical netlist text; `parse(serialize(n)) == n`.
pub fn serialize(netlist: &Netlist) -> String {
    let mut out = String::new();
    if let Some(title) = &netlist.title {
        let _ = writeln!(out, ".TITLE {title}");
    }
    for card in &netlist.models {
        let _ = write!(out, ".MODEL {}", card.name);
        if let Some(device) = card.device {
            let _ = write!(out, " {}", device.keyword());
        }
        let params: Vec<String> = card
            .params
            .iter()
            .map(|(k, v)| format!("{k}={}", format_value(*v)))
            .collect();
        let _ = writeln!(out, " ({})", params.join(" "));
    }
    for element in &netlist.elements {
        let _ = writeln!(out, "{}", element_line(element));
    }
    for directive in &netlist.analyses {
        match directive {
            Directive::Tran { step, stop } => {
                let _ = writeln!(out, ".TRAN {} {}", format_value(*step), format_value(*stop));
            }
            Directive::Ic { node, volts } => {
                let _ = writeln!(out, ".IC {node}={}", format_value(*volts));
            }
        }
    }
    out.push_str(".END\n");
    out
}

fn source_text(spec: &SourceSpec) -> String {
    let join = |values: &[f64]| values.iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(" ");
    match spec {
        SourceSpec::Dc(v) => format!("DC {}", format_value(*v)),
        SourceSpec::Pulse {
            v_low,
            v_high,
            delay,
            rise,
            fall,
            width,
            period,
        } => format!("PULSE({})", join(&[*v_low, *v_high, *delay, *rise, *fall, *width, *period])),
        SourceSpec::Pwl(points) => {
            let flat: Vec<f64> = points.iter().flat_map(|&(t, v)| [t, v]).collect();
            format!("PWL({})", join(&flat))
        }
        SourceSpec::Sin {
            offset,
            amplitude,
            frequency,
        } => format!("SIN({})", join(&[*offset, *amplitude, *frequency])),
    }
}

fn element_line(element: &Element) -> String {
    match element {
        Element::VSource { name, pos, neg, spec } => format!("{name} {pos} {neg} {}", source_text(spec)),
        Element::Resistor { name, a, b, ohms } => format!("{name} {a} {b} {}", format_value(*ohms)),
        Element::Capacitor {
            name,
            a,
            b,
            farads,
            initial_volts,
        } => {
            let mut s = format!("{name} {a} {b} {}", format_value(*farads));
            if let Some(v) = initial_volts {
                let _ = write!(s, " IC={}", format_value(*v));
            }
            s
        }
        Element::Mosfet {
            name,
            polarity,
            drain,
            gate,
            source,
            body,
            model,
            w_over_l,
        } => {
            debug_assert!(matches!(
                (polarity, name.get(..2).map(str::to_ascii_uppercase).as_deref()),
                (Polarity::N, Some("MN")) | (Polarity::P, Some("MP"))
            ));
            let mut s = format!("{name} {drain} {gate} {source} {body}");
            if let Some(m) = model {
                let _ = write!(s, " {m}");
            }
            if let Some(wl) = w_over_l {
                let _ = write!(s, " WL={}", format_value(*wl));
            }
            s
        }
        Element::Memristor {
            name,
            pos,
            neg,
            w0,
            model,
        } => {
            let mut s = format!("{name} {pos} {neg} w0={}", format_value(*w0));
            if let Some(m) = model {
                let _ = write!(s, " model={m}");
            }
            s
        }
    }
}
