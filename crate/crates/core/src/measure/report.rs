use std::fmt::Write as _;

use serde::Serialize;

use super::Mismatch;
use crate::cells::CellKind;
use crate::netlist::ComponentCount;

/// Figures reported for the published designs, kept as citations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PublishedReference {
    pub total_components: Option<usize>,
    #[serde(rename = "avg_power_uW")]
    pub avg_power_uw: Option<f64>,
    pub delay_ps: Option<f64>,
}

impl PublishedReference {
    const NONE: Self = Self {
        total_components: None,
        avg_power_uw: None,
        delay_ps: None,
    };

    const fn new(total: usize, power_uw: f64, delay_ps: f64) -> Self {
        Self {
            total_components: Some(total),
            avg_power_uw: Some(power_uw),
            delay_ps: Some(delay_ps),
        }
    }
}

/// Published reference values; gates have none.
pub fn reference_for(kind: CellKind) -> PublishedReference {
    match kind {
        CellKind::DLatch => PublishedReference::new(10, 7.1, 219.0),
        CellKind::DFf => PublishedReference::new(18, 14.2, 209.5),
        CellKind::JkFf => PublishedReference::new(26, 14.2, 147.0),
        CellKind::TFf => PublishedReference::new(23, 40.74, 230.0),
        CellKind::SrFf => PublishedReference::new(24, 33.8, 239.5),
        _ => PublishedReference::NONE,
    }
}

/// Measured figures of one cell. Power in W, delay in s, PDP in J.
#[derive(Debug, Clone, PartialEq)]
pub struct CellReport {
    pub kind: CellKind,
    pub counts: ComponentCount,
    pub avg_power: f64,
    pub delay: f64,
    pub pdp: f64,
    pub verified: bool,
    pub first_mismatch: Option<Mismatch>,
    pub reference: PublishedReference,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    cell: &'a str,
    transistors: usize,
    memristors: usize,
    total_components: usize,
    #[serde(rename = "avg_power_uW")]
    avg_power_uw: f64,
    delay_ps: f64,
    #[serde(rename = "pdp_fJ")]
    pdp_fj: f64,
    verified: bool,
    reference: PublishedReference,
}

impl CellReport {
    fn json_row(&self) -> JsonRow<'_> {
        JsonRow {
            cell: self.kind.name(),
            transistors: self.counts.transistors,
            memristors: self.counts.memristors,
            total_components: self.counts.total,
            avg_power_uw: self.avg_power * 1e6,
            delay_ps: self.delay * 1e12,
            pdp_fj: self.pdp * 1e15,
            verified: self.verified,
            reference: self.reference,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

/// Renders reports as a JSON array or a markdown table, measured values
/// beside the published references.
pub fn build_report(reports: &[CellReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let rows: Vec<JsonRow<'_>> = reports.iter().map(CellReport::json_row).collect();
            let mut text = serde_json::to_string_pretty(&rows).expect("report rows serialize");
            text.push('\n');
            text
        }
        ReportFormat::Markdown => markdown(reports),
    }
}

fn markdown(reports: &[CellReport]) -> String {
    let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v}"));
    let mut out = String::new();
    out.push_str("| Cell | Transistors | Memristors | Total (ref) | Avg power uW (ref) | Delay ps (ref) | PDP fJ (ref) | Verified |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    for r in reports {
        let reference = r.reference;
        let ref_pdp = match (reference.avg_power_uw, reference.delay_ps) {
            (Some(p), Some(d)) => format!("{:.4}", p * d * 1e-3),
            _ => "-".to_string(),
        };
        let total_ref = reference
            .total_components
            .map_or_else(|| "-".to_string(), |t| t.to_string());
        let verdict = match &r.first_mismatch {
            None if r.verified => "pass".to_string(),
            Some(m) => format!("FAIL ({m})"),
            None => "FAIL".to_string(),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} ({}) | {:.3} ({}) | {:.2} ({}) | {:.4} ({}) | {} |",
            r.kind,
            r.counts.transistors,
            r.counts.memristors,
            r.counts.total,
            total_ref,
            r.avg_power * 1e6,
            opt(reference.avg_power_uw),
            r.delay * 1e12,
            opt(reference.delay_ps),
            r.pdp * 1e15,
            ref_pdp,
            verdict
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(kind: CellKind) -> CellReport {
        CellReport {
            kind,
            counts: ComponentCount::new(6, 4),
            avg_power: 2e-6,
            delay: 1e-10,
            pdp: 2e-16,
            verified: true,
            first_mismatch: None,
            reference: reference_for(kind),
        }
    }

    #[test]
    fn references_follow_the_tables() {
        assert_eq!(reference_for(CellKind::DLatch), PublishedReference::new(10, 7.1, 219.0));
        assert_eq!(reference_for(CellKind::TFf), PublishedReference::new(23, 40.74, 230.0));
        assert_eq!(reference_for(CellKind::Xor), PublishedReference::NONE);
    }

    #[test]
    fn json_schema_fields() {
        let text = build_report(&[report(CellKind::DLatch), report(CellKind::Nand)], ReportFormat::Json);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let row = &value[0];
        assert_eq!(row["cell"], "d_latch");
        assert_eq!(row["total_components"], 10);
        assert_eq!(row["reference"]["avg_power_uW"], 7.1);
        assert_eq!(row["reference"]["delay_ps"], 219.0);
        assert!((row["pdp_fJ"].as_f64().unwrap() - 0.2).abs() < 1e-12);
        assert!(value[1]["reference"]["delay_ps"].is_null());
        let keys: Vec<&String> = row.as_object().unwrap().keys().collect();
        assert_eq!(keys.len(), 9);
    }

    #[test]
    fn markdown_has_one_row_per_report() {
        let text = build_report(&[report(CellKind::JkFf)], ReportFormat::Markdown);
        assert_eq!(text.lines().count(), 3);
        assert!(text.contains("(14.2)"));
        assert!(text.contains("(147)"));
    }
}
