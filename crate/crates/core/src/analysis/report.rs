use std::collections::BTreeSet;
use std::fmt::Write;

use super::{check_constraints, classify, compute_metrics, ConstraintViolation, MetricsReport, Style};
use crate::engine::FeasibilityConfig;
use crate::model::{Architecture, BusType};

const FOOTER: &str = "Wire length sums direct analog lines only; bus harness length is not included.";

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub label: String,
    pub style: Style,
    pub metrics: MetricsReport,
    pub violations: Vec<ConstraintViolation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Bus types present in any variant, sorted.
    pub bus_types: Vec<BusType>,
}

/// Per-metric difference of a variant against the first one.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricDelta {
    pub label: String,
    pub ecu_count: i64,
    pub circuit_count: i64,
    pub channel_count: i64,
    pub wire_length_m: f64,
    pub cut_leads: i64,
    pub lin_masters: i64,
    pub lin_slaves: i64,
    pub bus_counts: Vec<i64>,
    pub violations: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("nothing to compare: no variants given")]
    EmptyComparison,
}

pub fn compare(
    variants: &[(String, Architecture)],
    cfg: &FeasibilityConfig,
) -> Result<ComparisonReport, AnalysisError> {
    if variants.is_empty() {
        return Err(AnalysisError::EmptyComparison);
    }
    let rows: Vec<ComparisonRow> = variants
        .iter()
        .map(|(label, arch)| ComparisonRow {
            label: label.clone(),
            style: classify(arch).style,
            metrics: compute_metrics(arch),
            violations: check_constraints(arch, cfg),
        })
        .collect();
    let bus_types: BTreeSet<BusType> = rows.iter().flat_map(|r| r.metrics.bus_count_by_type.keys().copied()).collect();
    let mut bus_types: Vec<BusType> = bus_types.into_iter().collect();
    bus_types.sort_by_key(|t| t.as_str());
    Ok(ComparisonReport { rows, bus_types })
}

fn diff(a: usize, b: usize) -> i64 {
    a as i64 - b as i64
}

impl ComparisonReport {
    pub fn header(&self) -> Vec<String> {
        let mut h: Vec<String> = [
            "label",
            "style",
            "ecu_count",
            "circuit_count",
            "channel_count",
            "wire_length_m",
            "cut_leads",
            "lin_masters",
            "lin_slaves",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend(self.bus_types.iter().map(|t| t.to_string()));
        h.push("violations".into());
        h
    }

    fn cells(&self, row: &ComparisonRow) -> Vec<String> {
        let m = &row.metrics;
        let mut c = vec![
            row.label.clone(),
            row.style.to_string(),
            m.ecu_count.to_string(),
            m.circuit_count.to_string(),
            m.channel_count.to_string(),
            format!("{:.2}", m.wire_length_m),
            m.cut_leads.to_string(),
            m.lin_masters.to_string(),
            m.lin_slaves.to_string(),
        ];
        c.extend(self.bus_types.iter().map(|t| m.bus_count(*t).to_string()));
        c.push(row.violations.len().to_string());
        c
    }

    pub fn deltas(&self) -> Vec<MetricDelta> {
        let base = &self.rows[0];
        self.rows
            .iter()
            .map(|r| {
                let (m, b) = (&r.metrics, &base.metrics);
                MetricDelta {
                    label: r.label.clone(),
                    ecu_count: diff(m.ecu_count, b.ecu_count),
                    circuit_count: diff(m.circuit_count, b.circuit_count),
                    channel_count: diff(m.channel_count, b.channel_count),
                    wire_length_m: m.wire_length_m - b.wire_length_m,
                    cut_leads: diff(m.cut_leads, b.cut_leads),
                    lin_masters: diff(m.lin_masters, b.lin_masters),
                    lin_slaves: diff(m.lin_slaves, b.lin_slaves),
                    bus_counts: self.bus_types.iter().map(|t| diff(m.bus_count(*t), b.bus_count(*t))).collect(),
                    violations: diff(r.violations.len(), base.violations.len()),
                }
            })
            .collect()
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let header = self.header();
        push_md_row(&mut out, &header);
        push_md_row(&mut out, &vec!["---".to_string(); header.len()]);
        for row in &self.rows {
            push_md_row(&mut out, &self.cells(row));
        }

        let _ = writeln!(out, "\nDelta against `{}`:\n", self.rows[0].label);
        let mut dh = vec!["label".to_string()];
        dh.extend(header[2..].iter().cloned());
        push_md_row(&mut out, &dh);
        push_md_row(&mut out, &vec!["---".to_string(); dh.len()]);
        for d in self.deltas() {
            let mut c = vec![
                d.label,
                format!("{:+}", d.ecu_count),
                format!("{:+}", d.circuit_count),
                format!("{:+}", d.channel_count),
                format!("{:+.2}", d.wire_length_m),
                format!("{:+}", d.cut_leads),
                format!("{:+}", d.lin_masters),
                format!("{:+}", d.lin_slaves),
            ];
            c.extend(d.bus_counts.iter().map(|v| format!("{v:+}")));
            c.push(format!("{:+}", d.violations));
            push_md_row(&mut out, &c);
        }
        let _ = writeln!(out, "\n{FOOTER}");
        out
    }

    /// RFC 4180 CSV: header plus one record per variant.
    pub fn to_csv(&self) -> String {
        let mut records = vec![self.header()];
        records.extend(self.rows.iter().map(|r| self.cells(r)));
        write_csv(&records)
    }
}

fn push_md_row(out: &mut String, cells: &[String]) {
    let escaped: Vec<String> = cells.iter().map(|c| c.replace('|', "\\|")).collect();
    let _ = writeln!(out, "| {} |", escaped.join(" | "));
}

fn write_csv(records: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    for r in records {
        w.write_record(r).expect("writing to memory cannot fail");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("records are UTF-8")
}

/// ECU and network counts per vehicle, laid out like a teardown comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FleetRow {
    pub label: String,
    pub ecus: usize,
    pub can: usize,
    pub can_fd: usize,
    pub ethernet: usize,
    pub lvds: usize,
    pub other: usize,
    pub lin_masters: usize,
    pub lin_slaves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FleetSummary {
    pub rows: Vec<FleetRow>,
}

pub fn fleet_summary(variants: &[(String, Architecture)]) -> FleetSummary {
    let rows = variants
        .iter()
        .map(|(label, arch)| {
            let m = compute_metrics(arch);
            FleetRow {
                label: label.clone(),
                ecus: m.ecu_count,
                can: m.bus_count(BusType::Can),
                can_fd: m.bus_count(BusType::CanFd),
                ethernet: m.bus_count(BusType::Ethernet),
                lvds: m.bus_count(BusType::Lvds),
                other: m.bus_count(BusType::Other),
                lin_masters: m.lin_masters,
                lin_slaves: m.lin_slaves,
            }
        })
        .collect();
    FleetSummary { rows }
}

impl FleetSummary {
    const HEADER: [&'static str; 9] =
        ["label", "ecus", "can", "can_fd", "ethernet", "lvds", "other", "lin_masters", "lin_slaves"];

    fn cells(r: &FleetRow) -> Vec<String> {
        [r.ecus, r.can, r.can_fd, r.ethernet, r.lvds, r.other, r.lin_masters, r.lin_slaves]
            .iter()
            .map(|n| n.to_string())
            .fold(vec![r.label.clone()], |mut v, s| {
                v.push(s);
                v
            })
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = Self::HEADER.iter().map(|s| s.to_string()).collect();
        push_md_row(&mut out, &header);
        push_md_row(&mut out, &vec!["---".to_string(); header.len()]);
        for r in &self.rows {
            push_md_row(&mut out, &Self::cells(r));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut records = vec![Self::HEADER.iter().map(|s| s.to_string()).collect::<Vec<_>>()];
        records.extend(self.rows.iter().map(Self::cells));
        write_csv(&records)
    }
}
