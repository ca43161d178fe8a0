use std::collections::{BTreeMap, BTreeSet};

use crate::model::{distance, Architecture, BusType, Id, LinkKind, SoftwareComponent};
use crate::topology::{self, EcuGraph};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsReport {
    pub ecu_count: usize,
    pub circuit_count: usize,
    /// Distinct ECUs hosting at least one circuit.
    pub circuit_host_count: usize,
    /// Analog lines plus bus attachments.
    pub channel_count: usize,
    pub bus_count_by_type: BTreeMap<BusType, usize>,
    /// Summed length of analog lines only; bus harnesses are not counted.
    pub wire_length_m: f64,
    /// Point-to-point analog lines.
    pub cut_leads: usize,
    /// Per function: most ECU hops from a device to a terminal SWC.
    pub latency_hops: BTreeMap<Id, usize>,
    /// Per bus: summed device data rate of attached ECUs over bandwidth.
    pub busload: BTreeMap<Id, f64>,
    pub lin_masters: usize,
    pub lin_slaves: usize,
}

impl MetricsReport {
    pub fn bus_count(&self, bus_type: BusType) -> usize {
        self.bus_count_by_type.get(&bus_type).copied().unwrap_or(0)
    }
}

pub fn compute_metrics(arch: &Architecture) -> MetricsReport {
    let mut m = MetricsReport {
        ecu_count: arch.ecus.len(),
        circuit_count: arch.circuits.len(),
        circuit_host_count: arch.circuits.values().map(|c| c.host.as_str()).collect::<BTreeSet<_>>().len(),
        ..Default::default()
    };

    for link in arch.links.values() {
        m.channel_count += 1;
        if link.kind == LinkKind::AnalogLine {
            m.cut_leads += 1;
            if let (Some(d), Some(e)) = (arch.devices.get(&link.endpoint_a), arch.ecus.get(&link.endpoint_b)) {
                m.wire_length_m += distance(d.position, e.position);
            }
        }
    }

    let mut ecu_rate: BTreeMap<&str, f64> = BTreeMap::new();
    for c in arch.circuits.values() {
        let rate: f64 = c.devices.iter().filter_map(|d| arch.devices.get(d)).map(|d| d.data_rate).sum();
        *ecu_rate.entry(c.host.as_str()).or_default() += rate;
    }
    for bus in arch.buses.values() {
        *m.bus_count_by_type.entry(bus.bus_type).or_default() += 1;
        let members = arch.bus_members(&bus.id);
        let rate_kbit: f64 = members.iter().map(|e| ecu_rate.get(e).copied().unwrap_or(0.0)).sum();
        m.busload.insert(bus.id.clone(), rate_kbit / (bus.bandwidth * 1000.0));
        if bus.bus_type == BusType::Lin && bus.lin_master.is_some() {
            m.lin_masters += 1;
            m.lin_slaves += members.len().saturating_sub(1);
        }
    }

    let graph = EcuGraph::new(arch);
    for f in arch.functions.keys() {
        m.latency_hops.insert(f.clone(), latency(arch, &graph, f));
    }
    m
}

fn latency(arch: &Architecture, graph: &EcuGraph, function: &str) -> usize {
    let Some(f) = arch.functions.get(function) else { return 0 };
    let edges = topology::signal_edges(arch, function);
    let mut consumers: BTreeMap<&str, Vec<&SoftwareComponent>> = BTreeMap::new();
    for (p, c) in &edges {
        consumers.entry(p.id.as_str()).or_default().push(c);
    }

    let mut hops_cache: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut hops = |a: &str, b: &str| -> usize {
        *hops_cache.entry((a.to_string(), b.to_string())).or_insert_with(|| graph.hop_distance(a, b).unwrap_or(0))
    };

    fn longest<'a>(
        swc: &'a SoftwareComponent,
        consumers: &BTreeMap<&str, Vec<&'a SoftwareComponent>>,
        on_path: &mut BTreeSet<&'a str>,
        hops: &mut dyn FnMut(&str, &str) -> usize,
    ) -> usize {
        if !on_path.insert(&swc.id) {
            return 0;
        }
        let mut best = 0;
        for c in consumers.get(swc.id.as_str()).into_iter().flatten() {
            if !on_path.contains(c.id.as_str()) {
                let h = hops(&swc.host, &c.host);
                best = best.max(h + longest(c, consumers, on_path, hops));
            }
        }
        on_path.remove(swc.id.as_str());
        best
    }

    let mut worst = 0;
    for c in f.circuits.iter().filter_map(|c| arch.circuits.get(c)) {
        for swc in arch.swcs_of(function).filter(|s| s.host == c.host && topology::is_circuit_bound(arch, s)) {
            let mut on_path = BTreeSet::new();
            worst = worst.max(longest(swc, &consumers, &mut on_path, &mut hops));
        }
    }
    worst
}
