//! Graph views over an [`Architecture`]: the ECU adjacency induced by shared
//! buses, shortest gateway routes, and the signal flow inside a function.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::model::{Architecture, LinkKind, SoftwareComponent};

/// One hop of a route: the bus crossed and the ECU reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hop {
    pub bus: String,
    pub ecu: String,
}

/// Undirected ECU graph; two ECUs are adjacent when they share a bus.
#[derive(Debug, Clone, Default)]
pub struct EcuGraph {
    /// ecu -> neighbour -> lexicographically smallest shared bus
    adjacency: BTreeMap<String, BTreeMap<String, String>>,
}

impl EcuGraph {
    pub fn new(arch: &Architecture) -> Self {
        Self::without(arch, None)
    }

    /// Graph with one ECU treated as failed.
    pub fn without(arch: &Architecture, failed: Option<&str>) -> Self {
        let mut adjacency: BTreeMap<String, BTreeMap<String, String>> =
            arch.ecus.keys().filter(|id| Some(id.as_str()) != failed).map(|id| (id.clone(), BTreeMap::new())).collect();
        let mut members: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for link in arch.links.values() {
            if link.kind == LinkKind::BusAttachment
                && arch.buses.contains_key(&link.endpoint_b)
                && adjacency.contains_key(&link.endpoint_a)
            {
                members.entry(&link.endpoint_b).or_default().insert(&link.endpoint_a);
            }
        }
        for (bus, ecus) in &members {
            for a in ecus {
                for b in ecus {
                    if a == b {
                        continue;
                    }
                    let entry = adjacency.get_mut(*a).unwrap();
                    // buses iterate in id order, so the first insert wins
                    entry.entry(b.to_string()).or_insert_with(|| bus.to_string());
                }
            }
        }
        EcuGraph { adjacency }
    }

    pub fn contains(&self, ecu: &str) -> bool {
        self.adjacency.contains_key(ecu)
    }

    pub fn neighbours(&self, ecu: &str) -> impl Iterator<Item = (&str, &str)> {
        self.adjacency.get(ecu).into_iter().flat_map(|m| m.iter().map(|(n, b)| (n.as_str(), b.as_str())))
    }

    /// Hop distances from `source` to every reachable ECU.
    pub fn distances_from(&self, source: &str) -> BTreeMap<String, usize> {
        let mut dist = BTreeMap::new();
        if !self.contains(source) {
            return dist;
        }
        dist.insert(source.to_string(), 0);
        let mut queue = VecDeque::from([source.to_string()]);
        while let Some(cur) = queue.pop_front() {
            let d = dist[&cur];
            for (n, _) in self.neighbours(&cur) {
                if !dist.contains_key(n) {
                    dist.insert(n.to_string(), d + 1);
                    queue.push_back(n.to_string());
                }
            }
        }
        dist
    }

    pub fn hop_distance(&self, from: &str, to: &str) -> Option<usize> {
        self.distances_from(to).get(from).copied()
    }

    /// Shortest route from `from` to `to`. Among equally short routes, each
    /// hop picks the lexicographically smallest next ECU.
    pub fn route(&self, from: &str, to: &str) -> Option<Vec<Hop>> {
        let dist = self.distances_from(to);
        self.route_with(&dist, from)
    }

    /// Like [`route`](Self::route) with precomputed distances to the
    /// destination.
    pub fn route_with(&self, dist_to_dest: &BTreeMap<String, usize>, from: &str) -> Option<Vec<Hop>> {
        let mut d = *dist_to_dest.get(from)?;
        let mut cur = from.to_string();
        let mut hops = Vec::with_capacity(d);
        while d > 0 {
            let (next, bus) = self.neighbours(&cur).find(|(n, _)| dist_to_dest.get(*n) == Some(&(d - 1)))?;
            hops.push(Hop { bus: bus.to_string(), ecu: next.to_string() });
            cur = next.to_string();
            d -= 1;
        }
        Some(hops)
    }

    pub fn next_hop(&self, from: &str, to: &str) -> Option<Hop> {
        self.route(from, to)?.into_iter().next()
    }
}

/// A SWC is bound to the circuits of its function on its own host when it
/// declares no input signals: it reads the circuit directly.
pub fn is_circuit_bound(arch: &Architecture, swc: &SoftwareComponent) -> bool {
    swc.inputs.is_empty()
        && arch
            .functions
            .get(&swc.function)
            .is_some_and(|f| f.circuits.iter().any(|c| arch.circuits.get(c).is_some_and(|c| c.host == swc.host)))
}

/// Directed producer -> consumer pairs among a function's SWCs, matched by
/// signal name.
pub fn signal_edges<'a>(
    arch: &'a Architecture,
    function: &'a str,
) -> Vec<(&'a SoftwareComponent, &'a SoftwareComponent)> {
    let swcs: Vec<&SoftwareComponent> = arch.swcs_of(function).collect();
    let mut edges = Vec::new();
    for p in &swcs {
        for c in &swcs {
            if p.id != c.id && p.outputs.iter().any(|o| c.inputs.contains(o)) {
                edges.push((*p, *c));
            }
        }
    }
    edges
}

/// Distinct (producer host, consumer host) pairs of a function whose signals
/// cross ECU boundaries.
pub fn exchanging_hosts(arch: &Architecture, function: &str) -> BTreeSet<(String, String)> {
    signal_edges(arch, function)
        .into_iter()
        .filter(|(p, c)| p.host != c.host)
        .map(|(p, c)| (p.host.clone(), c.host.clone()))
        .collect()
}
