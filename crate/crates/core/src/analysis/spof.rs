use std::collections::{BTreeMap, BTreeSet};

use crate::model::{Architecture, Id, LinkKind};
use crate::topology::EcuGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpofEntry {
    pub ecu: Id,
    /// Functions lost when this ECU fails, sorted.
    pub functions: Vec<Id>,
}

/// Whether a function still works with `failed` removed.
///
/// A function works when every circuit is powered and wired, and every
/// terminal signal (an output nobody in the function consumes) still has a
/// producer whose own inputs are reachable from live producers. SWCs without
/// outputs must themselves stay available.
pub fn function_operational(arch: &Architecture, function: &str, failed: Option<&str>) -> bool {
    let Some(f) = arch.functions.get(function) else { return false };
    let graph = EcuGraph::without(arch, failed);

    for c in &f.circuits {
        let Some(circuit) = arch.circuits.get(c) else { return false };
        if !graph.contains(&circuit.host) {
            return false;
        }
        let wired = circuit.devices.iter().all(|d| {
            arch.links
                .values()
                .any(|l| l.kind == LinkKind::AnalogLine && &l.endpoint_a == d && l.endpoint_b == circuit.host)
        });
        if !wired {
            return false;
        }
    }

    let swcs: Vec<_> = arch.swcs_of(function).collect();
    let mut producers: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, s) in swcs.iter().enumerate() {
        for o in &s.outputs {
            producers.entry(o.as_str()).or_default().push(i);
        }
    }

    let mut reach: BTreeMap<&str, BTreeMap<String, usize>> = BTreeMap::new();
    let mut available = vec![false; swcs.len()];
    loop {
        let mut changed = false;
        for (i, s) in swcs.iter().enumerate() {
            if available[i] || !graph.contains(&s.host) {
                continue;
            }
            let from_here = reach.entry(s.host.as_str()).or_insert_with(|| graph.distances_from(&s.host));
            let fed = s.inputs.iter().all(|input| match producers.get(input.as_str()) {
                None => true,
                Some(ps) => ps.iter().any(|&p| available[p] && from_here.contains_key(&swcs[p].host)),
            });
            if fed {
                available[i] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let consumed: BTreeSet<&str> = swcs.iter().flat_map(|s| s.inputs.iter().map(String::as_str)).collect();
    for (i, s) in swcs.iter().enumerate() {
        if s.outputs.is_empty() && !available[i] {
            return false;
        }
    }
    for (signal, ps) in &producers {
        if !consumed.contains(signal) && !ps.iter().any(|&p| available[p]) {
            return false;
        }
    }
    true
}

/// ECUs whose single failure stops at least one otherwise working function.
pub fn spof_analysis(arch: &Architecture) -> Vec<SpofEntry> {
    let healthy: Vec<&Id> = arch.functions.keys().filter(|f| function_operational(arch, f, None)).collect();
    arch.ecus
        .keys()
        .filter_map(|ecu| {
            let functions: Vec<Id> =
                healthy.iter().filter(|f| !function_operational(arch, f, Some(ecu))).map(|f| (*f).clone()).collect();
            (!functions.is_empty()).then(|| SpofEntry { ecu: ecu.clone(), functions })
        })
        .collect()
}
