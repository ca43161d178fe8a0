//! Single-point-of-failure oracle by deletion: remove one ECU with
//! everything it hosts, then re-check each function from scratch.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use eea_core::model::{Architecture, LinkKind};

/// The architecture after `ecu` has physically failed.
fn delete_ecu(arch: &Architecture, ecu: &str) -> Architecture {
    let mut a = arch.clone();
    a.ecus.remove(ecu);
    a.swcs.retain(|_, s| s.host != ecu);
    a.circuits.retain(|_, c| c.host != ecu);
    a.links.retain(|_, l| l.endpoint_a != ecu && l.endpoint_b != ecu);
    a
}

fn reachable(a: &Architecture, from: &str) -> BTreeSet<String> {
    let mut bus_members: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for l in a.links.values().filter(|l| l.kind == LinkKind::BusAttachment) {
        bus_members.entry(&l.endpoint_b).or_default().push(&l.endpoint_a);
    }
    let mut seen = BTreeSet::from([from.to_string()]);
    let mut queue = VecDeque::from([from.to_string()]);
    while let Some(e) = queue.pop_front() {
        for members in bus_members.values().filter(|m| m.contains(&e.as_str())) {
            for m in members {
                if seen.insert(m.to_string()) {
                    queue.push_back(m.to_string());
                }
            }
        }
    }
    seen
}

/// Whether `function` works in `a`, where removed parts are simply absent.
fn works(original: &Architecture, a: &Architecture, function: &str) -> bool {
    let f = &original.functions[function];
    for c in &f.circuits {
        let Some(circuit) = a.circuits.get(c) else { return false };
        for d in &circuit.devices {
            let wired = a.links.values().any(|l| l.endpoint_a == *d && l.endpoint_b == circuit.host);
            if !wired {
                return false;
            }
        }
    }

    let all: Vec<_> = original.swcs.values().filter(|s| s.function == function).collect();
    let alive: Vec<_> = all.iter().filter(|s| a.swcs.contains_key(&s.id)).collect();
    let produced_anywhere: BTreeSet<&String> = all.iter().flat_map(|s| &s.outputs).collect();

    // Grow the set of SWCs whose every input is delivered by a working,
    // bus-reachable producer; signals nobody produces count as external.
    let mut working: BTreeSet<&str> = BTreeSet::new();
    loop {
        let before = working.len();
        for s in &alive {
            if working.contains(s.id.as_str()) {
                continue;
            }
            let reach = reachable(a, &s.host);
            let fed = s.inputs.iter().all(|i| {
                !produced_anywhere.contains(i)
                    || alive
                        .iter()
                        .any(|p| working.contains(p.id.as_str()) && p.outputs.contains(i) && reach.contains(&p.host))
            });
            if fed {
                working.insert(&s.id);
            }
        }
        if working.len() == before {
            break;
        }
    }

    let consumed: BTreeSet<&String> = all.iter().flat_map(|s| &s.inputs).collect();
    let sinks_ok = all.iter().filter(|s| s.outputs.is_empty()).all(|s| working.contains(s.id.as_str()));
    let terminals_ok = produced_anywhere
        .iter()
        .filter(|sig| !consumed.contains(*sig))
        .all(|sig| alive.iter().any(|p| working.contains(p.id.as_str()) && p.outputs.contains(*sig)));
    sinks_ok && terminals_ok
}

pub fn spof_by_deletion(arch: &Architecture) -> BTreeMap<String, Vec<String>> {
    let healthy: Vec<&String> = arch.functions.keys().filter(|f| works(arch, arch, f)).collect();
    let mut out = BTreeMap::new();
    for ecu in arch.ecus.keys() {
        let reduced = delete_ecu(arch, ecu);
        let lost: Vec<String> = healthy.iter().filter(|f| !works(arch, &reduced, f)).map(|f| f.to_string()).collect();
        if !lost.is_empty() {
            out.insert(ecu.clone(), lost);
        }
    }
    out
}
