mod common;

use std::collections::BTreeSet;

use common::{random_architecture, GenLimits};
use eea_core::abstraction::{abstract_function, assess_relocatability, ElementaryClass};
use eea_core::analysis::{classify, compute_metrics};
use eea_core::dsl::{parse, serialize};
use eea_core::engine::{centralize_all, potential, FeasibilityConfig, RewriteKind};
use eea_core::model::{distance, validate, Architecture, DistanceMetric, LinkKind, OsClass, Position};
use eea_core::topology::EcuGraph;
use proptest::prelude::*;

fn small() -> GenLimits {
    GenLimits { max_ecus: 8, max_functions: 4 }
}

fn pos() -> impl Strategy<Value = Position> {
    (-50.0..50.0f64, -50.0..50.0f64, -50.0..50.0f64).prop_map(|(x, y, z)| Position { x, y, z })
}

fn hop_distances(arch: &Architecture) -> Vec<(String, Option<usize>)> {
    let g = EcuGraph::new(arch);
    arch.swcs
        .values()
        .map(|s| (s.id.clone(), arch.target_of(&s.function).and_then(|t| g.hop_distance(&s.host, t))))
        .collect()
}

fn identity(arch: &Architecture) -> (Vec<String>, Vec<String>, Vec<String>, Vec<String>) {
    (
        arch.functions.keys().cloned().collect(),
        arch.swcs.keys().cloned().collect(),
        arch.circuits.keys().cloned().collect(),
        arch.devices.keys().cloned().collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distance_is_a_metric(a in pos(), b in pos(), c in pos()) {
        for m in [DistanceMetric::Manhattan, DistanceMetric::Euclidean] {
            let (ab, ba) = (m.measure(a, b), m.measure(b, a));
            prop_assert_eq!(ab, ba);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(m.measure(a, a), 0.0);
            prop_assert!(m.measure(a, c) <= ab + m.measure(b, c) + 1e-9);
        }
        if a != b {
            prop_assert!(distance(a, b) > 0.0);
        }
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let a = random_architecture(seed, GenLimits::default());
        let text = serialize(&a);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn validation_is_deterministic_and_sorted(seed in any::<u64>()) {
        let mut a = random_architecture(seed, small());
        // break a few references
        if let Some(s) = a.swcs.values_mut().next() {
            s.host = "Nowhere".into();
        }
        if let Some(c) = a.circuits.values_mut().next() {
            c.devices.push("Ghost".into());
        }
        let v = validate(&a);
        prop_assert_eq!(&v, &validate(&a.clone()));
        let mut sorted = v.clone();
        sorted.sort_by(|x, y| (&x.entity, x.rule).cmp(&(&y.entity, y.rule)));
        prop_assert_eq!(v, sorted);
    }

    #[test]
    fn abstraction_partitions_the_function(seed in any::<u64>()) {
        let a = random_architecture(seed, GenLimits::default());
        for f in a.functions.values() {
            let fa = abstract_function(&a, &f.id).unwrap();
            let owned_devices: BTreeSet<&String> = f
                .circuits
                .iter()
                .flat_map(|c| &a.circuits[c].devices)
                .chain(&f.devices)
                .collect();
            let analog = a
                .links
                .values()
                .filter(|l| l.kind == LinkKind::AnalogLine && owned_devices.contains(&l.endpoint_a))
                .count();
            let paths = eea_core::topology::exchanging_hosts(&a, &f.id).len();
            prop_assert_eq!(fa.elements.len(), f.swcs.len() + f.circuits.len() + analog + paths);
            let keys: BTreeSet<&String> = fa.elements.iter().map(|e| &e.id).collect();
            prop_assert_eq!(keys.len(), fa.elements.len());
            prop_assert_eq!(fa.of_class(ElementaryClass::Sw).count(), f.swcs.len());
            prop_assert_eq!(fa.of_class(ElementaryClass::Hw).count(), f.circuits.len());
        }
    }

    #[test]
    fn abstraction_and_style_survive_round_trip(seed in any::<u64>()) {
        let a = random_architecture(seed, GenLimits::default());
        let b = parse(&serialize(&a)).unwrap();
        prop_assert_eq!(classify(&a), classify(&b));
        for f in a.functions.keys() {
            prop_assert_eq!(abstract_function(&a, f).unwrap(), abstract_function(&b, f).unwrap());
        }
    }

    #[test]
    fn more_capability_never_anchors(seed in any::<u64>()) {
        let a = random_architecture(seed, GenLimits::default());
        let mut richer = a.clone();
        for e in richer.ecus.values_mut() {
            e.os_classes.insert(OsClass::TimeDrivenRt);
            e.os_classes.insert(OsClass::EventDriven);
        }
        let mut virt = a.clone();
        for e in virt.ecus.values_mut() {
            e.virtualization = true;
        }
        for s in a.swcs.keys() {
            if assess_relocatability(&a, s).unwrap().is_relocatable() {
                prop_assert!(assess_relocatability(&richer, s).unwrap().is_relocatable());
                prop_assert!(assess_relocatability(&virt, s).unwrap().is_relocatable());
            }
        }
    }

    #[test]
    fn engine_invariants(seed in any::<u64>()) {
        let a = random_architecture(seed, GenLimits::default());
        let cfg = FeasibilityConfig::default();
        let trace = centralize_all(&a, &cfg).unwrap();
        let id = identity(&a);
        for pair in trace.stages.windows(2) {
            let (prev, next) = (&pair[0].architecture, &pair[1].architecture);
            prop_assert!(validate(next).is_empty(), "invalid stage: {:?}", validate(next));
            prop_assert_eq!(identity(next), id.clone());
            prop_assert!(potential(next) < potential(prev));
            let (mp, mn) = (compute_metrics(prev), compute_metrics(next));
            prop_assert!(mn.ecu_count <= mp.ecu_count);
            prop_assert!(mn.channel_count <= mp.channel_count);
            if pair[1].steps.iter().any(|s| s.kind == RewriteKind::CentralizeIo) {
                prop_assert!(mn.cut_leads >= mp.cut_leads);
            }
            for ((s1, d1), (s2, d2)) in hop_distances(prev).into_iter().zip(hop_distances(next)) {
                prop_assert_eq!(s1, s2);
                if let (Some(d1), Some(d2)) = (d1, d2) {
                    prop_assert!(d2 <= d1);
                }
            }
        }
        let again = centralize_all(trace.final_architecture(), &cfg).unwrap();
        prop_assert_eq!(again.stages.len(), 1);
        prop_assert_eq!(again.terminal_reason, trace.terminal_reason);
    }
}
