use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Architecture, EcuRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Style {
    DomainOriented,
    CrossDomain,
    ZoneOriented,
    Central,
}

impl Style {
    pub fn as_str(self) -> &'static str {
        match self {
            Style::DomainOriented => "domain_oriented",
            Style::CrossDomain => "cross_domain",
            Style::ZoneOriented => "zone_oriented",
            Style::Central => "central",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StyleClassification {
    pub style: Style,
    pub evidence: Vec<String>,
}

/// Classifies the architecture, checking central, zone-oriented and
/// cross-domain forms in that order before falling back to domain-oriented.
pub fn classify(arch: &Architecture) -> StyleClassification {
    let hosts: BTreeSet<&str> = arch.swcs.values().map(|s| s.host.as_str()).collect();

    // Central: one computer hosts all software, the rest is plain I/O.
    let central =
        arch.central_computer.as_deref().or_else(|| (hosts.len() == 1).then(|| *hosts.iter().next().unwrap()));
    if let Some(cc) = central.filter(|cc| arch.ecus.contains_key(*cc)) {
        let others_plain =
            arch.ecus.values().filter(|e| e.id != cc).all(|e| {
                matches!(e.role, EcuRole::ZoneGateway | EcuRole::Specialized) && !hosts.contains(e.id.as_str())
            });
        if others_plain && hosts.iter().all(|h| *h == cc) {
            return StyleClassification {
                style: Style::Central,
                evidence: vec![format!("{cc} hosts every SWC"), "no other ECU runs application software".into()],
            };
        }
    }

    let masters: Vec<&str> = arch.ecus.values().filter(|e| e.role.is_master()).map(|e| e.id.as_str()).collect();
    let gateways: Vec<&str> =
        arch.ecus.values().filter(|e| e.role == EcuRole::ZoneGateway).map(|e| e.id.as_str()).collect();

    // Zone-oriented: a single master runs all relocatable logic, zone
    // gateways keep only I/O-side software.
    if masters.len() == 1 && !gateways.is_empty() {
        let master = masters[0];
        let relocatable_on_master = arch.swcs.values().filter(|s| s.relocatable).all(|s| s.host == master);
        let others_ok = arch.ecus.values().filter(|e| e.id != master).all(|e| {
            e.role == EcuRole::ZoneGateway || (e.role == EcuRole::Specialized && !hosts.contains(e.id.as_str()))
        });
        if relocatable_on_master && others_ok {
            return StyleClassification {
                style: Style::ZoneOriented,
                evidence: vec![format!("single master {master}"), format!("zone gateways: {}", gateways.join(", "))],
            };
        }
    }

    // Cross-domain: a controller serves more than one domain.
    for e in arch.ecus.values().filter(|e| e.role.is_master()) {
        let domains: BTreeSet<&str> =
            arch.swcs_on(&e.id).filter_map(|s| arch.functions.get(&s.function)?.domain.as_deref()).collect();
        if e.role == EcuRole::CrossDomainController || domains.len() >= 2 {
            let listed: Vec<&str> = domains.into_iter().collect();
            return StyleClassification {
                style: Style::CrossDomain,
                evidence: vec![format!("{} serves domains [{}]", e.id, listed.join(", "))],
            };
        }
    }

    StyleClassification {
        style: Style::DomainOriented,
        evidence: vec![format!("{} master(s), application software spread over {} ECU(s)", masters.len(), hosts.len())],
    }
}
