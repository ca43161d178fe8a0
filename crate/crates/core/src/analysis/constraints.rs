use std::collections::BTreeMap;
use std::fmt;

use crate::engine::FeasibilityConfig;
use crate::model::{Architecture, Asil, EcuRole, Id, LinkKind, OsClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstraintRule {
    AnalogTooLong,
    ShieldingRequired,
    AsilRedundancyMissing,
    RtOsMissing,
    CapacityExceeded,
}

impl ConstraintRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintRule::AnalogTooLong => "analog_too_long",
            ConstraintRule::ShieldingRequired => "shielding_required",
            ConstraintRule::AsilRedundancyMissing => "asil_redundancy_missing",
            ConstraintRule::RtOsMissing => "rt_os_missing",
            ConstraintRule::CapacityExceeded => "capacity_exceeded",
        }
    }
}

impl fmt::Display for ConstraintRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConstraintViolation {
    pub subject: Id,
    pub rule: ConstraintRule,
    pub detail: String,
}

impl fmt::Display for ConstraintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.subject, self.detail)
    }
}

/// ASIL of the function owning a device, QM when unowned.
fn device_asil(arch: &Architecture) -> BTreeMap<&str, Asil> {
    let mut out = BTreeMap::new();
    for f in arch.functions.values() {
        for d in &f.devices {
            out.insert(d.as_str(), f.asil);
        }
        for c in f.circuits.iter().filter_map(|c| arch.circuits.get(c)) {
            for d in &c.devices {
                let e = out.entry(d.as_str()).or_insert(f.asil);
                *e = (*e).max(f.asil);
            }
        }
    }
    out
}

pub fn check_constraints(arch: &Architecture, cfg: &FeasibilityConfig) -> Vec<ConstraintViolation> {
    let mut out = Vec::new();
    let asil_of = device_asil(arch);

    for link in arch.links.values().filter(|l| l.kind == LinkKind::AnalogLine) {
        let (Some(d), Some(e)) = (arch.devices.get(&link.endpoint_a), arch.ecus.get(&link.endpoint_b)) else {
            continue;
        };
        let asil = asil_of.get(d.id.as_str()).copied().unwrap_or(Asil::Qm);
        let len = cfg.distance_metric.measure(d.position, e.position);
        let limit = cfg.max_analog_length(asil);
        if len > limit {
            out.push(ConstraintViolation {
                subject: link.id.clone(),
                rule: ConstraintRule::AnalogTooLong,
                detail: format!("{len:.2} m exceeds the ASIL {asil} limit of {limit} m"),
            });
        }
        if asil >= Asil::C && len > cfg.require_shielding_beyond_m && !link.shielded {
            out.push(ConstraintViolation {
                subject: link.id.clone(),
                rule: ConstraintRule::ShieldingRequired,
                detail: format!("unshielded {len:.2} m line for an ASIL {asil} function"),
            });
        }
    }

    for ecu in arch.ecus.values() {
        let central = ecu.role == EcuRole::CentralComputer || arch.central_computer.as_deref() == Some(&ecu.id);
        if central && !(ecu.redundant_power && ecu.redundant_comm) {
            let asil_d: Vec<&str> = arch
                .swcs_on(&ecu.id)
                .filter(|s| arch.functions.get(&s.function).is_some_and(|f| f.asil == Asil::D))
                .map(|s| s.function.as_str())
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            if !asil_d.is_empty() {
                let mut missing = Vec::new();
                if !ecu.redundant_power {
                    missing.push("power");
                }
                if !ecu.redundant_comm {
                    missing.push("communication");
                }
                out.push(ConstraintViolation {
                    subject: ecu.id.clone(),
                    rule: ConstraintRule::AsilRedundancyMissing,
                    detail: format!(
                        "central computer carries ASIL D {} without redundant {}",
                        asil_d.join(", "),
                        missing.join(" and ")
                    ),
                });
            }
        }

        let load = arch.host_load(&ecu.id);
        if load > ecu.compute_capacity {
            out.push(ConstraintViolation {
                subject: ecu.id.clone(),
                rule: ConstraintRule::CapacityExceeded,
                detail: format!("load {load} exceeds capacity {}", ecu.compute_capacity),
            });
        }
    }

    for swc in arch.swcs.values().filter(|s| s.os_class == OsClass::TimeDrivenRt) {
        if let Some(host) = arch.ecus.get(&swc.host) {
            if !host.supports(OsClass::TimeDrivenRt) {
                out.push(ConstraintViolation {
                    subject: swc.id.clone(),
                    rule: ConstraintRule::RtOsMissing,
                    detail: format!("{} offers no time-driven real-time OS", host.id),
                });
            }
        }
    }

    out.sort();
    out
}
