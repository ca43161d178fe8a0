//! Decomposition of a vehicle function into its four elementary component
//! classes, and the relocatability verdict for each software component.

use std::collections::BTreeSet;
use std::fmt;

use crate::model::{Architecture, Id, LinkKind, OsClass};
use crate::topology::{self, EcuGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementaryClass {
    /// Circuits between I/O and the processing unit.
    Hw,
    /// Software components.
    Sw,
    /// Direct analog device-to-ECU lines.
    IoSignalLine,
    /// Digital bus paths between ECUs.
    IoCom,
}

impl ElementaryClass {
    pub const ALL: [ElementaryClass; 4] =
        [ElementaryClass::Hw, ElementaryClass::Sw, ElementaryClass::IoSignalLine, ElementaryClass::IoCom];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementaryClass::Hw => "HW",
            ElementaryClass::Sw => "SW",
            ElementaryClass::IoSignalLine => "IO_SIGNAL_LINE",
            ElementaryClass::IoCom => "IO_COM",
        }
    }
}

impl fmt::Display for ElementaryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnchorReason {
    CircuitBound,
    HardRtWithoutTargetSupport,
    UndeclaredInterfaces,
    FlaggedFixed,
}

impl AnchorReason {
    pub fn as_str(self) -> &'static str {
        match self {
            AnchorReason::CircuitBound => "circuit_bound",
            AnchorReason::HardRtWithoutTargetSupport => "hard_rt_without_target_support",
            AnchorReason::UndeclaredInterfaces => "undeclared_interfaces",
            AnchorReason::FlaggedFixed => "flagged_fixed",
        }
    }
}

impl fmt::Display for AnchorReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Relocatable,
    Anchored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relocatability {
    pub swc: Id,
    pub verdict: Verdict,
    pub reasons: Vec<AnchorReason>,
}

impl Relocatability {
    pub fn is_relocatable(&self) -> bool {
        self.verdict == Verdict::Relocatable
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Element {
    pub class: ElementaryClass,
    pub id: String,
    /// Host ECU, `device->ecu` for signal lines, or the ECU/bus sequence of
    /// a bus path.
    pub location: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionAbstraction {
    pub function: Id,
    /// Sorted by (class, id).
    pub elements: Vec<Element>,
    pub relocatable_swcs: BTreeSet<Id>,
    pub anchored_elements: Vec<(Id, Vec<AnchorReason>)>,
}

impl FunctionAbstraction {
    pub fn of_class(&self, class: ElementaryClass) -> impl Iterator<Item = &Element> {
        self.elements.iter().filter(move |e| e.class == class)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AbstractionError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown software component `{0}`")]
    UnknownSwc(String),
}

/// Element id used for the bus path between two ECUs.
pub fn bus_path_id(from: &str, to: &str) -> String {
    format!("{from}->{to}")
}

pub fn abstract_function(arch: &Architecture, function: &str) -> Result<FunctionAbstraction, AbstractionError> {
    let f = arch.functions.get(function).ok_or_else(|| AbstractionError::UnknownFunction(function.to_string()))?;
    let mut elements = Vec::new();

    for c in f.circuits.iter().filter_map(|c| arch.circuits.get(c)) {
        elements.push(Element { class: ElementaryClass::Hw, id: c.id.clone(), location: c.host.clone() });
    }

    let mut relocatable_swcs = BTreeSet::new();
    let mut anchored_elements = Vec::new();
    for swc in arch.swcs_of(function) {
        elements.push(Element { class: ElementaryClass::Sw, id: swc.id.clone(), location: swc.host.clone() });
        let r = assess_relocatability(arch, &swc.id)?;
        if r.is_relocatable() {
            relocatable_swcs.insert(swc.id.clone());
        } else {
            anchored_elements.push((swc.id.clone(), r.reasons));
        }
    }

    // devices listed by the function plus those driven by its circuits
    let devices: BTreeSet<&str> = f
        .devices
        .iter()
        .chain(f.circuits.iter().filter_map(|c| arch.circuits.get(c)).flat_map(|c| &c.devices))
        .map(String::as_str)
        .collect();
    for link in arch.links.values() {
        if link.kind == LinkKind::AnalogLine && devices.contains(link.endpoint_a.as_str()) {
            elements.push(Element {
                class: ElementaryClass::IoSignalLine,
                id: link.id.clone(),
                location: format!("{}->{}", link.endpoint_a, link.endpoint_b),
            });
        }
    }

    let graph = EcuGraph::new(arch);
    for (from, to) in topology::exchanging_hosts(arch, function) {
        let location = match graph.route(&from, &to) {
            Some(hops) => {
                let mut parts = vec![from.clone()];
                for h in hops {
                    parts.push(h.bus);
                    parts.push(h.ecu);
                }
                parts.join(">")
            }
            None => "unrouted".to_string(),
        };
        elements.push(Element { class: ElementaryClass::IoCom, id: bus_path_id(&from, &to), location });
    }

    elements.sort();
    Ok(FunctionAbstraction { function: function.to_string(), elements, relocatable_swcs, anchored_elements })
}

/// Relocatability of one SWC with respect to its next hop toward the
/// controller its function centralizes on.
pub fn assess_relocatability(arch: &Architecture, swc: &str) -> Result<Relocatability, AbstractionError> {
    let s = arch.swcs.get(swc).ok_or_else(|| AbstractionError::UnknownSwc(swc.to_string()))?;
    let mut reasons = Vec::new();

    if topology::is_circuit_bound(arch, s) {
        reasons.push(AnchorReason::CircuitBound);
    }

    if s.os_class == OsClass::TimeDrivenRt {
        if let Some(target) = arch.target_of(&s.function) {
            if target != s.host {
                let hop = EcuGraph::new(arch).next_hop(&s.host, target);
                let supported =
                    hop.and_then(|h| arch.ecus.get(&h.ecu)).is_some_and(|e| e.supports(OsClass::TimeDrivenRt));
                if !supported {
                    reasons.push(AnchorReason::HardRtWithoutTargetSupport);
                }
            }
        }
    }

    if !s.has_declared_interfaces() {
        reasons.push(AnchorReason::UndeclaredInterfaces);
    }
    if !s.relocatable {
        reasons.push(AnchorReason::FlaggedFixed);
    }

    let verdict = if reasons.is_empty() { Verdict::Relocatable } else { Verdict::Anchored };
    Ok(Relocatability { swc: swc.to_string(), verdict, reasons })
}
