//! Architecture graph: ECUs, devices, circuits, software components, links,
//! buses and vehicle functions, plus structural validation.
//!
//! All collections are keyed by id in `BTreeMap`s so iteration is
//! lexicographic everywhere.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use crate::topology::{self, EcuGraph};

pub type Id = String;

macro_rules! named_enum {
    ($(#[$meta:meta])* $name:ident, $what:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }

            /// Accepted spellings, in declaration order.
            pub fn names() -> Vec<&'static str> {
                Self::ALL.iter().map(|v| v.as_str()).collect()
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = UnknownVariant;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(UnknownVariant { kind: $what, value: s.to_string() }),
                }
            }
        }
    };
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown {kind} `{value}`")]
pub struct UnknownVariant {
    pub kind: &'static str,
    pub value: String,
}

named_enum!(
    EcuRole, "ECU role" {
        Specialized => "specialized",
        DomainController => "domain_controller",
        CrossDomainController => "cross_domain_controller",
        ZoneGateway => "zone_gateway",
        CentralComputer => "central_computer",
    }
);

impl EcuRole {
    /// Roles that act as a master for some part of the vehicle.
    pub fn is_master(self) -> bool {
        matches!(self, EcuRole::DomainController | EcuRole::CrossDomainController | EcuRole::CentralComputer)
    }
}

named_enum!(
    OsClass, "OS class" {
        TimeDrivenRt => "time_driven_rt",
        EventDriven => "event_driven",
    }
);

named_enum!(
    DeviceKind, "device kind" {
        Sensor => "sensor",
        Actuator => "actuator",
    }
);

named_enum!(
    SignalKind, "signal kind" {
        Analog => "analog",
        Digital => "digital",
    }
);

named_enum!(
    LinkKind, "link kind" {
        AnalogLine => "analog_line",
        BusAttachment => "bus_attachment",
    }
);

named_enum!(
    BusType, "bus type" {
        Lin => "lin",
        Can => "can",
        CanFd => "can_fd",
        Ethernet => "ethernet",
        Lvds => "lvds",
        Other => "other",
    }
);

named_enum!(
    /// Ordered from least to most critical.
    Asil, "ASIL" {
        Qm => "QM",
        A => "A",
        B => "B",
        C => "C",
        D => "D",
    }
);

/// Vehicle-body coordinates in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Position { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

named_enum!(
    DistanceMetric, "distance metric" {
        Manhattan => "manhattan",
        Euclidean => "euclidean",
    }
);

#[allow(clippy::derivable_impls)]
impl Default for DistanceMetric {
    fn default() -> Self {
        DistanceMetric::Manhattan
    }
}

impl DistanceMetric {
    pub fn measure(self, a: Position, b: Position) -> f64 {
        let (dx, dy, dz) = ((a.x - b.x).abs(), (a.y - b.y).abs(), (a.z - b.z).abs());
        match self {
            DistanceMetric::Manhattan => dx + dy + dz,
            DistanceMetric::Euclidean => (dx * dx + dy * dy + dz * dz).sqrt(),
        }
    }
}

/// Harness distance between two positions. Harnesses follow orthogonal body
/// channels, so this is the Manhattan metric.
pub fn distance(a: Position, b: Position) -> f64 {
    DistanceMetric::Manhattan.measure(a, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ecu {
    pub id: Id,
    pub role: EcuRole,
    pub position: Position,
    pub compute_capacity: f64,
    pub os_classes: BTreeSet<OsClass>,
    pub virtualization: bool,
    pub redundant_power: bool,
    pub redundant_comm: bool,
    pub domain: Option<String>,
}

impl Ecu {
    pub fn new(id: impl Into<Id>, role: EcuRole, position: Position) -> Self {
        Ecu {
            id: id.into(),
            role,
            position,
            compute_capacity: 0.0,
            os_classes: BTreeSet::new(),
            virtualization: false,
            redundant_power: false,
            redundant_comm: false,
            domain: None,
        }
    }

    /// Whether software of the given OS class can run here, natively or in a
    /// partition provided by a hypervisor.
    pub fn supports(&self, os: OsClass) -> bool {
        self.virtualization || self.os_classes.contains(&os)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Device {
    pub id: Id,
    pub kind: DeviceKind,
    pub signal: SignalKind,
    pub position: Position,
    /// kbit/s
    pub data_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardwareCircuit {
    pub id: Id,
    pub host: Id,
    pub devices: Vec<Id>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SoftwareComponent {
    pub id: Id,
    pub function: Id,
    pub host: Id,
    pub os_class: OsClass,
    pub relocatable: bool,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub load: f64,
}

impl SoftwareComponent {
    pub fn has_declared_interfaces(&self) -> bool {
        !self.inputs.is_empty() && !self.outputs.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub id: Id,
    pub kind: LinkKind,
    pub endpoint_a: Id,
    pub endpoint_b: Id,
    pub shielded: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bus {
    pub id: Id,
    pub bus_type: BusType,
    /// Mbit/s
    pub bandwidth: f64,
    pub lin_master: Option<Id>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VehicleFunction {
    pub id: Id,
    pub asil: Asil,
    pub swcs: Vec<Id>,
    pub circuits: Vec<Id>,
    pub devices: Vec<Id>,
    pub description: String,
    /// Domain whose controller is the centralization target.
    pub domain: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Architecture {
    pub name: String,
    pub ecus: BTreeMap<Id, Ecu>,
    pub devices: BTreeMap<Id, Device>,
    pub circuits: BTreeMap<Id, HardwareCircuit>,
    pub swcs: BTreeMap<Id, SoftwareComponent>,
    pub links: BTreeMap<Id, Link>,
    pub buses: BTreeMap<Id, Bus>,
    pub functions: BTreeMap<Id, VehicleFunction>,
    pub domain_controller_of: BTreeMap<String, Id>,
    pub central_computer: Option<Id>,
}

impl Architecture {
    pub fn new(name: impl Into<String>) -> Self {
        Architecture { name: name.into(), ..Default::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.ecus.is_empty()
            && self.devices.is_empty()
            && self.circuits.is_empty()
            && self.swcs.is_empty()
            && self.links.is_empty()
            && self.buses.is_empty()
            && self.functions.is_empty()
    }

    pub fn add_ecu(&mut self, ecu: Ecu) {
        self.ecus.insert(ecu.id.clone(), ecu);
    }

    pub fn add_device(&mut self, device: Device) {
        self.devices.insert(device.id.clone(), device);
    }

    pub fn add_circuit(&mut self, circuit: HardwareCircuit) {
        self.circuits.insert(circuit.id.clone(), circuit);
    }

    pub fn add_swc(&mut self, swc: SoftwareComponent) {
        self.swcs.insert(swc.id.clone(), swc);
    }

    pub fn add_link(&mut self, link: Link) {
        self.links.insert(link.id.clone(), link);
    }

    pub fn add_bus(&mut self, bus: Bus) {
        self.buses.insert(bus.id.clone(), bus);
    }

    pub fn add_function(&mut self, function: VehicleFunction) {
        self.functions.insert(function.id.clone(), function);
    }

    pub fn swcs_of<'a>(&'a self, function: &'a str) -> impl Iterator<Item = &'a SoftwareComponent> + 'a {
        self.swcs.values().filter(move |s| s.function == function)
    }

    pub fn swcs_on<'a>(&'a self, ecu: &'a str) -> impl Iterator<Item = &'a SoftwareComponent> + 'a {
        self.swcs.values().filter(move |s| s.host == ecu)
    }

    pub fn circuits_on<'a>(&'a self, ecu: &'a str) -> impl Iterator<Item = &'a HardwareCircuit> + 'a {
        self.circuits.values().filter(move |c| c.host == ecu)
    }

    /// Buses an ECU is attached to.
    pub fn attachments_of(&self, ecu: &str) -> BTreeSet<&str> {
        self.links
            .values()
            .filter(|l| l.kind == LinkKind::BusAttachment && l.endpoint_a == ecu)
            .map(|l| l.endpoint_b.as_str())
            .collect()
    }

    /// ECUs attached to a bus, sorted.
    pub fn bus_members(&self, bus: &str) -> BTreeSet<&str> {
        self.links
            .values()
            .filter(|l| l.kind == LinkKind::BusAttachment && l.endpoint_b == bus)
            .map(|l| l.endpoint_a.as_str())
            .collect()
    }

    pub fn host_load(&self, ecu: &str) -> f64 {
        self.swcs_on(ecu).map(|s| s.load).sum()
    }

    /// The controller a function centralizes toward: the central computer
    /// when designated, otherwise the controller of the function's domain.
    pub fn target_of(&self, function: &str) -> Option<&str> {
        if let Some(cc) = &self.central_computer {
            return Some(cc.as_str());
        }
        let domain = self.functions.get(function)?.domain.as_ref()?;
        self.domain_controller_of.get(domain).map(String::as_str)
    }

    /// ECUs that may never be removed: domain controllers and the central
    /// computer.
    pub fn is_controller(&self, ecu: &str) -> bool {
        self.central_computer.as_deref() == Some(ecu) || self.domain_controller_of.values().any(|c| c == ecu)
    }
}

named_enum!(
    /// Structural rule identifiers reported by [`validate`].
    Rule, "rule" {
        BusBandwidth => "bus_bandwidth",
        BusMembers => "bus_members",
        CircuitDevices => "circuit_devices",
        ControllerMissing => "controller_missing",
        DeviceOwnership => "device_ownership",
        DeviceUnwired => "device_unwired",
        DuplicateId => "duplicate_id",
        FunctionDomain => "function_domain",
        FunctionMembership => "function_membership",
        GatewayHostsRelocatable => "gateway_hosts_relocatable",
        LinMaster => "lin_master",
        LinkShape => "link_shape",
        NegativeQuantity => "negative_quantity",
        NonFinitePosition => "non_finite_position",
        OsMissing => "os_missing",
        OsUnsupported => "os_unsupported",
        ReferenceMissing => "reference_missing",
        SignalPathMissing => "signal_path_missing",
        UndeclaredInterfaces => "undeclared_interfaces",
    }
);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntegrityViolation {
    pub entity: Id,
    pub rule: Rule,
    pub message: String,
}

impl fmt::Display for IntegrityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.entity, self.message)
    }
}

struct Collector(Vec<IntegrityViolation>);

impl Collector {
    fn push(&mut self, entity: &str, rule: Rule, message: impl Into<String>) {
        self.0.push(IntegrityViolation { entity: entity.to_string(), rule, message: message.into() });
    }
}

/// Checks every structural invariant of the architecture.
///
/// Violations are sorted by `(entity, rule, message)`; an empty list means
/// the architecture is valid.
pub fn validate(arch: &Architecture) -> Vec<IntegrityViolation> {
    let mut out = Collector(Vec::new());
    check_ids(arch, &mut out);
    check_ecus(arch, &mut out);
    check_devices_and_circuits(arch, &mut out);
    check_swcs(arch, &mut out);
    check_links(arch, &mut out);
    check_buses(arch, &mut out);
    check_functions(arch, &mut out);
    check_controllers(arch, &mut out);
    check_signal_paths(arch, &mut out);
    let mut v = out.0;
    v.sort();
    v.dedup();
    v
}

fn check_ids(arch: &Architecture, out: &mut Collector) {
    let mut seen: BTreeMap<&str, &'static str> = BTreeMap::new();
    let kinds: [(&'static str, Vec<&str>); 7] = [
        ("bus", arch.buses.keys().map(String::as_str).collect()),
        ("circuit", arch.circuits.keys().map(String::as_str).collect()),
        ("device", arch.devices.keys().map(String::as_str).collect()),
        ("ecu", arch.ecus.keys().map(String::as_str).collect()),
        ("function", arch.functions.keys().map(String::as_str).collect()),
        ("link", arch.links.keys().map(String::as_str).collect()),
        ("swc", arch.swcs.keys().map(String::as_str).collect()),
    ];
    for (kind, ids) in kinds.iter() {
        for id in ids {
            if let Some(prev) = seen.insert(id, kind) {
                out.push(id, Rule::DuplicateId, format!("id used by both a {prev} and a {kind}"));
            }
        }
    }
}

fn check_ecus(arch: &Architecture, out: &mut Collector) {
    for ecu in arch.ecus.values() {
        if !ecu.position.is_finite() {
            out.push(&ecu.id, Rule::NonFinitePosition, "position must be finite");
        }
        if !(ecu.compute_capacity.is_finite() && ecu.compute_capacity >= 0.0) {
            out.push(&ecu.id, Rule::NegativeQuantity, "compute capacity must be a finite value >= 0");
        }
        let hosts_swc = arch.swcs_on(&ecu.id).next().is_some();
        if hosts_swc && ecu.os_classes.is_empty() {
            out.push(&ecu.id, Rule::OsMissing, "hosts software but declares no OS class");
        }
        if ecu.role == EcuRole::ZoneGateway {
            for swc in arch.swcs_on(&ecu.id).filter(|s| s.relocatable) {
                out.push(
                    &ecu.id,
                    Rule::GatewayHostsRelocatable,
                    format!("zone gateway hosts relocatable SWC {}", swc.id),
                );
            }
        }
    }
}

fn check_devices_and_circuits(arch: &Architecture, out: &mut Collector) {
    let mut owners: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for circuit in arch.circuits.values() {
        if !arch.ecus.contains_key(&circuit.host) {
            out.push(&circuit.id, Rule::ReferenceMissing, format!("host ECU {} does not exist", circuit.host));
        }
        if circuit.devices.is_empty() {
            out.push(&circuit.id, Rule::CircuitDevices, "circuit drives no devices");
        }
        for d in &circuit.devices {
            if arch.devices.contains_key(d) {
                owners.entry(d.as_str()).or_default().push(&circuit.id);
            } else {
                out.push(&circuit.id, Rule::ReferenceMissing, format!("device {d} does not exist"));
            }
        }
    }
    for dev in arch.devices.values() {
        if !dev.position.is_finite() {
            out.push(&dev.id, Rule::NonFinitePosition, "position must be finite");
        }
        if !(dev.data_rate.is_finite() && dev.data_rate >= 0.0) {
            out.push(&dev.id, Rule::NegativeQuantity, "data rate must be a finite value >= 0");
        }
        match owners.get(dev.id.as_str()).map(Vec::len).unwrap_or(0) {
            1 => {}
            0 => out.push(&dev.id, Rule::DeviceOwnership, "device is not driven by any circuit"),
            n => out.push(&dev.id, Rule::DeviceOwnership, format!("device is driven by {n} circuits")),
        }
    }
    // Every device reaches its circuit's host over an analog line.
    for circuit in arch.circuits.values() {
        for d in &circuit.devices {
            let wired = arch
                .links
                .values()
                .any(|l| l.kind == LinkKind::AnalogLine && &l.endpoint_a == d && l.endpoint_b == circuit.host);
            if arch.devices.contains_key(d) && !wired {
                out.push(
                    d,
                    Rule::DeviceUnwired,
                    format!("no analog line to {} (host of circuit {})", circuit.host, circuit.id),
                );
            }
        }
    }
}

fn check_swcs(arch: &Architecture, out: &mut Collector) {
    for swc in arch.swcs.values() {
        if !(swc.load.is_finite() && swc.load >= 0.0) {
            out.push(&swc.id, Rule::NegativeQuantity, "load must be a finite value >= 0");
        }
        if swc.relocatable && !swc.has_declared_interfaces() {
            out.push(&swc.id, Rule::UndeclaredInterfaces, "relocatable SWC must declare inputs and outputs");
        }
        match arch.ecus.get(&swc.host) {
            None => out.push(&swc.id, Rule::ReferenceMissing, format!("host ECU {} does not exist", swc.host)),
            Some(ecu) if !ecu.supports(swc.os_class) => {
                out.push(&swc.id, Rule::OsUnsupported, format!("host {} cannot run {}", ecu.id, swc.os_class))
            }
            Some(_) => {}
        }
        match arch.functions.get(&swc.function) {
            None => out.push(&swc.id, Rule::ReferenceMissing, format!("function {} does not exist", swc.function)),
            Some(f) if !f.swcs.contains(&swc.id) => {
                out.push(&swc.id, Rule::FunctionMembership, format!("not listed by its function {}", f.id))
            }
            Some(_) => {}
        }
    }
}

fn check_links(arch: &Architecture, out: &mut Collector) {
    for link in arch.links.values() {
        match link.kind {
            LinkKind::AnalogLine => {
                let Some(dev) = arch.devices.get(&link.endpoint_a) else {
                    out.push(
                        &link.id,
                        Rule::LinkShape,
                        format!("analog line must start at a device, not {}", link.endpoint_a),
                    );
                    continue;
                };
                if !arch.ecus.contains_key(&link.endpoint_b) {
                    out.push(
                        &link.id,
                        Rule::LinkShape,
                        format!("analog line must end at an ECU, not {}", link.endpoint_b),
                    );
                    continue;
                }
                let host_matches =
                    arch.circuits.values().any(|c| c.devices.contains(&dev.id) && c.host == link.endpoint_b);
                if !host_matches {
                    out.push(
                        &link.id,
                        Rule::LinkShape,
                        format!("{} is not the host of the circuit driving {}", link.endpoint_b, dev.id),
                    );
                }
            }
            LinkKind::BusAttachment => {
                if !arch.ecus.contains_key(&link.endpoint_a) {
                    out.push(
                        &link.id,
                        Rule::LinkShape,
                        format!("bus attachment must start at an ECU, not {}", link.endpoint_a),
                    );
                }
                if !arch.buses.contains_key(&link.endpoint_b) {
                    out.push(
                        &link.id,
                        Rule::LinkShape,
                        format!("bus attachment must end at a bus, not {}", link.endpoint_b),
                    );
                }
                if link.shielded {
                    out.push(&link.id, Rule::LinkShape, "shielding applies to analog lines only");
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    for link in arch.links.values().filter(|l| l.kind == LinkKind::BusAttachment) {
        if !seen.insert((&link.endpoint_a, &link.endpoint_b)) {
            out.push(
                &link.id,
                Rule::LinkShape,
                format!("{} is attached to {} twice", link.endpoint_a, link.endpoint_b),
            );
        }
    }
}

fn check_buses(arch: &Architecture, out: &mut Collector) {
    for bus in arch.buses.values() {
        if !(bus.bandwidth.is_finite() && bus.bandwidth > 0.0) {
            out.push(&bus.id, Rule::BusBandwidth, "bandwidth must be a finite value > 0");
        }
        if bus.bus_type == BusType::CanFd && bus.bandwidth > 5.0 {
            out.push(&bus.id, Rule::BusBandwidth, "CAN-FD carries at most 5 Mbit/s");
        }
        let members = arch.bus_members(&bus.id);
        if members.len() < 2 {
            out.push(&bus.id, Rule::BusMembers, format!("{} attached member(s), need at least 2", members.len()));
        }
        if let Some(master) = &bus.lin_master {
            if bus.bus_type != BusType::Lin {
                out.push(&bus.id, Rule::LinMaster, "only LIN buses have a master");
            } else if !members.contains(master.as_str()) {
                out.push(&bus.id, Rule::LinMaster, format!("master {master} is not attached"));
            }
        }
    }
}

fn check_functions(arch: &Architecture, out: &mut Collector) {
    let mut circuit_owner: BTreeMap<&str, &str> = BTreeMap::new();
    let mut device_owner: BTreeMap<&str, &str> = BTreeMap::new();
    for f in arch.functions.values() {
        for s in &f.swcs {
            match arch.swcs.get(s) {
                None => out.push(&f.id, Rule::ReferenceMissing, format!("SWC {s} does not exist")),
                Some(swc) if swc.function != f.id => out.push(
                    &f.id,
                    Rule::FunctionMembership,
                    format!("lists SWC {s} which belongs to {}", swc.function),
                ),
                Some(_) => {}
            }
        }
        for c in &f.circuits {
            if !arch.circuits.contains_key(c) {
                out.push(&f.id, Rule::ReferenceMissing, format!("circuit {c} does not exist"));
            } else if let Some(prev) = circuit_owner.insert(c, &f.id) {
                out.push(c, Rule::FunctionMembership, format!("claimed by functions {prev} and {}", f.id));
            }
        }
        for d in &f.devices {
            if !arch.devices.contains_key(d) {
                out.push(&f.id, Rule::ReferenceMissing, format!("device {d} does not exist"));
            } else if let Some(prev) = device_owner.insert(d, &f.id) {
                out.push(d, Rule::FunctionMembership, format!("claimed by functions {prev} and {}", f.id));
            }
        }
        if let Some(domain) = &f.domain {
            if arch.central_computer.is_none() && !arch.domain_controller_of.contains_key(domain) {
                out.push(&f.id, Rule::FunctionDomain, format!("domain {domain} has no controller"));
            }
        }
    }
}

fn check_controllers(arch: &Architecture, out: &mut Collector) {
    for (domain, ecu) in &arch.domain_controller_of {
        if !arch.ecus.contains_key(ecu) {
            out.push(ecu, Rule::ControllerMissing, format!("controller of domain {domain} does not exist"));
        }
    }
    if let Some(cc) = &arch.central_computer {
        if !arch.ecus.contains_key(cc) {
            out.push(cc, Rule::ControllerMissing, "central computer does not exist");
        }
    }
}

fn check_signal_paths(arch: &Architecture, out: &mut Collector) {
    let graph = EcuGraph::new(arch);
    for f in arch.functions.keys() {
        for (from, to) in topology::exchanging_hosts(arch, f) {
            if graph.route(&from, &to).is_none() {
                out.push(f, Rule::SignalPathMissing, format!("no bus path from {from} to {to}"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ecu(id: &str) -> Ecu {
        let mut e = Ecu::new(id, EcuRole::Specialized, Position::default());
        e.os_classes.insert(OsClass::EventDriven);
        e.compute_capacity = 10.0;
        e
    }

    #[test]
    fn empty_architecture_is_valid() {
        assert!(validate(&Architecture::new("empty")).is_empty());
    }

    #[test]
    fn dangling_swc_host_is_one_violation() {
        let mut a = Architecture::new("t");
        a.add_ecu(ecu("A"));
        a.add_function(VehicleFunction {
            id: "F".into(),
            asil: Asil::Qm,
            swcs: vec!["S".into()],
            circuits: vec![],
            devices: vec![],
            description: String::new(),
            domain: None,
        });
        a.add_swc(SoftwareComponent {
            id: "S".into(),
            function: "F".into(),
            host: "Ghost".into(),
            os_class: OsClass::EventDriven,
            relocatable: false,
            inputs: vec![],
            outputs: vec![],
            load: 1.0,
        });
        let v = validate(&a);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].rule, Rule::ReferenceMissing);
        assert_eq!(v[0].entity, "S");
    }

    #[test]
    fn violations_are_sorted_by_entity_then_rule() {
        let mut a = Architecture::new("t");
        let mut z = ecu("Z");
        z.compute_capacity = -1.0;
        a.add_ecu(z);
        a.add_bus(Bus { id: "B".into(), bus_type: BusType::CanFd, bandwidth: 8.0, lin_master: None });
        let v = validate(&a);
        let keys: Vec<_> = v.iter().map(|v| (v.entity.clone(), v.rule)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(keys.contains(&("B".into(), Rule::BusBandwidth)));
        assert!(keys.contains(&("B".into(), Rule::BusMembers)));
        assert!(keys.contains(&("Z".into(), Rule::NegativeQuantity)));
    }

    #[test]
    fn distance_examples() {
        let o = Position::new(0.0, 0.0, 0.0);
        assert_eq!(distance(o, o), 0.0);
        assert_eq!(distance(Position::new(1.0, 2.0, 0.0), Position::new(1.0, 2.0, 0.5)), 0.5);
        assert_eq!(distance(o, Position::new(1.0, 1.0, 1.0)), 3.0);
        let e = DistanceMetric::Euclidean.measure(o, Position::new(3.0, 4.0, 0.0));
        assert!((e - 5.0).abs() < 1e-12);
    }

    #[test]
    fn gateway_with_relocatable_swc_is_flagged() {
        let mut a = Architecture::new("t");
        let mut g = ecu("G");
        g.role = EcuRole::ZoneGateway;
        a.add_ecu(g);
        a.add_function(VehicleFunction {
            id: "F".into(),
            asil: Asil::A,
            swcs: vec!["S".into()],
            circuits: vec![],
            devices: vec![],
            description: String::new(),
            domain: None,
        });
        a.add_swc(SoftwareComponent {
            id: "S".into(),
            function: "F".into(),
            host: "G".into(),
            os_class: OsClass::EventDriven,
            relocatable: true,
            inputs: vec!["i".into()],
            outputs: vec!["o".into()],
            load: 1.0,
        });
        let v = validate(&a);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::GatewayHostsRelocatable);
    }

    #[test]
    fn role_parsing_rejects_unknown() {
        assert_eq!("zone_gateway".parse::<EcuRole>(), Ok(EcuRole::ZoneGateway));
        let err = "banana".parse::<EcuRole>().unwrap_err();
        assert_eq!(err.to_string(), "unknown ECU role `banana`");
    }
}
