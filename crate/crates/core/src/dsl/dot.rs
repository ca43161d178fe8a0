use std::fmt::Write;

use serde::Deserialize;

use crate::model::{Architecture, DeviceKind, EcuRole, LinkKind};

/// Options for [`emit_dot`]; loadable from the `[render]` config section.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderOptions {
    /// Draw sensor and actuator nodes and their analog lines.
    pub include_devices: bool,
    /// List hosted circuits and SWCs in ECU labels.
    pub show_hosted: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { include_devices: true, show_hosted: true }
    }
}

fn esc(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
}

fn role_shape(role: EcuRole) -> &'static str {
    match role {
        EcuRole::Specialized => "box",
        EcuRole::DomainController => "doubleoctagon",
        EcuRole::CrossDomainController => "octagon",
        EcuRole::ZoneGateway => "hexagon",
        EcuRole::CentralComputer => "tripleoctagon",
    }
}

/// Graphviz rendering: one node per ECU, device and bus; analog lines are
/// dashed device -> ECU edges, bus attachments bold ECU -> bus edges.
pub fn emit_dot(arch: &Architecture, options: &RenderOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", esc(&arch.name));
    for ecu in arch.ecus.values() {
        let mut label = format!("{}\\n{}", esc(&ecu.id), ecu.role);
        if options.show_hosted {
            let hosted: Vec<&str> = arch
                .circuits_on(&ecu.id)
                .map(|c| c.id.as_str())
                .chain(arch.swcs_on(&ecu.id).map(|s| s.id.as_str()))
                .collect();
            if !hosted.is_empty() {
                let _ = write!(label, "\\n[{}]", esc(&hosted.join(", ")));
            }
        }
        let _ = writeln!(out, "  \"{}\" [label=\"{}\", shape={}];", esc(&ecu.id), label, role_shape(ecu.role));
    }
    if options.include_devices {
        for d in arch.devices.values() {
            let shape = match d.kind {
                DeviceKind::Sensor => "ellipse",
                DeviceKind::Actuator => "invhouse",
            };
            let _ = writeln!(
                out,
                "  \"{}\" [label=\"{}\\n{} {}\", shape={}];",
                esc(&d.id),
                esc(&d.id),
                d.signal,
                d.kind,
                shape
            );
        }
    }
    for bus in arch.buses.values() {
        let _ = writeln!(
            out,
            "  \"{}\" [label=\"{}\\n{}\", shape=parallelogram, style=filled];",
            esc(&bus.id),
            esc(&bus.id),
            bus.bus_type
        );
    }
    for link in arch.links.values() {
        let style = match link.kind {
            LinkKind::AnalogLine if !options.include_devices => continue,
            LinkKind::AnalogLine => "dashed",
            LinkKind::BusAttachment => "bold",
        };
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\" [label=\"{}\", style={}];",
            esc(&link.endpoint_a),
            esc(&link.endpoint_b),
            esc(&link.id),
            style
        );
    }
    out.push_str("}\n");
    out
}
