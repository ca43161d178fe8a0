use std::fmt::Write;

use super::lexer::is_ident;
use crate::model::{Architecture, Position};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn list(items: &[String]) -> String {
    format!("[{}]", items.join(", "))
}

fn pos(p: Position) -> String {
    format!("({}, {}, {})", p.x, p.y, p.z)
}

struct BlockWriter {
    out: String,
    first: bool,
}

impl BlockWriter {
    fn block(&mut self, kind: &str, id: &str, entries: Vec<(&str, String)>) {
        if !self.first {
            self.out.push('\n');
        }
        self.first = false;
        let _ = writeln!(self.out, "{kind} {id} {{");
        for (key, value) in entries {
            let _ = writeln!(self.out, "  {key}: {value};");
        }
        self.out.push_str("}\n");
    }
}

/// Canonical text form: the architecture header first, then blocks sorted by
/// (kind, id), two-space indentation and one key per line.
pub fn serialize(arch: &Architecture) -> String {
    let name = if is_ident(&arch.name) { arch.name.clone() } else { quote(&arch.name) };
    let mut header: Vec<(String, String)> = Vec::new();
    if let Some(cc) = &arch.central_computer {
        header.push(("central".into(), cc.clone()));
    }
    for (domain, ecu) in &arch.domain_controller_of {
        header.push((format!("controller.{domain}"), ecu.clone()));
    }
    let mut w = BlockWriter { out: String::new(), first: true };
    if header.is_empty() {
        let _ = writeln!(w.out, "architecture {name} {{}}");
        w.first = false;
    } else {
        w.block("architecture", &name, header.iter().map(|(k, v)| (k.as_str(), v.clone())).collect());
    }

    for bus in arch.buses.values() {
        let mut e = vec![("type", bus.bus_type.to_string()), ("bandwidth", bus.bandwidth.to_string())];
        if let Some(m) = &bus.lin_master {
            e.push(("lin_master", m.clone()));
        }
        w.block("bus", &bus.id, e);
    }
    for c in arch.circuits.values() {
        w.block("circuit", &c.id, vec![("host", c.host.clone()), ("devices", list(&c.devices))]);
    }
    for d in arch.devices.values() {
        w.block(
            "device",
            &d.id,
            vec![
                ("kind", d.kind.to_string()),
                ("signal", d.signal.to_string()),
                ("pos", pos(d.position)),
                ("data_rate", d.data_rate.to_string()),
            ],
        );
    }
    for ecu in arch.ecus.values() {
        let os: Vec<String> = ecu.os_classes.iter().map(|o| o.to_string()).collect();
        let mut e = vec![
            ("role", ecu.role.to_string()),
            ("pos", pos(ecu.position)),
            ("os", list(&os)),
            ("compute", ecu.compute_capacity.to_string()),
            ("virtualization", ecu.virtualization.to_string()),
            ("redundant_power", ecu.redundant_power.to_string()),
            ("redundant_comm", ecu.redundant_comm.to_string()),
        ];
        if let Some(d) = &ecu.domain {
            e.push(("domain", d.clone()));
        }
        w.block("ecu", &ecu.id, e);
    }
    for f in arch.functions.values() {
        let mut e = vec![
            ("asil", f.asil.to_string()),
            ("swcs", list(&f.swcs)),
            ("circuits", list(&f.circuits)),
            ("devices", list(&f.devices)),
            ("description", quote(&f.description)),
        ];
        if let Some(d) = &f.domain {
            e.push(("domain", d.clone()));
        }
        w.block("function", &f.id, e);
    }
    for l in arch.links.values() {
        w.block(
            "link",
            &l.id,
            vec![
                ("kind", l.kind.to_string()),
                ("a", l.endpoint_a.clone()),
                ("b", l.endpoint_b.clone()),
                ("shielded", l.shielded.to_string()),
            ],
        );
    }
    for s in arch.swcs.values() {
        w.block(
            "swc",
            &s.id,
            vec![
                ("function", s.function.clone()),
                ("host", s.host.clone()),
                ("os", s.os_class.to_string()),
                ("relocatable", s.relocatable.to_string()),
                ("inputs", list(&s.inputs)),
                ("outputs", list(&s.outputs)),
                ("load", s.load.to_string()),
            ],
        );
    }
    w.out
}
