//! Seeded generator of structurally valid architectures.
#![allow(dead_code)]

pub mod oracle;

use eea_core::model::{
    validate, Architecture, Asil, Bus, BusType, Device, DeviceKind, Ecu, EcuRole, HardwareCircuit, Link, LinkKind,
    OsClass, Position, SignalKind, SoftwareComponent, VehicleFunction,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct GenLimits {
    pub max_ecus: usize,
    pub max_functions: usize,
}

impl Default for GenLimits {
    fn default() -> Self {
        GenLimits { max_ecus: 15, max_functions: 8 }
    }
}

const DOMAINS: [&str; 3] = ["body", "chassis", "powertrain"];
const BUS_TYPES: [BusType; 6] =
    [BusType::Lin, BusType::Can, BusType::CanFd, BusType::Ethernet, BusType::Lvds, BusType::Other];

fn coord(rng: &mut ChaCha8Rng) -> f64 {
    // decimeter grid keeps printed values short
    rng.gen_range(0..50) as f64 / 10.0
}

fn position(rng: &mut ChaCha8Rng) -> Position {
    Position { x: coord(rng), y: coord(rng), z: coord(rng) }
}

fn near(rng: &mut ChaCha8Rng, p: Position) -> Position {
    let mut d = || rng.gen_range(-5i32..=5) as f64 / 10.0;
    Position { x: p.x + d(), y: p.y + d(), z: p.z + d() }
}

fn runnable_os(rng: &mut ChaCha8Rng, ecu: &Ecu) -> OsClass {
    if ecu.virtualization {
        *[OsClass::TimeDrivenRt, OsClass::EventDriven].choose(rng).unwrap()
    } else {
        let os: Vec<OsClass> = ecu.os_classes.iter().copied().collect();
        *os.choose(rng).unwrap()
    }
}

fn attach(arch: &mut Architecture, ecu: &str, bus: &str) {
    arch.add_link(Link {
        id: format!("att_{ecu}_{bus}"),
        kind: LinkKind::BusAttachment,
        endpoint_a: ecu.into(),
        endpoint_b: bus.into(),
        shielded: false,
    });
}

/// A connected, valid architecture drawn from `seed`.
pub fn random_architecture(seed: u64, limits: GenLimits) -> Architecture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arch = Architecture::new(format!("Gen{seed}"));
    let n_ecus = rng.gen_range(1..=limits.max_ecus);
    let n_domains = rng.gen_range(1..=n_ecus.min(DOMAINS.len()));
    let central = n_ecus > 1 && rng.gen_bool(0.1);

    let ids: Vec<String> = (0..n_ecus).map(|i| format!("E{i:02}")).collect();
    for (i, id) in ids.iter().enumerate() {
        let role = match i {
            0 if central => EcuRole::CentralComputer,
            i if i < n_domains => EcuRole::DomainController,
            _ => EcuRole::Specialized,
        };
        let mut e = Ecu::new(id.clone(), role, position(&mut rng));
        if role.is_master() {
            e.os_classes.extend([OsClass::TimeDrivenRt, OsClass::EventDriven]);
            e.virtualization = rng.gen_bool(0.5);
            e.compute_capacity = 100.0;
        } else {
            match rng.gen_range(0..3) {
                0 => e.os_classes.insert(OsClass::TimeDrivenRt),
                1 => e.os_classes.insert(OsClass::EventDriven),
                _ => {
                    e.os_classes.extend([OsClass::TimeDrivenRt, OsClass::EventDriven]);
                    true
                }
            };
            e.virtualization = rng.gen_bool(0.2);
            e.compute_capacity = rng.gen_range(2..=30) as f64;
        }
        e.redundant_power = rng.gen_bool(0.2);
        e.redundant_comm = rng.gen_bool(0.2);
        arch.add_ecu(e);
    }
    for d in DOMAINS.iter().take(n_domains) {
        let idx = DOMAINS.iter().position(|x| x == d).unwrap();
        arch.domain_controller_of.insert(d.to_string(), ids[idx].clone());
    }
    if central {
        arch.central_computer = Some(ids[0].clone());
    }

    // Spanning structure: every ECU joins a bus of some earlier ECU.
    let mut bus_of: Vec<Vec<String>> = vec![Vec::new(); n_ecus];
    for i in 1..n_ecus {
        let j = rng.gen_range(0..i);
        let reuse = !bus_of[j].is_empty() && rng.gen_bool(0.5);
        let bus = if reuse {
            bus_of[j].choose(&mut rng).unwrap().clone()
        } else {
            let id = format!("bus{}", arch.buses.len());
            let bus_type = *BUS_TYPES.choose(&mut rng).unwrap();
            let bandwidth = match bus_type {
                BusType::Lin => 0.02,
                BusType::Can => 0.5,
                BusType::CanFd => 2.0,
                BusType::Ethernet => 100.0,
                BusType::Lvds => 1000.0,
                BusType::Other => 10.0,
            };
            let lin_master = (bus_type == BusType::Lin).then(|| ids[j].clone());
            arch.add_bus(Bus { id: id.clone(), bus_type, bandwidth, lin_master });
            attach(&mut arch, &ids[j], &id);
            bus_of[j].push(id.clone());
            id
        };
        attach(&mut arch, &ids[i], &bus);
        bus_of[i].push(bus);
    }

    let n_functions = rng.gen_range(0..=limits.max_functions);
    for fi in 0..n_functions {
        let fid = format!("F{fi}");
        let domain = DOMAINS[rng.gen_range(0..n_domains)].to_string();
        let asil = *Asil::ALL.choose(&mut rng).unwrap();
        let mut f = VehicleFunction {
            id: fid.clone(),
            asil,
            swcs: vec![],
            circuits: vec![],
            devices: vec![],
            description: String::new(),
            domain: Some(domain),
        };
        let mut swcs = Vec::new();
        let mut upstream: Option<String> = None;

        if rng.gen_bool(0.7) {
            let host = ids.choose(&mut rng).unwrap().clone();
            let host_ecu = arch.ecus[&host].clone();
            let cid = format!("{fid}_circ");
            let n_dev = rng.gen_range(1..=2);
            let mut devs = Vec::new();
            for d in 0..n_dev {
                let did = format!("{fid}_dev{d}");
                arch.add_device(Device {
                    id: did.clone(),
                    kind: if rng.gen_bool(0.7) { DeviceKind::Sensor } else { DeviceKind::Actuator },
                    signal: SignalKind::Analog,
                    position: near(&mut rng, host_ecu.position),
                    data_rate: rng.gen_range(0..20) as f64,
                });
                arch.add_link(Link {
                    id: format!("al_{did}"),
                    kind: LinkKind::AnalogLine,
                    endpoint_a: did.clone(),
                    endpoint_b: host.clone(),
                    shielded: false,
                });
                devs.push(did);
            }
            arch.add_circuit(HardwareCircuit { id: cid.clone(), host: host.clone(), devices: devs });
            f.circuits.push(cid);
            let sig = format!("{fid}_raw");
            swcs.push(SoftwareComponent {
                id: format!("{fid}_eval"),
                function: fid.clone(),
                host: host.clone(),
                os_class: runnable_os(&mut rng, &host_ecu),
                relocatable: false,
                inputs: vec![],
                outputs: vec![sig.clone()],
                load: rng.gen_range(0..3) as f64,
            });
            upstream = Some(sig);
        }

        let n_logic = rng.gen_range(1..=3);
        for k in 0..n_logic {
            let host = ids.choose(&mut rng).unwrap().clone();
            let host_ecu = arch.ecus[&host].clone();
            let input = upstream.clone().unwrap_or_else(|| format!("{fid}_ext"));
            let output = format!("{fid}_s{k}");
            swcs.push(SoftwareComponent {
                id: format!("{fid}_logic{k}"),
                function: fid.clone(),
                host,
                os_class: runnable_os(&mut rng, &host_ecu),
                relocatable: rng.gen_bool(0.8),
                inputs: vec![input],
                outputs: vec![output.clone()],
                load: rng.gen_range(0..4) as f64,
            });
            upstream = Some(output);
        }

        if rng.gen_bool(0.5) {
            let target = arch.target_of(&fid).map(str::to_string);
            let host = target.filter(|_| rng.gen_bool(0.5)).unwrap_or_else(|| ids.choose(&mut rng).unwrap().clone());
            let host_ecu = arch.ecus[&host].clone();
            swcs.push(SoftwareComponent {
                id: format!("{fid}_act"),
                function: fid.clone(),
                host,
                os_class: runnable_os(&mut rng, &host_ecu),
                relocatable: false,
                inputs: upstream.clone().into_iter().collect(),
                outputs: vec![],
                load: rng.gen_range(0..3) as f64,
            });
        }

        f.swcs = swcs.iter().map(|s| s.id.clone()).collect();
        arch.add_function(f);
        for s in swcs {
            arch.add_swc(s);
        }
    }

    let violations = validate(&arch);
    assert!(violations.is_empty(), "generator produced an invalid architecture (seed {seed}): {violations:?}");
    arch
}

/// Valid architectures for seeds `0..n`.
pub fn corpus(n: u64, limits: GenLimits) -> impl Iterator<Item = (u64, Architecture)> {
    (0..n).map(move |s| (s, random_architecture(s, limits)))
}
