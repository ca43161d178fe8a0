//! Stepwise centralization as deterministic graph rewrites.
//!
//! One step for a function:
//!
//! 1. every relocatable SWC moves one hop along the gateway route toward
//!    the function's controller (central computer when designated, else the
//!    domain controller), if the next ECU can run it and has capacity;
//! 2. circuits left behind with only their circuit-bound SWCs are resolved:
//!    either the I/O is centralized (devices rewired with direct analog lines
//!    to the processing ECU, circuit and bound SWCs moved along), or the
//!    circuit's host is demoted to a zone gateway. When the logic has just
//!    reached the controller the host is demoted first, so the zone-oriented
//!    form appears as its own stage before the gateway is dissolved;
//! 3. ECUs that host nothing and carry no route are pruned.
//!
//! Every applied rewrite lowers [`potential`] (sum of SWC hop distances to
//! their controllers plus the ECU count), which bounds trace length.

mod feasibility;

use std::collections::BTreeSet;
use std::fmt::{self, Write};

pub use feasibility::{FeasibilityConfig, InvalidConfig};

use crate::abstraction::{assess_relocatability, AnchorReason};
use crate::analysis::{classify, StyleClassification};
use crate::dsl;
use crate::model::{self, Architecture, Asil, EcuRole, Id, IntegrityViolation, LinkKind};
use crate::topology::{self, EcuGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RewriteKind {
    ShiftSwc,
    CentralizeIo,
    ConvertToGateway,
    PruneEcu,
}

impl RewriteKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RewriteKind::ShiftSwc => "shift_swc",
            RewriteKind::CentralizeIo => "centralize_io",
            RewriteKind::ConvertToGateway => "convert_to_gateway",
            RewriteKind::PruneEcu => "prune_ecu",
        }
    }
}

impl fmt::Display for RewriteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub kind: RewriteKind,
    pub subject: Id,
    pub from: Id,
    /// Absent for gateway conversions and pruning.
    pub to: Option<Id>,
    pub justification: String,
}

impl fmt::Display for RewriteStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {}", self.kind, self.subject, self.from)?;
        if let Some(to) = &self.to {
            write!(f, " -> {to}")?;
        }
        write!(f, " ({})", self.justification)
    }
}

/// A rewrite that was applicable in principle but rejected by a limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedRewrite {
    pub subject: Id,
    pub target: Id,
    pub reason: String,
}

impl fmt::Display for BlockedRewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.subject, self.target, self.reason)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminalReason {
    Fixpoint,
    ConstraintBlocked,
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminalReason::Fixpoint => "fixpoint",
            TerminalReason::ConstraintBlocked => "constraint_blocked",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub architecture: Architecture,
    pub steps: Vec<RewriteStep>,
    pub style: StyleClassification,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceScope {
    Function(Id),
    All,
}

impl fmt::Display for TraceScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceScope::Function(id) => f.write_str(id),
            TraceScope::All => f.write_str("all"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StageTrace {
    pub scope: TraceScope,
    pub stages: Vec<Stage>,
    pub terminal_reason: TerminalReason,
    /// Rewrites rejected on the final architecture.
    pub blocked: Vec<BlockedRewrite>,
}

impl StageTrace {
    pub fn final_architecture(&self) -> &Architecture {
        &self.stages.last().expect("a trace has at least one stage").architecture
    }

    /// Step listing per stage, as written to `trace.md`.
    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# Centralization trace: {}\n", self.scope);
        for (n, stage) in self.stages.iter().enumerate() {
            let _ = writeln!(out, "## Stage {n} ({}, {} ECUs)\n", stage.style.style, stage.architecture.ecus.len());
            if stage.steps.is_empty() {
                out.push_str("- input architecture\n");
            }
            for step in &stage.steps {
                let _ = writeln!(out, "- {step}");
            }
            out.push('\n');
        }
        let _ = writeln!(out, "Terminal reason: {}", self.terminal_reason);
        for b in &self.blocked {
            let _ = writeln!(out, "- blocked: {b}");
        }
        out
    }

    /// Canonical text of every stage followed by the trace listing; equal
    /// traces produce equal strings.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (n, stage) in self.stages.iter().enumerate() {
            let _ = writeln!(out, "# stage {n}");
            out.push_str(&dsl::serialize(&stage.architecture));
        }
        out.push_str(&self.to_markdown());
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum StepResult {
    Applied { architecture: Architecture, steps: Vec<RewriteStep>, blocked: Vec<BlockedRewrite> },
    NoChange { blocked: Vec<BlockedRewrite> },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error(transparent)]
    InvalidConfig(#[from] InvalidConfig),
    #[error("architecture has {} integrity violation(s)", .0.len())]
    InvalidArchitecture(Vec<IntegrityViolation>),
}

fn check_inputs(arch: &Architecture, cfg: &FeasibilityConfig) -> Result<(), EngineError> {
    cfg.validate()?;
    let violations = model::validate(arch);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(EngineError::InvalidArchitecture(violations))
    }
}

/// Termination measure: summed hop distance of every SWC to its function's
/// controller, plus the number of ECUs.
pub fn potential(arch: &Architecture) -> usize {
    let graph = EcuGraph::new(arch);
    let mut total = arch.ecus.len();
    for f in arch.functions.keys() {
        let Some(target) = arch.target_of(f) else { continue };
        let dist = graph.distances_from(target);
        total += arch.swcs_of(f).filter_map(|s| dist.get(&s.host)).sum::<usize>();
    }
    total
}

/// Applies one centralization step for `function`, without pruning.
pub fn centralize_step(
    arch: &Architecture,
    function: &str,
    cfg: &FeasibilityConfig,
) -> Result<StepResult, EngineError> {
    check_inputs(arch, cfg)?;
    if !arch.functions.contains_key(function) {
        return Err(EngineError::UnknownFunction(function.to_string()));
    }
    let mut next = arch.clone();
    let mut steps = Vec::new();
    let mut blocked = Vec::new();
    step_function(&mut next, function, cfg, &mut steps, &mut blocked);
    Ok(if steps.is_empty() {
        StepResult::NoChange { blocked }
    } else {
        StepResult::Applied { architecture: next, steps, blocked }
    })
}

pub fn centralize_function(
    arch: &Architecture,
    function: &str,
    cfg: &FeasibilityConfig,
) -> Result<StageTrace, EngineError> {
    check_inputs(arch, cfg)?;
    if !arch.functions.contains_key(function) {
        return Err(EngineError::UnknownFunction(function.to_string()));
    }
    Ok(run(arch, cfg, TraceScope::Function(function.to_string()), &[function.to_string()]))
}

/// Centralizes every function jointly, in id order within each stage. An ECU
/// is pruned only once no function needs it.
pub fn centralize_all(arch: &Architecture, cfg: &FeasibilityConfig) -> Result<StageTrace, EngineError> {
    check_inputs(arch, cfg)?;
    let functions: Vec<Id> = arch.functions.keys().cloned().collect();
    Ok(run(arch, cfg, TraceScope::All, &functions))
}

fn run(arch: &Architecture, cfg: &FeasibilityConfig, scope: TraceScope, functions: &[Id]) -> StageTrace {
    let mut stages = vec![Stage { architecture: arch.clone(), steps: Vec::new(), style: classify(arch) }];
    let mut current = arch.clone();
    loop {
        let mut steps = Vec::new();
        let mut blocked = Vec::new();
        for f in functions {
            step_function(&mut current, f, cfg, &mut steps, &mut blocked);
        }
        let (pruned, prune_steps) = prune_ecus(&current);
        if steps.is_empty() && prune_steps.is_empty() {
            let terminal_reason =
                if blocked.is_empty() { TerminalReason::Fixpoint } else { TerminalReason::ConstraintBlocked };
            return StageTrace { scope, stages, terminal_reason, blocked };
        }
        steps.extend(prune_steps);
        current = pruned;
        debug_assert!(potential(&current) < potential(&stages.last().unwrap().architecture));
        stages.push(Stage { architecture: current.clone(), steps, style: classify(&current) });
    }
}

fn step_function(
    arch: &mut Architecture,
    function: &str,
    cfg: &FeasibilityConfig,
    steps: &mut Vec<RewriteStep>,
    blocked: &mut Vec<BlockedRewrite>,
) {
    let Some(target) = arch.target_of(function).map(str::to_string) else { return };
    if !arch.ecus.contains_key(&target) {
        return;
    }
    let graph = EcuGraph::new(arch);
    let processing_hosts_before: BTreeSet<Id> =
        arch.swcs_of(function).filter(|s| !topology::is_circuit_bound(arch, s)).map(|s| s.host.clone()).collect();

    shift_software(arch, function, &target, &graph, cfg, steps, blocked);
    resolve_io(arch, function, &target, &graph, &processing_hosts_before, cfg, steps, blocked);
}

fn shift_software(
    arch: &mut Architecture,
    function: &str,
    target: &str,
    graph: &EcuGraph,
    cfg: &FeasibilityConfig,
    steps: &mut Vec<RewriteStep>,
    blocked: &mut Vec<BlockedRewrite>,
) {
    let dist = graph.distances_from(target);
    let candidates: Vec<Id> = arch.swcs_of(function).filter(|s| s.relocatable).map(|s| s.id.clone()).collect();
    for id in candidates {
        let swc = arch.swcs[&id].clone();
        if swc.host == target {
            continue;
        }
        let Some(hop) = graph.route_with(&dist, &swc.host).and_then(|r| r.into_iter().next()) else {
            continue;
        };
        let verdict = assess_relocatability(arch, &id).expect("candidate exists");
        if !verdict.is_relocatable() {
            if verdict.reasons == [AnchorReason::HardRtWithoutTargetSupport] {
                blocked.push(BlockedRewrite {
                    subject: id,
                    target: hop.ecu,
                    reason: "no hard real-time support on the next hop".into(),
                });
            }
            continue;
        }
        let next = &arch.ecus[&hop.ecu];
        let reason = if next.role == EcuRole::ZoneGateway {
            Some("next hop is a zone gateway".to_string())
        } else if !next.supports(swc.os_class) {
            Some(format!("next hop cannot run {}", swc.os_class))
        } else if cfg.enforce_capacity && arch.host_load(&next.id) + swc.load > next.compute_capacity {
            Some(format!("capacity of {} exceeded", next.id))
        } else {
            None
        };
        if let Some(reason) = reason {
            blocked.push(BlockedRewrite { subject: id, target: hop.ecu, reason });
            continue;
        }
        arch.swcs.get_mut(&id).unwrap().host = hop.ecu.clone();
        steps.push(RewriteStep {
            kind: RewriteKind::ShiftSwc,
            subject: id,
            from: swc.host,
            to: Some(hop.ecu),
            justification: format!("relocatable SWC moves one hop toward {target}"),
        });
    }
}

#[allow(clippy::too_many_arguments)]
fn resolve_io(
    arch: &mut Architecture,
    function: &str,
    target: &str,
    graph: &EcuGraph,
    processing_hosts_before: &BTreeSet<Id>,
    cfg: &FeasibilityConfig,
    steps: &mut Vec<RewriteStep>,
    blocked: &mut Vec<BlockedRewrite>,
) {
    let dist = graph.distances_from(target);
    let f = arch.functions[function].clone();
    let circuit_hosts: BTreeSet<Id> =
        f.circuits.iter().filter_map(|c| arch.circuits.get(c)).map(|c| c.host.clone()).collect();

    for host in circuit_hosts {
        let (bound, unbound): (Vec<_>, Vec<_>) =
            arch.swcs_of(function).filter(|s| s.host == host).partition(|s| topology::is_circuit_bound(arch, s));
        if !unbound.is_empty() || bound.is_empty() {
            continue;
        }
        let produced: BTreeSet<&String> = bound.iter().flat_map(|s| &s.outputs).collect();
        let bound_ids: Vec<Id> = bound.iter().map(|s| s.id.clone()).collect();
        let processing = arch
            .swcs_of(function)
            .filter(|s| !topology::is_circuit_bound(arch, s) && s.inputs.iter().any(|i| produced.contains(i)))
            .filter_map(|s| dist.get(&s.host).map(|d| (*d, s.host.clone())))
            .min();
        let Some((proc_dist, processing)) = processing else { continue };
        let Some(&host_dist) = dist.get(&host) else { continue };
        if proc_dist >= host_dist {
            continue;
        }

        let vacated = processing_hosts_before.contains(&host);
        let host_ecu = &arch.ecus[&host];
        let can_demote = host_ecu.role != EcuRole::ZoneGateway
            && !arch.is_controller(&host)
            && arch.swcs_on(&host).all(|s| !s.relocatable);
        let demote = |arch: &mut Architecture, steps: &mut Vec<RewriteStep>| {
            arch.ecus.get_mut(&host).unwrap().role = EcuRole::ZoneGateway;
            steps.push(RewriteStep {
                kind: RewriteKind::ConvertToGateway,
                subject: host.clone(),
                from: host.clone(),
                to: None,
                justification: format!("logic left; I/O stays decentralized and is translated for {processing}"),
            });
        };

        if vacated && can_demote && (processing == target || cfg.prefer_gateway) {
            demote(arch, steps);
            continue;
        }
        if cfg.prefer_gateway {
            continue;
        }
        let circuits: Vec<Id> =
            f.circuits.iter().filter(|c| arch.circuits.get(*c).is_some_and(|c| c.host == host)).cloned().collect();
        match io_feasibility(arch, f.asil, &circuits, &bound_ids, &processing, cfg) {
            Ok(()) => centralize_io(arch, f.asil, &circuits, &bound_ids, &host, &processing, cfg, steps),
            Err(_) if vacated && can_demote => demote(arch, steps),
            Err(reason) => blocked.push(BlockedRewrite { subject: circuits.join(","), target: processing, reason }),
        }
    }
}

fn io_feasibility(
    arch: &Architecture,
    asil: Asil,
    circuits: &[Id],
    bound: &[Id],
    processing: &str,
    cfg: &FeasibilityConfig,
) -> Result<(), String> {
    let p = &arch.ecus[processing];
    let limit = cfg.max_analog_length(asil);
    for c in circuits {
        for d in &arch.circuits[c].devices {
            let len = cfg.distance_metric.measure(arch.devices[d].position, p.position);
            if len > limit {
                return Err(format!("analog line {d} -> {processing} would be {len:.2} m, limit {limit} m"));
            }
        }
    }
    for s in bound {
        let swc = &arch.swcs[s];
        if !p.supports(swc.os_class) {
            return Err(format!("{processing} cannot run {} for {s}", swc.os_class));
        }
    }
    if cfg.enforce_capacity {
        let extra: f64 = bound.iter().map(|s| arch.swcs[s].load).sum();
        if arch.host_load(processing) + extra > p.compute_capacity {
            return Err(format!("capacity of {processing} exceeded"));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn centralize_io(
    arch: &mut Architecture,
    asil: Asil,
    circuits: &[Id],
    bound: &[Id],
    host: &str,
    processing: &str,
    cfg: &FeasibilityConfig,
    steps: &mut Vec<RewriteStep>,
) {
    let p_pos = arch.ecus[processing].position;
    for c in circuits {
        let devices = arch.circuits[c].devices.clone();
        arch.circuits.get_mut(c).unwrap().host = processing.to_string();
        for link in arch.links.values_mut() {
            if link.kind == LinkKind::AnalogLine && devices.contains(&link.endpoint_a) && link.endpoint_b == host {
                link.endpoint_b = processing.to_string();
                let len = cfg.distance_metric.measure(arch.devices[&link.endpoint_a].position, p_pos);
                if asil >= Asil::C && len > cfg.require_shielding_beyond_m {
                    link.shielded = true;
                }
            }
        }
        steps.push(RewriteStep {
            kind: RewriteKind::CentralizeIo,
            subject: c.clone(),
            from: host.to_string(),
            to: Some(processing.to_string()),
            justification: "devices rewired with direct analog lines to the processing ECU".into(),
        });
    }
    for s in bound {
        arch.swcs.get_mut(s).unwrap().host = processing.to_string();
        steps.push(RewriteStep {
            kind: RewriteKind::ShiftSwc,
            subject: s.clone(),
            from: host.to_string(),
            to: Some(processing.to_string()),
            justification: "circuit-bound SWC follows its circuit".into(),
        });
    }
}

/// Removes ECUs that host no SWC or circuit, are not a controller, and lie
/// on no signal route or centralization route. Dangling attachments and
/// buses left with fewer than two members go with them.
pub fn prune_ecus(arch: &Architecture) -> (Architecture, Vec<RewriteStep>) {
    let graph = EcuGraph::new(arch);
    let mut needed: BTreeSet<&str> = BTreeSet::new();
    needed.extend(arch.swcs.values().map(|s| s.host.as_str()));
    needed.extend(arch.circuits.values().map(|c| c.host.as_str()));
    needed.extend(arch.central_computer.iter().map(String::as_str));
    needed.extend(arch.domain_controller_of.values().map(String::as_str));

    let mut on_route: BTreeSet<String> = BTreeSet::new();
    for f in arch.functions.keys() {
        for (from, to) in topology::exchanging_hosts(arch, f) {
            if let Some(route) = graph.route(&from, &to) {
                on_route.extend(route.into_iter().map(|h| h.ecu));
            }
        }
        if let Some(target) = arch.target_of(f) {
            let dist = graph.distances_from(target);
            for s in arch.swcs_of(f) {
                if let Some(route) = graph.route_with(&dist, &s.host) {
                    on_route.extend(route.into_iter().map(|h| h.ecu));
                }
            }
        }
    }

    let removed: Vec<Id> =
        arch.ecus.keys().filter(|e| !needed.contains(e.as_str()) && !on_route.contains(*e)).cloned().collect();
    if removed.is_empty() {
        return (arch.clone(), Vec::new());
    }

    let mut next = arch.clone();
    let mut steps = Vec::new();
    for ecu in &removed {
        next.ecus.remove(ecu);
        next.links.retain(|_, l| &l.endpoint_a != ecu && &l.endpoint_b != ecu);
        for bus in next.buses.values_mut() {
            if bus.lin_master.as_ref() == Some(ecu) {
                bus.lin_master = None;
            }
        }
        steps.push(RewriteStep {
            kind: RewriteKind::PruneEcu,
            subject: ecu.clone(),
            from: ecu.clone(),
            to: None,
            justification: "hosts nothing and carries no route".into(),
        });
    }
    let orphaned: Vec<Id> = next.buses.keys().filter(|b| next.bus_members(b).len() < 2).cloned().collect();
    for bus in orphaned {
        next.buses.remove(&bus);
        next.links.retain(|_, l| !(l.kind == LinkKind::BusAttachment && l.endpoint_b == bus));
    }
    (next, steps)
}
