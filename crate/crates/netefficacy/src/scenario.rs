//! Scenario files: the JSON surface that feeds every command.
//!
//! A scenario names an information system, any number of overlays bound
//! to it, a demand model, and optional two-tier capacities, simulation
//! budget, and growth schedule. Parsing is strict: unknown keys are
//! rejected with position information, and every embedded value passes
//! core validation before a command sees it.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::{
    bind_overlay, DemandModel, HetNetConfig, InformationSystem, NetworkOverlay, NodeId, Topology,
    Validate, Violation,
};
use crate::montecarlo::SimConfig;

/// Version of the scenario file schema accepted by this build.
pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

/// A fully resolved and validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub system: InformationSystem,
    pub overlays: BTreeMap<String, NetworkOverlay>,
    pub demand: DemandModel,
    pub hetnet: Option<HetNetConfig>,
    pub sim: Option<SimConfig>,
    /// Growth schedule as explicit `(n_e, n_omega)` steps.
    pub trajectory: Option<Vec<(u64, u64)>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    schema_version: u32,
    name: String,
    system: SystemSpec,
    #[serde(default)]
    overlays: BTreeMap<String, OverlaySpec>,
    demand: DemandModel,
    #[serde(default)]
    hetnet: Option<HetNetConfig>,
    #[serde(default)]
    sim: Option<SimConfig>,
    #[serde(default)]
    trajectory: Option<TrajectorySpec>,
}

/// Either an explicit node list or a size `n` meaning nodes `0..n`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSpec {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    size: Option<u64>,
    #[serde(default)]
    nodes: Option<Vec<NodeId>>,
}

/// Either an explicit member list or `first: k` for the first `k` node
/// identifiers of the system, in ascending order.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OverlaySpec {
    #[serde(default)]
    members: Option<Vec<NodeId>>,
    #[serde(default)]
    first: Option<u64>,
    #[serde(default)]
    topology: Option<Topology>,
}

/// Either explicit `(n_e, n_omega)` points or a generated sweep.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TrajectorySpec {
    #[serde(default)]
    points: Option<Vec<(u64, u64)>>,
    #[serde(default)]
    range: Option<RangeSpec>,
}

/// Sweep `n_e` from `start` to `end` by `step` against a fixed universe;
/// past saturation the universe grows with the overlay, so each step uses
/// `max(n_omega, n_e)` nodes.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RangeSpec {
    start: u64,
    end: u64,
    step: u64,
    n_omega: u64,
}

/// Parse and validate a scenario file.
pub fn parse_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
        Error::Io(format!("cannot read {}: {e}", path.as_ref().display()))
    })?;
    parse_scenario_str(&text)
}

/// Parse and validate scenario text. Parse failures carry line/column
/// positions; validation failures carry field paths.
pub fn parse_scenario_str(text: &str) -> Result<Scenario> {
    let file: ScenarioFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    resolve(file)
}

fn resolve(file: ScenarioFile) -> Result<Scenario> {
    let mut violations = Vec::new();

    if file.schema_version != SCENARIO_SCHEMA_VERSION {
        violations.push(Violation::new(
            "schema_version",
            format!(
                "unsupported schema version {}, expected {SCENARIO_SCHEMA_VERSION}",
                file.schema_version
            ),
        ));
    }
    if file.name.is_empty() {
        violations.push(Violation::new("name", "scenario name must be non-empty"));
    }

    let system = resolve_system(&file, &mut violations);
    violations.extend(
        system
            .violations()
            .into_iter()
            .map(|v| v.under("system")),
    );

    let mut overlays = BTreeMap::new();
    for (name, spec) in &file.overlays {
        let path = format!("overlays.{name}");
        if let Some(overlay) = resolve_overlay(&system, spec, &path, &mut violations) {
            violations.extend(overlay.violations().into_iter().map(|v| v.under(&path)));
            overlays.insert(name.clone(), overlay);
        }
    }

    violations.extend(
        file.demand
            .violations()
            .into_iter()
            .map(|v| v.under("demand")),
    );
    if let Some(contact_set) = &file.demand.contact_set {
        if !contact_set.is_subset(system.nodes()) {
            violations.push(Violation::new(
                "demand.contact_set",
                "contact set must be a subset of the system universe",
            ));
        }
    }

    if let Some(hetnet) = &file.hetnet {
        violations.extend(hetnet.violations().into_iter().map(|v| v.under("hetnet")));
    }
    if let Some(sim) = &file.sim {
        violations.extend(sim.violations().into_iter().map(|v| v.under("sim")));
    }

    let trajectory = file
        .trajectory
        .as_ref()
        .and_then(|spec| resolve_trajectory(spec, &mut violations));

    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    Ok(Scenario {
        name: file.name,
        system,
        overlays,
        demand: file.demand,
        hetnet: file.hetnet,
        sim: file.sim,
        trajectory,
    })
}

fn resolve_system(file: &ScenarioFile, violations: &mut Vec<Violation>) -> InformationSystem {
    let id = file
        .system
        .id
        .clone()
        .unwrap_or_else(|| file.name.clone());
    match (&file.system.size, &file.system.nodes) {
        (Some(size), None) => InformationSystem::with_size(id, *size),
        (None, Some(nodes)) => {
            let set: BTreeSet<NodeId> = nodes.iter().copied().collect();
            if set.len() != nodes.len() {
                violations.push(Violation::new(
                    "system.nodes",
                    "node identifiers must be unique",
                ));
            }
            InformationSystem::new(id, set)
        }
        _ => {
            violations.push(Violation::new(
                "system",
                "exactly one of `size` or `nodes` is required",
            ));
            InformationSystem::with_size(id, 1)
        }
    }
}

fn resolve_overlay(
    system: &InformationSystem,
    spec: &OverlaySpec,
    path: &str,
    violations: &mut Vec<Violation>,
) -> Option<NetworkOverlay> {
    let members: BTreeSet<NodeId> = match (&spec.members, &spec.first) {
        (Some(list), None) => {
            let set: BTreeSet<NodeId> = list.iter().copied().collect();
            if set.len() != list.len() {
                violations.push(Violation::new(
                    format!("{path}.members"),
                    "member identifiers must be unique",
                ));
            }
            set
        }
        (None, Some(count)) => {
            if *count > system.size() {
                violations.push(Violation::new(
                    format!("{path}.first"),
                    format!("{count} exceeds the system size {}", system.size()),
                ));
                return None;
            }
            system.nodes().iter().copied().take(*count as usize).collect()
        }
        _ => {
            violations.push(Violation::new(
                path,
                "exactly one of `members` or `first` is required",
            ));
            return None;
        }
    };
    let overlay = bind_overlay(system, members);
    Some(match &spec.topology {
        Some(topology) => overlay.with_topology(topology.clone()),
        None => overlay,
    })
}

fn resolve_trajectory(
    spec: &TrajectorySpec,
    violations: &mut Vec<Violation>,
) -> Option<Vec<(u64, u64)>> {
    match (&spec.points, &spec.range) {
        (Some(points), None) => {
            if points.is_empty() {
                violations.push(Violation::new(
                    "trajectory.points",
                    "schedule must be non-empty",
                ));
                return None;
            }
            for (i, (n_e, n_omega)) in points.iter().enumerate() {
                if *n_omega == 0 {
                    violations.push(Violation::new(
                        format!("trajectory.points[{i}]"),
                        "system size must be at least 1",
                    ));
                } else if n_e > n_omega {
                    violations.push(Violation::new(
                        format!("trajectory.points[{i}]"),
                        format!("n_e {n_e} exceeds n_omega {n_omega}"),
                    ));
                }
            }
            Some(points.clone())
        }
        (None, Some(range)) => {
            if range.step == 0 {
                violations.push(Violation::new("trajectory.range.step", "step must be positive"));
                return None;
            }
            if range.start > range.end || range.start == 0 {
                violations.push(Violation::new(
                    "trajectory.range",
                    "range needs 1 <= start <= end",
                ));
                return None;
            }
            if range.n_omega == 0 {
                violations.push(Violation::new(
                    "trajectory.range.n_omega",
                    "system size must be at least 1",
                ));
                return None;
            }
            Some(
                (range.start..=range.end)
                    .step_by(range.step as usize)
                    .map(|n_e| (n_e, range.n_omega.max(n_e)))
                    .collect(),
            )
        }
        _ => {
            violations.push(Violation::new(
                "trajectory",
                "exactly one of `points` or `range` is required",
            ));
            None
        }
    }
}
