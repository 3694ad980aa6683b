//! Domain types shared by every other module.
//!
//! All types here are immutable after construction and safe to share
//! read-only across threads. Invariant checking is data, not panics:
//! the [`Validate`] trait reports every violated invariant together
//! with the field path of the offending value.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Nodes are opaque unsigned integers with set semantics.
pub type NodeId = u64;

/// Probability sums are accepted within this absolute tolerance.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-9;

/// A single violated invariant, addressed by field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Dotted path to the offending field, e.g. `hetnet.coverage`.
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Re-root the violation under a parent field path.
    pub fn under(mut self, prefix: &str) -> Self {
        if self.path.is_empty() {
            self.path = prefix.to_string();
        } else {
            self.path = format!("{prefix}.{}", self.path);
        }
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Invariant checking for core types. Violations are returned as data;
/// an empty list means the value is valid.
pub trait Validate {
    fn violations(&self) -> Vec<Violation>;

    fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }
}

/// The universe of nodes whose communication demand exists independent
/// of any network overlay.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InformationSystem {
    id: String,
    nodes: BTreeSet<NodeId>,
}

impl InformationSystem {
    pub fn new(id: impl Into<String>, nodes: BTreeSet<NodeId>) -> Self {
        Self {
            id: id.into(),
            nodes,
        }
    }

    /// A system of `size` nodes with identifiers `0..size`.
    pub fn with_size(id: impl Into<String>, size: u64) -> Self {
        Self::new(id, (0..size).collect())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    /// System size `|nodes|`.
    pub fn size(&self) -> u64 {
        self.nodes.len() as u64
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }
}

impl Validate for InformationSystem {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.nodes.is_empty() {
            v.push(Violation::new("nodes", "system must contain at least one node"));
        }
        v
    }
}

/// Internal wiring of an overlay. Efficacy is topology-independent in the
/// unconstrained model; the field exists so that independence is testable
/// rather than assumed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    #[default]
    Complete,
    Star {
        center: NodeId,
    },
    Edges(Vec<(NodeId, NodeId)>),
}

/// A network overlay bound to an information system: the member set `B`
/// and the derived effective set `E` (members actually present in the
/// system universe).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkOverlay {
    members: BTreeSet<NodeId>,
    effective: BTreeSet<NodeId>,
    topology: Topology,
}

impl NetworkOverlay {
    pub fn members(&self) -> &BTreeSet<NodeId> {
        &self.members
    }

    /// The effective node set: members intersected with the system universe.
    pub fn effective(&self) -> &BTreeSet<NodeId> {
        &self.effective
    }

    /// Effective network size `|E|`.
    pub fn effective_size(&self) -> u64 {
        self.effective.len() as u64
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Replace the overlay topology, keeping the node sets.
    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = topology;
        self
    }

    /// True when this overlay's effective set is consistent with `system`,
    /// i.e. it was bound against that universe.
    pub fn is_bound_to(&self, system: &InformationSystem) -> bool {
        self.effective.is_subset(system.nodes())
            && self
                .members
                .iter()
                .all(|m| self.effective.contains(m) == system.contains(*m))
    }
}

impl Validate for NetworkOverlay {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if !self.effective.is_subset(&self.members) {
            v.push(Violation::new(
                "effective",
                "effective set must be a subset of members",
            ));
        }
        match &self.topology {
            Topology::Complete => {}
            Topology::Star { center } => {
                if !self.effective.contains(center) {
                    v.push(Violation::new(
                        "topology.center",
                        format!("star center {center} is not an effective node"),
                    ));
                }
            }
            Topology::Edges(edges) => {
                for (i, (a, b)) in edges.iter().enumerate() {
                    if !self.effective.contains(a) || !self.effective.contains(b) {
                        v.push(Violation::new(
                            format!("topology.edges[{i}]"),
                            format!("edge ({a}, {b}) has an endpoint outside the effective set"),
                        ));
                    }
                }
            }
        }
        v
    }
}

/// Derive the effective network for `members` against `system`. Members
/// outside the system universe are kept in `members` but excluded from
/// the effective set. The default topology is complete.
pub fn bind_overlay(system: &InformationSystem, members: BTreeSet<NodeId>) -> NetworkOverlay {
    let effective = members.intersection(system.nodes()).copied().collect();
    NetworkOverlay {
        members,
        effective,
        topology: Topology::Complete,
    }
}

/// How a contact attempt picks its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetRule {
    /// Uniform over the whole system universe, self included. Matches the
    /// sampling-with-replacement algebra of the efficacy formula.
    #[default]
    Uniform,
    /// Uniform over the universe excluding the caller. The exact expected
    /// throughput under this rule is `alpha * n_e * (n_e - 1) / (n_omega - 1)`.
    UniformExcludingSelf,
}

/// Per-node contact demand: the attempt rate and the target-selection rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandModel {
    /// Attempts per node per unit time.
    pub rate: f64,
    #[serde(default)]
    pub target_rule: TargetRule,
    /// Optional subset of the universe that attempts are allowed to target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contact_set: Option<BTreeSet<NodeId>>,
}

impl DemandModel {
    pub fn uniform(rate: f64) -> Self {
        Self {
            rate,
            target_rule: TargetRule::Uniform,
            contact_set: None,
        }
    }
}

impl Validate for DemandModel {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if !(self.rate > 0.0) || !self.rate.is_finite() {
            v.push(Violation::new("rate", "attempt rate must be positive and finite"));
        }
        v
    }
}

/// Capacities and coverage of a two-tier network: a default network that
/// reaches every node and a preferred network covering a fraction of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HetNetConfig {
    /// Capacity of the default network, flow units.
    pub default_capacity: f64,
    /// Capacity of the preferred network, same units.
    pub preferred_capacity: f64,
    /// Fraction of nodes on the preferred network, `0 <= n < 1`.
    pub coverage: f64,
}

impl Validate for HetNetConfig {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if !(self.default_capacity > 0.0) || !self.default_capacity.is_finite() {
            v.push(Violation::new(
                "default_capacity",
                "default capacity must be positive and finite",
            ));
        }
        if !(self.preferred_capacity >= 0.0) || !self.preferred_capacity.is_finite() {
            v.push(Violation::new(
                "preferred_capacity",
                "preferred capacity must be non-negative and finite",
            ));
        }
        if !(self.coverage >= 0.0 && self.coverage < 1.0) {
            v.push(Violation::new(
                "coverage",
                format!("coverage must satisfy 0 <= n < 1, got {}", self.coverage),
            ));
        }
        v
    }
}

/// Analytic efficacy together with its optional simulated estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EfficacyReport {
    /// Closed-form efficacy, flow units.
    pub analytic: f64,
    /// Monte Carlo estimate of the same quantity, when one was run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simulated: Option<f64>,
    /// Standard error of the simulated estimate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    /// Per-node efficacy `analytic / n_e`; absent when the effective
    /// network is empty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_node: Option<f64>,
}

impl EfficacyReport {
    pub fn analytic_only(analytic: f64, per_node: Option<f64>) -> Self {
        Self {
            analytic,
            simulated: None,
            stderr: None,
            per_node,
        }
    }
}

impl Validate for EfficacyReport {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if !(self.analytic >= 0.0) {
            v.push(Violation::new("analytic", "efficacy must be non-negative"));
        }
        if let Some(se) = self.stderr {
            if !(se >= 0.0) {
                v.push(Violation::new("stderr", "standard error must be non-negative"));
            }
        }
        v
    }
}

/// One outcome in an event distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedEvent {
    pub id: String,
    pub probability: f64,
    pub weight: f64,
}

/// A finite probability distribution over events, each with a utility weight.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EventDistribution {
    pub events: Vec<WeightedEvent>,
}

impl EventDistribution {
    pub fn new(events: Vec<WeightedEvent>) -> Self {
        Self { events }
    }

    /// Build from `(probability, weight)` pairs with generated event ids.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        Self {
            events: pairs
                .iter()
                .enumerate()
                .map(|(i, (p, w))| WeightedEvent {
                    id: format!("e{}", i + 1),
                    probability: *p,
                    weight: *w,
                })
                .collect(),
        }
    }
}

impl Validate for EventDistribution {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut sum = 0.0;
        for (i, e) in self.events.iter().enumerate() {
            if !(e.probability >= 0.0) || !e.probability.is_finite() {
                v.push(Violation::new(
                    format!("events[{i}].probability"),
                    "probability must be non-negative and finite",
                ));
            }
            if !e.weight.is_finite() {
                v.push(Violation::new(
                    format!("events[{i}].weight"),
                    "event weight must be finite",
                ));
            }
            sum += e.probability;
        }
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            v.push(Violation::new(
                "events",
                format!("probabilities must sum to 1 within {PROBABILITY_SUM_TOLERANCE}, got {sum}"),
            ));
        }
        v
    }
}
