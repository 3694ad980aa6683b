//! Network-value modeling toolkit.
//!
//! The toolkit quantifies what a communication network is worth to the
//! information system it serves. Its centerpiece is the efficacy measure
//! `psi = alpha * n_e^2 / n_omega`: quadratic in the networked fraction
//! of the system while coverage is partial, linear once the overlay
//! saturates the universe. Around it sit closed-form heterogeneous
//! capacity planning, a critique of naive link-counting valuations, and
//! a seeded Monte Carlo contact simulator that independently checks
//! every closed form.
//!
//! The [`scenario`] and [`run`] modules implement the scenario-driven
//! command surface used by the `netefficacy` binary.

pub mod analytic;
pub mod error;
pub mod model;
pub mod montecarlo;
pub mod report;
pub mod rng;
pub mod run;
pub mod scenario;
pub mod valuemodels;

pub use error::{Error, Result};
pub use model::{
    bind_overlay, DemandModel, EfficacyReport, EventDistribution, HetNetConfig,
    InformationSystem, NetworkOverlay, NodeId, TargetRule, Topology, Validate, Violation,
    WeightedEvent,
};
pub use montecarlo::{SimConfig, SimResult};
pub use report::{emit, Format, Report};
pub use run::{run, CommandKind, RunOptions};
pub use scenario::{parse_scenario, parse_scenario_str, Scenario};
