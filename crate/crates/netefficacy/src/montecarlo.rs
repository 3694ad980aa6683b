//! Seeded Monte Carlo contact simulator.
//!
//! The simulator draws contact attempts (a caller from the effective set,
//! a target from the system universe) and counts how many terminate inside
//! the overlay. It is the stochastic counterpart of
//! [`analytic::efficacy`](crate::analytic::efficacy) and deliberately never
//! touches that formula: agreement between the two routes is checked by
//! tests and by the `verify` command, not assumed.
//!
//! Trials are independent units of work. Trial `t` draws from a
//! counter-based stream keyed by `(seed, trial_offset + t)`, so results
//! are bit-identical regardless of how many workers execute them.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::CapacityBound;
use crate::error::{Error, Result};
use crate::model::{
    bind_overlay, DemandModel, HetNetConfig, InformationSystem, NetworkOverlay, NodeId,
    TargetRule, Validate, Violation,
};
use crate::rng::CounterRng;

/// Stream index reserved for member selection in the disconnect
/// experiment; trial indices must stay below it.
const SELECTION_STREAM: u64 = u64::MAX;

/// Simulation budget and seeding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub seed: u64,
    /// Total contact attempts to draw, split evenly across trials
    /// (earlier trials absorb the remainder).
    pub attempts: u64,
    /// Independent repetitions used for variance estimation.
    pub trials: u32,
    /// First trial index of this run. Two runs over disjoint index ranges
    /// merge into one run over the union.
    #[serde(default)]
    pub trial_offset: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            attempts: 100_000,
            trials: 10,
            trial_offset: 0,
        }
    }
}

impl SimConfig {
    fn attempts_for_trial(&self, trial: u32) -> u64 {
        let base = self.attempts / self.trials as u64;
        let remainder = self.attempts % self.trials as u64;
        base + u64::from((trial as u64) < remainder)
    }
}

impl Validate for SimConfig {
    fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        if self.attempts == 0 {
            v.push(Violation::new("attempts", "at least one attempt is required"));
        }
        if self.trials == 0 {
            v.push(Violation::new("trials", "at least one trial is required"));
        }
        v
    }
}

/// Outcome of a contact simulation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    /// Fraction of drawn attempts that terminated in-network.
    pub success_rate: f64,
    /// Estimated efficacy `rate * n_e * success_rate`, flow units.
    pub throughput_hat: f64,
    /// Sample standard error of the throughput estimate across trials;
    /// zero when only one trial ran.
    pub stderr: f64,
    /// Per-trial success rates, in trial-index order.
    pub per_trial: Vec<f64>,
    /// Total attempts drawn.
    pub attempts: u64,
    /// Total in-network attempts.
    pub successes: u64,
}

/// Empirical two-tier traffic split and the capacity it implies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HetNetEstimate {
    /// Fraction of attempts with both endpoints on the preferred network.
    pub preferred_share: f64,
    /// Sample standard error of the share across trials.
    pub share_stderr: f64,
    /// Capacity estimate from scaling traffic until a constraint binds.
    pub total: f64,
    pub preferred_load: f64,
    pub default_load: f64,
    pub binding: CapacityBound,
    /// Per-trial preferred shares, in trial-index order.
    pub per_trial: Vec<f64>,
}

/// Pools and membership markers shared by every trial of one run.
struct ContactPools {
    /// Sorted effective set; callers are drawn from it.
    callers: Vec<NodeId>,
    /// Sorted universe; targets are drawn from it.
    targets: Vec<NodeId>,
    /// `in_network[j]` is true when `targets[j]` belongs to the effective
    /// set and to the contact set (when one is given).
    in_network: Vec<bool>,
    /// Position of each caller in the target pool, for the
    /// excluding-self rule.
    caller_pos: Vec<usize>,
}

impl ContactPools {
    fn build(
        system: &InformationSystem,
        effective: &BTreeSet<NodeId>,
        contact_set: Option<&BTreeSet<NodeId>>,
    ) -> Self {
        let callers: Vec<NodeId> = effective.iter().copied().collect();
        let targets: Vec<NodeId> = system.nodes().iter().copied().collect();
        let in_network = targets
            .iter()
            .map(|t| effective.contains(t) && contact_set.is_none_or(|a| a.contains(t)))
            .collect();
        let caller_pos = callers
            .iter()
            .map(|c| targets.binary_search(c).expect("caller outside universe"))
            .collect();
        Self {
            callers,
            targets,
            in_network,
            caller_pos,
        }
    }
}

fn check_common(
    system: &InformationSystem,
    overlay: &NetworkOverlay,
    demand: &DemandModel,
    cfg: &SimConfig,
) -> Result<()> {
    let mut violations = system.violations();
    violations.extend(demand.violations().into_iter().map(|v| v.under("demand")));
    violations.extend(overlay.violations().into_iter().map(|v| v.under("overlay")));
    violations.extend(cfg.violations().into_iter().map(|v| v.under("sim")));
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    if !overlay.is_bound_to(system) {
        return Err(Error::precondition(
            "overlay is not bound to the given system (effective set inconsistent with universe)",
        ));
    }
    if let Some(a) = &demand.contact_set {
        if !a.is_subset(system.nodes()) {
            return Err(Error::precondition(
                "demand.contact_set must be a subset of the system universe",
            ));
        }
    }
    if cfg.attempts < cfg.trials as u64 {
        return Err(Error::precondition(format!(
            "attempts ({}) must be at least the number of trials ({})",
            cfg.attempts, cfg.trials
        )));
    }
    Ok(())
}

/// One trial of the contact process: `attempts` draws from `rng`, counting
/// attempts whose target lands in-network. Draw `2a` of the stream picks
/// the caller of attempt `a`, draw `2a + 1` its target.
fn run_contact_trial(pools: &ContactPools, rule: TargetRule, attempts: u64, rng: CounterRng) -> u64 {
    let n_e = pools.callers.len() as u64;
    let n_omega = pools.targets.len() as u64;
    let mut successes = 0u64;
    match rule {
        TargetRule::Uniform => {
            for a in 0..attempts {
                let _caller = rng.index_below(2 * a, n_e);
                let target = rng.index_below(2 * a + 1, n_omega) as usize;
                successes += u64::from(pools.in_network[target]);
            }
        }
        TargetRule::UniformExcludingSelf => {
            // A single-node universe leaves nothing to call.
            if n_omega <= 1 {
                return 0;
            }
            for a in 0..attempts {
                let caller = rng.index_below(2 * a, n_e) as usize;
                let mut target = rng.index_below(2 * a + 1, n_omega - 1) as usize;
                if target >= pools.caller_pos[caller] {
                    target += 1;
                }
                successes += u64::from(pools.in_network[target]);
            }
        }
    }
    successes
}

fn aggregate(
    rate: f64,
    n_e: u64,
    cfg: &SimConfig,
    per_trial_successes: Vec<u64>,
) -> SimResult {
    let total_attempts = cfg.attempts;
    let total_successes: u64 = per_trial_successes.iter().sum();
    let per_trial: Vec<f64> = per_trial_successes
        .iter()
        .enumerate()
        .map(|(t, s)| *s as f64 / cfg.attempts_for_trial(t as u32) as f64)
        .collect();
    let success_rate = total_successes as f64 / total_attempts as f64;
    let throughput_hat = rate * n_e as f64 * success_rate;
    let throughputs: Vec<f64> = per_trial.iter().map(|r| rate * n_e as f64 * r).collect();
    SimResult {
        success_rate,
        throughput_hat,
        stderr: standard_error(&throughputs),
        per_trial,
        attempts: total_attempts,
        successes: total_successes,
    }
}

/// Sample standard error of the mean: `std / sqrt(len)`, zero for fewer
/// than two samples.
fn standard_error(samples: &[f64]) -> f64 {
    let n = samples.len();
    if n < 2 {
        return 0.0;
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let variance = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n as f64 - 1.0);
    (variance / n as f64).sqrt()
}

/// Draw seeded contact attempts against `overlay` and estimate efficacy.
///
/// Callers come from the effective set (nodes outside it only fail, so
/// sampling them would add variance without information); the target is
/// picked by the demand rule, uniform over the whole universe by default.
/// An empty overlay yields a zero-throughput result rather than an error.
pub fn simulate_contacts(
    system: &InformationSystem,
    overlay: &NetworkOverlay,
    demand: &DemandModel,
    cfg: &SimConfig,
) -> Result<SimResult> {
    check_common(system, overlay, demand, cfg)?;
    if overlay.effective_size() == 0 {
        return Ok(SimResult {
            success_rate: 0.0,
            throughput_hat: 0.0,
            stderr: 0.0,
            per_trial: vec![0.0; cfg.trials as usize],
            attempts: cfg.attempts,
            successes: 0,
        });
    }
    let pools = ContactPools::build(system, overlay.effective(), demand.contact_set.as_ref());
    let per_trial_successes: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let rng = CounterRng::new(cfg.seed, cfg.trial_offset + t as u64);
            run_contact_trial(&pools, demand.target_rule, cfg.attempts_for_trial(t), rng)
        })
        .collect();
    Ok(aggregate(
        demand.rate,
        overlay.effective_size(),
        cfg,
        per_trial_successes,
    ))
}

/// Shrink the overlay by `shrink_x` and simulate the survivors.
///
/// `floor(n_e / shrink_x)` members are retained, chosen by a seeded
/// partial shuffle on a stream separate from all trial streams; the
/// surviving overlay then runs through [`simulate_contacts`] unchanged,
/// so `shrink_x = 1` reproduces the unshrunk run bit for bit.
pub fn simulate_disconnect(
    system: &InformationSystem,
    overlay: &NetworkOverlay,
    demand: &DemandModel,
    shrink_x: f64,
    cfg: &SimConfig,
) -> Result<SimResult> {
    if !(shrink_x >= 1.0) || !shrink_x.is_finite() {
        return Err(Error::precondition(format!(
            "shrink factor must be >= 1, got {shrink_x}"
        )));
    }
    check_common(system, overlay, demand, cfg)?;
    let n_e = overlay.effective_size();
    let keep = (n_e as f64 / shrink_x).floor() as usize;
    let mut pool: Vec<NodeId> = overlay.effective().iter().copied().collect();
    let rng = CounterRng::new(cfg.seed, SELECTION_STREAM);
    for i in 0..keep {
        let j = i + rng.index_below(i as u64, (pool.len() - i) as u64) as usize;
        pool.swap(i, j);
    }
    let retained: BTreeSet<NodeId> = pool.into_iter().take(keep).collect();
    let survivor = bind_overlay(system, retained);
    simulate_contacts(system, &survivor, demand, cfg)
}

/// Run the same seeded simulation against two overlays with identical
/// effective sets and report the largest observed difference.
///
/// Reachability in the unconstrained model depends only on the effective
/// set, so differing topologies must produce bit-identical results and a
/// zero gap; a nonzero gap means topology leaked into the contact process.
pub fn compare_topologies(
    system: &InformationSystem,
    overlay_a: &NetworkOverlay,
    overlay_b: &NetworkOverlay,
    demand: &DemandModel,
    cfg: &SimConfig,
) -> Result<(SimResult, SimResult, f64)> {
    if overlay_a.effective() != overlay_b.effective() {
        return Err(Error::precondition(
            "overlays must share one effective set to be comparable",
        ));
    }
    let result_a = simulate_contacts(system, overlay_a, demand, cfg)?;
    let result_b = simulate_contacts(system, overlay_b, demand, cfg)?;
    let mut gap = (result_a.throughput_hat - result_b.throughput_hat)
        .abs()
        .max((result_a.success_rate - result_b.success_rate).abs());
    for (a, b) in result_a.per_trial.iter().zip(result_b.per_trial.iter()) {
        gap = gap.max((a - b).abs());
    }
    Ok((result_a, result_b, gap))
}

/// One trial of the two-tier tagging process: every node sits on the
/// default network, so the caller is drawn from the whole universe; an
/// attempt is tagged preferred when both endpoints are covered.
fn run_hetnet_trial(
    targets_len: u64,
    in_preferred: &[bool],
    rule: TargetRule,
    attempts: u64,
    rng: CounterRng,
) -> u64 {
    let mut preferred = 0u64;
    match rule {
        TargetRule::Uniform => {
            for a in 0..attempts {
                let caller = rng.index_below(2 * a, targets_len) as usize;
                let target = rng.index_below(2 * a + 1, targets_len) as usize;
                preferred += u64::from(in_preferred[caller] && in_preferred[target]);
            }
        }
        TargetRule::UniformExcludingSelf => {
            if targets_len <= 1 {
                return 0;
            }
            for a in 0..attempts {
                let caller = rng.index_below(2 * a, targets_len) as usize;
                let mut target = rng.index_below(2 * a + 1, targets_len - 1) as usize;
                if target >= caller {
                    target += 1;
                }
                preferred += u64::from(in_preferred[caller] && in_preferred[target]);
            }
        }
    }
    preferred
}

/// Estimate the two-tier traffic split empirically and the joint capacity
/// it implies: scale total traffic until the default share hits the
/// default capacity or the preferred share hits the preferred capacity.
pub fn simulate_hetnet(
    system: &InformationSystem,
    preferred_overlay: &NetworkOverlay,
    demand: &DemandModel,
    capacities: &HetNetConfig,
    cfg: &SimConfig,
) -> Result<HetNetEstimate> {
    check_common(system, preferred_overlay, demand, cfg)?;
    let violations: Vec<Violation> = capacities
        .violations()
        .into_iter()
        .map(|v| v.under("hetnet"))
        .collect();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let observed = preferred_overlay.effective_size() as f64 / system.size() as f64;
    if (observed - capacities.coverage).abs() > 1e-9 {
        return Err(Error::precondition(format!(
            "hetnet coverage {} does not match the overlay's effective fraction {observed}",
            capacities.coverage
        )));
    }

    let targets: Vec<NodeId> = system.nodes().iter().copied().collect();
    let in_preferred: Vec<bool> = targets
        .iter()
        .map(|t| preferred_overlay.effective().contains(t))
        .collect();
    let per_trial_preferred: Vec<u64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let rng = CounterRng::new(cfg.seed, cfg.trial_offset + t as u64);
            run_hetnet_trial(
                targets.len() as u64,
                &in_preferred,
                demand.target_rule,
                cfg.attempts_for_trial(t),
                rng,
            )
        })
        .collect();

    let total_preferred: u64 = per_trial_preferred.iter().sum();
    let per_trial: Vec<f64> = per_trial_preferred
        .iter()
        .enumerate()
        .map(|(t, p)| *p as f64 / cfg.attempts_for_trial(t as u32) as f64)
        .collect();
    let share = total_preferred as f64 / cfg.attempts as f64;

    let (total, binding) = if share == 0.0 {
        (capacities.default_capacity, CapacityBound::Default)
    } else {
        let default_limit = capacities.default_capacity / (1.0 - share);
        let preferred_limit = capacities.preferred_capacity / share;
        if default_limit <= preferred_limit {
            (default_limit, CapacityBound::Default)
        } else {
            (preferred_limit, CapacityBound::Preferred)
        }
    };
    let preferred_load = total * share;
    Ok(HetNetEstimate {
        preferred_share: share,
        share_stderr: standard_error(&per_trial),
        total,
        preferred_load,
        default_load: total - preferred_load,
        binding,
        per_trial,
    })
}

/// Exact expected throughput by full enumeration of caller/target pairs.
///
/// Under the uniform rule each of the `n_e * n_omega` pairs carries
/// probability mass `rate / n_omega`; under the excluding-self rule the
/// self pair is skipped and the mass is `rate / (n_omega - 1)`. In-network
/// pairs are counted in integer arithmetic and scaled once, so the result
/// carries no accumulation error. This is the deterministic oracle the
/// `verify` command holds the closed form against; it shares no code with
/// the formula.
pub fn enumerate_exact(
    system: &InformationSystem,
    overlay: &NetworkOverlay,
    demand: &DemandModel,
) -> Result<f64> {
    let cfg = SimConfig::default();
    check_common(system, overlay, demand, &cfg)?;
    let pools = ContactPools::build(system, overlay.effective(), demand.contact_set.as_ref());
    let n_omega = pools.targets.len();
    let mut in_network_pairs = 0u64;
    match demand.target_rule {
        TargetRule::Uniform => {
            for _caller in &pools.callers {
                for in_net in &pools.in_network {
                    in_network_pairs += u64::from(*in_net);
                }
            }
            Ok(in_network_pairs as f64 * demand.rate / n_omega as f64)
        }
        TargetRule::UniformExcludingSelf => {
            if n_omega <= 1 {
                return Ok(0.0);
            }
            for (c, _caller) in pools.callers.iter().enumerate() {
                let self_pos = pools.caller_pos[c];
                for (j, in_net) in pools.in_network.iter().enumerate() {
                    in_network_pairs += u64::from(j != self_pos && *in_net);
                }
            }
            Ok(in_network_pairs as f64 * demand.rate / (n_omega as f64 - 1.0))
        }
    }
}
