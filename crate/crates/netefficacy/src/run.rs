//! Command dispatch: map a parsed scenario and per-run options onto the
//! analytic, simulation, and value-model operations, and package the
//! results as a [`Report`].

use serde_json::{json, Value};

use crate::analytic;
use crate::error::{Error, Result};
use crate::model::{NetworkOverlay, TargetRule};
use crate::montecarlo::{self, SimConfig};
use crate::report::Report;
use crate::scenario::Scenario;

/// Maximum stderr multiples the Monte Carlo estimate may sit away from
/// the closed form before `verify` flags it.
pub const VERIFY_SIGMA_BOUND: f64 = 3.0;

/// Absolute tolerance for the closed-form versus enumeration cross-check.
pub const VERIFY_ENUMERATION_TOLERANCE: f64 = 1e-12;

/// The commands the toolkit exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    /// Closed-form efficacy of the scenario overlay.
    Efficacy,
    /// Joint capacity of the scenario's two-tier configuration.
    Hetnet,
    /// Coverage fraction needed to reach a target capacity.
    PlanCoverage,
    /// Efficacy trajectory over the scenario's growth schedule.
    Grow,
    /// Monte Carlo contact simulation of the scenario overlay.
    Simulate,
    /// Link-model versus node-model valuation at the system size.
    CompareModels,
    /// Closed form, exact enumeration, and Monte Carlo side by side.
    Verify,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Efficacy => "efficacy",
            CommandKind::Hetnet => "hetnet",
            CommandKind::PlanCoverage => "plan-coverage",
            CommandKind::Grow => "grow",
            CommandKind::Simulate => "simulate",
            CommandKind::CompareModels => "compare-models",
            CommandKind::Verify => "verify",
        }
    }
}

/// Per-invocation overrides; unset fields fall back to the scenario's
/// `sim` section and then to [`SimConfig::default`].
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
    pub trials: Option<u32>,
    /// Target capacity for `plan-coverage`, in the scenario's flow units.
    pub target: Option<f64>,
}

impl RunOptions {
    fn resolve_sim(&self, scenario: &Scenario) -> SimConfig {
        let mut cfg = scenario.sim.unwrap_or_default();
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(attempts) = self.attempts {
            cfg.attempts = attempts;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        cfg
    }
}

/// Pick the overlay a single-overlay command operates on: the only one,
/// or the one named `default` when several are defined.
fn select_overlay(scenario: &Scenario) -> Result<(&str, &NetworkOverlay)> {
    match scenario.overlays.len() {
        0 => Err(Error::Usage(
            "this command needs the scenario section `overlays` with at least one overlay"
                .to_string(),
        )),
        1 => {
            let (name, overlay) = scenario.overlays.iter().next().expect("one overlay");
            Ok((name, overlay))
        }
        _ => scenario
            .overlays
            .get_key_value("default")
            .map(|(n, o)| (n.as_str(), o))
            .ok_or_else(|| {
                Error::Usage(
                    "scenario defines several overlays; name the one to use `default`".to_string(),
                )
            }),
    }
}

fn require_hetnet(scenario: &Scenario) -> Result<&crate::model::HetNetConfig> {
    scenario.hetnet.as_ref().ok_or_else(|| {
        Error::Usage("this command needs the scenario section `hetnet`".to_string())
    })
}

/// Run one command against a scenario.
pub fn run(command: CommandKind, scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    match command {
        CommandKind::Efficacy => run_efficacy(scenario),
        CommandKind::Hetnet => run_hetnet(scenario),
        CommandKind::PlanCoverage => run_plan_coverage(scenario, options),
        CommandKind::Grow => run_grow(scenario),
        CommandKind::Simulate => run_simulate(scenario, options),
        CommandKind::CompareModels => run_compare_models(scenario),
        CommandKind::Verify => run_verify(scenario, options),
    }
}

fn run_efficacy(scenario: &Scenario) -> Result<Report> {
    let (overlay_name, overlay) = select_overlay(scenario)?;
    let n_e = overlay.effective_size();
    let n_omega = scenario.system.size();
    let alpha = scenario.demand.rate;
    let report = analytic::efficacy(alpha, n_e, n_omega)?;
    Ok(Report::new(
        "efficacy",
        json!({
            "scenario": scenario.name,
            "overlay": overlay_name,
            "alpha": alpha,
            "n_e": n_e,
            "n_omega": n_omega,
        }),
        json!({
            "analytic": report.analytic,
            "per_node": report.per_node,
        }),
        json!({
            "networked_fraction": n_e as f64 / n_omega as f64,
            "saturated": n_e == n_omega,
        }),
    ))
}

fn run_hetnet(scenario: &Scenario) -> Result<Report> {
    let cfg = require_hetnet(scenario)?;
    let result = analytic::hetnet_capacity(cfg)?;
    let n2 = cfg.coverage * cfg.coverage;
    Ok(Report::new(
        "hetnet",
        json!({
            "scenario": scenario.name,
            "default_capacity": cfg.default_capacity,
            "preferred_capacity": cfg.preferred_capacity,
            "coverage": cfg.coverage,
        }),
        json!({
            "total": result.total,
            "preferred_load": result.preferred_load,
            "default_load": result.default_load,
            "binding": result.binding,
        }),
        json!({
            "preferred_share": n2,
            "default_share": 1.0 - n2,
            "total_over_default_capacity": result.total / cfg.default_capacity,
        }),
    ))
}

fn run_plan_coverage(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    let cfg = require_hetnet(scenario)?;
    let target = options
        .target
        .ok_or_else(|| Error::Usage("plan-coverage needs --target <flow>".to_string()))?;
    let coverage = analytic::plan_coverage(cfg.default_capacity, target)?;
    // Cross-check through the capacity machinery with an effectively
    // unconstrained preferred network.
    let round_trip = analytic::hetnet_capacity(&crate::model::HetNetConfig {
        default_capacity: cfg.default_capacity,
        preferred_capacity: f64::MAX,
        coverage,
    })?;
    Ok(Report::new(
        "plan-coverage",
        json!({
            "scenario": scenario.name,
            "default_capacity": cfg.default_capacity,
            "target": target,
        }),
        json!({
            "coverage": coverage,
            "coverage_percent": 100.0 * coverage,
        }),
        json!({
            "round_trip_total": round_trip.total,
            "round_trip_error": (round_trip.total - target).abs(),
        }),
    ))
}

fn run_grow(scenario: &Scenario) -> Result<Report> {
    let schedule = scenario.trajectory.as_ref().ok_or_else(|| {
        Error::Usage("this command needs the scenario section `trajectory`".to_string())
    })?;
    let alpha = scenario.demand.rate;
    let points = analytic::growth_trajectory(alpha, schedule)?;
    let saturated_from = points.iter().position(|p| p.n_e >= p.n_omega);
    Ok(Report::new(
        "grow",
        json!({
            "scenario": scenario.name,
            "alpha": alpha,
            "steps": schedule.len(),
        }),
        json!({
            "trajectory": points,
        }),
        json!({
            "saturated_from_step": saturated_from,
        }),
    ))
}

fn sim_inputs(scenario: &Scenario, overlay_name: &str, n_e: u64, cfg: &SimConfig) -> Value {
    json!({
        "scenario": scenario.name,
        "overlay": overlay_name,
        "alpha": scenario.demand.rate,
        "target_rule": scenario.demand.target_rule,
        "n_e": n_e,
        "n_omega": scenario.system.size(),
        "seed": cfg.seed,
        "attempts": cfg.attempts,
        "trials": cfg.trials,
    })
}

fn per_trial_series(result: &montecarlo::SimResult, rate: f64, n_e: u64, cfg: &SimConfig) -> Value {
    let rows: Vec<Value> = result
        .per_trial
        .iter()
        .enumerate()
        .map(|(t, success_rate)| {
            json!({
                "trial": cfg.trial_offset + t as u64,
                "success_rate": success_rate,
                "throughput": rate * n_e as f64 * success_rate,
            })
        })
        .collect();
    Value::Array(rows)
}

fn run_simulate(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    let (overlay_name, overlay) = select_overlay(scenario)?;
    let cfg = options.resolve_sim(scenario);
    let result = montecarlo::simulate_contacts(&scenario.system, overlay, &scenario.demand, &cfg)?;
    let n_e = overlay.effective_size();
    let rate = scenario.demand.rate;
    Ok(Report::new(
        "simulate",
        sim_inputs(scenario, overlay_name, n_e, &cfg),
        json!({
            "success_rate": result.success_rate,
            "throughput": result.throughput_hat,
            "stderr": result.stderr,
            "successes": result.successes,
            "per_trial": per_trial_series(&result, rate, n_e, &cfg),
        }),
        json!({
            // Satisfied fraction of total demand, which also counts the
            // never-serviceable attempts of nodes outside the overlay.
            "demand_satisfaction": result.throughput_hat
                / (rate * scenario.system.size() as f64),
        }),
    ))
}

fn run_compare_models(scenario: &Scenario) -> Result<Report> {
    let n = scenario.system.size();
    let comparison = crate::valuemodels::compare_value_models(n)?;
    Ok(Report::new(
        "compare-models",
        json!({
            "scenario": scenario.name,
            "n": n,
        }),
        json!({
            "link_value": comparison.link_value,
            "node_value": comparison.node_value,
            "link_share": comparison.link_share,
            "density": comparison.density,
        }),
        json!({
            // Printed for visual comparison with the n log n growth law.
            "nlogn_value": n as f64 * (n as f64).ln(),
            "per_user_link_value": comparison.link_value / n as f64,
        }),
    ))
}

fn run_verify(scenario: &Scenario, options: &RunOptions) -> Result<Report> {
    let (overlay_name, overlay) = select_overlay(scenario)?;
    let cfg = options.resolve_sim(scenario);
    let n_e = overlay.effective_size();
    let n_omega = scenario.system.size();
    let rate = scenario.demand.rate;

    // Closed-form route. The quadratic formula assumes the uniform rule;
    // under the excluding-self rule the exact expectation is
    // rate * n_e * (n_e - 1) / (n_omega - 1).
    let analytic_value = match scenario.demand.target_rule {
        TargetRule::Uniform => match &scenario.demand.contact_set {
            None => analytic::efficacy(rate, n_e, n_omega)?.analytic,
            Some(a) => {
                let reachable = overlay.effective().intersection(a).count() as u64;
                rate * n_e as f64 * reachable as f64 / n_omega as f64
            }
        },
        TargetRule::UniformExcludingSelf => {
            if n_omega <= 1 || scenario.demand.contact_set.is_some() {
                // No closed form published for restricted contact sets
                // without replacement; lean on enumeration alone.
                montecarlo::enumerate_exact(&scenario.system, overlay, &scenario.demand)?
            } else {
                rate * n_e as f64 * (n_e as f64 - 1.0) / (n_omega as f64 - 1.0)
            }
        }
    };

    // Exact enumeration route.
    let enumeration = montecarlo::enumerate_exact(&scenario.system, overlay, &scenario.demand)?;
    let enumeration_gap = (enumeration - analytic_value).abs();

    // Stochastic route.
    let result = montecarlo::simulate_contacts(&scenario.system, overlay, &scenario.demand, &cfg)?;
    let gap = (result.throughput_hat - analytic_value).abs();
    let gap_sigma = if gap == 0.0 {
        Some(0.0)
    } else if result.stderr > 0.0 {
        Some(gap / result.stderr)
    } else {
        None
    };
    let mc_ok = gap <= VERIFY_SIGMA_BOUND * result.stderr || gap == 0.0;
    let enum_ok = enumeration_gap <= VERIFY_ENUMERATION_TOLERANCE;
    let verdict = if mc_ok && enum_ok { "PASS" } else { "FAIL" };

    Ok(Report::new(
        "verify",
        sim_inputs(scenario, overlay_name, n_e, &cfg),
        json!({
            "analytic": analytic_value,
            "enumeration": enumeration,
            "enumeration_gap": enumeration_gap,
            "simulated": result.throughput_hat,
            "stderr": result.stderr,
            "gap_sigma": gap_sigma,
            "verdict": verdict,
            "per_trial": per_trial_series(&result, rate, n_e, &cfg),
        }),
        json!({
            "sigma_bound": VERIFY_SIGMA_BOUND,
            "enumeration_tolerance": VERIFY_ENUMERATION_TOLERANCE,
            "mc_within_bound": mc_ok,
            "enumeration_within_tolerance": enum_ok,
        }),
    ))
}

/// True when a `verify` report carries a passing verdict.
pub fn verify_passed(report: &Report) -> bool {
    report.outputs.get("verdict").and_then(Value::as_str) == Some("PASS")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{emit, Format};
    use crate::scenario::parse_scenario_str;

    fn deficit_scenario() -> Scenario {
        parse_scenario_str(
            r#"{
                "schema_version": 1,
                "name": "deficit",
                "system": { "size": 1000 },
                "overlays": { "net": { "first": 300 } },
                "demand": { "rate": 1.0 },
                "sim": { "seed": 0, "attempts": 100000, "trials": 10 }
            }"#,
        )
        .unwrap()
    }

    fn cluster_scenario() -> Scenario {
        parse_scenario_str(
            r#"{
                "schema_version": 1,
                "name": "cluster",
                "system": { "size": 900 },
                "overlays": { "preferred": { "first": 600 } },
                "demand": { "rate": 1.0 },
                "hetnet": {
                    "default_capacity": 1.0,
                    "preferred_capacity": 2.0,
                    "coverage": 0.6666666666666666
                }
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn efficacy_command_reports_closed_form() {
        let report = run(CommandKind::Efficacy, &deficit_scenario(), &RunOptions::default())
            .unwrap();
        assert_eq!(report.outputs["analytic"].as_f64().unwrap(), 90.0);
        assert_eq!(report.outputs["per_node"].as_f64().unwrap(), 0.3);
    }

    #[test]
    fn hetnet_command_matches_cluster_numbers() {
        let report =
            run(CommandKind::Hetnet, &cluster_scenario(), &RunOptions::default()).unwrap();
        let total = report.outputs["total"].as_f64().unwrap();
        assert!((total - 1.8).abs() <= 1e-12);
        assert_eq!(report.outputs["binding"].as_str().unwrap(), "default");
    }

    #[test]
    fn plan_coverage_needs_target() {
        let err =
            run(CommandKind::PlanCoverage, &cluster_scenario(), &RunOptions::default())
                .unwrap_err();
        assert!(matches!(err, Error::Usage(_)));

        let report = run(
            CommandKind::PlanCoverage,
            &cluster_scenario(),
            &RunOptions {
                target: Some(3.0),
                ..Default::default()
            },
        )
        .unwrap();
        let coverage = report.outputs["coverage"].as_f64().unwrap();
        assert!((coverage - 0.8164966).abs() <= 5e-7);
    }

    #[test]
    fn grow_needs_trajectory_section() {
        let err = run(CommandKind::Grow, &deficit_scenario(), &RunOptions::default())
            .unwrap_err();
        match err {
            Error::Usage(msg) => assert!(msg.contains("trajectory"), "message: {msg}"),
            other => panic!("expected usage error, got {other:?}"),
        }
    }

    #[test]
    fn verify_passes_on_the_deficit_scenario() {
        let report =
            run(CommandKind::Verify, &deficit_scenario(), &RunOptions::default()).unwrap();
        assert!(verify_passed(&report), "report: {report:?}");
        assert!(report.outputs["enumeration_gap"].as_f64().unwrap() <= 1e-12);
    }

    #[test]
    fn verify_json_is_deterministic() {
        let scenario = deficit_scenario();
        let a = run(CommandKind::Verify, &scenario, &RunOptions::default()).unwrap();
        let b = run(CommandKind::Verify, &scenario, &RunOptions::default()).unwrap();
        assert_eq!(emit(&a, Format::Json), emit(&b, Format::Json));
    }

    #[test]
    fn options_override_scenario_sim() {
        let scenario = deficit_scenario();
        let report = run(
            CommandKind::Simulate,
            &scenario,
            &RunOptions {
                seed: Some(9),
                attempts: Some(50_000),
                trials: Some(5),
                target: None,
            },
        )
        .unwrap();
        assert_eq!(report.inputs["seed"].as_u64().unwrap(), 9);
        assert_eq!(report.inputs["attempts"].as_u64().unwrap(), 50_000);
        assert_eq!(report.inputs["trials"].as_u64().unwrap(), 5);
    }

    #[test]
    fn compare_models_uses_system_size() {
        let report =
            run(CommandKind::CompareModels, &deficit_scenario(), &RunOptions::default())
                .unwrap();
        assert_eq!(report.outputs["link_value"].as_f64().unwrap(), 999_000.0);
        assert_eq!(report.outputs["node_value"].as_f64().unwrap(), 1000.0);
    }
}
