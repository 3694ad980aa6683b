//! Closed-form network-value operations.
//!
//! Everything here is a pure function of its inputs. The central quantity
//! is network efficacy `psi = alpha * n_e^2 / n_omega`: the useful traffic
//! an information system of `n_omega` nodes can push through an overlay
//! whose effective size is `n_e`, when every node attempts contacts at
//! rate `alpha` and picks targets uniformly over the whole system.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{EfficacyReport, EventDistribution, HetNetConfig, Validate};

/// One step of a growth schedule evaluated through the efficacy formula.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub step: usize,
    pub n_e: u64,
    pub n_omega: u64,
    /// Efficacy at this step, flow units.
    pub efficacy: f64,
}

/// Which capacity constraint limits a two-tier network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CapacityBound {
    Default,
    Preferred,
}

/// Joint capacity of a default + preferred network pair.
///
/// Loads are reported in absolute flow units: a fraction `n^2` of total
/// traffic rides the preferred network (a covered source finds a covered
/// destination with probability `n`), the remaining `1 - n^2` defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HetNetResult {
    /// Joint capacity, flow units.
    pub total: f64,
    /// Traffic carried by the preferred network at full load.
    pub preferred_load: f64,
    /// Traffic carried by the default network at full load.
    pub default_load: f64,
    /// The constraint that binds at full load.
    pub binding: CapacityBound,
}

/// Result of the disconnect experiment: efficacy of the surviving overlay
/// plus the shrink-form cross-check `alpha * n_retained / shrink_x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisconnectOutcome {
    /// Nodes that stay connected, `floor(n_omega / shrink_x)`.
    pub retained: u64,
    pub report: EfficacyReport,
    /// The same efficacy expressed through the shrink factor. Equals
    /// `report.analytic` exactly when `shrink_x` divides `n_omega`.
    pub cross_check: f64,
}

/// Expected utility `psi_value * sum(weight_i * probability_i)` over a
/// validated event distribution.
pub fn expected_utility(psi_value: f64, dist: &EventDistribution) -> Result<f64> {
    let violations = dist.violations();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let weighted: f64 = dist
        .events
        .iter()
        .map(|e| e.weight * e.probability)
        .sum();
    Ok(psi_value * weighted)
}

fn check_efficacy_inputs(alpha: f64, n_e: u64, n_omega: u64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::precondition(format!(
            "attempt rate must be positive and finite, got {alpha}"
        )));
    }
    if n_omega == 0 {
        return Err(Error::precondition("information system must be non-empty"));
    }
    if n_e > n_omega {
        return Err(Error::precondition(format!(
            "effective size {n_e} exceeds system size {n_omega} (E must be a subset of the universe)"
        )));
    }
    Ok(())
}

/// Network efficacy `alpha * n_e^2 / n_omega`.
///
/// Every covered node attempts contacts at rate `alpha`; each attempt
/// lands inside the overlay with probability `n_e / n_omega`, so the
/// serviceable traffic is quadratic in coverage below saturation and
/// exactly `alpha * n_omega` at full coverage.
pub fn efficacy(alpha: f64, n_e: u64, n_omega: u64) -> Result<EfficacyReport> {
    check_efficacy_inputs(alpha, n_e, n_omega)?;
    let ne = n_e as f64;
    let nw = n_omega as f64;
    // Divide first: n_e^2 / n_omega is exact at saturation (n_e = n_omega),
    // which keeps the whole expression exactly alpha * n for every alpha.
    let analytic = alpha * ((ne * ne) / nw);
    let per_node = (n_e > 0).then(|| analytic / ne);
    Ok(EfficacyReport::analytic_only(analytic, per_node))
}

/// Shrink an initially saturated system by factor `shrink_x` and report
/// the efficacy of the survivors. The retained count rounds down when
/// `shrink_x` does not divide `n_omega`.
pub fn disconnect_experiment(alpha: f64, n_omega: u64, shrink_x: f64) -> Result<DisconnectOutcome> {
    if !(shrink_x >= 1.0) || !shrink_x.is_finite() {
        return Err(Error::precondition(format!(
            "shrink factor must be >= 1, got {shrink_x}"
        )));
    }
    check_efficacy_inputs(alpha, 0, n_omega)?;
    let retained = (n_omega as f64 / shrink_x).floor() as u64;
    let report = efficacy(alpha, retained, n_omega)?;
    let cross_check = alpha * retained as f64 / shrink_x;
    Ok(DisconnectOutcome {
        retained,
        report,
        cross_check,
    })
}

/// Joint capacity of a default network (reaches everyone, capacity `C_D`)
/// and a preferred network covering fraction `n` of nodes (capacity `C_K`).
///
/// At total traffic `T`, the preferred network carries `T * n^2` and the
/// default carries the rest, so the feasible maximum is
/// `min(C_D / (1 - n^2), C_K / n^2)`; `binding` records the minimizer
/// (ties bind at the default network, which reproduces the pure
/// `1 / (1 - n^2)` capacity whenever the preferred capacity is ample).
pub fn hetnet_capacity(cfg: &HetNetConfig) -> Result<HetNetResult> {
    let violations = cfg.violations();
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let n = cfg.coverage;
    let n2 = n * n;
    if n2 == 0.0 {
        return Ok(HetNetResult {
            total: cfg.default_capacity,
            preferred_load: 0.0,
            default_load: cfg.default_capacity,
            binding: CapacityBound::Default,
        });
    }
    let default_limit = cfg.default_capacity / (1.0 - n2);
    let preferred_limit = cfg.preferred_capacity / n2;
    let (total, binding) = if default_limit <= preferred_limit {
        (default_limit, CapacityBound::Default)
    } else {
        (preferred_limit, CapacityBound::Preferred)
    };
    let preferred_load = total * n2;
    let default_load = total - preferred_load;
    Ok(HetNetResult {
        total,
        preferred_load,
        default_load,
        binding,
    })
}

/// Capacity of two mutually dependent networks when a fraction `n` of
/// the traffic is offloaded to the faster one: `c_small / (1 - n)`.
pub fn dependent_capacity(c_small: f64, traffic_fraction: f64) -> Result<f64> {
    if !(c_small > 0.0) || !c_small.is_finite() {
        return Err(Error::precondition(format!(
            "smaller capacity must be positive and finite, got {c_small}"
        )));
    }
    if !(0.0..1.0).contains(&traffic_fraction) {
        return Err(Error::precondition(format!(
            "traffic fraction must satisfy 0 <= n < 1, got {traffic_fraction}"
        )));
    }
    Ok(c_small / (1.0 - traffic_fraction))
}

/// Coverage fraction needed to reach `target_total` capacity given a
/// default network of capacity `c_default` and an unconstrained preferred
/// network: `n = sqrt(1 - c_default / target_total)`.
pub fn plan_coverage(c_default: f64, target_total: f64) -> Result<f64> {
    if !(c_default > 0.0) || !c_default.is_finite() {
        return Err(Error::precondition(format!(
            "default capacity must be positive and finite, got {c_default}"
        )));
    }
    if !target_total.is_finite() || target_total < c_default {
        return Err(Error::precondition(format!(
            "target capacity {target_total} is below the default capacity {c_default}; \
             it is already achievable with zero coverage"
        )));
    }
    Ok((1.0 - c_default / target_total).sqrt())
}

/// Evaluate the efficacy formula pointwise over a growth schedule of
/// `(n_e, n_omega)` pairs. While `n_e < n_omega` the curve is quadratic
/// in `n_e`; once the overlay saturates the universe and both advance
/// together, successive differences are exactly `alpha * delta_n`.
pub fn growth_trajectory(alpha: f64, schedule: &[(u64, u64)]) -> Result<Vec<TrajectoryPoint>> {
    if schedule.is_empty() {
        return Err(Error::precondition("growth schedule must be non-empty"));
    }
    schedule
        .iter()
        .enumerate()
        .map(|(step, &(n_e, n_omega))| {
            let report = efficacy(alpha, n_e, n_omega).map_err(|e| match e {
                Error::Precondition(msg) => {
                    Error::Precondition(format!("schedule step {step}: {msg}"))
                }
                other => other,
            })?;
            Ok(TrajectoryPoint {
                step,
                n_e,
                n_omega,
                efficacy: report.analytic,
            })
        })
        .collect()
}

/// Total efficacy of a network serving several information systems:
/// the sum of per-system efficacies for `(alpha, n_e, n_omega)` triples.
pub fn multipurpose_total(systems: &[(f64, u64, u64)]) -> Result<f64> {
    let mut total = 0.0;
    for (i, &(alpha, n_e, n_omega)) in systems.iter().enumerate() {
        let report = efficacy(alpha, n_e, n_omega).map_err(|e| match e {
            Error::Precondition(msg) => Error::Precondition(format!("system {i}: {msg}")),
            other => other,
        })?;
        total += report.analytic;
    }
    Ok(total)
}
