//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible under `--nocapture`). Tolerances are pinned
//! here, not configurable.

use netefficacy::analytic::{
    dependent_capacity, efficacy, growth_trajectory, hetnet_capacity, plan_coverage,
};
use netefficacy::model::{bind_overlay, DemandModel, HetNetConfig, InformationSystem, Topology};
use netefficacy::montecarlo::{compare_topologies, enumerate_exact, simulate_contacts, SimConfig};
use netefficacy::report::{emit, Format};
use netefficacy::rng::CounterRng;
use netefficacy::run::{run, CommandKind, RunOptions};
use netefficacy::scenario::parse_scenario;
use netefficacy::valuemodels::{bridge_value_check, compare_value_models, split_contradiction};
use netefficacy::{EventDistribution, WeightedEvent};

fn criterion(id: u32, name: &str, ok: bool, detail: String) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("acceptance criterion {id:02} [{name}]: {verdict} ({detail})");
    assert!(ok, "criterion {id} [{name}] failed: {detail}");
}

#[test]
fn criterion_01_cluster_example_exact() {
    let cfg = HetNetConfig {
        default_capacity: 1.0,
        preferred_capacity: 2.0,
        coverage: 2.0 / 3.0,
    };
    let result = hetnet_capacity(&cfg).unwrap();
    let total_gap = (result.total - 1.8).abs();
    let share = result.preferred_load / result.total;
    let share_gap = (share - 4.0 / 9.0).abs();
    criterion(
        1,
        "cluster example exact",
        total_gap <= 1e-12 && share_gap <= 1e-12,
        format!("total={} share={share}", result.total),
    );
}

#[test]
fn criterion_02_coverage_planning_exact() {
    let coverage = plan_coverage(1.0, 3.0).unwrap();
    let gap = (coverage - 0.8164966).abs();
    criterion(
        2,
        "coverage planning exact",
        gap <= 5e-7,
        format!("coverage={coverage}"),
    );
}

#[test]
fn criterion_03_dependent_network_cap() {
    let capacity = dependent_capacity(1.0, 2.0 / 3.0).unwrap();
    let gap = (capacity - 3.0).abs();
    criterion(
        3,
        "dependent-network cap",
        gap <= 1e-12,
        format!("capacity={capacity}"),
    );
}

#[test]
fn criterion_04_theorem_oracle_equivalence() {
    let alpha = 1.0;
    let demand = DemandModel::uniform(alpha);
    let mut worst: f64 = 0.0;
    let mut checked = 0u64;
    for n_omega in 1..=200u64 {
        let system = InformationSystem::with_size("grid", n_omega);
        for n_e in 0..=n_omega {
            let overlay = bind_overlay(&system, (0..n_e).collect());
            let enumerated = enumerate_exact(&system, &overlay, &demand).unwrap();
            let closed_form = efficacy(alpha, n_e, n_omega).unwrap().analytic;
            worst = worst.max((enumerated - closed_form).abs());
            checked += 1;
        }
    }
    criterion(
        4,
        "pair enumeration equals closed form on the small grid",
        worst <= 1e-12,
        format!("{checked} grid points, worst gap {worst:e}"),
    );
}

#[test]
fn criterion_05_monte_carlo_convergence() {
    let system = InformationSystem::with_size("omega", 1000);
    let overlay = bind_overlay(&system, (0..300).collect());
    let cfg = SimConfig {
        seed: 0,
        attempts: 1_000_000,
        trials: 20,
        trial_offset: 0,
    };
    let result = simulate_contacts(&system, &overlay, &DemandModel::uniform(1.0), &cfg).unwrap();
    let gap = (result.throughput_hat - 90.0).abs();
    let relative_error = result.stderr / result.throughput_hat;
    criterion(
        5,
        "Monte Carlo convergence",
        gap <= 3.0 * result.stderr && relative_error < 0.01,
        format!(
            "psi_hat={} stderr={} gap={gap}",
            result.throughput_hat, result.stderr
        ),
    );
}

#[test]
fn criterion_06_quadratic_law_regression() {
    let system = InformationSystem::with_size("omega", 1000);
    let demand = DemandModel::uniform(1.0);
    let mut points = Vec::new();
    for n_e in (100..=900).step_by(100) {
        let overlay = bind_overlay(&system, (0..n_e).collect());
        let cfg = SimConfig {
            seed: 0,
            attempts: 100_000,
            trials: 10,
            trial_offset: 0,
        };
        let result = simulate_contacts(&system, &overlay, &demand, &cfg).unwrap();
        points.push(((n_e as f64).ln(), result.throughput_hat.ln()));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let slope = points
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum::<f64>()
        / points
            .iter()
            .map(|(x, _)| (x - mean_x) * (x - mean_x))
            .sum::<f64>();
    criterion(
        6,
        "quadratic-law regression",
        (slope - 2.0).abs() <= 0.05,
        format!("log-log slope={slope}"),
    );
}

#[test]
fn criterion_07_saturation_continuity_and_linearity() {
    let alpha = 1.0;
    let schedule: Vec<(u64, u64)> = (1..=10)
        .map(|i| (10 * i, 100))
        .chain((11..=15).map(|i| (10 * i, 10 * i)))
        .collect();
    let points = growth_trajectory(alpha, &schedule).unwrap();

    // Exactly alpha * n at the saturation point, no discontinuity.
    let at_saturation = points[9].efficacy == 100.0 * alpha;
    // Post-saturation differences are exactly alpha * delta_n.
    let linear = points.windows(2).skip(9).all(|w| {
        let delta_n = (w[1].n_e - w[0].n_e) as f64;
        w[1].efficacy - w[0].efficacy == alpha * delta_n
    });
    // The quadratic regime approaches the same value from below.
    let quadratic_side = (points[8].efficacy - 81.0).abs() <= 1e-12;
    criterion(
        7,
        "saturation continuity and linearity",
        at_saturation && linear && quadratic_side,
        format!(
            "psi(100)={} last diffs {:?}",
            points[9].efficacy,
            points[10].efficacy - points[9].efficacy
        ),
    );
}

#[test]
fn criterion_08_topology_independence_and_bridge() {
    let system = InformationSystem::with_size("omega", 100);
    let members: std::collections::BTreeSet<u64> = (0..50).collect();
    let star = bind_overlay(&system, members.clone()).with_topology(Topology::Star { center: 0 });
    let complete = bind_overlay(&system, members);
    let demand = DemandModel::uniform(1.0);

    let mut identical = true;
    for seed in [0u64, 1, 2, 42, 0xDEAD_BEEF] {
        let cfg = SimConfig {
            seed,
            attempts: 100_000,
            trials: 10,
            trial_offset: 0,
        };
        let (a, b, gap) = compare_topologies(&system, &star, &complete, &demand, &cfg).unwrap();
        identical &= a == b && gap == 0.0;
    }

    let mut bridge_ok = true;
    for n in [3u64, 10, 100] {
        let verdict = bridge_value_check(n).unwrap();
        bridge_ok &= verdict.v_link == 0.0 && verdict.pass;
    }
    criterion(
        8,
        "topology independence and zero link value",
        identical && bridge_ok,
        format!("topologies identical={identical} bridge v_link=0 for 3,10,100={bridge_ok}"),
    );
}

#[test]
fn criterion_09_split_contradiction() {
    let split = split_contradiction(1_000_000, 3).unwrap();
    let ratio_ok = (split.link_ratio - 9.0).abs() <= 1e-5;
    let gain_ok = (split.per_resource_gain - 3.0).abs() <= 1e-5;

    let mut node_ratio_exact = true;
    for (n, k) in [(2u64, 2u64), (10, 3), (100, 7), (1234, 5)] {
        let before = compare_value_models(n).unwrap().node_value;
        let after = compare_value_models(n * k).unwrap().node_value;
        node_ratio_exact &= after / before == k as f64;
    }
    criterion(
        9,
        "split contradiction",
        ratio_ok && gain_ok && node_ratio_exact,
        format!(
            "link_ratio={} gain={} node ratios exact={node_ratio_exact}",
            split.link_ratio, split.per_resource_gain
        ),
    );
}

#[test]
fn criterion_10_utility_separability() {
    let rng = CounterRng::new(1010, 0);
    let mut draw = {
        let mut counter = 0u64;
        move || {
            counter += 1;
            rng.value(counter) as f64 / u64::MAX as f64
        }
    };

    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let events = 2 + (draw() * 6.0) as usize;
        let raw: Vec<f64> = (0..events).map(|_| 0.05 + draw()).collect();
        let total: f64 = raw.iter().sum();
        let dist = EventDistribution::new(
            raw.iter()
                .enumerate()
                .map(|(i, p)| WeightedEvent {
                    id: format!("e{i}"),
                    probability: p / total,
                    weight: 0.1 + 5.0 * draw(),
                })
                .collect(),
        );
        let psi_a = 0.1 + 10.0 * draw();
        let psi_b = 0.1 + 10.0 * draw();
        let utility_a = netefficacy::analytic::expected_utility(psi_a, &dist).unwrap();
        let utility_b = netefficacy::analytic::expected_utility(psi_b, &dist).unwrap();
        worst = worst.max((utility_a / utility_b - psi_a / psi_b).abs());
    }
    criterion(
        10,
        "utility separability",
        worst <= 1e-9,
        format!("worst ratio gap {worst:e}"),
    );
}

#[test]
fn criterion_11_verify_determinism_across_worker_counts() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios/deficit.scenario");
    let scenario = parse_scenario(path).unwrap();
    let options = RunOptions {
        attempts: Some(200_000),
        trials: Some(10),
        ..Default::default()
    };

    let render = || {
        let report = run(CommandKind::Verify, &scenario, &options).unwrap();
        emit(&report, Format::Json)
    };
    let baseline = render();
    let repeat = render();

    let single_worker = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(render);
    let many_workers = rayon::ThreadPoolBuilder::new()
        .num_threads(7)
        .build()
        .unwrap()
        .install(render);

    let ok = baseline == repeat && baseline == single_worker && baseline == many_workers;
    criterion(
        11,
        "verify determinism",
        ok,
        format!("report bytes={} identical across 1/7/global workers", baseline.len()),
    );
}
