//! Link-counting versus node-counting network valuation.
//!
//! A switched network of `n` nodes can be viewed as `n` superposed
//! broadcast networks with `n - 1` receivers each. Link counting then
//! yields `n * (n - 1)` directed links, but the links compete for shared
//! terminals: each link's claim on its endpoints is `1 / (n - 1)`, so the
//! apparent quadratic value collapses back to `n`. The operations here
//! quantify that collapse.

use serde::Serialize;

use crate::error::{Error, Result};

/// Link-model and node-model valuations of one network size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValueComparison {
    pub n: u64,
    /// Directed link count `n * (n - 1)`.
    pub link_value: f64,
    /// Node count `n`.
    pub node_value: f64,
    /// Each link's share of its terminals, `1 / (n - 1)`; undefined for a
    /// single node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub link_share: Option<f64>,
    /// Unique payload volume over delivered volume under superposition,
    /// `1 / (n - 1)`; undefined for a single node.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

/// Value ratios after splitting every node into `k` parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitOutcome {
    /// Link-model value ratio `(kn)(kn - 1) / (n(n - 1))`.
    pub link_ratio: f64,
    /// Resource ratio: the split costs `k` times the nodes.
    pub resource_ratio: f64,
    /// Link-model gain per unit of resource, `link_ratio / k`. A value
    /// above 1 claims something was created by splitting alone.
    pub per_resource_gain: f64,
}

/// Outcome of the bridge construction: a hub node carrying `n - 1` links
/// and a leaf carrying one link receive identical service, which forces
/// the per-link value to zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BridgeVerdict {
    /// Links at the hub node, `n - 1`.
    pub hub_links: u64,
    /// Links at the leaf node.
    pub leaf_links: u64,
    /// The unique solution of `v * hub_links = v * leaf_links`.
    pub v_link: f64,
    /// Node-model value of the hub: one unit, like every node.
    pub node_value_hub: f64,
    /// Node-model value of the leaf: also one unit.
    pub node_value_leaf: f64,
    /// True when the solve confirms that links carry no value.
    pub pass: bool,
}

/// Evaluate both valuation models at size `n`.
pub fn compare_value_models(n: u64) -> Result<ValueComparison> {
    if n == 0 {
        return Err(Error::precondition("network size must be at least 1"));
    }
    let nf = n as f64;
    let fraction = (n >= 2).then(|| 1.0 / (nf - 1.0));
    Ok(ValueComparison {
        n,
        link_value: nf * (nf - 1.0),
        node_value: nf,
        link_share: fraction,
        density: fraction,
    })
}

/// Split every node of an `n`-node network into `k` parts and compare the
/// link-model value gain against the resources spent.
///
/// The link model awards `(kn)(kn - 1) / (n(n - 1))` times the value for
/// `k` times the resources, a per-resource gain that tends to `k` as `n`
/// grows: value conjured out of rewiring, which is the contradiction.
/// The node model awards exactly `k`.
pub fn split_contradiction(n: u64, k: u64) -> Result<SplitOutcome> {
    if n < 2 {
        return Err(Error::precondition(
            "split argument needs a network of at least 2 nodes",
        ));
    }
    if k < 1 {
        return Err(Error::precondition("split factor must be at least 1"));
    }
    let nf = n as f64;
    let kf = k as f64;
    let link_ratio = (kf * nf) * (kf * nf - 1.0) / (nf * (nf - 1.0));
    Ok(SplitOutcome {
        link_ratio,
        resource_ratio: kf,
        per_resource_gain: link_ratio / kf,
    })
}

/// Unique payload fraction of delivered traffic under the superposition
/// model: `n` distinct payloads over `n * (n - 1)` directed deliveries,
/// i.e. `1 / (n - 1)`.
pub fn information_density(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::precondition(
            "information density needs at least 2 nodes",
        ));
    }
    Ok(1.0 / (n as f64 - 1.0))
}

/// Solve the bridge construction at size `n`.
///
/// With node X holding direct links to all others and node Y holding a
/// single link to X, bridging through X gives both the same service, so
/// any per-link value must satisfy `v * (n - 1) = v * 1`. The coefficient
/// gap makes `v = 0` the only solution.
pub fn bridge_value_check(n: u64) -> Result<BridgeVerdict> {
    if n < 3 {
        return Err(Error::precondition(
            "bridge construction needs at least 3 nodes to form two distinct subnetworks",
        ));
    }
    let hub_links = n - 1;
    let leaf_links = 1u64;
    // (hub - leaf) * v = 0 with hub != leaf has the single root v = 0.
    let coefficient = hub_links as f64 - leaf_links as f64;
    let v_link = 0.0 / coefficient;
    Ok(BridgeVerdict {
        hub_links,
        leaf_links,
        v_link,
        node_value_hub: 1.0,
        node_value_leaf: 1.0,
        pass: v_link == 0.0 && coefficient != 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: count directed pairs by explicit double loop.
    fn directed_pairs(n: u64) -> u64 {
        let mut count = 0;
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn minimal_network_values() {
        let c = compare_value_models(2).unwrap();
        assert_eq!(c.link_value, 2.0);
        assert_eq!(c.node_value, 2.0);
        assert_eq!(c.link_share, Some(1.0));
        assert_eq!(c.density, Some(1.0));
    }

    #[test]
    fn link_share_is_reciprocal_of_neighbors() {
        let c = compare_value_models(11).unwrap();
        assert_eq!(c.link_share, Some(0.1));
    }

    #[test]
    fn link_value_counts_directed_pairs() {
        assert_eq!(directed_pairs(3), 6);
        let c = compare_value_models(3).unwrap();
        assert_eq!(c.link_value, 6.0);
        for n in [2u64, 5, 17, 100] {
            let c = compare_value_models(n).unwrap();
            assert_eq!(c.link_value, directed_pairs(n) as f64);
        }
    }

    #[test]
    fn single_node_has_no_links_to_share() {
        let c = compare_value_models(1).unwrap();
        assert_eq!(c.link_value, 0.0);
        assert_eq!(c.link_share, None);
        assert_eq!(c.density, None);
        assert!(matches!(compare_value_models(0), Err(Error::Precondition(_))));
    }

    #[test]
    fn identity_split_changes_nothing() {
        let s = split_contradiction(5, 1).unwrap();
        assert_eq!(s.link_ratio, 1.0);
        assert_eq!(s.resource_ratio, 1.0);
        assert_eq!(s.per_resource_gain, 1.0);
    }

    #[test]
    fn split_ratio_matches_pair_enumeration() {
        // Oracle: 4 nodes split in 2 -> 8 * 7 = 56 pairs over 4 * 3 = 12.
        assert_eq!(directed_pairs(8), 56);
        assert_eq!(directed_pairs(4), 12);
        let s = split_contradiction(4, 2).unwrap();
        assert!((s.link_ratio - 56.0 / 12.0).abs() <= 1e-12);
        assert!((s.per_resource_gain - 56.0 / 24.0).abs() <= 1e-12);
    }

    #[test]
    fn split_gain_approaches_the_split_factor() {
        let s = split_contradiction(1_000_000, 3).unwrap();
        assert!((s.link_ratio - 9.0).abs() <= 1e-5);
        assert!((s.per_resource_gain - 3.0).abs() <= 1e-5);
    }

    #[test]
    fn density_examples() {
        assert_eq!(information_density(2).unwrap(), 1.0);
        assert!((information_density(101).unwrap() - 0.01).abs() <= 1e-12);
        assert!(matches!(information_density(1), Err(Error::Precondition(_))));

        // n * density(n) -> 1 from above as n grows.
        let mut last = f64::MAX;
        for n in [10u64, 100, 1000, 10_000] {
            let scaled = n as f64 * information_density(n).unwrap();
            assert!(scaled > 1.0 && scaled < last);
            last = scaled;
        }
    }

    #[test]
    fn density_conserves_unique_payloads() {
        for n in [2u64, 3, 10, 101, 5000] {
            let c = compare_value_models(n).unwrap();
            assert_eq!(c.density.unwrap() * c.link_value, n as f64);
        }
    }

    #[test]
    fn bridge_forces_zero_link_value() {
        for n in [3u64, 10, 100] {
            let verdict = bridge_value_check(n).unwrap();
            assert_eq!(verdict.v_link, 0.0);
            assert!(verdict.pass);
            assert_eq!(verdict.hub_links, n - 1);
            assert_eq!(verdict.leaf_links, 1);
        }
    }

    #[test]
    fn bridge_nodes_have_equal_node_value() {
        let verdict = bridge_value_check(10).unwrap();
        assert_eq!(verdict.node_value_hub, 1.0);
        assert_eq!(verdict.node_value_leaf, 1.0);
    }

    #[test]
    fn bridge_needs_three_nodes() {
        assert!(matches!(bridge_value_check(2), Err(Error::Precondition(_))));
    }
}
