//! Structural invariants over seeded random connected graphs (n ≤ 10).

mod common;

use proptest::prelude::*;

use csp_monitors::graph::{random_connected_graph, Graph};
use csp_monitors::oracle::OracleConfig;
use csp_monitors::placement::omp_csp;

fn graph() -> impl Strategy<Value = Graph> {
    graph_with_density(usize::MAX)
}

/// At most `n * per_node` edges, so path enumeration stays cheap.
fn graph_with_density(per_node: usize) -> impl Strategy<Value = Graph> {
    (1usize..=10)
        .prop_flat_map(move |n| {
            let lo = n.saturating_sub(1);
            let hi = (n * (n - 1) / 2).min(n.saturating_mul(per_node)).max(lo);
            (Just(n), lo..=hi, any::<u64>())
        })
        .prop_map(|(n, m, seed)| random_connected_graph(n, m, seed).unwrap())
}

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 1000,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn block_edges_partition_graph_edges(g in graph()) {
        prop_assert_eq!(common::block_edge_partition(&g), Ok(()));
    }

    #[test]
    fn plc_edges_partition_block_edges(g in graph()) {
        prop_assert_eq!(common::plc_edge_partition(&g), Ok(()));
    }

    #[test]
    fn cut_vertex_iff_in_two_blocks(g in graph()) {
        prop_assert_eq!(common::cut_vertex_membership(&g), Ok(()));
    }

    #[test]
    fn subtraction_keeps_untouched_and_still_linked_nodes(g in graph(), pick in any::<u64>()) {
        prop_assert_eq!(common::subtraction_node_rule(&g, pick), Ok(()));
    }

    #[test]
    fn adding_a_monitor_keeps_identifiability(g in graph_with_density(2), pick in any::<u64>()) {
        prop_assert_eq!(common::monotone_under_addition(&g, pick, &OracleConfig::default()), Ok(()));
    }

    #[test]
    fn placement_is_reproducible_and_inside_the_graph(g in graph(), seed in 0u64..8) {
        if let Ok(r) = omp_csp(&g, seed) {
            prop_assert!(r.monitors.check_within(&g).is_ok());
            prop_assert_eq!(r.count, r.monitors.len());
            prop_assert_eq!(r.replay_monitors(), r.monitors.clone());
            prop_assert_eq!(omp_csp(&g, seed).unwrap(), r);
        }
    }
}
