//! The path-enumerating oracle against an independent connectivity test.
//!
//! With a super node `t` joined to every monitor, a non-monitor `u` lies on a
//! measurement path iff no single node separates `u` from `t`. Two
//! non-monitors `u`, `w` are told apart iff `u` is still covered once `w` is
//! deleted, or the other way round. Strict mode drops monitor-to-monitor
//! links first, since such paths may not pass through a monitor.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use csp_monitors::graph::{random_connected_graph, Edge, Graph, MonitorSet, NodeId, NodeSet};
use csp_monitors::oracle::{
    enumerate_monitor_paths, is_one_identifiable, min_monitors_bruteforce, verdict, OracleConfig,
};

const T: &str = "__t";

fn reaches(
    adj: &BTreeMap<NodeId, BTreeSet<NodeId>>,
    from: &NodeId,
    to: &NodeId,
    blocked: &NodeSet,
) -> bool {
    let mut seen: NodeSet = BTreeSet::from([from.clone()]);
    let mut stack = vec![from.clone()];
    while let Some(v) = stack.pop() {
        if &v == to {
            return true;
        }
        for w in &adj[&v] {
            if !blocked.contains(w) && seen.insert(w.clone()) {
                stack.push(w.clone());
            }
        }
    }
    false
}

/// Adjacency of `g` minus `deleted`, plus the super node.
fn augmented(
    g: &Graph,
    m: &MonitorSet,
    deleted: Option<&NodeId>,
    strict: bool,
) -> BTreeMap<NodeId, BTreeSet<NodeId>> {
    let t = NodeId::new(T);
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = g
        .nodes()
        .iter()
        .filter(|v| Some(*v) != deleted)
        .map(|v| (v.clone(), BTreeSet::new()))
        .collect();
    adj.insert(t.clone(), BTreeSet::new());
    for e in g.edges() {
        let (a, b) = e.endpoints();
        if Some(a) == deleted || Some(b) == deleted || (strict && m.contains(a) && m.contains(b)) {
            continue;
        }
        adj.get_mut(a).unwrap().insert(b.clone());
        adj.get_mut(b).unwrap().insert(a.clone());
    }
    for v in m.iter().filter(|v| Some(*v) != deleted) {
        adj.get_mut(v).unwrap().insert(t.clone());
        adj.get_mut(&t).unwrap().insert(v.clone());
    }
    adj
}

/// Two internally disjoint `u`-`t` paths, by Menger.
fn covered(adj: &BTreeMap<NodeId, BTreeSet<NodeId>>, u: &NodeId) -> bool {
    let t = NodeId::new(T);
    reaches(adj, u, &t, &NodeSet::new())
        && adj
            .keys()
            .filter(|x| *x != u && **x != t)
            .all(|x| reaches(adj, u, &t, &BTreeSet::from([x.clone()])))
}

struct Predicted {
    uncovered: Vec<NodeId>,
    confusable: Vec<(NodeId, NodeId)>,
}

fn predict(g: &Graph, m: &MonitorSet, strict: bool) -> Predicted {
    let n: Vec<NodeId> = m.non_monitors(g).into_iter().collect();
    let full = augmented(g, m, None, strict);
    let uncovered = n.iter().filter(|u| !covered(&full, u)).cloned().collect();
    let mut confusable = Vec::new();
    for (i, u) in n.iter().enumerate() {
        for w in &n[i + 1..] {
            let u_alone = covered(&augmented(g, m, Some(w), strict), u);
            let w_alone = covered(&augmented(g, m, Some(u), strict), w);
            if !u_alone && !w_alone {
                confusable.push((u.clone(), w.clone()));
            }
        }
    }
    Predicted {
        uncovered,
        confusable,
    }
}

fn random_monitors(g: &Graph, rng: &mut ChaCha8Rng) -> MonitorSet {
    let mut nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
    nodes.shuffle(rng);
    let k = rng.gen_range(0..=nodes.len());
    nodes.into_iter().take(k).collect()
}

fn random_graph(rng: &mut ChaCha8Rng, max_n: usize) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let lo = n.saturating_sub(1);
    let hi = n * (n - 1) / 2;
    let m = rng.gen_range(lo..=hi.max(lo));
    random_connected_graph(n, m, rng.gen()).unwrap()
}

#[test]
fn reports_match_connectivity_test() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..1500 {
        let g = random_graph(&mut rng, 8);
        let m = random_monitors(&g, &mut rng);
        let mut reports = Vec::new();
        for strict in [false, true] {
            let cfg = OracleConfig {
                strict_paths: strict,
                ..OracleConfig::default()
            };
            let report = is_one_identifiable(&g, &m, &cfg).unwrap();
            let want = predict(&g, &m, strict);
            let ctx = format!(
                "case {case} strict {strict} edges {:?} monitors {:?}",
                g.edges(),
                m
            );
            assert_eq!(report.uncovered, want.uncovered, "{ctx}");
            assert_eq!(report.confusable_pairs, want.confusable, "{ctx}");
            assert_eq!(verdict(&g, &m, &cfg).unwrap(), report.verdict, "{ctx}");
            reports.push((report.verdict, report.uncovered, report.confusable_pairs));
        }
        // a monitor-to-monitor link is never needed for two disjoint routes
        // out of a non-monitor, so both path modes give the same report
        assert_eq!(reports[0], reports[1]);
    }
}

#[test]
fn paths_are_canonical_and_simple() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..300 {
        let g = random_graph(&mut rng, 7);
        let m = random_monitors(&g, &mut rng);
        let paths = enumerate_monitor_paths(&g, &m, &OracleConfig::default()).unwrap();
        let mut seen = BTreeSet::new();
        for p in &paths {
            let (a, b) = p.endpoints();
            assert!(a < b && m.contains(a) && m.contains(b));
            let distinct: NodeSet = p.nodes.iter().cloned().collect();
            assert_eq!(distinct.len(), p.nodes.len());
            for w in p.nodes.windows(2) {
                assert!(g.contains_edge(&Edge::new(w[0].clone(), w[1].clone()).unwrap()));
            }
            assert!(seen.insert(p.nodes.clone()), "path listed twice");
        }
    }
}

fn relabel(g: &Graph, perm: &BTreeMap<NodeId, NodeId>) -> Graph {
    let mut out = Graph::from_edges(g.edges().iter().map(|e| {
        let (a, b) = e.endpoints();
        Edge::new(perm[a].clone(), perm[b].clone()).unwrap()
    }));
    for v in g.nodes() {
        out.insert_node(perm[v].clone());
    }
    out
}

#[test]
fn minimum_is_label_free_and_witness_is_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = OracleConfig::default();
    for _ in 0..200 {
        let g = random_graph(&mut rng, 7);
        let min = min_monitors_bruteforce(&g, &cfg).unwrap();
        assert_eq!(min.witness.len(), min.k);
        assert!(is_one_identifiable(&g, &min.witness, &cfg).unwrap().verdict);

        let mut targets: Vec<NodeId> = g.nodes().iter().cloned().collect();
        targets.shuffle(&mut rng);
        let perm: BTreeMap<NodeId, NodeId> = g.nodes().iter().cloned().zip(targets).collect();
        assert_eq!(
            min_monitors_bruteforce(&relabel(&g, &perm), &cfg)
                .unwrap()
                .k,
            min.k
        );
    }
}
