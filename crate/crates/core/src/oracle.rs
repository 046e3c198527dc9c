//! Exact identifiability semantics under controllable simple-path probing.
//!
//! A measurement path is any simple path whose two ends are distinct monitors.
//! A non-monitor is covered when some measurement path visits it, and two
//! non-monitors are distinguishable when some measurement path visits exactly
//! one of them. A monitor set is 1-identifying when every non-monitor is
//! covered and every pair of non-monitors is distinguishable.
//!
//! Everything here enumerates paths explicitly, so it is exponential and meant
//! for desk-sized graphs; [`OracleConfig`] bounds the work.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Indexed, MonitorSet, NodeId, NodeSet};

pub const DEFAULT_NODE_CAP: usize = 12;
pub const DEFAULT_PATH_CAP: usize = 100_000;
/// Hard ceiling imposed by the bitmask path representation.
pub const MAX_NODE_CAP: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, above the oracle cap of {cap}")]
    NodeCapExceeded { nodes: usize, cap: usize },
    #[error("more than {cap} measurement paths")]
    CapExceeded { cap: usize },
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("node {0} is not a non-monitor")]
    NotNonMonitor(NodeId),
    #[error("both arguments are node {0}")]
    SameNode(NodeId),
}

impl OracleError {
    /// True for the errors that mean "graph too large for exact checking".
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            OracleError::NodeCapExceeded { .. } | OracleError::CapExceeded { .. }
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub node_cap: usize,
    pub path_cap: usize,
    /// Exclude paths that pass through a monitor in their interior.
    pub strict_paths: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            node_cap: DEFAULT_NODE_CAP,
            path_cap: DEFAULT_PATH_CAP,
            strict_paths: false,
        }
    }
}

/// A simple path between two distinct monitors, smaller endpoint first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MeasurementPath {
    pub nodes: Vec<NodeId>,
}

impl MeasurementPath {
    pub fn endpoints(&self) -> (&NodeId, &NodeId) {
        (&self.nodes[0], self.nodes.last().unwrap())
    }

    pub fn visits(&self, v: &NodeId) -> bool {
        self.nodes.contains(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentifiabilityReport {
    #[serde(rename = "identifiable")]
    pub verdict: bool,
    pub uncovered: Vec<NodeId>,
    pub confusable_pairs: Vec<(NodeId, NodeId)>,
    #[serde(skip)]
    pub signature: BTreeMap<NodeId, BTreeSet<usize>>,
}

type Mask = u128;
type PathCache = HashMap<(usize, usize), Vec<(Mask, Vec<usize>)>>;

/// Index view plus per-pair path cache.
struct PathEngine {
    ix: Indexed,
    neighbor_masks: Vec<Mask>,
    cache: PathCache,
    path_cap: usize,
}

impl PathEngine {
    fn new(g: &Graph, cfg: &OracleConfig) -> Result<Self, OracleError> {
        let cap = cfg.node_cap.min(MAX_NODE_CAP);
        if g.node_count() > cap {
            return Err(OracleError::NodeCapExceeded {
                nodes: g.node_count(),
                cap,
            });
        }
        let ix = Indexed::new(g);
        let neighbor_masks = ix
            .adj
            .iter()
            .map(|list| list.iter().fold(0, |m, &w| m | (1 << w)))
            .collect();
        Ok(PathEngine {
            ix,
            neighbor_masks,
            cache: HashMap::new(),
            path_cap: cfg.path_cap,
        })
    }

    /// All simple paths from `a` to `b` (a < b), in DFS order over sorted
    /// neighbour lists.
    fn paths(&mut self, a: usize, b: usize) -> Result<&[(Mask, Vec<usize>)], OracleError> {
        if !self.cache.contains_key(&(a, b)) {
            let mut out = Vec::new();
            let mut stack = vec![a];
            self.extend(a, b, 1 << a, &mut stack, &mut out)?;
            self.cache.insert((a, b), out);
        }
        Ok(&self.cache[&(a, b)])
    }

    fn extend(
        &self,
        v: usize,
        target: usize,
        visited: Mask,
        stack: &mut Vec<usize>,
        out: &mut Vec<(Mask, Vec<usize>)>,
    ) -> Result<(), OracleError> {
        for &w in &self.ix.adj[v] {
            if visited & (1 << w) != 0 {
                continue;
            }
            stack.push(w);
            if w == target {
                if out.len() >= self.path_cap {
                    return Err(OracleError::CapExceeded { cap: self.path_cap });
                }
                out.push((visited | (1 << w), stack.clone()));
            } else if self.neighbor_masks[w] & !visited != 0 {
                self.extend(w, target, visited | (1 << w), stack, out)?;
            }
            stack.pop();
        }
        Ok(())
    }

    /// Path masks for a monitor set, in canonical order: monitor pairs in
    /// sorted order, then DFS order within a pair.
    fn monitor_paths(
        &mut self,
        monitors: &[usize],
        strict: bool,
    ) -> Result<Vec<Mask>, OracleError> {
        let monitor_mask: Mask = monitors.iter().fold(0, |m, &v| m | (1 << v));
        let mut out = Vec::new();
        for (i, &a) in monitors.iter().enumerate() {
            for &b in &monitors[i + 1..] {
                let endpoints: Mask = (1 << a) | (1 << b);
                let cap = self.path_cap;
                for (mask, _) in self.paths(a, b)? {
                    if strict && mask & monitor_mask & !endpoints != 0 {
                        continue;
                    }
                    if out.len() >= cap {
                        return Err(OracleError::CapExceeded { cap });
                    }
                    out.push(*mask);
                }
            }
        }
        Ok(out)
    }

    fn monitor_path_lists(
        &mut self,
        monitors: &[usize],
        strict: bool,
    ) -> Result<Vec<Vec<usize>>, OracleError> {
        let monitor_mask: Mask = monitors.iter().fold(0, |m, &v| m | (1 << v));
        let mut out = Vec::new();
        for (i, &a) in monitors.iter().enumerate() {
            for &b in &monitors[i + 1..] {
                let endpoints: Mask = (1 << a) | (1 << b);
                let cap = self.path_cap;
                for (mask, nodes) in self.paths(a, b)? {
                    if strict && mask & monitor_mask & !endpoints != 0 {
                        continue;
                    }
                    if out.len() >= cap {
                        return Err(OracleError::CapExceeded { cap });
                    }
                    out.push(nodes.clone());
                }
            }
        }
        Ok(out)
    }

    fn monitor_indices(&self, m: &MonitorSet) -> Result<Vec<usize>, OracleError> {
        m.iter()
            .map(|v| {
                self.ix
                    .index
                    .get(v)
                    .copied()
                    .ok_or_else(|| OracleError::UnknownNode(v.clone()))
            })
            .collect()
    }

    /// Fast verdict for a monitor set given as sorted indices.
    fn identifiable(&mut self, monitors: &[usize], strict: bool) -> Result<bool, OracleError> {
        let masks = self.monitor_paths(monitors, strict)?;
        let n = self.ix.len();
        let monitor_mask: Mask = monitors.iter().fold(0, |m, &v| m | (1 << v));
        let words = masks.len().div_ceil(64);
        let mut sigs: Vec<Vec<u64>> = Vec::new();
        for v in (0..n).filter(|v| monitor_mask & (1 << v) == 0) {
            let mut sig = vec![0u64; words];
            let mut any = false;
            for (p, mask) in masks.iter().enumerate() {
                if mask & (1 << v) != 0 {
                    sig[p / 64] |= 1 << (p % 64);
                    any = true;
                }
            }
            if !any {
                return Ok(false);
            }
            sigs.push(sig);
        }
        sigs.sort_unstable();
        Ok(sigs.windows(2).all(|w| w[0] != w[1]))
    }
}

/// Every simple path between every unordered pair of distinct monitors, each
/// once, smaller endpoint first. Monitors may sit inside a path unless
/// `strict_paths` is set.
pub fn enumerate_monitor_paths(
    g: &Graph,
    m: &MonitorSet,
    cfg: &OracleConfig,
) -> Result<Vec<MeasurementPath>, OracleError> {
    let mut engine = PathEngine::new(g, cfg)?;
    let monitors = engine.monitor_indices(m)?;
    let lists = engine.monitor_path_lists(&monitors, cfg.strict_paths)?;
    Ok(lists
        .into_iter()
        .map(|nodes| MeasurementPath {
            nodes: nodes
                .into_iter()
                .map(|i| engine.ix.ids[i].clone())
                .collect(),
        })
        .collect())
}

/// Ids (positions in [`enumerate_monitor_paths`]) of the paths through each
/// non-monitor.
pub fn path_signature(
    g: &Graph,
    m: &MonitorSet,
    cfg: &OracleConfig,
) -> Result<BTreeMap<NodeId, BTreeSet<usize>>, OracleError> {
    let paths = enumerate_monitor_paths(g, m, cfg)?;
    let mut sig: BTreeMap<NodeId, BTreeSet<usize>> = m
        .non_monitors(g)
        .into_iter()
        .map(|v| (v, BTreeSet::new()))
        .collect();
    for (id, p) in paths.iter().enumerate() {
        for v in &p.nodes {
            if let Some(set) = sig.get_mut(v) {
                set.insert(id);
            }
        }
    }
    Ok(sig)
}

pub fn distinguishable(
    g: &Graph,
    m: &MonitorSet,
    u: &NodeId,
    w: &NodeId,
    cfg: &OracleConfig,
) -> Result<bool, OracleError> {
    if u == w {
        return Err(OracleError::SameNode(u.clone()));
    }
    for v in [u, w] {
        if !g.contains_node(v) || m.contains(v) {
            return Err(OracleError::NotNonMonitor(v.clone()));
        }
    }
    let sig = path_signature(g, m, cfg)?;
    Ok(sig[u] != sig[w])
}

pub fn is_one_identifiable(
    g: &Graph,
    m: &MonitorSet,
    cfg: &OracleConfig,
) -> Result<IdentifiabilityReport, OracleError> {
    let signature = path_signature(g, m, cfg)?;
    let uncovered: Vec<NodeId> = signature
        .iter()
        .filter(|(_, s)| s.is_empty())
        .map(|(v, _)| v.clone())
        .collect();
    let mut by_sig: BTreeMap<&BTreeSet<usize>, Vec<&NodeId>> = BTreeMap::new();
    for (v, s) in &signature {
        by_sig.entry(s).or_default().push(v);
    }
    let mut confusable_pairs = Vec::new();
    for group in by_sig.values() {
        for (i, u) in group.iter().enumerate() {
            for w in &group[i + 1..] {
                confusable_pairs.push(((*u).clone(), (*w).clone()));
            }
        }
    }
    confusable_pairs.sort();
    Ok(IdentifiabilityReport {
        verdict: uncovered.is_empty() && confusable_pairs.is_empty(),
        uncovered,
        confusable_pairs,
        signature,
    })
}

/// Verdict only; skips building the report.
pub fn verdict(g: &Graph, m: &MonitorSet, cfg: &OracleConfig) -> Result<bool, OracleError> {
    let mut engine = PathEngine::new(g, cfg)?;
    let monitors = engine.monitor_indices(m)?;
    engine.identifiable(&monitors, cfg.strict_paths)
}

/// Result of the exhaustive minimum search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinimumMonitors {
    pub k: usize,
    pub witness: MonitorSet,
}

/// Smallest `k` for which some `k`-subset of nodes is 1-identifying. Subsets
/// are scanned by size, then lexicographically over the sorted node list, so
/// the witness is the first feasible subset in that order.
pub fn min_monitors_bruteforce(
    g: &Graph,
    cfg: &OracleConfig,
) -> Result<MinimumMonitors, OracleError> {
    let mut engine = PathEngine::new(g, cfg)?;
    let n = engine.ix.len();
    for k in 0..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            if engine.identifiable(&combo, cfg.strict_paths)? {
                return Ok(MinimumMonitors {
                    k,
                    witness: combo.iter().map(|&i| engine.ix.ids[i].clone()).collect(),
                });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("the full node set is always identifying")
}

/// Exhaustive check that no subset of `candidates` of size below `bound`,
/// together with `fixed`, is 1-identifying. Returns the first counterexample.
pub fn smaller_alternative(
    g: &Graph,
    fixed: &MonitorSet,
    candidates: &NodeSet,
    bound: usize,
    cfg: &OracleConfig,
) -> Result<Option<MonitorSet>, OracleError> {
    let mut engine = PathEngine::new(g, cfg)?;
    let fixed_ix = engine.monitor_indices(fixed)?;
    let cand: Vec<usize> = candidates
        .iter()
        .map(|v| {
            engine
                .ix
                .index
                .get(v)
                .copied()
                .ok_or_else(|| OracleError::UnknownNode(v.clone()))
        })
        .collect::<Result<_, _>>()?;
    for k in 0..bound.min(cand.len() + 1) {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let mut set: Vec<usize> = fixed_ix.clone();
            set.extend(combo.iter().map(|&i| cand[i]));
            set.sort_unstable();
            set.dedup();
            if engine.identifiable(&set, cfg.strict_paths)? {
                return Ok(Some(
                    set.iter().map(|&i| engine.ix.ids[i].clone()).collect(),
                ));
            }
            if !next_combination(&mut combo, cand.len()) {
                break;
            }
        }
    }
    Ok(None)
}

/// Advances `combo` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<(String, String)> = (1..=n)
            .map(|i| (i.to_string(), (i % n + 1).to_string()))
            .collect();
        let p: Vec<(&str, &str)> = pairs
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        Graph::from_pairs(&p)
    }

    fn ms(list: &[&str]) -> MonitorSet {
        list.iter().copied().collect()
    }

    fn seq(p: &MeasurementPath) -> Vec<&str> {
        p.nodes.iter().map(|v| v.as_str()).collect()
    }

    #[test]
    fn enumerate_examples() {
        let cfg = OracleConfig::default();
        let p3 = Graph::from_pairs(&[("a", "b"), ("b", "c")]);
        let paths = enumerate_monitor_paths(&p3, &ms(&["a", "c"]), &cfg).unwrap();
        assert_eq!(paths.iter().map(seq).collect::<Vec<_>>(), [["a", "b", "c"]]);

        let paths = enumerate_monitor_paths(&cycle(4), &ms(&["1", "3"]), &cfg).unwrap();
        assert_eq!(
            paths.iter().map(seq).collect::<Vec<_>>(),
            [["1", "2", "3"], ["1", "4", "3"]]
        );

        let paths = enumerate_monitor_paths(&cycle(3), &ms(&["1", "2"]), &cfg).unwrap();
        let got: Vec<Vec<&str>> = paths.iter().map(seq).collect();
        assert_eq!(got, vec![vec!["1", "2"], vec!["1", "3", "2"]]);
    }

    #[test]
    fn strict_mode_drops_monitor_interiors() {
        let p3 = Graph::from_pairs(&[("a", "b"), ("b", "c")]);
        let cfg = OracleConfig::default();
        let strict = OracleConfig {
            strict_paths: true,
            ..cfg
        };
        let all = enumerate_monitor_paths(&p3, &ms(&["a", "b", "c"]), &cfg).unwrap();
        assert_eq!(all.len(), 3);
        let some = enumerate_monitor_paths(&p3, &ms(&["a", "b", "c"]), &strict).unwrap();
        assert_eq!(some.len(), 2);
    }

    #[test]
    fn signature_examples() {
        let cfg = OracleConfig::default();
        let p3 = Graph::from_pairs(&[("a", "b"), ("b", "c")]);
        let sig = path_signature(&p3, &ms(&["a", "c"]), &cfg).unwrap();
        assert_eq!(sig.len(), 1);
        assert_eq!(sig[&NodeId::from("b")], [0].into());

        let sig = path_signature(&cycle(4), &ms(&["1", "3"]), &cfg).unwrap();
        assert_eq!(sig[&NodeId::from("2")], [0].into());
        assert_eq!(sig[&NodeId::from("4")], [1].into());

        let p4 = Graph::from_pairs(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let sig = path_signature(&p4, &ms(&["a", "d"]), &cfg).unwrap();
        assert_eq!(sig[&NodeId::from("b")], [0].into());
        assert_eq!(sig[&NodeId::from("c")], [0].into());
    }

    #[test]
    fn distinguishable_examples() {
        let cfg = OracleConfig::default();
        let c4 = cycle(4);
        assert!(!distinguishable(&c4, &ms(&["1", "2"]), &"3".into(), &"4".into(), &cfg).unwrap());
        assert!(distinguishable(&c4, &ms(&["1", "3"]), &"2".into(), &"4".into(), &cfg).unwrap());

        let p3 = Graph::from_pairs(&[("a", "b"), ("b", "c")]);
        let m = ms(&["a", "c"]);
        assert_eq!(
            distinguishable(&p3, &m, &"b".into(), &"b".into(), &cfg),
            Err(OracleError::SameNode("b".into()))
        );
        assert_eq!(
            distinguishable(&p3, &m, &"b".into(), &"a".into(), &cfg),
            Err(OracleError::NotNonMonitor("a".into()))
        );
    }

    #[test]
    fn identifiable_examples() {
        let cfg = OracleConfig::default();
        let r = is_one_identifiable(&cycle(6), &ms(&["1", "3", "5"]), &cfg).unwrap();
        assert!(r.verdict);

        let p4 = Graph::from_pairs(&[("a", "b"), ("b", "c"), ("c", "d")]);
        let r = is_one_identifiable(&p4, &ms(&["a", "d"]), &cfg).unwrap();
        assert!(!r.verdict);
        assert!(r.uncovered.is_empty());
        assert_eq!(r.confusable_pairs, vec![("b".into(), "c".into())]);

        let all: MonitorSet = p4.nodes().iter().cloned().collect();
        assert!(is_one_identifiable(&p4, &all, &cfg).unwrap().verdict);
    }

    #[test]
    fn uncovered_reported() {
        let cfg = OracleConfig::default();
        let star = Graph::from_pairs(&[("c", "x"), ("c", "y"), ("c", "z")]);
        let r = is_one_identifiable(&star, &ms(&["x", "y"]), &cfg).unwrap();
        assert_eq!(r.uncovered, vec![NodeId::from("z")]);
        assert!(!r.verdict);
    }

    #[test]
    fn bruteforce_examples() {
        let cfg = OracleConfig::default();
        let r = min_monitors_bruteforce(&cycle(4), &cfg).unwrap();
        assert_eq!(r.k, 2);
        assert_eq!(r.witness, ms(&["1", "3"]));
        assert_eq!(min_monitors_bruteforce(&cycle(5), &cfg).unwrap().k, 3);
        let star = Graph::from_pairs(&[("c", "x"), ("c", "y"), ("c", "z")]);
        let r = min_monitors_bruteforce(&star, &cfg).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(r.witness, ms(&["x", "y", "z"]));
    }

    #[test]
    fn caps() {
        let big = cycle(13);
        let cfg = OracleConfig::default();
        assert!(matches!(
            min_monitors_bruteforce(&big, &cfg),
            Err(OracleError::NodeCapExceeded { nodes: 13, cap: 12 })
        ));
        let tight = OracleConfig { path_cap: 1, ..cfg };
        assert_eq!(
            enumerate_monitor_paths(&cycle(4), &ms(&["1", "3"]), &tight),
            Err(OracleError::CapExceeded { cap: 1 })
        );
    }

    #[test]
    fn fast_verdict_matches_report() {
        let cfg = OracleConfig::default();
        let g = cycle(5);
        let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
        for mask in 0u32..32 {
            let m: MonitorSet = (0..5)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| nodes[i].clone())
                .collect();
            assert_eq!(
                verdict(&g, &m, &cfg).unwrap(),
                is_one_identifiable(&g, &m, &cfg).unwrap().verdict
            );
        }
    }

    #[test]
    fn combinations_in_order() {
        let mut c = vec![0, 1];
        let mut seen = vec![c.clone()];
        while next_combination(&mut c, 4) {
            seen.push(c.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        let mut empty: Vec<usize> = vec![];
        assert!(!next_combination(&mut empty, 3));
    }
}
