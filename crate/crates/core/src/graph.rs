//! Simple undirected graphs over opaque node tokens, plus the set operators
//! used by the placement algorithms.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: duplicate edge {a} {b}")]
    DuplicateEdge { line: usize, a: NodeId, b: NodeId },
    #[error("line {line}: self-loop at {node}")]
    SelfLoop { line: usize, node: NodeId },
    #[error("line {line}: malformed line {text:?}")]
    MalformedLine { line: usize, text: String },
    #[error("edge {0} is not in the graph")]
    UnknownEdge(Edge),
    #[error("edge {0} has an endpoint outside the graph")]
    UnknownEndpoint(Edge),
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("part {0} is not a subgraph of the graph")]
    NotASubgraph(usize),
    #[error("no connected simple graph has {nodes} nodes and {edges} edges")]
    InfeasibleEdgeCount { nodes: usize, edges: usize },
}

/// Opaque node identifier.
///
/// Ordering is "natural": tokens that are both plain unsigned integers compare
/// numerically, integers sort before other tokens, and everything else falls
/// back to byte order. Equality is plain string equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(token: impl Into<String>) -> Self {
        NodeId(token.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u128> {
        if self.0.is_empty() || !self.0.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        self.0.parse().ok()
    }
}

impl Ord for NodeId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for NodeId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        NodeId(s)
    }
}

/// Unordered node pair, stored with the smaller endpoint first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(NodeId, NodeId);

impl Edge {
    /// Builds a normalized edge. Returns `None` for a self-loop.
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            Ordering::Less => Some(Edge(a, b)),
            Ordering::Greater => Some(Edge(b, a)),
            Ordering::Equal => None,
        }
    }

    pub fn endpoints(&self) -> (&NodeId, &NodeId) {
        (&self.0, &self.1)
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        &self.0 == v || &self.1 == v
    }

    pub fn other(&self, v: &NodeId) -> Option<&NodeId> {
        if &self.0 == v {
            Some(&self.1)
        } else if &self.1 == v {
            Some(&self.0)
        } else {
            None
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Shorthand used all over the tests: `edge("a", "b")`. Panics on self-loops.
pub fn edge(a: &str, b: &str) -> Edge {
    Edge::new(a, b).expect("self-loop")
}

pub type NodeSet = BTreeSet<NodeId>;
pub type EdgeSet = BTreeSet<Edge>;

/// Simple undirected graph. Every edge endpoint is a node of the graph.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    nodes: NodeSet,
    edges: EdgeSet,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("nodes", &self.nodes)
            .field("edges", &self.edges)
            .finish()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from node and edge sets, checking that every edge endpoint
    /// is one of the nodes.
    pub fn from_parts(nodes: NodeSet, edges: EdgeSet) -> Result<Self, GraphError> {
        if let Some(e) = edges
            .iter()
            .find(|e| !nodes.contains(&e.0) || !nodes.contains(&e.1))
        {
            return Err(GraphError::UnknownEndpoint(e.clone()));
        }
        Ok(Graph { nodes, edges })
    }

    /// Graph whose node set is exactly the edge endpoints.
    pub fn from_edges<I: IntoIterator<Item = Edge>>(edges: I) -> Self {
        let edges: EdgeSet = edges.into_iter().collect();
        let nodes = edges
            .iter()
            .flat_map(|e| [e.0.clone(), e.1.clone()])
            .collect();
        Graph { nodes, edges }
    }

    /// Convenience constructor from string pairs. Panics on self-loops.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Self {
        Self::from_edges(pairs.iter().map(|(a, b)| edge(a, b)))
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, v: &NodeId) -> bool {
        self.nodes.contains(v)
    }

    pub fn contains_edge(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    pub fn insert_node(&mut self, v: NodeId) -> bool {
        self.nodes.insert(v)
    }

    pub fn adjacency(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut adj: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.nodes.iter().map(|v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.0).unwrap().push(&e.1);
            adj.get_mut(&e.1).unwrap().push(&e.0);
        }
        for list in adj.values_mut() {
            list.sort();
        }
        adj
    }

    pub fn degree(&self, v: &NodeId) -> usize {
        self.edges.iter().filter(|e| e.contains(v)).count()
    }

    /// Subgraph induced by `keep`.
    pub fn induced(&self, keep: &NodeSet) -> Graph {
        let nodes: NodeSet = self.nodes.intersection(keep).cloned().collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| nodes.contains(&e.0) && nodes.contains(&e.1))
            .cloned()
            .collect();
        Graph { nodes, edges }
    }

    /// Node sets of the connected components, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<NodeSet> {
        let adj = self.adjacency();
        let mut seen = NodeSet::new();
        let mut out = Vec::new();
        for start in &self.nodes {
            if seen.contains(start) {
                continue;
            }
            let mut comp = NodeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start.clone());
            while let Some(v) = queue.pop_front() {
                comp.insert(v.clone());
                for &w in &adj[v] {
                    if seen.insert(w.clone()) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// `G - L'`: drop the listed edges, keep every node.
    pub fn remove_links(&self, links: &EdgeSet) -> Result<Graph, GraphError> {
        if let Some(e) = links.iter().find(|e| !self.edges.contains(e)) {
            return Err(GraphError::UnknownEdge(e.clone()));
        }
        Ok(Graph {
            nodes: self.nodes.clone(),
            edges: self.edges.difference(links).cloned().collect(),
        })
    }

    /// `G + L'`: every endpoint must already be a node.
    pub fn add_links(&self, links: &EdgeSet) -> Result<Graph, GraphError> {
        if let Some(e) = links
            .iter()
            .find(|e| !self.nodes.contains(&e.0) || !self.nodes.contains(&e.1))
        {
            return Err(GraphError::UnknownEndpoint(e.clone()));
        }
        Ok(Graph {
            nodes: self.nodes.clone(),
            edges: self.edges.union(links).cloned().collect(),
        })
    }

    /// `G + G'`: union of node and edge sets.
    pub fn union(&self, other: &Graph) -> Graph {
        Graph {
            nodes: self.nodes.union(&other.nodes).cloned().collect(),
            edges: self.edges.union(&other.edges).cloned().collect(),
        }
    }

    /// `G ⊖ {parts}`: removes every edge of every part, then removes the part
    /// nodes left without incident edges. Nodes outside all parts are kept even
    /// if isolated.
    pub fn subtract_subgraphs(&self, parts: &[SubgraphRef]) -> Result<Graph, GraphError> {
        for (i, p) in parts.iter().enumerate() {
            if !p.nodes.is_subset(&self.nodes) || !p.edges.is_subset(&self.edges) {
                return Err(GraphError::NotASubgraph(i));
            }
        }
        let removed: EdgeSet = parts.iter().flat_map(|p| p.edges.iter().cloned()).collect();
        let edges: EdgeSet = self.edges.difference(&removed).cloned().collect();
        let touched: NodeSet = parts.iter().flat_map(|p| p.nodes.iter().cloned()).collect();
        let mut live = NodeSet::new();
        for e in &edges {
            live.insert(e.0.clone());
            live.insert(e.1.clone());
        }
        let nodes = self
            .nodes
            .iter()
            .filter(|v| !touched.contains(v) || live.contains(v))
            .cloned()
            .collect();
        Ok(Graph { nodes, edges })
    }

    /// Attaches one fresh degree-1 monitor to each listed node. Fresh names are
    /// `m1`, `m2`, ... skipping tokens already present.
    pub fn attach_external_monitors(
        &self,
        attach: &[NodeId],
    ) -> Result<(Graph, MonitorSet), GraphError> {
        if let Some(v) = attach.iter().find(|v| !self.nodes.contains(v)) {
            return Err(GraphError::UnknownNode(v.clone()));
        }
        let mut g = self.clone();
        let mut monitors = NodeSet::new();
        let mut counter = 0usize;
        for v in attach {
            let fresh = loop {
                counter += 1;
                let candidate = NodeId::new(format!("m{counter}"));
                if !g.nodes.contains(&candidate) {
                    break candidate;
                }
            };
            g.nodes.insert(fresh.clone());
            g.edges.insert(Edge::new(fresh.clone(), v.clone()).unwrap());
            monitors.insert(fresh);
        }
        Ok((g, MonitorSet(monitors)))
    }

    /// Edge-list text: one `a b` line per edge, then a bare `v` line for each
    /// isolated node. Output is sorted and therefore byte-stable.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.0, e.1));
        }
        let mut touched = NodeSet::new();
        for e in &self.edges {
            touched.insert(e.0.clone());
            touched.insert(e.1.clone());
        }
        for v in self.nodes.difference(&touched) {
            out.push_str(&format!("{v}\n"));
        }
        out
    }

    /// Graphviz rendering. Monitors are drawn as filled double circles.
    pub fn to_dot(&self, monitors: &MonitorSet) -> String {
        let mut out = String::from("graph G {\n");
        for v in &self.nodes {
            if monitors.contains(v) {
                out.push_str(&format!(
                    "  {} [shape=doublecircle, style=filled, fillcolor=\"#f4a582\", monitor=true];\n",
                    dot_id(v)
                ));
            } else {
                out.push_str(&format!("  {};\n", dot_id(v)));
            }
        }
        for e in &self.edges {
            out.push_str(&format!("  {} -- {};\n", dot_id(&e.0), dot_id(&e.1)));
        }
        out.push_str("}\n");
        out
    }
}

fn dot_id(v: &NodeId) -> String {
    format!(
        "\"{}\"",
        v.as_str().replace('\\', "\\\\").replace('"', "\\\"")
    )
}

fn valid_token(t: &str) -> bool {
    t.chars()
        .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | ':'))
}

/// Parses the edge-list format. Blank lines and `#` comments are skipped; a
/// line holding a single token declares an isolated node.
pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut g = Graph::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.iter().any(|t| !valid_token(t)) {
            return Err(GraphError::MalformedLine {
                line,
                text: raw.to_owned(),
            });
        }
        match tokens.as_slice() {
            [v] => {
                g.nodes.insert(NodeId::from(*v));
            }
            [a, b] => {
                let e = Edge::new(*a, *b).ok_or_else(|| GraphError::SelfLoop {
                    line,
                    node: NodeId::from(*a),
                })?;
                if !g.edges.insert(e.clone()) {
                    return Err(GraphError::DuplicateEdge {
                        line,
                        a: e.0,
                        b: e.1,
                    });
                }
                g.nodes.insert(e.0);
                g.nodes.insert(e.1);
            }
            _ => {
                return Err(GraphError::MalformedLine {
                    line,
                    text: raw.to_owned(),
                })
            }
        }
    }
    Ok(g)
}

/// Connected simple graph on nodes `1..=n` with exactly `m` edges: a random
/// recursive tree, topped up with uniformly sampled extra edges.
pub fn random_connected_graph(n: usize, m: usize, seed: u64) -> Result<Graph, GraphError> {
    let max_edges = n.saturating_mul(n.saturating_sub(1)) / 2;
    if n == 0 || m + 1 < n || m > max_edges {
        return Err(GraphError::InfeasibleEdgeCount { nodes: n, edges: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<NodeId> = (1..=n).map(|i| NodeId::new(i.to_string())).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut present = vec![vec![false; n]; n];
    let mut edges = EdgeSet::new();
    for k in 1..n {
        let v = order[k];
        let u = order[rng.gen_range(0..k)];
        present[u][v] = true;
        present[v][u] = true;
        edges.insert(Edge::new(ids[u].clone(), ids[v].clone()).unwrap());
    }
    let mut absent: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !present[u][v])
        .collect();
    absent.shuffle(&mut rng);
    for &(u, v) in absent.iter().take(m - (n - 1)) {
        edges.insert(Edge::new(ids[u].clone(), ids[v].clone()).unwrap());
    }
    Ok(Graph {
        nodes: ids.into_iter().collect(),
        edges,
    })
}

/// A set of monitor nodes; its complement in the graph is the non-monitor set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonitorSet(NodeSet);

impl MonitorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, v: &NodeId) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: NodeId) -> bool {
        self.0.insert(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &NodeId> {
        self.0.iter()
    }

    pub fn as_set(&self) -> &NodeSet {
        &self.0
    }

    /// Checks `self ⊆ V(g)`.
    pub fn check_within(&self, g: &Graph) -> Result<(), GraphError> {
        match self.0.iter().find(|v| !g.contains_node(v)) {
            Some(v) => Err(GraphError::UnknownNode(v.clone())),
            None => Ok(()),
        }
    }

    /// `V \ M`.
    pub fn non_monitors(&self, g: &Graph) -> NodeSet {
        g.nodes().difference(&self.0).cloned().collect()
    }
}

impl FromIterator<NodeId> for MonitorSet {
    fn from_iter<I: IntoIterator<Item = NodeId>>(iter: I) -> Self {
        MonitorSet(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for MonitorSet {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        MonitorSet(iter.into_iter().map(NodeId::from).collect())
    }
}

/// A node and edge subset of some parent graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubgraphRef {
    pub nodes: NodeSet,
    pub edges: EdgeSet,
}

impl SubgraphRef {
    pub fn new(nodes: NodeSet, edges: EdgeSet) -> Self {
        SubgraphRef { nodes, edges }
    }

    pub fn of(g: &Graph) -> Self {
        SubgraphRef {
            nodes: g.nodes.clone(),
            edges: g.edges.clone(),
        }
    }
}

/// Dense index view of a graph for the algorithms that want `usize` nodes.
/// Indices follow the node ordering of the source graph.
#[derive(Clone, Debug)]
pub struct Indexed {
    pub ids: Vec<NodeId>,
    pub index: BTreeMap<NodeId, usize>,
    pub adj: Vec<Vec<usize>>,
}

impl Indexed {
    pub fn new(g: &Graph) -> Self {
        let ids: Vec<NodeId> = g.nodes.iter().cloned().collect();
        let index: BTreeMap<NodeId, usize> = ids
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, v)| (v, i))
            .collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for e in &g.edges {
            let (a, b) = (index[&e.0], index[&e.1]);
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Indexed { ids, index, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}
