//! Polygon-less components (PLCs) and their agents.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::blocks::{cut_vertices, Block};
use super::triconnected::{triconnected_components, TriKind};
use crate::graph::{EdgeSet, Graph, NodeSet, SubgraphRef};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plc {
    pub id: usize,
    #[serde(rename = "block")]
    pub parent_block: usize,
    pub nodes: NodeSet,
    pub edges: EdgeSet,
    /// Nodes shared with another PLC, plus cut vertices of the whole graph.
    pub agents: NodeSet,
    pub is_bond: bool,
}

impl Plc {
    fn from_edges(parent_block: usize, edges: EdgeSet) -> Plc {
        let nodes: NodeSet = edges
            .iter()
            .flat_map(|e| {
                let (a, b) = e.endpoints();
                [a.clone(), b.clone()]
            })
            .collect();
        Plc {
            id: 0,
            parent_block,
            is_bond: nodes.len() == 2 && edges.len() == 1,
            nodes,
            edges,
            agents: NodeSet::new(),
        }
    }

    pub fn as_subgraph(&self) -> SubgraphRef {
        SubgraphRef::new(self.nodes.clone(), self.edges.clone())
    }

    pub fn non_agents(&self) -> NodeSet {
        self.nodes.difference(&self.agents).cloned().collect()
    }

    pub fn shares_node_with(&self, other: &Plc) -> bool {
        !self.nodes.is_disjoint(&other.nodes)
    }
}

/// Splits a block into PLCs. Adjacent non-polygon triconnected components are
/// glued into one PLC; each real edge of a polygon becomes a bond PLC.
/// Returned ids are local (0-based, in sorted order) and agents are empty.
pub fn plc_decompose(b: &Block) -> Vec<Plc> {
    if b.edges.len() == 1 {
        return vec![Plc::from_edges(b.id, b.edges.clone())];
    }
    let comps = triconnected_components(b).expect("blocks are biconnected");

    // group non-polygon components that share a virtual edge
    let mut group_of: Vec<usize> = (0..comps.len()).collect();
    fn root(group_of: &mut [usize], mut x: usize) -> usize {
        while group_of[x] != x {
            x = group_of[x];
        }
        x
    }
    let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ci, c) in comps.iter().enumerate() {
        for v in &c.virtual_edges {
            holders.entry(v.id).or_default().push(ci);
        }
    }
    for pair in holders.values() {
        let (p, q) = (pair[0], pair[1]);
        if comps[p].kind != TriKind::Polygon && comps[q].kind != TriKind::Polygon {
            let (rp, rq) = (root(&mut group_of, p), root(&mut group_of, q));
            if rp != rq {
                group_of[rp.max(rq)] = rp.min(rq);
            }
        }
    }

    let mut grouped: BTreeMap<usize, EdgeSet> = BTreeMap::new();
    let mut out = Vec::new();
    for (ci, c) in comps.iter().enumerate() {
        if c.kind == TriKind::Polygon {
            for e in &c.real_edges {
                out.push(Plc::from_edges(b.id, [e.clone()].into()));
            }
        } else {
            let r = root(&mut group_of, ci);
            grouped
                .entry(r)
                .or_default()
                .extend(c.real_edges.iter().cloned());
        }
    }
    for edges in grouped.into_values() {
        if !edges.is_empty() {
            out.push(Plc::from_edges(b.id, edges));
        }
    }
    out.sort_by(|x, y| (&x.nodes, &x.edges).cmp(&(&y.nodes, &y.edges)));
    for (i, p) in out.iter_mut().enumerate() {
        p.id = i;
    }
    out
}

/// Fills in agent sets: nodes shared with any other PLC in the list, plus cut
/// vertices of `g`.
pub fn plc_agents(plcs: &[Plc], g: &Graph) -> Vec<Plc> {
    let cuts = cut_vertices(g);
    let mut count: BTreeMap<&crate::graph::NodeId, usize> = BTreeMap::new();
    for p in plcs {
        for v in &p.nodes {
            *count.entry(v).or_default() += 1;
        }
    }
    plcs.iter()
        .map(|p| {
            let mut q = p.clone();
            q.agents = p
                .nodes
                .iter()
                .filter(|v| count[v] >= 2 || cuts.contains(*v))
                .cloned()
                .collect();
            q
        })
        .collect()
}

/// Neighbour map keyed by PLC id: two PLCs are neighbours iff they share a node.
pub fn plc_neighbors(plcs: &[Plc]) -> BTreeMap<usize, BTreeSet<usize>> {
    let mut out: BTreeMap<usize, BTreeSet<usize>> =
        plcs.iter().map(|p| (p.id, BTreeSet::new())).collect();
    for (i, p) in plcs.iter().enumerate() {
        for q in &plcs[i + 1..] {
            if p.shares_node_with(q) {
                out.get_mut(&p.id).unwrap().insert(q.id);
                out.get_mut(&q.id).unwrap().insert(p.id);
            }
        }
    }
    out
}

/// Neighbour map restricted to the PLCs of one block.
pub fn plc_neighbors_within(plcs: &[Plc], block: usize) -> BTreeMap<usize, BTreeSet<usize>> {
    let local: Vec<Plc> = plcs
        .iter()
        .filter(|p| p.parent_block == block)
        .cloned()
        .collect();
    plc_neighbors(&local)
}
