//! Invariant checks shared by the property tests and the acceptance gate.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use csp_monitors::decomposition::{
    biconnected_components, cut_vertices, plc_decompose, Decomposition,
};
use csp_monitors::graph::{Edge, Graph, MonitorSet, NodeId, SubgraphRef};
use csp_monitors::oracle::{verdict, OracleConfig};

pub type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn block_edge_partition(g: &Graph) -> Check {
    let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
    for b in biconnected_components(g) {
        for e in &b.edges {
            *count.entry(e.clone()).or_default() += 1;
        }
    }
    ensure(count.values().all(|&k| k == 1), || {
        "edge in two blocks".into()
    })?;
    ensure(count.keys().eq(g.edges().iter()), || {
        "blocks miss an edge".into()
    })
}

pub fn plc_edge_partition(g: &Graph) -> Check {
    for b in biconnected_components(g) {
        let mut count: BTreeMap<Edge, usize> = BTreeMap::new();
        for p in plc_decompose(&b) {
            for e in &p.edges {
                let (x, y) = e.endpoints();
                ensure(p.nodes.contains(x) && p.nodes.contains(y), || {
                    format!("plc {:?} has edge {e:?} outside its nodes", p.nodes)
                })?;
                *count.entry(e.clone()).or_default() += 1;
            }
        }
        ensure(count.values().all(|&k| k == 1), || {
            format!("edge in two plcs of block {}", b.id)
        })?;
        ensure(count.keys().eq(b.edges.iter()), || {
            format!("plcs miss an edge of block {}", b.id)
        })?;
    }
    Ok(())
}

pub fn cut_vertex_membership(g: &Graph) -> Check {
    let blocks = biconnected_components(g);
    let cuts = cut_vertices(g);
    for v in g.nodes() {
        let memberships = blocks.iter().filter(|b| b.nodes.contains(v)).count();
        let rest: BTreeSet<NodeId> = g.nodes().iter().filter(|w| *w != v).cloned().collect();
        let separates = !g.induced(&rest).is_connected();
        ensure(
            cuts.contains(v) == (memberships >= 2) && cuts.contains(v) == separates,
            || {
                format!(
                    "node {v}: cut={} blocks={memberships} separates={separates}",
                    cuts.contains(v)
                )
            },
        )?;
    }
    Ok(())
}

/// Subtracts a pseudo-random selection of blocks and PLCs and checks which
/// nodes survive.
pub fn subtraction_node_rule(g: &Graph, pick: u64) -> Check {
    let d = Decomposition::of(g);
    let mut parts: Vec<SubgraphRef> = Vec::new();
    for (i, b) in d.blocks.iter().enumerate() {
        if pick >> (i % 64) & 1 == 1 {
            parts.push(b.as_subgraph());
        }
    }
    for (i, p) in d.plcs.iter().enumerate() {
        if pick >> ((i + 17) % 64) & 1 == 1 {
            parts.push(p.as_subgraph());
        }
    }
    let rest = g.subtract_subgraphs(&parts).map_err(|e| e.to_string())?;
    let gone: BTreeSet<Edge> = parts.iter().flat_map(|p| p.edges.iter().cloned()).collect();
    let kept: BTreeSet<Edge> = g.edges().difference(&gone).cloned().collect();
    ensure(rest.edges() == &kept, || {
        "wrong edges after subtraction".into()
    })?;
    for v in g.nodes() {
        let in_part = parts.iter().any(|p| p.nodes.contains(v));
        let linked = kept.iter().any(|e| e.contains(v));
        ensure(rest.contains_node(v) == (!in_part || linked), || {
            format!(
                "node {v}: in_part={in_part} linked={linked} kept={}",
                rest.contains_node(v)
            )
        })?;
    }
    Ok(())
}

/// Grows a pseudo-random monitor set until it identifies, then checks that
/// every single addition keeps it identifying.
pub fn monotone_under_addition(g: &Graph, pick: u64, cfg: &OracleConfig) -> Check {
    let nodes: Vec<NodeId> = g.nodes().iter().cloned().collect();
    if nodes.is_empty() {
        return Ok(());
    }
    let mut m: MonitorSet = nodes
        .iter()
        .enumerate()
        .filter(|(i, _)| pick >> i & 1 == 1)
        .map(|(_, v)| v.clone())
        .collect();
    let mut extra = nodes
        .iter()
        .cycle()
        .skip((pick >> 32) as usize % nodes.len());
    while !verdict(g, &m, cfg).map_err(|e| e.to_string())? {
        m.insert(extra.next().unwrap().clone());
    }
    for x in &nodes {
        let mut bigger = m.clone();
        bigger.insert(x.clone());
        ensure(verdict(g, &bigger, cfg).map_err(|e| e.to_string())?, || {
            format!("adding {x} to {m:?} breaks identifiability")
        })?;
    }
    Ok(())
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect()
}

/// Every labeled connected graph on nodes `1..=n`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let all = pairs(n);
    let mut out = Vec::new();
    for mask in 0..1u64 << all.len() {
        let mut g = Graph::from_edges(
            all.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| Edge::new((a + 1).to_string(), (b + 1).to_string()).unwrap()),
        );
        for v in 1..=n {
            g.insert_node(NodeId::new(v.to_string()));
        }
        if g.is_connected() {
            out.push(g);
        }
    }
    out
}
