//! Optimal monitor placement for general connected graphs.

use std::collections::BTreeSet;

use super::{biconnected, polygonless};
use super::{sorted, Algorithm, Ctx, PlacementError, PlacementResult, TraceRecord};
use crate::decomposition::{block_cut_tree, Decomposition};
use crate::graph::{Graph, NodeId, SubgraphRef};

/// Minimum monitor set under which any single node failure is localizable.
pub fn omp_csp(g: &Graph, seed: u64) -> Result<PlacementResult, PlacementError> {
    if g.node_count() == 0 || !g.is_connected() {
        return Err(PlacementError::Disconnected);
    }
    let mut ctx = Ctx::new(seed);
    if g.node_count() <= 2 {
        let mut rec = TraceRecord::new("omp/all-nodes");
        rec.candidates = sorted(g.nodes());
        rec.chosen = rec.candidates.clone();
        for v in g.nodes() {
            ctx.monitors.insert(v.clone());
        }
        ctx.trace.push(rec);
        return Ok(ctx.finish(Algorithm::OmpCsp, seed));
    }

    let tree = block_cut_tree(g).map_err(|_| PlacementError::Disconnected)?;
    if tree.cut_vertices.is_empty() {
        ctx.trace.push(TraceRecord::new("omp/line3"));
        biconnected::run(&mut ctx, g)?;
        return Ok(ctx.finish(Algorithm::OmpCsp, seed));
    }

    let d = Decomposition::of(g);
    let cuts = &d.cut_vertices;

    // per-block phase
    for block in &d.blocks {
        if d.block_is_plc(block.id) && block.cut_vertices.len() == 1 {
            let candidates: Vec<NodeId> = block.nodes.difference(cuts).cloned().collect();
            let v = ctx
                .pick(&candidates)
                .cloned()
                .ok_or_else(|| PlacementError::NoEligibleNode(sorted(&block.nodes)))?;
            let mut rec = TraceRecord::new("omp/line7");
            rec.candidates = candidates;
            ctx.place(v, rec);
            continue;
        }

        let local: Vec<_> = d.plcs_of(block.id).collect();
        let neighbors = d.neighbors_within(block.id);
        let a: BTreeSet<usize> = local
            .iter()
            .filter(|p| p.agents.len() >= 3 || neighbors[&p.id].len() >= 4)
            .map(|p| p.id)
            .collect();
        let c: BTreeSet<usize> = a
            .iter()
            .flat_map(|i| neighbors[i].iter().copied())
            .collect();
        let e: BTreeSet<usize> = local
            .iter()
            .filter(|p| p.agents.len() == 2 && p.agents.iter().any(|v| cuts.contains(v)))
            .map(|p| p.id)
            .collect();
        let removed: BTreeSet<usize> = a.iter().chain(&c).chain(&e).copied().collect();
        let lists = |ids: &BTreeSet<usize>| -> Vec<Vec<NodeId>> {
            ids.iter().map(|&i| sorted(&d.plcs[i].nodes)).collect()
        };
        let mut rec = TraceRecord::new("omp/line11");
        rec.sets.insert("A".into(), lists(&a));
        rec.sets.insert("C".into(), lists(&c));
        rec.sets.insert("E".into(), lists(&e));
        rec.removed = lists(&removed);
        ctx.trace.push(rec);

        let parts: Vec<SubgraphRef> = removed.iter().map(|&i| d.plcs[i].as_subgraph()).collect();
        let rest = block
            .graph()
            .subtract_subgraphs(&parts)
            .expect("plcs are subgraphs of their block");
        polygonless::run(&mut ctx, &rest, &d.block_agents(block.id))?;
    }

    // global phase
    let f: BTreeSet<usize> = d
        .blocks
        .iter()
        .filter(|b| b.nodes.iter().any(|v| ctx.monitors.contains(v)))
        .map(|b| b.id)
        .collect();
    let i: BTreeSet<usize> = d
        .blocks
        .iter()
        .filter(|b| b.cut_vertices.len() == 2 && tree.block_neighbors(b.id).len() >= 3)
        .map(|b| b.id)
        .collect();
    let j: BTreeSet<usize> = d
        .blocks
        .iter()
        .filter(|b| b.cut_vertices.len() >= 3)
        .map(|b| b.id)
        .collect();
    let k: BTreeSet<usize> = j.iter().flat_map(|&b| tree.block_neighbors(b)).collect();
    let removed: BTreeSet<usize> = f.iter().chain(&i).chain(&j).chain(&k).copied().collect();
    let lists = |ids: &BTreeSet<usize>| -> Vec<Vec<NodeId>> {
        ids.iter().map(|&b| sorted(&d.blocks[b].nodes)).collect()
    };
    let mut rec = TraceRecord::new("omp/line17");
    rec.sets.insert("F".into(), lists(&f));
    rec.sets.insert("I".into(), lists(&i));
    rec.sets.insert("J".into(), lists(&j));
    rec.sets.insert("K".into(), lists(&k));
    rec.removed = lists(&removed);
    ctx.trace.push(rec);

    let parts: Vec<SubgraphRef> = removed.iter().map(|&b| d.blocks[b].as_subgraph()).collect();
    let rest = g.subtract_subgraphs(&parts).expect("blocks are subgraphs");
    polygonless::run(&mut ctx, &rest, cuts)?;
    Ok(ctx.finish(Algorithm::OmpCsp, seed))
}
