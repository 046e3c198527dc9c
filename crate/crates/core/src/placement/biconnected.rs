//! Monitor placement in 2-connected graphs.

use std::collections::BTreeSet;

use super::polygonless;
use super::{sorted, Algorithm, Ctx, PlacementError, PlacementResult, TraceRecord};
use crate::decomposition::{cut_vertices, plc_neighbors, Decomposition, Plc};
use crate::graph::{Graph, NodeId, NodeSet, SubgraphRef};

pub fn monitors_in_biconnected(g: &Graph, seed: u64) -> Result<PlacementResult, PlacementError> {
    let mut ctx = Ctx::new(seed);
    run(&mut ctx, g)?;
    Ok(ctx.finish(Algorithm::Biconnected, seed))
}

fn is_two_connected(g: &Graph) -> bool {
    g.node_count() >= 3 && g.is_connected() && cut_vertices(g).is_empty()
}

fn parts(plcs: &[Plc], ids: &BTreeSet<usize>) -> Vec<SubgraphRef> {
    ids.iter().map(|&i| plcs[i].as_subgraph()).collect()
}

fn node_lists(plcs: &[Plc], ids: &BTreeSet<usize>) -> Vec<Vec<NodeId>> {
    ids.iter().map(|&i| sorted(&plcs[i].nodes)).collect()
}

pub(crate) fn run(ctx: &mut Ctx, g: &Graph) -> Result<(), PlacementError> {
    if !is_two_connected(g) {
        return Err(PlacementError::NotTwoConnected);
    }
    let d = Decomposition::of(g);
    let plcs = &d.plcs;
    let agents = d.all_agents();

    if plcs.len() == 1 {
        let mut candidates = sorted(g.nodes());
        let mut rec = TraceRecord::new("algA/line2");
        rec.candidates = candidates.clone();
        let first = ctx.pick(&candidates).unwrap().clone();
        candidates.retain(|v| v != &first);
        let second = ctx.pick(&candidates).unwrap().clone();
        rec.chosen.push(first.clone());
        ctx.monitors.insert(first);
        ctx.place(second, rec);
        return Ok(());
    }

    let neighbors = plc_neighbors(plcs);
    let a: BTreeSet<usize> = plcs
        .iter()
        .filter(|p| neighbors[&p.id].len() >= 4)
        .map(|p| p.id)
        .collect();
    if !a.is_empty() {
        let c: BTreeSet<usize> = a
            .iter()
            .flat_map(|i| neighbors[i].iter().copied())
            .collect();
        let removed: BTreeSet<usize> = a.union(&c).copied().collect();
        let mut rec = TraceRecord::new("algA/line5");
        rec.sets.insert("A".into(), node_lists(plcs, &a));
        rec.sets.insert("C".into(), node_lists(plcs, &c));
        rec.removed = node_lists(plcs, &removed);
        ctx.trace.push(rec);
        let rest = g
            .subtract_subgraphs(&parts(plcs, &removed))
            .expect("plcs are subgraphs");
        return polygonless::run(ctx, &rest, &agents);
    }

    if plcs.iter().all(|p| !p.is_bond) {
        // single polygon, every PLC non-bond
        let hosts: Vec<&Plc> = plcs.iter().filter(|p| !p.non_agents().is_empty()).collect();
        let mut rec = TraceRecord::new("algA/line12");
        let lambda = match ctx.pick(&hosts) {
            Some(p) => *p,
            None => {
                rec.note = Some("no PLC has a non-agent node; picking among agents".into());
                ctx.pick(&plcs.iter().collect::<Vec<_>>()).copied().unwrap()
            }
        };
        let mut candidates = sorted(&lambda.non_agents());
        if candidates.is_empty() {
            candidates = sorted(&lambda.nodes);
        }
        let v = ctx.pick(&candidates).unwrap().clone();
        let e = neighbors[&lambda.id].clone();
        let mut removed = e.clone();
        removed.insert(lambda.id);
        rec.candidates = candidates;
        rec.sets.insert("E".into(), node_lists(plcs, &e));
        rec.removed = node_lists(plcs, &removed);
        ctx.place(v, rec);
        let rest = g
            .subtract_subgraphs(&parts(plcs, &removed))
            .expect("plcs are subgraphs");
        return polygonless::run(ctx, &rest, &agents);
    }

    // single polygon with at least one bond PLC: try both sides of a bond
    let bonds: Vec<&Plc> = plcs.iter().filter(|p| p.is_bond).collect();
    let bond = *ctx.pick(&bonds).unwrap();
    let ends: Vec<NodeId> = sorted(&bond.nodes);
    let mut select = TraceRecord::new("algA/line13");
    select.candidates = bonds
        .iter()
        .flat_map(|p| sorted(&p.nodes))
        .collect::<NodeSet>()
        .into_iter()
        .collect();
    select.removed = vec![ends.clone()];

    let mut trials: Vec<Ctx> = Vec::new();
    for (i, end) in ends.iter().enumerate() {
        let side = plcs
            .iter()
            .filter(|p| p.id != bond.id && p.nodes.contains(end))
            .min_by_key(|p| p.id)
            .expect("bond end is shared with a neighbouring PLC");
        let mut trial = Ctx {
            rng: ctx.rng.clone(),
            monitors: ctx.monitors.clone(),
            trace: Vec::new(),
        };
        let mut rec = TraceRecord::new(&format!("algA/line19/trial{}", i + 1));
        let w = if side.is_bond {
            rec.candidates = vec![end.clone()];
            end.clone()
        } else {
            let mut candidates = sorted(&side.non_agents());
            if candidates.is_empty() {
                rec.note = Some("neighbouring PLC has no non-agent node; using bond end".into());
                candidates = vec![end.clone()];
            }
            rec.candidates = candidates.clone();
            trial.pick(&candidates).unwrap().clone()
        };
        let mut gamma: BTreeSet<usize> = plcs
            .iter()
            .filter(|p| p.nodes.contains(&w))
            .map(|p| p.id)
            .collect();
        if !agents.contains(&w) {
            let extra: Vec<usize> = gamma
                .iter()
                .flat_map(|i| neighbors[i].iter().copied())
                .collect();
            gamma.extend(extra);
        }
        rec.removed = node_lists(plcs, &gamma);
        trial.place(w, rec);
        let rest = g
            .subtract_subgraphs(&parts(plcs, &gamma))
            .expect("plcs are subgraphs");
        polygonless::run(&mut trial, &rest, &agents)?;
        ctx.rng = trial.rng.clone();
        trials.push(trial);
    }
    let counts: Vec<usize> = trials.iter().map(|t| t.monitors.len()).collect();
    let pick = if counts[1] < counts[0] { 1 } else { 0 };
    select.note = Some(format!(
        "trial monitor counts {} and {}; keeping trial {}",
        counts[0],
        counts[1],
        pick + 1
    ));
    ctx.trace.push(select);
    let winner = trials.swap_remove(pick);
    ctx.monitors = winner.monitors;
    ctx.trace.extend(winner.trace);
    Ok(())
}
