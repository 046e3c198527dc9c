//! Monitor placement in graphs whose blocks are all polygon-free.

use super::{sorted, Algorithm, Ctx, PlacementError, PlacementResult, TraceRecord};
use crate::decomposition::{biconnected_components, plc_decompose, Block};
use crate::graph::{Graph, NodeId, NodeSet, SubgraphRef};

/// Places monitors in a graph made of polygon-free blocks. Nodes in `s` are
/// never picked when a monitor has to go inside a non-bond second block.
pub fn monitors_in_polygonless(
    g: &Graph,
    s: &NodeSet,
    seed: u64,
) -> Result<PlacementResult, PlacementError> {
    for b in biconnected_components(g) {
        if plc_decompose(&b).len() != 1 {
            return Err(PlacementError::PolygonPresent(sorted(&b.nodes)));
        }
    }
    let mut ctx = Ctx::new(seed);
    run(&mut ctx, g, s)?;
    Ok(ctx.finish(Algorithm::Polygonless, seed))
}

fn smallest(b: &Block) -> &NodeId {
    b.nodes.first().expect("non-empty block")
}

pub(crate) fn run(ctx: &mut Ctx, g: &Graph, s: &NodeSet) -> Result<(), PlacementError> {
    if g.edge_count() == 0 {
        return Ok(());
    }
    for comp in g.connected_components() {
        let gi = g.induced(&comp);
        if gi.edge_count() == 0 {
            continue;
        }
        let blocks = biconnected_components(&gi);

        if blocks.len() == 1 {
            let candidates = sorted(&comp);
            let v = ctx.pick(&candidates).unwrap().clone();
            let mut rec = TraceRecord::new("alg3/line5");
            rec.candidates = candidates;
            rec.removed = vec![sorted(&comp)];
            ctx.place(v, rec);
            continue;
        }

        let b1 = blocks
            .iter()
            .filter(|b| b.cut_vertices.len() <= 1)
            .min_by(|x, y| smallest(x).cmp(smallest(y)))
            .expect("a block tree has leaves");
        let shares = |a: &Block, b: &Block| a.id != b.id && !a.nodes.is_disjoint(&b.nodes);
        let b2 = blocks
            .iter()
            .filter(|b| shares(b1, b))
            .min_by(|x, y| smallest(x).cmp(smallest(y)))
            .expect("b1 has a neighbour");
        let joint: NodeSet = b1.nodes.intersection(&b2.nodes).cloned().collect();
        let common = joint.first().unwrap().clone();

        let next_gi = if b2.is_bond {
            let mut rec = TraceRecord::new("alg3/line9");
            rec.candidates = vec![common.clone()];
            rec.removed = vec![sorted(&b1.nodes), sorted(&b2.nodes)];
            ctx.place(common, rec);
            gi.subtract_subgraphs(&[b1.as_subgraph(), b2.as_subgraph()])
                .expect("blocks are subgraphs")
        } else {
            // prefer a third block hanging off b2 away from b1's joint
            let b3 = blocks
                .iter()
                .filter(|b| b.id != b1.id && shares(b2, b))
                .min_by_key(|b| (!b.nodes.is_disjoint(&joint), smallest(b).clone()));
            let candidates: Vec<NodeId> = b2.nodes.difference(s).cloned().collect();
            let Some(v) = ctx.pick(&candidates).cloned() else {
                return Err(PlacementError::NoEligibleNode(sorted(&b2.nodes)));
            };
            let mut parts: Vec<SubgraphRef> = vec![b1.as_subgraph(), b2.as_subgraph()];
            let mut rec = TraceRecord::new("alg3/line12");
            rec.candidates = candidates;
            rec.removed = vec![sorted(&b1.nodes), sorted(&b2.nodes)];
            if let Some(b3) = b3 {
                parts.push(b3.as_subgraph());
                rec.removed.push(sorted(&b3.nodes));
            }
            ctx.place(v, rec);
            gi.subtract_subgraphs(&parts).expect("blocks are subgraphs")
        };
        debug_assert!(next_gi.edge_count() < gi.edge_count());
        run(ctx, &next_gi, s)?;
    }
    Ok(())
}
