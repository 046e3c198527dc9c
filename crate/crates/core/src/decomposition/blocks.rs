//! Cut vertices, biconnected components and the block-cut tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::DecompositionError;
use crate::graph::{Edge, EdgeSet, Graph, Indexed, NodeId, NodeSet, SubgraphRef};

/// One biconnected component of a parent graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub id: usize,
    pub nodes: NodeSet,
    pub edges: EdgeSet,
    /// Nodes of this block that belong to at least one other block.
    pub cut_vertices: NodeSet,
    pub is_bond: bool,
}

impl Block {
    pub fn as_subgraph(&self) -> SubgraphRef {
        SubgraphRef::new(self.nodes.clone(), self.edges.clone())
    }

    pub fn graph(&self) -> Graph {
        Graph::from_parts(self.nodes.clone(), self.edges.clone()).expect("block is closed")
    }

    fn smallest(&self) -> &NodeId {
        self.nodes.first().expect("blocks are never empty")
    }
}

/// Edge sets of the biconnected components, as dense index pairs.
fn raw_blocks(ix: &Indexed) -> Vec<Vec<(usize, usize)>> {
    let n = ix.len();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut out = Vec::new();
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        // frame: (node, parent, next neighbour position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        while let Some(&mut (v, parent, ref mut pos)) = stack.last_mut() {
            if *pos < ix.adj[v].len() {
                let w = ix.adj[v][*pos];
                *pos += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut comp = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            comp.push(e);
                            if e == (parent, v) {
                                break;
                            }
                        }
                        out.push(comp);
                    }
                }
            }
        }
    }
    out
}

/// Nodes whose removal increases the number of connected components.
pub fn cut_vertices(g: &Graph) -> NodeSet {
    let mut count: BTreeMap<NodeId, usize> = BTreeMap::new();
    for b in biconnected_components(g) {
        for v in b.nodes {
            *count.entry(v).or_default() += 1;
        }
    }
    count
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(v, _)| v)
        .collect()
}

/// Biconnected components, ordered by their sorted node lists. Isolated nodes
/// belong to no block.
pub fn biconnected_components(g: &Graph) -> Vec<Block> {
    let ix = Indexed::new(g);
    let mut blocks: Vec<(NodeSet, EdgeSet)> = raw_blocks(&ix)
        .into_iter()
        .map(|comp| {
            let mut nodes = NodeSet::new();
            let mut edges = EdgeSet::new();
            for (a, b) in comp {
                nodes.insert(ix.ids[a].clone());
                nodes.insert(ix.ids[b].clone());
                edges.insert(Edge::new(ix.ids[a].clone(), ix.ids[b].clone()).unwrap());
            }
            (nodes, edges)
        })
        .collect();
    blocks.sort();

    let mut membership: BTreeMap<&NodeId, usize> = BTreeMap::new();
    for (nodes, _) in &blocks {
        for v in nodes {
            *membership.entry(v).or_default() += 1;
        }
    }
    let cuts: NodeSet = membership
        .into_iter()
        .filter(|&(_, c)| c >= 2)
        .map(|(v, _)| v.clone())
        .collect();

    blocks
        .into_iter()
        .enumerate()
        .map(|(id, (nodes, edges))| Block {
            id,
            cut_vertices: nodes.intersection(&cuts).cloned().collect(),
            is_bond: nodes.len() == 2 && edges.len() == 1,
            nodes,
            edges,
        })
        .collect()
}

/// Bipartite block/cut-vertex incidence tree of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCutTree {
    pub blocks: Vec<Block>,
    pub cut_vertices: NodeSet,
    /// For each block (by id), the cut vertices it touches.
    pub block_cuts: Vec<NodeSet>,
    /// For each cut vertex, the ids of the blocks containing it.
    pub cut_blocks: BTreeMap<NodeId, BTreeSet<usize>>,
}

impl BlockCutTree {
    /// Blocks sharing a cut vertex with `block`.
    pub fn block_neighbors(&self, block: usize) -> BTreeSet<usize> {
        self.block_cuts[block]
            .iter()
            .flat_map(|c| self.cut_blocks[c].iter().copied())
            .filter(|&b| b != block)
            .collect()
    }

    pub fn tree_node_count(&self) -> usize {
        self.blocks.len() + self.cut_vertices.len()
    }

    /// True when the tree, viewed as a plain graph, is a simple path.
    pub fn is_path(&self) -> bool {
        let block_ok = self.block_cuts.iter().all(|c| c.len() <= 2);
        let cut_ok = self.cut_blocks.values().all(|b| b.len() <= 2);
        block_ok && cut_ok
    }

    /// Blocks in chain order when the tree is a path, starting from the end
    /// block with the smallest node.
    pub fn chain_order(&self) -> Option<Vec<usize>> {
        if !self.is_path() {
            return None;
        }
        if self.blocks.len() <= 1 {
            return Some((0..self.blocks.len()).collect());
        }
        let start = (0..self.blocks.len())
            .filter(|&b| self.block_cuts[b].len() == 1)
            .min_by(|&a, &b| self.blocks[a].smallest().cmp(self.blocks[b].smallest()))?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = self
                .block_neighbors(cur)
                .into_iter()
                .find(|&b| b != prev && !order.contains(&b));
            match next {
                Some(b) => {
                    order.push(b);
                    prev = cur;
                    cur = b;
                }
                None => break,
            }
        }
        Some(order)
    }
}

pub fn block_cut_tree(g: &Graph) -> Result<BlockCutTree, DecompositionError> {
    if !g.is_connected() {
        return Err(DecompositionError::Disconnected);
    }
    let blocks = biconnected_components(g);
    let cut_vertices: NodeSet = blocks
        .iter()
        .flat_map(|b| b.cut_vertices.iter().cloned())
        .collect();
    let block_cuts: Vec<NodeSet> = blocks.iter().map(|b| b.cut_vertices.clone()).collect();
    let mut cut_blocks: BTreeMap<NodeId, BTreeSet<usize>> = BTreeMap::new();
    for b in &blocks {
        for c in &b.cut_vertices {
            cut_blocks.entry(c.clone()).or_default().insert(b.id);
        }
    }
    Ok(BlockCutTree {
        blocks,
        cut_vertices,
        block_cuts,
        cut_blocks,
    })
}
