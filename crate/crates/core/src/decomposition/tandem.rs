//! Tandem networks: chains of polygon-free blocks whose two ends connect to
//! external monitors through non-cut-vertex attach points.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::blocks::{block_cut_tree, Block};
use super::plc::plc_decompose;
use crate::graph::{Edge, Graph, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TandemRejection {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph has no edges")]
    Empty,
    #[error("block-cut tree is not a path")]
    NotAPath,
    #[error("block {0} contains a polygon")]
    BlockNotPlc(usize),
    #[error("expected {expected} external attach points, got {got}")]
    ExternalCount { expected: usize, got: usize },
    #[error("external attach point {0} is a cut vertex or outside the terminal blocks")]
    BadExternal(NodeId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TandemInstance {
    pub graph: Graph,
    /// Blocks from the `v0` end to the `vz` end.
    pub chain: Vec<Block>,
    /// Number of neighbouring blocks per chain position.
    pub beta: Vec<u8>,
    /// External attach points, `v0` first.
    pub externals: Vec<NodeId>,
}

impl TandemInstance {
    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }
}

/// Block shapes used to build tandem chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TandemBlock {
    Bond,
    K4,
    K5,
}

impl TandemBlock {
    pub const ALL: [TandemBlock; 3] = [TandemBlock::Bond, TandemBlock::K4, TandemBlock::K5];

    pub fn order(self) -> usize {
        match self {
            TandemBlock::Bond => 2,
            TandemBlock::K4 => 4,
            TandemBlock::K5 => 5,
        }
    }
}

/// Builds a tandem chain of complete blocks in the given order. Joints and
/// attach points are drawn with the seed, then node labels `1..n` are
/// shuffled. Panics on an empty shape list.
pub fn tandem_chain(shapes: &[TandemBlock], seed: u64) -> TandemInstance {
    assert!(!shapes.is_empty(), "a tandem chain needs a block");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut next = 0usize;
    let mut fresh = |k: usize| -> Vec<usize> {
        let out = (next..next + k).collect();
        next += k;
        out
    };
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut externals: Vec<usize> = Vec::new();
    let mut entry: Option<usize> = None;
    for (i, shape) in shapes.iter().enumerate() {
        let mut nodes: Vec<usize> = entry.into_iter().collect();
        nodes.extend(fresh(shape.order() - nodes.len()));
        let free: Vec<usize> = nodes
            .iter()
            .copied()
            .filter(|&v| Some(v) != entry)
            .collect();
        if i == 0 {
            externals.push(*free.choose(&mut rng).unwrap());
        }
        if i + 1 < shapes.len() {
            let exits: Vec<usize> = free
                .iter()
                .copied()
                .filter(|v| !externals.contains(v))
                .collect();
            entry = Some(*exits.choose(&mut rng).unwrap());
        } else {
            let ends: Vec<usize> = free
                .iter()
                .copied()
                .filter(|v| !externals.contains(v))
                .collect();
            externals.push(*ends.choose(&mut rng).unwrap());
        }
        blocks.push(nodes);
    }
    let mut labels: Vec<usize> = (1..=next).collect();
    labels.shuffle(&mut rng);
    let name = |v: usize| NodeId::new(labels[v].to_string());
    let edges = blocks.iter().flat_map(|nodes| {
        nodes
            .iter()
            .enumerate()
            .flat_map(move |(i, &a)| nodes[i + 1..].iter().map(move |&b| (a, b)))
    });
    let g = Graph::from_edges(edges.map(|(a, b)| Edge::new(name(a), name(b)).unwrap()));
    let externals: Vec<NodeId> = externals.into_iter().map(name).collect();
    is_tandem(&g, &externals).expect("generated chain is a tandem network")
}

pub fn is_tandem(g: &Graph, externals: &[NodeId]) -> Result<TandemInstance, TandemRejection> {
    let tree = block_cut_tree(g).map_err(|_| TandemRejection::Disconnected)?;
    if tree.blocks.is_empty() {
        return Err(TandemRejection::Empty);
    }
    let mut order = tree.chain_order().ok_or(TandemRejection::NotAPath)?;
    for &b in &order {
        if plc_decompose(&tree.blocks[b]).len() != 1 {
            return Err(TandemRejection::BlockNotPlc(b));
        }
    }
    let z = order.len();
    let beta: Vec<u8> = (0..z)
        .map(|i| {
            if z == 1 {
                0
            } else if i == 0 || i == z - 1 {
                1
            } else {
                2
            }
        })
        .collect();
    let expected: usize = beta.iter().map(|&b| 2 - b as usize).sum();
    if externals.len() != expected {
        return Err(TandemRejection::ExternalCount {
            expected,
            got: externals.len(),
        });
    }
    for v in externals {
        if tree.cut_vertices.contains(v) || !g.contains_node(v) {
            return Err(TandemRejection::BadExternal(v.clone()));
        }
    }
    if z == 1 {
        if externals[0] == externals[1] {
            return Err(TandemRejection::BadExternal(externals[1].clone()));
        }
    } else {
        if !tree.blocks[order[0]].nodes.contains(&externals[0]) {
            order.reverse();
        }
        let first = &tree.blocks[order[0]];
        let last = &tree.blocks[order[z - 1]];
        if !first.nodes.contains(&externals[0]) {
            return Err(TandemRejection::BadExternal(externals[0].clone()));
        }
        if !last.nodes.contains(&externals[1]) {
            return Err(TandemRejection::BadExternal(externals[1].clone()));
        }
    }
    Ok(TandemInstance {
        graph: g.clone(),
        chain: order.iter().map(|&b| tree.blocks[b].clone()).collect(),
        beta,
        externals: externals.to_vec(),
    })
}
