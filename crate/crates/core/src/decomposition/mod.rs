//! Structural decomposition: blocks, triconnected components, PLCs, agents.

pub mod blocks;
pub mod plc;
pub mod tandem;
pub mod triconnected;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

pub use blocks::{biconnected_components, block_cut_tree, cut_vertices, Block, BlockCutTree};
pub use plc::{plc_agents, plc_decompose, plc_neighbors, plc_neighbors_within, Plc};
pub use tandem::{is_tandem, tandem_chain, TandemBlock, TandemInstance, TandemRejection};
pub use triconnected::{
    triconnected_components, triconnected_components_of, TriComponent, TriKind,
};

use crate::graph::{Graph, NodeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("graph is not connected")]
    Disconnected,
    #[error("graph is not biconnected")]
    NotBiconnected,
}

/// Blocks and PLCs (with agents) of a whole graph. PLC ids are global and
/// PLCs are grouped by block in block order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub plcs: Vec<Plc>,
    #[serde(skip)]
    pub cut_vertices: NodeSet,
}

impl Decomposition {
    pub fn of(g: &Graph) -> Self {
        let blocks = biconnected_components(g);
        let mut plcs: Vec<Plc> = blocks.iter().flat_map(plc_decompose).collect();
        for (i, p) in plcs.iter_mut().enumerate() {
            p.id = i;
        }
        let plcs = plc_agents(&plcs, g);
        let cut_vertices = blocks
            .iter()
            .flat_map(|b| b.cut_vertices.iter().cloned())
            .collect();
        Decomposition {
            blocks,
            plcs,
            cut_vertices,
        }
    }

    pub fn plcs_of(&self, block: usize) -> impl Iterator<Item = &Plc> {
        self.plcs.iter().filter(move |p| p.parent_block == block)
    }

    /// A block is a PLC when it does not split further.
    pub fn block_is_plc(&self, block: usize) -> bool {
        self.plcs_of(block).count() == 1
    }

    pub fn neighbors_within(&self, block: usize) -> BTreeMap<usize, BTreeSet<usize>> {
        plc_neighbors_within(&self.plcs, block)
    }

    /// Agents of all PLCs of one block.
    pub fn block_agents(&self, block: usize) -> NodeSet {
        self.plcs_of(block)
            .flat_map(|p| p.agents.iter().cloned())
            .collect()
    }

    /// Agents of all PLCs.
    pub fn all_agents(&self) -> NodeSet {
        self.plcs
            .iter()
            .flat_map(|p| p.agents.iter().cloned())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("decomposition serializes")
    }
}
