//! Monitor placement: polygon-less networks, 2-connected networks, and the
//! general connected case.

mod biconnected;
mod omp;
mod polygonless;

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use biconnected::monitors_in_biconnected;
pub use omp::omp_csp;
pub use polygonless::monitors_in_polygonless;

use crate::graph::{MonitorSet, NodeId, NodeSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlacementError {
    #[error("input contains a polygon; block {0:?} is not polygon-free")]
    PolygonPresent(Vec<NodeId>),
    #[error("no eligible monitor candidate in block {0:?}")]
    NoEligibleNode(Vec<NodeId>),
    #[error("graph is not 2-connected")]
    NotTwoConnected,
    #[error("graph is not connected")]
    Disconnected,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Polygonless,
    Biconnected,
    OmpCsp,
}

/// One decision taken by a placement algorithm.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TraceRecord {
    pub rule: String,
    pub candidates: Vec<NodeId>,
    /// Monitors placed by this step.
    pub chosen: Vec<NodeId>,
    /// Node sets of the components removed by this step.
    pub removed: Vec<Vec<NodeId>>,
    /// Named intermediate component sets (A, C, E, F, I, J, K, ...).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub sets: BTreeMap<String, Vec<Vec<NodeId>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TraceRecord {
    pub fn new(rule: &str) -> Self {
        TraceRecord {
            rule: rule.to_owned(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlacementResult {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub monitors: MonitorSet,
    pub count: usize,
    pub trace: Vec<TraceRecord>,
}

impl PlacementResult {
    /// Monitor set rebuilt from the trace alone.
    pub fn replay_monitors(&self) -> MonitorSet {
        self.trace
            .iter()
            .flat_map(|r| r.chosen.iter().cloned())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("placement serializes")
    }
}

/// Seeded random source plus the running monitor set and trace.
pub(crate) struct Ctx {
    rng: ChaCha8Rng,
    pub(crate) monitors: MonitorSet,
    pub(crate) trace: Vec<TraceRecord>,
}

impl Ctx {
    pub(crate) fn new(seed: u64) -> Self {
        Ctx {
            rng: ChaCha8Rng::seed_from_u64(seed),
            monitors: MonitorSet::new(),
            trace: Vec::new(),
        }
    }

    /// Uniform pick from a sorted candidate list.
    pub(crate) fn pick<'a, T>(&mut self, candidates: &'a [T]) -> Option<&'a T> {
        if candidates.is_empty() {
            None
        } else {
            Some(&candidates[self.rng.gen_range(0..candidates.len())])
        }
    }

    pub(crate) fn place(&mut self, v: NodeId, mut record: TraceRecord) {
        record.chosen.push(v.clone());
        self.monitors.insert(v);
        self.trace.push(record);
    }

    pub(crate) fn finish(self, algorithm: Algorithm, seed: u64) -> PlacementResult {
        PlacementResult {
            algorithm,
            seed,
            count: self.monitors.len(),
            monitors: self.monitors,
            trace: self.trace,
        }
    }
}

pub(crate) fn sorted(set: &NodeSet) -> Vec<NodeId> {
    set.iter().cloned().collect()
}
