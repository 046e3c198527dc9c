//! Minimum monitor placement for localizing single node failures under
//! controllable simple-path probing, with an exact brute-force oracle for
//! checking placements on small graphs.

pub mod decomposition;
pub mod graph;
pub mod oracle;
pub mod placement;

pub use graph::{parse_edge_list, random_connected_graph, Edge, Graph, MonitorSet, NodeId};
pub use oracle::{is_one_identifiable, min_monitors_bruteforce, OracleConfig};
pub use placement::{omp_csp, PlacementResult};
