//! Triconnected components of a biconnected block.
//!
//! Split components are produced by repeatedly splitting at separation pairs
//! (quadratic scan over node pairs per split), and adjacent bonds and adjacent
//! polygons are merged afterwards. The merged result is the canonical
//! decomposition: polygons, bonds and simple 3-connected graphs, with no two
//! polygons and no two bonds sharing a virtual edge.

use std::collections::BTreeMap;

use serde::Serialize;

use super::blocks::Block;
use super::DecompositionError;
use crate::graph::{Edge, EdgeSet, Graph, Indexed, NodeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriKind {
    Polygon,
    Bond,
    Triconnected,
}

/// A virtual edge: the separation pair shared by exactly two components.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct VirtualEdge {
    pub id: usize,
    pub pair: Edge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriComponent {
    pub kind: TriKind,
    pub nodes: NodeSet,
    pub real_edges: EdgeSet,
    pub virtual_edges: Vec<VirtualEdge>,
}

impl TriComponent {
    pub fn edge_count(&self) -> usize {
        self.real_edges.len() + self.virtual_edges.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Real,
    Virtual(usize),
}

#[derive(Clone, Copy, Debug)]
struct MEdge {
    a: usize,
    b: usize,
    label: Label,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn piece_nodes(piece: &[MEdge]) -> Vec<usize> {
    let mut nodes: Vec<usize> = piece.iter().flat_map(|e| [e.a, e.b]).collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Separation classes of `piece` with respect to `{a, b}`, as lists of edge
/// positions.
fn separation_classes(piece: &[MEdge], a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(piece.len());
    let mut first_at: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, e) in piece.iter().enumerate() {
        for v in [e.a, e.b] {
            if v == a || v == b {
                continue;
            }
            match first_at.get(&v) {
                Some(&j) => uf.union(i, j),
                None => {
                    first_at.insert(v, i);
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..piece.len() {
        let root = uf.find(i);
        classes.entry(root).or_default().push(i);
    }
    classes.into_values().collect()
}

/// Finds a separation pair and returns the edge positions that go to the first
/// side of the split.
fn find_split(piece: &[MEdge]) -> Option<(usize, usize, Vec<usize>)> {
    let nodes = piece_nodes(piece);
    for (i, &a) in nodes.iter().enumerate() {
        for &b in &nodes[i + 1..] {
            let classes = separation_classes(piece, a, b);
            let k = classes.len();
            let singletons = classes.iter().filter(|c| c.len() == 1).count();
            let is_pair = k >= 2 && !(k == 2 && singletons >= 1) && !(k == 3 && singletons == 3);
            if !is_pair {
                continue;
            }
            let side = match classes.iter().find(|c| c.len() >= 2) {
                Some(c) => c.clone(),
                None => vec![classes[0][0], classes[1][0]],
            };
            debug_assert!(piece.len() - side.len() >= 2);
            return Some((a, b, side));
        }
    }
    None
}

fn classify(piece: &[MEdge]) -> TriKind {
    let nodes = piece_nodes(piece);
    if nodes.len() == 2 {
        TriKind::Bond
    } else if piece.len() == nodes.len() {
        TriKind::Polygon
    } else {
        TriKind::Triconnected
    }
}

/// Checks that the graph is biconnected with at least three nodes.
fn check_biconnected(g: &Graph) -> Result<(), DecompositionError> {
    if g.node_count() < 3 || !g.is_connected() || !super::blocks::cut_vertices(g).is_empty() {
        return Err(DecompositionError::NotBiconnected);
    }
    Ok(())
}

pub fn triconnected_components(b: &Block) -> Result<Vec<TriComponent>, DecompositionError> {
    if b.edges.len() == 1 {
        return Ok(vec![TriComponent {
            kind: TriKind::Bond,
            nodes: b.nodes.clone(),
            real_edges: b.edges.clone(),
            virtual_edges: Vec::new(),
        }]);
    }
    triconnected_components_of(&b.graph())
}

/// Canonical triconnected decomposition of a biconnected graph.
pub fn triconnected_components_of(g: &Graph) -> Result<Vec<TriComponent>, DecompositionError> {
    check_biconnected(g)?;
    let ix = Indexed::new(g);
    let all: Vec<MEdge> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = e.endpoints();
            MEdge {
                a: ix.index[a],
                b: ix.index[b],
                label: Label::Real,
            }
        })
        .collect();

    let mut pending = vec![all];
    let mut finished: Vec<Vec<MEdge>> = Vec::new();
    let mut next_virtual = 0usize;
    while let Some(piece) = pending.pop() {
        match find_split(&piece) {
            None => finished.push(piece),
            Some((a, b, side)) => {
                let id = next_virtual;
                next_virtual += 1;
                let link = MEdge {
                    a,
                    b,
                    label: Label::Virtual(id),
                };
                let mut left = vec![link];
                let mut right = vec![link];
                for (i, e) in piece.into_iter().enumerate() {
                    if side.contains(&i) {
                        left.push(e);
                    } else {
                        right.push(e);
                    }
                }
                pending.push(right);
                pending.push(left);
            }
        }
    }

    let kinds: Vec<TriKind> = finished.iter().map(|p| classify(p)).collect();
    let mut holders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (pi, piece) in finished.iter().enumerate() {
        for e in piece {
            if let Label::Virtual(id) = e.label {
                holders.entry(id).or_default().push(pi);
            }
        }
    }

    // merge bond-bond and polygon-polygon neighbours
    let mut uf = UnionFind::new(finished.len());
    for pieces in holders.values() {
        let (p, q) = (pieces[0], pieces[1]);
        if kinds[p] == kinds[q] && kinds[p] != TriKind::Triconnected {
            uf.union(p, q);
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for pi in 0..finished.len() {
        let root = uf.find(pi);
        groups.entry(root).or_default().push(pi);
    }

    let mut merged: Vec<(TriKind, Vec<MEdge>)> = Vec::new();
    for members in groups.values() {
        let mut edges: Vec<MEdge> = Vec::new();
        let mut internal = Vec::new();
        for (id, pieces) in &holders {
            if members.contains(&pieces[0]) && members.contains(&pieces[1]) {
                internal.push(*id);
            }
        }
        for &pi in members {
            for e in &finished[pi] {
                match e.label {
                    Label::Virtual(id) if internal.contains(&id) => {}
                    _ => edges.push(*e),
                }
            }
        }
        merged.push((kinds[members[0]], edges));
    }

    let mut comps: Vec<(TriComponent, Vec<usize>)> = merged
        .into_iter()
        .map(|(kind, edges)| {
            let mut nodes = NodeSet::new();
            let mut real_edges = EdgeSet::new();
            let mut virtuals = Vec::new();
            for e in &edges {
                nodes.insert(ix.ids[e.a].clone());
                nodes.insert(ix.ids[e.b].clone());
                let pair = Edge::new(ix.ids[e.a].clone(), ix.ids[e.b].clone()).unwrap();
                match e.label {
                    Label::Real => {
                        real_edges.insert(pair);
                    }
                    Label::Virtual(id) => virtuals.push((id, pair)),
                }
            }
            virtuals.sort_by(|x, y| x.1.cmp(&y.1).then(x.0.cmp(&y.0)));
            let old_ids = virtuals.iter().map(|v| v.0).collect();
            let comp = TriComponent {
                kind,
                nodes,
                real_edges,
                virtual_edges: virtuals
                    .into_iter()
                    .map(|(id, pair)| VirtualEdge { id, pair })
                    .collect(),
            };
            (comp, old_ids)
        })
        .collect();
    comps.sort_by(|x, y| {
        (x.0.kind, &x.0.nodes, &x.0.real_edges, &x.0.virtual_edges).cmp(&(
            y.0.kind,
            &y.0.nodes,
            &y.0.real_edges,
            &y.0.virtual_edges,
        ))
    });

    // renumber virtual ids in order of first appearance
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    for (_, old_ids) in &comps {
        for id in old_ids {
            let next = renumber.len();
            renumber.entry(*id).or_insert(next);
        }
    }
    Ok(comps
        .into_iter()
        .map(|(mut c, _)| {
            for v in &mut c.virtual_edges {
                v.id = renumber[&v.id];
            }
            c.virtual_edges
                .sort_by(|x, y| x.pair.cmp(&y.pair).then(x.id.cmp(&y.id)));
            c
        })
        .collect())
}
