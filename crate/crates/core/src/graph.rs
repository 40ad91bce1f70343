//! Simple undirected graphs with stable dense ids, degree-class queries,
//! and the precoloured-edge splitting transform.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("parallel edge between {0} and {1}")]
    ParallelEdge(VertexId, VertexId),
    #[error("endpoint {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(VertexId, usize),
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("rotation at vertex {vertex} does not list exactly its incident edges")]
    RotationMismatch { vertex: VertexId },
    #[error("rotation system has {got} vertex entries, graph has {want}")]
    RotationSize { got: usize, want: usize },
}

/// Simple undirected graph. Vertices are `0..n`; edge ids are indices into
/// the edge list, fixed at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    ends: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<EdgeId>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        let mut ends = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            if a >= n {
                return Err(GraphError::VertexOutOfRange(a, n));
            }
            if b >= n {
                return Err(GraphError::VertexOutOfRange(b, n));
            }
            if a == b {
                return Err(GraphError::LoopEdge(a));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(GraphError::ParallelEdge(key.0, key.1));
            }
            ends.push(key);
            adj[a].push(id);
            adj[b].push(id);
        }
        Ok(Graph { ends, adj })
    }

    pub fn empty(n: usize) -> Self {
        Graph { ends: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        0..self.adj.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        0..self.ends.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.ends[e]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.ends
    }

    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn other_endpoint(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.ends[e];
        if v == a {
            b
        } else {
            debug_assert_eq!(v, b);
            a
        }
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].iter().map(move |&e| self.other_endpoint(e, v))
    }

    pub fn edge_between(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.adj[u]
            .iter()
            .copied()
            .find(|&e| self.other_endpoint(e, u) == v)
    }

    /// Edges adjacent to `e` (sharing an endpoint), without `e` itself.
    pub fn adjacent_edges(&self, e: EdgeId) -> Vec<EdgeId> {
        let (u, v) = self.ends[e];
        let mut out: Vec<EdgeId> = self.adj[u]
            .iter()
            .chain(self.adj[v].iter())
            .copied()
            .filter(|&f| f != e)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn degree_classes(&self) -> DegreeClassIndex {
        let mut classes: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for v in self.vertices() {
            classes.entry(self.degree(v)).or_default().insert(v);
        }
        DegreeClassIndex { classes }
    }

    /// Connected components as vertex sets, lowest-id vertex first.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let n = self.vertex_count();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![start];
            let mut members = BTreeSet::new();
            comp[start] = id;
            while let Some(v) = stack.pop() {
                members.insert(v);
                for w in self.neighbours(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// New graph without the given edges; returns the new graph and the map
    /// from new edge ids to old ones. Vertex ids are unchanged.
    pub fn delete_edges(&self, drop: &BTreeSet<EdgeId>) -> (Graph, Vec<EdgeId>) {
        let mut ends = Vec::new();
        let mut new_to_old = Vec::new();
        for e in self.edge_ids() {
            if !drop.contains(&e) {
                ends.push(self.ends[e]);
                new_to_old.push(e);
            }
        }
        let g = Graph::new(self.vertex_count(), &ends).expect("subgraph of a simple graph");
        (g, new_to_old)
    }

    /// Subgraph on the same vertex set keeping only the given edges, with the
    /// new-to-old edge id map.
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> (Graph, Vec<EdgeId>) {
        let drop: BTreeSet<EdgeId> = self.edge_ids().filter(|e| !keep.contains(e)).collect();
        self.delete_edges(&drop)
    }
}

/// Partition of the vertex set by exact degree: `V_i` and the range union
/// `V_[a,b]`.
#[derive(Debug, Clone)]
pub struct DegreeClassIndex {
    classes: BTreeMap<usize, BTreeSet<VertexId>>,
}

impl DegreeClassIndex {
    pub fn class(&self, degree: usize) -> BTreeSet<VertexId> {
        self.classes.get(&degree).cloned().unwrap_or_default()
    }

    pub fn class_size(&self, degree: usize) -> usize {
        self.classes.get(&degree).map_or(0, BTreeSet::len)
    }

    /// `V_[a,b]`: all vertices whose degree lies in `a..=b` (empty when a > b).
    pub fn range(&self, a: usize, b: usize) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        if a > b {
            return out;
        }
        for (_, members) in self.classes.range(a..=b) {
            out.extend(members.iter().copied());
        }
        out
    }

    pub fn nonempty_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes
            .iter()
            .filter(|(_, m)| !m.is_empty())
            .map(|(&d, _)| d)
    }

    pub fn is_empty(&self) -> bool {
        self.classes.values().all(BTreeSet::is_empty)
    }
}

/// Result of splitting edges into pendant pairs: old edge id -> the two new
/// pendant edge ids (one at each original endpoint).
#[derive(Debug, Clone)]
pub struct SplitEdgeMap {
    pub pairs: BTreeMap<EdgeId, (EdgeId, EdgeId)>,
    pub kept: BTreeMap<EdgeId, EdgeId>,
}

/// Replace each edge `uv` in `h_edges` by pendant edges `uu'`, `vv'` on fresh
/// leaf vertices. Degrees of original vertices are unchanged. The split edge
/// keeps its id for the `u`-side copy; the `v`-side copies are appended.
pub fn split_precoloured_edges(
    graph: &Graph,
    h_edges: &BTreeSet<EdgeId>,
) -> Result<(Graph, SplitEdgeMap), GraphError> {
    for &e in h_edges {
        if e >= graph.edge_count() {
            return Err(GraphError::UnknownEdge(e));
        }
    }
    let n = graph.vertex_count();
    let mut ends: Vec<(VertexId, VertexId)> = Vec::with_capacity(graph.edge_count() + h_edges.len());
    let mut pairs = BTreeMap::new();
    let mut kept = BTreeMap::new();
    let mut next_vertex = n;
    let mut tail = Vec::new();
    for e in graph.edge_ids() {
        let (u, v) = graph.endpoints(e);
        if h_edges.contains(&e) {
            let u_leaf = next_vertex;
            let v_leaf = next_vertex + 1;
            next_vertex += 2;
            ends.push((u, u_leaf));
            let v_copy_id = graph.edge_count() + tail.len();
            tail.push((v, v_leaf));
            pairs.insert(e, (e, v_copy_id));
        } else {
            ends.push((u, v));
            kept.insert(e, e);
        }
    }
    ends.extend(tail);
    let g = Graph::new(next_vertex, &ends)?;
    Ok((g, SplitEdgeMap { pairs, kept }))
}
