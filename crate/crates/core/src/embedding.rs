//! Combinatorial embeddings: per-vertex rotation systems and the faces they
//! induce. Planarity is asserted through the Euler count of each component,
//! never re-derived from geometry.

use std::collections::BTreeSet;

use crate::graph::{EdgeId, Graph, GraphError, VertexId};

/// Cyclic order of incident edges around every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<EdgeId>>,
}

impl RotationSystem {
    /// Validates that each vertex's cycle lists exactly its incident edges.
    pub fn new(graph: &Graph, order: Vec<Vec<EdgeId>>) -> Result<Self, GraphError> {
        if order.len() != graph.vertex_count() {
            return Err(GraphError::RotationSize {
                got: order.len(),
                want: graph.vertex_count(),
            });
        }
        for v in graph.vertices() {
            let listed: BTreeSet<EdgeId> = order[v].iter().copied().collect();
            let incident: BTreeSet<EdgeId> = graph.incident_edges(v).iter().copied().collect();
            if listed != incident || order[v].len() != incident.len() {
                return Err(GraphError::RotationMismatch { vertex: v });
            }
        }
        Ok(RotationSystem { order })
    }

    /// Rotation given by adjacency-list order. Valid but not necessarily planar.
    pub fn adjacency_order(graph: &Graph) -> Self {
        RotationSystem {
            order: graph
                .vertices()
                .map(|v| graph.incident_edges(v).to_vec())
                .collect(),
        }
    }

    pub fn order_at(&self, v: VertexId) -> &[EdgeId] {
        &self.order[v]
    }

    /// Edge following `e` in the cyclic order at `v`.
    fn next_at(&self, v: VertexId, e: EdgeId) -> EdgeId {
        let cycle = &self.order[v];
        let pos = cycle.iter().position(|&f| f == e).expect("edge in rotation");
        cycle[(pos + 1) % cycle.len()]
    }

    /// Restriction to a subgraph with the given new-to-old edge id map.
    pub fn restrict(&self, old_graph: &Graph, new_to_old: &[EdgeId]) -> RotationSystem {
        let mut old_to_new = vec![None; old_graph.edge_count()];
        for (new, &old) in new_to_old.iter().enumerate() {
            old_to_new[old] = Some(new);
        }
        RotationSystem {
            order: self
                .order
                .iter()
                .map(|cycle| cycle.iter().filter_map(|&e| old_to_new[e]).collect())
                .collect(),
        }
    }
}

/// A face of an embedded graph: the closed boundary walk as (vertex, edge)
/// steps, meaning "from this vertex, traverse this edge". Isolated vertices
/// yield a face with an empty walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub id: usize,
    pub walk: Vec<(VertexId, EdgeId)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn boundary_vertices(&self) -> BTreeSet<VertexId> {
        self.walk.iter().map(|&(v, _)| v).collect()
    }

    pub fn boundary_edges(&self) -> BTreeSet<EdgeId> {
        self.walk.iter().map(|&(_, e)| e).collect()
    }
}

/// Per-component Euler bookkeeping for an embedded graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentEuler {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    /// |V| - |E| + |F| of the component; 2 iff the rotation embeds it in the plane.
    pub characteristic: i64,
}

/// All faces induced by a rotation system, plus per-component diagnostics.
#[derive(Debug, Clone)]
pub struct FaceSet {
    pub faces: Vec<Face>,
    pub components: Vec<ComponentEuler>,
}

impl FaceSet {
    /// True when every component has Euler characteristic 2.
    pub fn is_plane(&self) -> bool {
        self.components.iter().all(|c| c.characteristic == 2)
    }

    pub fn non_planar_components(&self) -> Vec<&ComponentEuler> {
        self.components
            .iter()
            .filter(|c| c.characteristic != 2)
            .collect()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Distinct faces whose boundary contains `v`.
    pub fn faces_at(&self, v: VertexId) -> Vec<usize> {
        self.faces
            .iter()
            .filter(|f| f.walk.iter().any(|&(w, _)| w == v))
            .map(|f| f.id)
            .collect()
    }
}

/// Trace all faces of the embedding. The successor of the dart `u -> v`
/// through edge `e` is the dart leaving `v` along the edge after `e` in the
/// rotation at `v`.
pub fn faces(graph: &Graph, rot: &RotationSystem) -> Result<FaceSet, GraphError> {
    // new() validated rot against *a* graph; revalidate cheaply against this one.
    if rot.order.len() != graph.vertex_count() {
        return Err(GraphError::RotationSize {
            got: rot.order.len(),
            want: graph.vertex_count(),
        });
    }
    for v in graph.vertices() {
        if rot.order[v].len() != graph.degree(v) {
            return Err(GraphError::RotationMismatch { vertex: v });
        }
    }

    let m = graph.edge_count();
    // dart 2e = lo -> hi, dart 2e+1 = hi -> lo
    let dart_tail = |d: usize| -> VertexId {
        let (a, b) = graph.endpoints(d / 2);
        if d.is_multiple_of(2) {
            a
        } else {
            b
        }
    };
    let dart_head = |d: usize| -> VertexId {
        let (a, b) = graph.endpoints(d / 2);
        if d.is_multiple_of(2) {
            b
        } else {
            a
        }
    };
    let mut visited = vec![false; 2 * m];
    let mut faces_out = Vec::new();
    for start in 0..2 * m {
        if visited[start] {
            continue;
        }
        let mut walk = Vec::new();
        let mut d = start;
        loop {
            visited[d] = true;
            walk.push((dart_tail(d), d / 2));
            let v = dart_head(d);
            let e_next = rot.next_at(v, d / 2);
            let (a, _) = graph.endpoints(e_next);
            d = 2 * e_next + usize::from(a != v);
            if d == start {
                break;
            }
        }
        faces_out.push(Face { id: faces_out.len(), walk });
    }

    let comps = graph.components();
    let mut comp_of_vertex = vec![0usize; graph.vertex_count()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of_vertex[v] = i;
        }
    }
    let mut face_counts = vec![0usize; comps.len()];
    for f in &faces_out {
        let (v, _) = f.walk[0];
        face_counts[comp_of_vertex[v]] += 1;
    }
    // an isolated vertex is embedded with the single face around it
    for (i, c) in comps.iter().enumerate() {
        if c.len() == 1 && graph.degree(*c.iter().next().unwrap()) == 0 {
            faces_out.push(Face { id: faces_out.len(), walk: Vec::new() });
            face_counts[i] += 1;
        }
    }
    let mut edge_counts = vec![0usize; comps.len()];
    for e in graph.edge_ids() {
        edge_counts[comp_of_vertex[graph.endpoints(e).0]] += 1;
    }
    let components = comps
        .iter()
        .enumerate()
        .map(|(i, c)| ComponentEuler {
            vertices: c.len(),
            edges: edge_counts[i],
            faces: face_counts[i],
            characteristic: c.len() as i64 - edge_counts[i] as i64 + face_counts[i] as i64,
        })
        .collect();
    Ok(FaceSet { faces: faces_out, components })
}

/// Number of distinct boundary vertices of `face` having degree >= 3 in
/// `graph` (the class index m of the face).
pub fn face_class(face: &Face, graph: &Graph) -> usize {
    face.boundary_vertices()
        .iter()
        .filter(|&&v| graph.degree(v) >= 3)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> (Graph, RotationSystem) {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let rot = RotationSystem::adjacency_order(&g);
        (g, rot)
    }

    #[test]
    fn triangle_has_two_faces_of_length_three() {
        let (g, rot) = triangle();
        let fs = faces(&g, &rot).unwrap();
        assert_eq!(fs.face_count(), 2);
        assert!(fs.faces.iter().all(|f| f.len() == 3));
        assert!(fs.is_plane());
    }

    #[test]
    fn k4_planar_rotation_gives_four_triangles() {
        let (g, rot) = crate::generate::planar_triangulation(0, 4).unwrap();
        assert_eq!(g.edge_count(), 6);
        let fs = faces(&g, &rot).unwrap();
        assert_eq!(fs.face_count(), 4);
        assert!(fs.faces.iter().all(|f| f.len() == 3));
        assert_eq!(fs.components[0].characteristic, 2);
        for f in &fs.faces {
            assert_eq!(face_class(f, &g), 3);
        }
    }

    #[test]
    fn tree_has_one_face() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let fs = faces(&g, &RotationSystem::adjacency_order(&g)).unwrap();
        assert_eq!(fs.face_count(), 1);
        assert_eq!(fs.faces[0].len(), 8);
        assert!(fs.is_plane());
    }

    #[test]
    fn star_face_class_counts_distinct_vertices() {
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let fs = faces(&g, &RotationSystem::adjacency_order(&g)).unwrap();
        assert_eq!(fs.face_count(), 1);
        assert_eq!(face_class(&fs.faces[0], &g), 1);
    }

    #[test]
    fn path_face_class_zero() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let fs = faces(&g, &RotationSystem::adjacency_order(&g)).unwrap();
        assert_eq!(face_class(&fs.faces[0], &g), 0);
    }

    #[test]
    fn k5_rotation_is_not_plane() {
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in (a + 1)..5 {
                edges.push((a, b));
            }
        }
        let g = Graph::new(5, &edges).unwrap();
        // K5 is non-planar, so no rotation has Euler count 2; the adjacency
        // rotation must be reported as such, not crash.
        let fs = faces(&g, &RotationSystem::adjacency_order(&g)).unwrap();
        assert!(!fs.is_plane());
        assert!(!fs.non_planar_components().is_empty());
    }

    #[test]
    fn isolated_vertex_counts_one_face() {
        let g = Graph::new(4, &[(0, 1), (1, 2)]).unwrap();
        let fs = faces(&g, &RotationSystem::adjacency_order(&g)).unwrap();
        assert_eq!(fs.components.len(), 2);
        assert!(fs.components.iter().all(|c| c.characteristic == 2));
        // walk slots over all faces still total 2|E|
        let slots: usize = fs.faces.iter().map(Face::len).sum();
        assert_eq!(slots, 2 * g.edge_count());
    }

    #[test]
    fn rotation_validation_catches_mismatch() {
        let (g, _) = triangle();
        assert!(RotationSystem::new(&g, vec![vec![0, 1], vec![0, 1], vec![1, 2]]).is_err());
        assert!(RotationSystem::new(&g, vec![vec![0, 2], vec![0, 1], vec![1, 2]]).is_ok());
    }
}
