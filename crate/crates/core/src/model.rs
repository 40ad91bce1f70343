//! Lists, precolourings, full colourings, problem instances, and the
//! residual-list computations that drive every extension step.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::embedding::RotationSystem;
use crate::graph::{EdgeId, Graph, VertexId};

pub type Colour = i64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("edge {0} has no colour list")]
    MissingList(EdgeId),
    #[error("list references unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("precoloured edges {0} and {1} are adjacent and share colour {2}")]
    ImproperPrecolouring(EdgeId, EdgeId, Colour),
    #[error("precoloured edge {0} uses colour {1} outside its own list")]
    PrecolourOutsideList(EdgeId, Colour),
    #[error("parameter Delta = {delta} below maximum degree {max_degree}")]
    DeltaTooSmall { delta: usize, max_degree: usize },
    #[error("parameter d = {d} below precoloured subgraph maximum degree {h_degree}")]
    DTooSmall { d: usize, h_degree: usize },
    #[error("t must be positive")]
    TNotPositive,
    #[error("colouring does not cover edge {0}")]
    IncompleteColouring(EdgeId),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Colour list per edge. Domains may be partial (residual lists live on the
/// uncoloured subgraph only).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ListAssignment {
    lists: BTreeMap<EdgeId, BTreeSet<Colour>>,
}

impl ListAssignment {
    pub fn new(lists: BTreeMap<EdgeId, BTreeSet<Colour>>) -> Self {
        ListAssignment { lists }
    }

    /// Same list on every edge of `graph`.
    pub fn uniform(graph: &Graph, colours: &BTreeSet<Colour>) -> Self {
        ListAssignment {
            lists: graph.edge_ids().map(|e| (e, colours.clone())).collect(),
        }
    }

    pub fn get(&self, e: EdgeId) -> Option<&BTreeSet<Colour>> {
        self.lists.get(&e)
    }

    pub fn list(&self, e: EdgeId) -> &BTreeSet<Colour> {
        &self.lists[&e]
    }

    pub fn size(&self, e: EdgeId) -> usize {
        self.lists.get(&e).map_or(0, BTreeSet::len)
    }

    pub fn insert(&mut self, e: EdgeId, colours: BTreeSet<Colour>) {
        self.lists.insert(e, colours);
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, &BTreeSet<Colour>)> {
        self.lists.iter().map(|(&e, s)| (e, s))
    }

    pub fn min_size(&self) -> Option<usize> {
        self.lists.values().map(BTreeSet::len).min()
    }

    /// Predicate form of the theorem precondition |L(e)| >= k for all edges.
    pub fn all_at_least(&self, k: usize) -> bool {
        self.lists.values().all(|s| s.len() >= k)
    }
}

/// Partial proper colouring: the precoloured subgraph H and its colours.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Precolouring {
    colours: BTreeMap<EdgeId, Colour>,
}

impl Precolouring {
    pub fn new(colours: BTreeMap<EdgeId, Colour>) -> Self {
        Precolouring { colours }
    }

    pub fn empty() -> Self {
        Precolouring::default()
    }

    pub fn colour(&self, e: EdgeId) -> Option<Colour> {
        self.colours.get(&e).copied()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.colours.contains_key(&e)
    }

    pub fn domain(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colours.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, Colour)> + '_ {
        self.colours.iter().map(|(&e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn palette(&self) -> BTreeSet<Colour> {
        self.colours.values().copied().collect()
    }

    /// Degree of `v` in H.
    pub fn h_degree(&self, graph: &Graph, v: VertexId) -> usize {
        graph
            .incident_edges(v)
            .iter()
            .filter(|e| self.contains(**e))
            .count()
    }

    pub fn h_max_degree(&self, graph: &Graph) -> usize {
        graph
            .vertices()
            .map(|v| self.h_degree(graph, v))
            .max()
            .unwrap_or(0)
    }
}

/// Total colouring of a graph's edges, dense by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullColouring {
    colours: Vec<Colour>,
}

impl FullColouring {
    pub fn new(colours: Vec<Colour>) -> Self {
        FullColouring { colours }
    }

    pub fn from_map(graph: &Graph, map: &BTreeMap<EdgeId, Colour>) -> Result<Self, ModelError> {
        let mut colours = Vec::with_capacity(graph.edge_count());
        for e in graph.edge_ids() {
            match map.get(&e) {
                Some(&c) => colours.push(c),
                None => return Err(ModelError::IncompleteColouring(e)),
            }
        }
        Ok(FullColouring { colours })
    }

    pub fn colour(&self, e: EdgeId) -> Colour {
        self.colours[e]
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    pub fn palette(&self) -> BTreeSet<Colour> {
        self.colours.iter().copied().collect()
    }

    pub fn as_map(&self) -> BTreeMap<EdgeId, Colour> {
        self.colours.iter().enumerate().map(|(e, &c)| (e, c)).collect()
    }
}

/// Theorem parameters: Delta bounds the graph degree, d bounds the
/// precoloured subgraph degree, lists have size Delta + t.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub delta: usize,
    pub t: usize,
    pub d: usize,
}

impl Params {
    /// l = t - d, defined only in the window 0 <= t - d <= 3 where the pot
    /// rules apply.
    pub fn ell(&self) -> Option<usize> {
        if self.t >= self.d && self.t - self.d <= 3 {
            Some(self.t - self.d)
        } else {
            None
        }
    }
}

/// The hypothesis tuple: graph, optional embedding, lists, precolouring, and
/// the (Delta, t, d) parameters validated against them.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub graph: Graph,
    pub rot: Option<RotationSystem>,
    pub lists: ListAssignment,
    pub precol: Precolouring,
    pub params: Params,
}

impl ProblemInstance {
    pub fn new(
        graph: Graph,
        rot: Option<RotationSystem>,
        lists: ListAssignment,
        precol: Precolouring,
        params: Params,
    ) -> Result<Self, ModelError> {
        if params.t == 0 {
            return Err(ModelError::TNotPositive);
        }
        let max_degree = graph.max_degree();
        if params.delta < max_degree {
            return Err(ModelError::DeltaTooSmall { delta: params.delta, max_degree });
        }
        for e in graph.edge_ids() {
            if lists.get(e).is_none() {
                return Err(ModelError::MissingList(e));
            }
        }
        for (e, _) in lists.iter() {
            if e >= graph.edge_count() {
                return Err(ModelError::UnknownEdge(e));
            }
        }
        for (e, c) in precol.iter() {
            if e >= graph.edge_count() {
                return Err(ModelError::UnknownEdge(e));
            }
            if !lists.list(e).contains(&c) {
                return Err(ModelError::PrecolourOutsideList(e, c));
            }
        }
        for v in graph.vertices() {
            let mut seen: BTreeMap<Colour, EdgeId> = BTreeMap::new();
            for &e in graph.incident_edges(v) {
                if let Some(c) = precol.colour(e) {
                    if let Some(&other) = seen.get(&c) {
                        return Err(ModelError::ImproperPrecolouring(other.min(e), other.max(e), c));
                    }
                    seen.insert(c, e);
                }
            }
        }
        let h_degree = precol.h_max_degree(&graph);
        if params.d < h_degree {
            return Err(ModelError::DTooSmall { d: params.d, h_degree });
        }
        Ok(ProblemInstance { graph, rot, lists, precol, params })
    }

    pub fn uncoloured_edges(&self) -> Vec<EdgeId> {
        self.graph
            .edge_ids()
            .filter(|e| !self.precol.contains(*e))
            .collect()
    }

    /// The uncoloured subgraph G - E(H), with its new-to-old edge map.
    pub fn uncoloured_subgraph(&self) -> (Graph, Vec<EdgeId>) {
        let keep: BTreeSet<EdgeId> = self.uncoloured_edges().into_iter().collect();
        self.graph.edge_subgraph(&keep)
    }

    /// Replace every precoloured edge uv by pendant copies uu', vv' that keep
    /// its colour and list. The transform frees the precoloured edges from
    /// any embedding: only G - E(H) has to be embeddable afterwards.
    pub fn split_precoloured(&self) -> (ProblemInstance, crate::graph::SplitEdgeMap) {
        let h_edges: BTreeSet<EdgeId> = self.precol.domain().collect();
        let (graph, map) = crate::graph::split_precoloured_edges(&self.graph, &h_edges)
            .expect("precolouring domain is a subset of the edges");
        let n_old = self.graph.vertex_count();
        let mut lists = BTreeMap::new();
        let mut precol = BTreeMap::new();
        for (&e, &(eu, ev)) in &map.pairs {
            let colour = self.precol.colour(e).expect("split edges are precoloured");
            for copy in [eu, ev] {
                lists.insert(copy, self.lists.list(e).clone());
                precol.insert(copy, colour);
            }
        }
        for (&e, &kept) in &map.kept {
            lists.insert(kept, self.lists.list(e).clone());
        }
        let rot = self.rot.as_ref().map(|r| {
            let mut order: Vec<Vec<EdgeId>> = vec![Vec::new(); graph.vertex_count()];
            for (v, slot) in order.iter_mut().enumerate().take(n_old) {
                *slot = r
                    .order_at(v)
                    .iter()
                    .map(|&e| match map.pairs.get(&e) {
                        Some(&(eu, ev)) => {
                            // the u-side copy keeps the id; at the far
                            // endpoint the slot now holds the v-side copy
                            let (u, _) = graph.endpoints(eu);
                            if u == v {
                                eu
                            } else {
                                ev
                            }
                        }
                        None => e,
                    })
                    .collect();
            }
            for e in graph.edge_ids() {
                let (a, b) = graph.endpoints(e);
                for leaf in [a, b] {
                    if leaf >= n_old {
                        order[leaf] = vec![e];
                    }
                }
            }
            RotationSystem::new(&graph, order).expect("pendant slots keep the rotation valid")
        });
        let inst = ProblemInstance::new(
            graph,
            rot,
            ListAssignment::new(lists),
            Precolouring::new(precol),
            self.params,
        )
        .expect("splitting preserves instance invariants");
        (inst, map)
    }

    /// Map a colouring of the split instance back onto this instance's edges.
    pub fn pull_back_split(
        &self,
        map: &crate::graph::SplitEdgeMap,
        split_col: &FullColouring,
    ) -> FullColouring {
        let colours = self
            .graph
            .edge_ids()
            .map(|e| match map.pairs.get(&e) {
                Some(&(eu, _)) => split_col.colour(eu),
                None => split_col.colour(map.kept[&e]),
            })
            .collect();
        FullColouring::new(colours)
    }

    /// Instance with the given edges removed; vertex ids unchanged, edge ids
    /// remapped (new-to-old map returned).
    pub fn delete_edges(&self, drop: &BTreeSet<EdgeId>) -> (ProblemInstance, Vec<EdgeId>) {
        let (graph, new_to_old) = self.graph.delete_edges(drop);
        let rot = self.rot.as_ref().map(|r| r.restrict(&self.graph, &new_to_old));
        let mut lists = BTreeMap::new();
        let mut precol = BTreeMap::new();
        for (new, &old) in new_to_old.iter().enumerate() {
            lists.insert(new, self.lists.list(old).clone());
            if let Some(c) = self.precol.colour(old) {
                precol.insert(new, c);
            }
        }
        let inst = ProblemInstance {
            graph,
            rot,
            lists: ListAssignment::new(lists),
            precol: Precolouring::new(precol),
            params: self.params,
        };
        (inst, new_to_old)
    }
}

/// One defect found by the verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    AdjacentSameColour { first: EdgeId, second: EdgeId, colour: Colour },
    ColourOutsideList { edge: EdgeId, colour: Colour },
    PrecolouringChanged { edge: EdgeId, expected: Colour, got: Colour },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::AdjacentSameColour { first, second, colour } => {
                write!(f, "edges {first} and {second} are adjacent and both coloured {colour}")
            }
            Violation::ColourOutsideList { edge, colour } => {
                write!(f, "edge {edge} coloured {colour}, which is outside its list")
            }
            Violation::PrecolouringChanged { edge, expected, got } => {
                write!(f, "precoloured edge {edge} expected colour {expected}, got {got}")
            }
        }
    }
}

/// Verdict of `verify_colouring`: either clean or the full violation list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that `col` is proper, within lists, and extends the precolouring.
/// Always returns a verdict; never fails.
pub fn verify_colouring(instance: &ProblemInstance, col: &FullColouring) -> Verdict {
    let mut violations = Vec::new();
    let graph = &instance.graph;
    for e in graph.edge_ids() {
        let c = col.colour(e);
        if !instance.lists.list(e).contains(&c) {
            violations.push(Violation::ColourOutsideList { edge: e, colour: c });
        }
        if let Some(expected) = instance.precol.colour(e) {
            if expected != c {
                violations.push(Violation::PrecolouringChanged { edge: e, expected, got: c });
            }
        }
    }
    let mut seen_pairs = BTreeSet::new();
    for v in graph.vertices() {
        let mut by_colour: BTreeMap<Colour, Vec<EdgeId>> = BTreeMap::new();
        for &e in graph.incident_edges(v) {
            by_colour.entry(col.colour(e)).or_default().push(e);
        }
        for (c, edges) in by_colour {
            for i in 0..edges.len() {
                for j in (i + 1)..edges.len() {
                    let pair = (edges[i].min(edges[j]), edges[i].max(edges[j]));
                    if seen_pairs.insert(pair) {
                        violations.push(Violation::AdjacentSameColour {
                            first: pair.0,
                            second: pair.1,
                            colour: c,
                        });
                    }
                }
            }
        }
    }
    Verdict { violations }
}

/// Residual lists on G - E(H): every uncoloured edge loses the colours of the
/// precoloured edges incident to it.
pub fn residual_lists(instance: &ProblemInstance) -> ListAssignment {
    let graph = &instance.graph;
    let mut out = BTreeMap::new();
    for e in instance.uncoloured_edges() {
        let mut list = instance.lists.list(e).clone();
        for f in graph.adjacent_edges(e) {
            if let Some(c) = instance.precol.colour(f) {
                list.remove(&c);
            }
        }
        out.insert(e, list);
    }
    ListAssignment::new(out)
}

/// Residual lists on a subgraph J when everything outside J is already
/// coloured: `L^J(uv)` drops every colour appearing on a coloured edge of
/// G - E(J) adjacent to uv. `partial` maps the edges of G - E(J) (in the
/// instance's edge ids) to their colours and must extend the precolouring.
pub fn residual_lists_for_subgraph(
    instance: &ProblemInstance,
    partial: &BTreeMap<EdgeId, Colour>,
    j_edges: &BTreeSet<EdgeId>,
) -> ListAssignment {
    let graph = &instance.graph;
    let mut out = BTreeMap::new();
    for &e in j_edges {
        let mut list = instance.lists.list(e).clone();
        for f in graph.adjacent_edges(e) {
            if j_edges.contains(&f) {
                continue;
            }
            if let Some(&c) = partial.get(&f) {
                list.remove(&c);
            }
        }
        out.insert(e, list);
    }
    ListAssignment::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(colours: &[Colour]) -> BTreeSet<Colour> {
        colours.iter().copied().collect()
    }

    fn single_edge_instance() -> ProblemInstance {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2]));
        ProblemInstance::new(g, None, lists, Precolouring::empty(), Params { delta: 1, t: 1, d: 0 })
            .unwrap()
    }

    #[test]
    fn verify_single_edge_ok() {
        let inst = single_edge_instance();
        let verdict = verify_colouring(&inst, &FullColouring::new(vec![1]));
        assert!(verdict.ok());
    }

    #[test]
    fn verify_flags_adjacent_same_colour() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3]));
        let inst = ProblemInstance::new(
            g,
            None,
            lists,
            Precolouring::empty(),
            Params { delta: 2, t: 1, d: 0 },
        )
        .unwrap();
        let verdict = verify_colouring(&inst, &FullColouring::new(vec![1, 1, 2]));
        assert!(!verdict.ok());
        assert_eq!(
            verdict.violations,
            vec![Violation::AdjacentSameColour { first: 0, second: 1, colour: 1 }]
        );
    }

    #[test]
    fn verify_flags_list_and_precolouring_defects() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let mut lists = ListAssignment::uniform(&g, &set(&[1, 2]));
        lists.insert(1, set(&[2, 3]));
        let precol = Precolouring::new(BTreeMap::from([(0, 1)]));
        let inst =
            ProblemInstance::new(g, None, lists, precol, Params { delta: 2, t: 1, d: 1 }).unwrap();
        let verdict = verify_colouring(&inst, &FullColouring::new(vec![2, 4]));
        assert!(verdict.violations.contains(&Violation::ColourOutsideList { edge: 1, colour: 4 }));
        assert!(verdict
            .violations
            .contains(&Violation::PrecolouringChanged { edge: 0, expected: 1, got: 2 }));
    }

    #[test]
    fn instance_rejects_improper_precolouring() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3]));
        let precol = Precolouring::new(BTreeMap::from([(0, 1), (1, 1)]));
        let err = ProblemInstance::new(g, None, lists, precol, Params { delta: 2, t: 1, d: 1 })
            .unwrap_err();
        assert_eq!(err, ModelError::ImproperPrecolouring(0, 1, 1));
    }

    #[test]
    fn instance_rejects_precolour_outside_list() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2]));
        let precol = Precolouring::new(BTreeMap::from([(0, 7)]));
        let err = ProblemInstance::new(g, None, lists, precol, Params { delta: 1, t: 1, d: 1 })
            .unwrap_err();
        assert_eq!(err, ModelError::PrecolourOutsideList(0, 7));
    }

    #[test]
    fn residual_removes_incident_precoloured_colours() {
        // path 0-1-2-3, middle edge uncoloured, ends coloured 3 and 3
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4, 5]));
        let precol = Precolouring::new(BTreeMap::from([(0, 3)]));
        let inst =
            ProblemInstance::new(g, None, lists, precol, Params { delta: 2, t: 3, d: 1 }).unwrap();
        let res = residual_lists(&inst);
        assert_eq!(res.list(1), &set(&[1, 2, 4, 5]));
        assert_eq!(res.list(2), &set(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn residual_same_colour_twice_removes_once() {
        // star centre 1 with uncoloured (0,1); two other incident edges coloured 3
        let g = Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4]));
        // colour 3 on both would be improper; route one through vertex 0 instead
        let g2 = Graph::new(5, &[(0, 1), (1, 2), (0, 3), (1, 4)]).unwrap();
        let lists2 = ListAssignment::uniform(&g2, &set(&[1, 2, 3, 4]));
        let precol = Precolouring::new(BTreeMap::from([(1, 3), (2, 3)]));
        let inst =
            ProblemInstance::new(g2, None, lists2, precol, Params { delta: 3, t: 1, d: 1 })
                .unwrap();
        let res = residual_lists(&inst);
        // edge 0 = (0,1) sees colour 3 at both endpoints; removed once
        assert_eq!(res.list(0), &set(&[1, 2, 4]));
        assert_eq!(res.size(0), lists.size(0) - 1);
    }

    #[test]
    fn residual_for_subgraph_identity_when_j_is_everything() {
        let inst = single_edge_instance();
        let res = residual_lists_for_subgraph(&inst, &BTreeMap::new(), &BTreeSet::from([0]));
        assert_eq!(res.list(0), inst.lists.list(0));
    }

    #[test]
    fn theorem7_size_bound_holds() {
        // |L'| >= |L| - deg_H(x) - deg_H(y) on a small worked example
        let g = Graph::new(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4, 5, 6]));
        let precol = Precolouring::new(BTreeMap::from([(1, 1), (2, 2), (3, 3), (4, 4)]));
        let inst =
            ProblemInstance::new(g, None, lists, precol, Params { delta: 3, t: 3, d: 2 }).unwrap();
        let res = residual_lists(&inst);
        let e = 0; // (0,1): deg_H(0) = 2, deg_H(1) = 2
        assert!(res.size(e) >= 6 - 2 - 2);
        assert_eq!(res.list(e), &set(&[5, 6]));
    }
}
