//! Constructive bipartite edge colouring: a König Δ-edge-colourer, the
//! kernel-method list-edge-colourer, and precolouring extension for
//! bipartite instances.
//!
//! The kernel method runs colour by colour: among the uncoloured edges still
//! holding the colour, a stable matching of the priority digraph (proposals
//! from the left side, deferred acceptance on the right) is the kernel; it
//! receives the colour and every other candidate loses it. Priorities come
//! from a König colouring of the input: at a left vertex the higher auxiliary
//! colour wins, at a right vertex the lower one. That orientation certifies
//! only the global list bound, so a round may stall under the sharper local
//! bound; stalls fall back to exact search, which the existence theorem
//! keeps satisfiable.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{
    residual_lists, Colour, FullColouring, ListAssignment, ProblemInstance,
};
use crate::search::{list_colour_exact, SearchBudget, SearchResult};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BipartiteError {
    #[error("edge {0} joins two vertices on the same side")]
    NotBipartite(EdgeId),
    #[error("bipartition covers {got} vertices, graph has {want}")]
    SideCount { got: usize, want: usize },
    #[error("edge {edge} has a list of size {size}, below max{{deg(x), deg(y)}} = {needed}")]
    ListTooSmall { edge: EdgeId, size: usize, needed: usize },
    #[error("t = {t} is below d = {d}")]
    TBelow { t: usize, d: usize },
    #[error("edge {edge} has a list of size {size}, below Delta + t = {needed}")]
    ListBelowDeltaPlusT { edge: EdgeId, size: usize, needed: usize },
    #[error("kernel rounds and exact search both failed; existence theorem violated")]
    TheoremViolation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Two-sided vertex partition; every edge must cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<Side>,
}

impl Bipartition {
    pub fn new(side: Vec<Side>) -> Self {
        Bipartition { side }
    }

    /// 2-colour the graph by BFS; `None` when an odd cycle exists. Vertices in
    /// edgeless components land on the left.
    pub fn of_graph(graph: &Graph) -> Option<Bipartition> {
        let n = graph.vertex_count();
        let mut side: Vec<Option<Side>> = vec![None; n];
        for start in 0..n {
            if side[start].is_some() {
                continue;
            }
            side[start] = Some(Side::Left);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let next = match side[v].unwrap() {
                    Side::Left => Side::Right,
                    Side::Right => Side::Left,
                };
                for w in graph.neighbours(v) {
                    match side[w] {
                        None => {
                            side[w] = Some(next);
                            queue.push_back(w);
                        }
                        Some(s) if s != next => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Bipartition { side: side.into_iter().map(Option::unwrap).collect() })
    }

    pub fn side(&self, v: VertexId) -> Side {
        self.side[v]
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn validate(&self, graph: &Graph) -> Result<(), BipartiteError> {
        if self.side.len() != graph.vertex_count() {
            return Err(BipartiteError::SideCount {
                got: self.side.len(),
                want: graph.vertex_count(),
            });
        }
        for e in graph.edge_ids() {
            let (u, v) = graph.endpoints(e);
            if self.side[u] == self.side[v] {
                return Err(BipartiteError::NotBipartite(e));
            }
        }
        Ok(())
    }
}

/// Bipartite multigraph view: endpoint pairs by edge id, parallel edges
/// allowed. Everything in this module runs on this representation so the
/// König and kernel machinery tolerates multigraphs.
#[derive(Debug, Clone)]
pub struct BipartiteMultigraph {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
}

impl BipartiteMultigraph {
    pub fn from_graph(graph: &Graph) -> Self {
        BipartiteMultigraph { n: graph.vertex_count(), edges: graph.edges().to_vec() }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn check_sides(&self, bip: &Bipartition) -> Result<(), BipartiteError> {
        if bip.len() != self.n {
            return Err(BipartiteError::SideCount { got: bip.len(), want: self.n });
        }
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            if bip.side(a) == bip.side(b) {
                return Err(BipartiteError::NotBipartite(e));
            }
        }
        Ok(())
    }
}

/// Proper edge colouring of a bipartite multigraph with colours
/// `1..=max_degree`, by the alternating-path construction behind König's
/// theorem.
pub fn konig_edge_colour_multi(
    mg: &BipartiteMultigraph,
    bip: &Bipartition,
) -> Result<Vec<usize>, BipartiteError> {
    mg.check_sides(bip)?;
    let delta = mg.max_degree();
    // at[v][c-1]: edge currently coloured c at v
    let mut at: Vec<Vec<Option<EdgeId>>> = vec![vec![None; delta]; mg.n];
    let mut colour: Vec<usize> = vec![0; mg.edges.len()];
    let free = |at: &Vec<Vec<Option<EdgeId>>>, v: VertexId| -> usize {
        at[v].iter().position(Option::is_none).expect("degree <= delta") + 1
    };
    for (e, &(u, v)) in mg.edges.iter().enumerate() {
        let common = (1..=delta).find(|&c| at[u][c - 1].is_none() && at[v][c - 1].is_none());
        if let Some(c) = common {
            colour[e] = c;
            at[u][c - 1] = Some(e);
            at[v][c - 1] = Some(e);
            continue;
        }
        let a = free(&at, u);
        let b = free(&at, v);
        // swap a and b along the alternating path starting at v; it cannot
        // reach u (the parity argument needs bipartiteness)
        let mut path = Vec::new();
        let mut x = v;
        let mut want = a;
        while let Some(f) = at[x][want - 1] {
            path.push(f);
            let (p, q) = mg.edges[f];
            x = if p == x { q } else { p };
            want = if want == a { b } else { a };
        }
        for &f in &path {
            let (p, q) = mg.edges[f];
            at[p][colour[f] - 1] = None;
            at[q][colour[f] - 1] = None;
        }
        for (i, &f) in path.iter().enumerate() {
            let c = if i % 2 == 0 { b } else { a };
            colour[f] = c;
            let (p, q) = mg.edges[f];
            at[p][c - 1] = Some(f);
            at[q][c - 1] = Some(f);
        }
        colour[e] = a;
        at[u][a - 1] = Some(e);
        at[v][a - 1] = Some(e);
    }
    Ok(colour)
}

/// König Δ-edge-colouring of a bipartite simple graph.
pub fn konig_edge_colour(graph: &Graph, bip: &Bipartition) -> Result<FullColouring, BipartiteError> {
    let aux = konig_edge_colour_multi(&BipartiteMultigraph::from_graph(graph), bip)?;
    Ok(FullColouring::new(aux.into_iter().map(|c| c as Colour).collect()))
}

/// Per-vertex strict total order on incident edges, derived from an auxiliary
/// proper edge colouring: left vertices prefer higher auxiliary colours,
/// right vertices lower ones. Larger rank wins.
#[derive(Debug, Clone)]
pub struct PriorityScheme {
    rank: Vec<BTreeMap<EdgeId, i64>>,
}

impl PriorityScheme {
    pub fn from_aux_colouring(
        mg: &BipartiteMultigraph,
        bip: &Bipartition,
        aux: &[usize],
    ) -> PriorityScheme {
        let mut rank: Vec<BTreeMap<EdgeId, i64>> = vec![BTreeMap::new(); mg.n];
        for (e, &(a, b)) in mg.edges.iter().enumerate() {
            for v in [a, b] {
                let r = match bip.side(v) {
                    Side::Left => aux[e] as i64,
                    Side::Right => -(aux[e] as i64),
                };
                rank[v].insert(e, r);
            }
        }
        PriorityScheme { rank }
    }

    pub fn rank(&self, v: VertexId, e: EdgeId) -> i64 {
        self.rank[v][&e]
    }

    /// True when `e` has priority over `f` at vertex `v`.
    pub fn beats(&self, v: VertexId, e: EdgeId, f: EdgeId) -> bool {
        self.rank(v, e) > self.rank(v, f)
    }
}

/// One kernel round: a stable matching of the candidate edges under the
/// priority scheme, computed by left-side proposals with deferred acceptance.
/// Returns the matched edge set.
fn kernel_round(
    mg: &BipartiteMultigraph,
    bip: &Bipartition,
    prio: &PriorityScheme,
    candidates: &[EdgeId],
) -> BTreeSet<EdgeId> {
    let mut queue_of: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in candidates {
        let (a, b) = mg.edges[e];
        let left = if bip.side(a) == Side::Left { a } else { b };
        queue_of.entry(left).or_default().push(e);
    }
    for (left, edges) in queue_of.iter_mut() {
        // best first; ids ascending break nothing since ranks are strict
        edges.sort_by_key(|&e| (-prio.rank(*left, e), e));
    }
    let mut cursor: BTreeMap<VertexId, usize> = queue_of.keys().map(|&v| (v, 0)).collect();
    let mut held: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
    let mut pending: VecDeque<VertexId> = queue_of.keys().copied().collect();
    while let Some(x) = pending.pop_front() {
        let edges = &queue_of[&x];
        let i = cursor[&x];
        if i >= edges.len() {
            continue;
        }
        let e = edges[i];
        *cursor.get_mut(&x).unwrap() += 1;
        let (a, b) = mg.edges[e];
        let y = if bip.side(a) == Side::Right { a } else { b };
        match held.get(&y).copied() {
            None => {
                held.insert(y, e);
            }
            Some(f) if prio.beats(y, e, f) => {
                held.insert(y, e);
                let (p, q) = mg.edges[f];
                let loser_left = if bip.side(p) == Side::Left { p } else { q };
                pending.push_back(loser_left);
            }
            Some(_) => {
                pending.push_back(x);
            }
        }
    }
    held.into_values().collect()
}

fn edge_adjacency(mg: &BipartiteMultigraph, ids: &[EdgeId]) -> BTreeMap<EdgeId, Vec<EdgeId>> {
    let mut at_vertex: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for &e in ids {
        let (a, b) = mg.edges[e];
        at_vertex.entry(a).or_default().push(e);
        at_vertex.entry(b).or_default().push(e);
    }
    let mut adj: BTreeMap<EdgeId, Vec<EdgeId>> = ids.iter().map(|&e| (e, Vec::new())).collect();
    for edges in at_vertex.values() {
        for &e in edges {
            for &f in edges {
                if e != f {
                    adj.get_mut(&e).unwrap().push(f);
                }
            }
        }
    }
    for list in adj.values_mut() {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

/// List-edge-colour a bipartite multigraph whose lists satisfy
/// `|L(xy)| >= max{deg(x), deg(y)}`. Succeeds on every such input: kernel
/// rounds first, exact search as fallback.
pub fn list_edge_colour_bipartite_multi(
    mg: &BipartiteMultigraph,
    bip: &Bipartition,
    lists: &BTreeMap<EdgeId, BTreeSet<Colour>>,
) -> Result<BTreeMap<EdgeId, Colour>, BipartiteError> {
    mg.check_sides(bip)?;
    let mut deg = vec![0usize; mg.n];
    for &(a, b) in &mg.edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    for (e, &(a, b)) in mg.edges.iter().enumerate() {
        let needed = deg[a].max(deg[b]);
        let size = lists.get(&e).map_or(0, BTreeSet::len);
        if size < needed {
            return Err(BipartiteError::ListTooSmall { edge: e, size, needed });
        }
    }

    let aux = konig_edge_colour_multi(mg, bip)?;
    let prio = PriorityScheme::from_aux_colouring(mg, bip, &aux);

    let mut remaining: BTreeMap<EdgeId, BTreeSet<Colour>> = lists.clone();
    let mut coloured: BTreeMap<EdgeId, Colour> = BTreeMap::new();
    let palette: BTreeSet<Colour> = lists.values().flatten().copied().collect();
    'rounds: for &c in &palette {
        let candidates: Vec<EdgeId> = remaining
            .iter()
            .filter(|(e, list)| !coloured.contains_key(*e) && list.contains(&c))
            .map(|(&e, _)| e)
            .collect();
        if candidates.is_empty() {
            continue;
        }
        let kernel = kernel_round(mg, bip, &prio, &candidates);
        debug_assert!(kernel_is_matching(mg, &kernel));
        for &e in &kernel {
            coloured.insert(e, c);
        }
        for &e in &candidates {
            if !kernel.contains(&e) {
                let list = remaining.get_mut(&e).unwrap();
                list.remove(&c);
                if list.is_empty() {
                    break 'rounds; // stall: the weak orientation ran dry
                }
            }
        }
    }

    if coloured.len() == mg.edges.len() {
        return Ok(coloured);
    }

    // Fallback stage 1: exact search over what is left, under the colours
    // already committed.
    let leftover: Vec<EdgeId> =
        (0..mg.edges.len()).filter(|e| !coloured.contains_key(e)).collect();
    let all: Vec<EdgeId> = (0..mg.edges.len()).collect();
    let full_adj = edge_adjacency(mg, &all);
    let mut cands: BTreeMap<EdgeId, BTreeSet<Colour>> = BTreeMap::new();
    for &e in &leftover {
        let mut list = lists[&e].clone();
        for f in &full_adj[&e] {
            if let Some(&cf) = coloured.get(f) {
                list.remove(&cf);
            }
        }
        cands.insert(e, list);
    }
    let mut sub_adj: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
    let leftover_set: BTreeSet<EdgeId> = leftover.iter().copied().collect();
    for &e in &leftover {
        sub_adj.insert(
            e,
            full_adj[&e].iter().copied().filter(|f| leftover_set.contains(f)).collect(),
        );
    }
    let mut budget = SearchBudget::default();
    if let SearchResult::Found(map) = list_colour_exact(&cands, &sub_adj, &mut budget) {
        coloured.extend(map);
        return Ok(coloured);
    }

    // Fallback stage 2: a partial kernel colouring can be a dead end, so
    // restart the whole graph from the original lists.
    let full_cands: BTreeMap<EdgeId, BTreeSet<Colour>> =
        all.iter().map(|&e| (e, lists[&e].clone())).collect();
    let mut budget = SearchBudget::default();
    match list_colour_exact(&full_cands, &full_adj, &mut budget) {
        SearchResult::Found(map) => Ok(map),
        _ => Err(BipartiteError::TheoremViolation),
    }
}

/// List-edge-colour a bipartite simple graph under the local list bound.
pub fn list_edge_colour_bipartite(
    graph: &Graph,
    bip: &Bipartition,
    lists: &ListAssignment,
) -> Result<FullColouring, BipartiteError> {
    let mg = BipartiteMultigraph::from_graph(graph);
    let map: BTreeMap<EdgeId, BTreeSet<Colour>> =
        graph.edge_ids().map(|e| (e, lists.get(e).cloned().unwrap_or_default())).collect();
    let coloured = list_edge_colour_bipartite_multi(&mg, bip, &map)?;
    Ok(FullColouring::new(
        graph.edge_ids().map(|e| coloured[&e]).collect(),
    ))
}

/// Extend the precolouring of a bipartite instance: residual lists on
/// G - E(H), then the kernel colourer. Requires t >= d and lists of size at
/// least Delta + t.
pub fn extend_bipartite(
    instance: &ProblemInstance,
    bip: &Bipartition,
) -> Result<FullColouring, BipartiteError> {
    bip.validate(&instance.graph)?;
    let params = instance.params;
    if params.t < params.d {
        return Err(BipartiteError::TBelow { t: params.t, d: params.d });
    }
    let needed = params.delta + params.t;
    for (e, list) in instance.lists.iter() {
        if list.len() < needed {
            return Err(BipartiteError::ListBelowDeltaPlusT { edge: e, size: list.len(), needed });
        }
    }
    extend_via_residual(instance, bip)
}

/// The Theorem-7 proof path without the "all of G bipartite" requirement:
/// only G - E(H) needs to be bipartite with respect to `bip`. Used directly
/// by the solver's forest/bipartite stage.
pub fn extend_via_residual(
    instance: &ProblemInstance,
    bip: &Bipartition,
) -> Result<FullColouring, BipartiteError> {
    let residual = residual_lists(instance);
    let uncoloured: Vec<EdgeId> = instance.uncoloured_edges();
    let mg = BipartiteMultigraph {
        n: instance.graph.vertex_count(),
        edges: uncoloured.iter().map(|&e| instance.graph.endpoints(e)).collect(),
    };
    let lists: BTreeMap<EdgeId, BTreeSet<Colour>> = uncoloured
        .iter()
        .enumerate()
        .map(|(i, &e)| (i, residual.list(e).clone()))
        .collect();
    let coloured = list_edge_colour_bipartite_multi(&mg, bip, &lists)?;
    let mut out: BTreeMap<EdgeId, Colour> = instance.precol.iter().collect();
    for (i, &e) in uncoloured.iter().enumerate() {
        out.insert(e, coloured[&i]);
    }
    Ok(FullColouring::from_map(&instance.graph, &out).expect("all edges covered"))
}

fn kernel_is_matching(mg: &BipartiteMultigraph, kernel: &BTreeSet<EdgeId>) -> bool {
    let mut used = BTreeSet::new();
    for &e in kernel {
        let (a, b) = mg.edges[e];
        if !used.insert(a) || !used.insert(b) {
            return false;
        }
    }
    true
}
