//! Deterministic extremal families and seeded random instance generators.
//! All randomness flows from a ChaCha stream keyed by the caller's seed, so
//! every generator is reproducible.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bipartite::Bipartition;
use crate::embedding::RotationSystem;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{Colour, ListAssignment, ModelError, Params, Precolouring, ProblemInstance};
use crate::search::{list_colour_exact, SearchBudget, SearchResult};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("could not reach the requested shape: {0}")]
    Unsatisfiable(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Random planar triangulation with its rotation system: start from an
/// oriented sphere triangulation and repeatedly place a new vertex inside a
/// random face. The rotation is read off the oriented triangles, so the face
/// traversal reproduces them exactly and the Euler count is 2.
pub fn planar_triangulation(
    seed: u64,
    n: usize,
) -> Result<(Graph, RotationSystem), GenerateError> {
    if n < 3 {
        return Err(GenerateError::InvalidParameters(format!(
            "triangulation needs n >= 3, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tris: Vec<[VertexId; 3]> = if n == 3 {
        vec![[0, 1, 2], [0, 2, 1]]
    } else {
        vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]
    };
    let first_new = if n == 3 { 3 } else { 4 };
    for v in first_new..n {
        let i = rng.gen_range(0..tris.len());
        let [a, b, c] = tris[i];
        tris[i] = [a, b, v];
        tris.push([b, c, v]);
        tris.push([c, a, v]);
    }
    oriented_triangles_to_embedding(n, &tris)
}

/// Graph plus rotation system from a consistently oriented triangle set.
pub fn oriented_triangles_to_embedding(
    n: usize,
    tris: &[[VertexId; 3]],
) -> Result<(Graph, RotationSystem), GenerateError> {
    let mut edge_set: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    // after[(x, v)] = z: the face holding the directed edge x -> v continues to z
    let mut after: BTreeMap<(VertexId, VertexId), VertexId> = BTreeMap::new();
    for &[a, b, c] in tris {
        for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
            edge_set.insert((x.min(y), x.max(y)));
            if after.insert((x, y), z).is_some() {
                return Err(GenerateError::Unsatisfiable(format!(
                    "directed edge ({x},{y}) appears in two faces with the same orientation"
                )));
            }
        }
    }
    let edges: Vec<(VertexId, VertexId)> = edge_set.into_iter().collect();
    let graph = Graph::new(n, &edges)?;
    let mut order = Vec::with_capacity(n);
    for v in graph.vertices() {
        let mut cycle = Vec::with_capacity(graph.degree(v));
        if graph.degree(v) > 0 {
            let start = graph.neighbours(v).next().unwrap();
            let mut x = start;
            loop {
                cycle.push(graph.edge_between(v, x).unwrap());
                x = *after.get(&(x, v)).ok_or_else(|| {
                    GenerateError::Unsatisfiable(format!("dangling dart ({x},{v})"))
                })?;
                if x == start {
                    break;
                }
            }
            if cycle.len() != graph.degree(v) {
                return Err(GenerateError::Unsatisfiable(format!(
                    "faces around vertex {v} do not close into one cycle"
                )));
            }
        }
        order.push(cycle);
    }
    let rot = RotationSystem::new(&graph, order)?;
    Ok((graph, rot))
}

fn delete_edge_keep_rotation(
    graph: &Graph,
    rot: &RotationSystem,
    e: EdgeId,
) -> (Graph, RotationSystem) {
    let (g, map) = graph.delete_edges(&BTreeSet::from([e]));
    let r = rot.restrict(graph, &map);
    (g, r)
}

fn is_bridge(graph: &Graph, e: EdgeId) -> bool {
    let (g, _) = graph.delete_edges(&BTreeSet::from([e]));
    let (u, v) = graph.endpoints(e);
    let comps = g.components();
    let cu = comps.iter().position(|c| c.contains(&u));
    let cv = comps.iter().position(|c| c.contains(&v));
    cu != cv
}

/// Figure-1 family: K_{1,Delta} with one star edge coloured Delta and every
/// leaf joined to Delta-1 new vertices by edges coloured 1..Delta-1. Lists
/// are {1..Delta+t}. Extension needs t >= Delta-1.
pub fn gen_fig1(delta: usize, t: usize) -> Result<ProblemInstance, GenerateError> {
    if delta < 2 {
        return Err(GenerateError::InvalidParameters(format!("fig1 needs Delta >= 2, got {delta}")));
    }
    if t == 0 {
        return Err(GenerateError::InvalidParameters("fig1 needs t >= 1".into()));
    }
    let n = 1 + delta + delta * (delta - 1);
    let mut edges = Vec::new();
    for leaf in 1..=delta {
        edges.push((0, leaf));
    }
    let mut precol = BTreeMap::new();
    precol.insert(0usize, delta as Colour);
    let mut next_vertex = 1 + delta;
    for leaf in 1..=delta {
        for colour in 1..=(delta - 1) as Colour {
            let id = edges.len();
            edges.push((leaf, next_vertex));
            precol.insert(id, colour);
            next_vertex += 1;
        }
    }
    debug_assert_eq!(next_vertex, n);
    let graph = Graph::new(n, &edges)?;
    let rot = RotationSystem::adjacency_order(&graph);
    let lists = ListAssignment::uniform(&graph, &(1..=(delta + t) as Colour).collect());
    Ok(ProblemInstance::new(
        graph,
        Some(rot),
        lists,
        Precolouring::new(precol),
        Params { delta, t, d: delta },
    )?)
}

/// Figure-2 family: an uncoloured K_{1,Delta} whose leaves each meet d new
/// vertices by edges coloured 1..d. Lists are {1..Delta+t}. Extension needs
/// t >= d.
pub fn gen_fig2(delta: usize, d: usize, t: usize) -> Result<ProblemInstance, GenerateError> {
    if d == 0 || d >= delta {
        return Err(GenerateError::InvalidParameters(format!(
            "fig2 needs 1 <= d < Delta, got d = {d}, Delta = {delta}"
        )));
    }
    if t == 0 {
        return Err(GenerateError::InvalidParameters("fig2 needs t >= 1".into()));
    }
    let n = 1 + delta + delta * d;
    let mut edges = Vec::new();
    for leaf in 1..=delta {
        edges.push((0, leaf));
    }
    let mut precol = BTreeMap::new();
    let mut next_vertex = 1 + delta;
    for leaf in 1..=delta {
        for colour in 1..=d as Colour {
            let id = edges.len();
            edges.push((leaf, next_vertex));
            precol.insert(id, colour);
            next_vertex += 1;
        }
    }
    debug_assert_eq!(next_vertex, n);
    let graph = Graph::new(n, &edges)?;
    let rot = RotationSystem::adjacency_order(&graph);
    let lists = ListAssignment::uniform(&graph, &(1..=(delta + t) as Colour).collect());
    Ok(ProblemInstance::new(
        graph,
        Some(rot),
        lists,
        Precolouring::new(precol),
        Params { delta, t, d },
    )?)
}

#[derive(Debug, Clone)]
pub struct RandomPlanarOptions {
    pub n: usize,
    pub delta: usize,
    pub t: usize,
    pub d: usize,
    /// target edge count after subsampling (best effort, lower-bounded by
    /// connectivity when `connected`)
    pub edge_target: Option<usize>,
    /// universe size above Delta + t for list mode
    pub slack: usize,
    /// draw per-edge random lists of size Delta + t instead of {1..Delta+t}
    pub list_mode: bool,
    /// allow d > t
    pub adversarial: bool,
    pub connected: bool,
    /// probability an eligible edge joins H
    pub h_fraction: f64,
}

impl Default for RandomPlanarOptions {
    fn default() -> Self {
        RandomPlanarOptions {
            n: 8,
            delta: 5,
            t: 2,
            d: 1,
            edge_target: None,
            slack: 3,
            list_mode: false,
            adversarial: false,
            connected: true,
            h_fraction: 0.5,
        }
    }
}

fn draw_list(rng: &mut ChaCha8Rng, size: usize, universe: usize) -> BTreeSet<Colour> {
    let mut pool: Vec<Colour> = (1..=universe as Colour).collect();
    pool.shuffle(rng);
    pool.into_iter().take(size).collect()
}

fn pick_h_and_colour(
    rng: &mut ChaCha8Rng,
    graph: &Graph,
    lists: &ListAssignment,
    d: usize,
    h_fraction: f64,
) -> Precolouring {
    if d == 0 {
        return Precolouring::empty();
    }
    let mut order: Vec<EdgeId> = graph.edge_ids().collect();
    order.shuffle(rng);
    let mut h_deg = vec![0usize; graph.vertex_count()];
    let mut h_edges = Vec::new();
    for e in order {
        let (u, v) = graph.endpoints(e);
        if h_deg[u] < d && h_deg[v] < d && rng.gen_bool(h_fraction) {
            h_deg[u] += 1;
            h_deg[v] += 1;
            h_edges.push(e);
        }
    }
    loop {
        let cands: BTreeMap<EdgeId, BTreeSet<Colour>> =
            h_edges.iter().map(|&e| (e, lists.list(e).clone())).collect();
        let h_set: BTreeSet<EdgeId> = h_edges.iter().copied().collect();
        let adjacency: BTreeMap<EdgeId, Vec<EdgeId>> = h_edges
            .iter()
            .map(|&e| {
                (
                    e,
                    graph
                        .adjacent_edges(e)
                        .into_iter()
                        .filter(|f| h_set.contains(f))
                        .collect(),
                )
            })
            .collect();
        let mut budget = SearchBudget::new(100_000);
        match list_colour_exact(&cands, &adjacency, &mut budget) {
            SearchResult::Found(map) => return Precolouring::new(map),
            _ => {
                // lists too adversarial for this H; shrink it and retry
                if h_edges.is_empty() {
                    return Precolouring::empty();
                }
                h_edges.pop();
            }
        }
    }
}

/// Seeded random planar embedded instance: triangulation subsample with
/// degrees capped at Delta, a precoloured subgraph of maximum degree at most
/// d coloured from the lists, and lists of size exactly Delta + t.
pub fn gen_random_planar_instance(
    seed: u64,
    opts: &RandomPlanarOptions,
) -> Result<ProblemInstance, GenerateError> {
    if opts.t == 0 {
        return Err(GenerateError::InvalidParameters("t must be positive".into()));
    }
    if opts.d > opts.t && !opts.adversarial {
        return Err(GenerateError::InvalidParameters(format!(
            "d = {} exceeds t = {} outside adversarial mode",
            opts.d, opts.t
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut graph, mut rot) = match opts.n {
        0 => return Err(GenerateError::InvalidParameters("n must be positive".into())),
        1 => {
            let g = Graph::empty(1);
            let r = RotationSystem::adjacency_order(&g);
            (g, r)
        }
        2 => {
            let g = Graph::new(2, &[(0, 1)])?;
            let r = RotationSystem::adjacency_order(&g);
            (g, r)
        }
        n => planar_triangulation(rng.gen(), n)?,
    };

    // subsample towards the requested edge count, keeping connectivity on demand
    if let Some(target) = opts.edge_target {
        let mut stall = 0;
        while graph.edge_count() > target && stall < 4 * graph.edge_count() + 16 {
            let e = rng.gen_range(0..graph.edge_count());
            if opts.connected && is_bridge(&graph, e) {
                stall += 1;
                continue;
            }
            let (g, r) = delete_edge_keep_rotation(&graph, &rot, e);
            graph = g;
            rot = r;
        }
    }

    // cap degrees at Delta
    let mut attempts = 0;
    loop {
        let over: Vec<VertexId> =
            graph.vertices().filter(|&v| graph.degree(v) > opts.delta).collect();
        if over.is_empty() {
            break;
        }
        attempts += 1;
        if attempts > 50 * graph.edge_count() + 100 {
            return Err(GenerateError::Unsatisfiable(format!(
                "cannot cap degrees at Delta = {} (n = {})",
                opts.delta, opts.n
            )));
        }
        let v = over[rng.gen_range(0..over.len())];
        let es = graph.incident_edges(v).to_vec();
        let e = es[rng.gen_range(0..es.len())];
        if opts.connected && is_bridge(&graph, e) {
            continue;
        }
        let (g, r) = delete_edge_keep_rotation(&graph, &rot, e);
        graph = g;
        rot = r;
    }

    let size = opts.delta + opts.t;
    let lists = if opts.list_mode {
        let universe = size + opts.slack;
        ListAssignment::new(
            graph.edge_ids().map(|e| (e, draw_list(&mut rng, size, universe))).collect(),
        )
    } else {
        ListAssignment::uniform(&graph, &(1..=size as Colour).collect())
    };
    let precol = pick_h_and_colour(&mut rng, &graph, &lists, opts.d, opts.h_fraction);
    Ok(ProblemInstance::new(
        graph,
        Some(rot),
        lists,
        precol,
        Params { delta: opts.delta, t: opts.t, d: opts.d },
    )?)
}

#[derive(Debug, Clone)]
pub struct RandomBipartiteOptions {
    pub nx: usize,
    pub ny: usize,
    pub edge_prob: f64,
    pub t: usize,
    pub d: usize,
    pub slack: usize,
    pub list_mode: bool,
    pub h_fraction: f64,
}

impl Default for RandomBipartiteOptions {
    fn default() -> Self {
        RandomBipartiteOptions {
            nx: 6,
            ny: 6,
            edge_prob: 0.5,
            t: 2,
            d: 1,
            slack: 3,
            list_mode: false,
            h_fraction: 0.5,
        }
    }
}

/// Seeded random bipartite instance for the extension engine: Delta is the
/// realized maximum degree, lists have size exactly Delta + t.
pub fn gen_random_bipartite_instance(
    seed: u64,
    opts: &RandomBipartiteOptions,
) -> Result<(ProblemInstance, Bipartition), GenerateError> {
    if opts.t == 0 {
        return Err(GenerateError::InvalidParameters("t must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = opts.nx + opts.ny;
    let mut edges = Vec::new();
    for x in 0..opts.nx {
        for y in 0..opts.ny {
            if rng.gen_bool(opts.edge_prob) {
                edges.push((x, opts.nx + y));
            }
        }
    }
    let graph = Graph::new(n, &edges)?;
    let delta = graph.max_degree();
    let size = delta + opts.t;
    let lists = if opts.list_mode {
        let universe = size + opts.slack;
        ListAssignment::new(
            graph.edge_ids().map(|e| (e, draw_list(&mut rng, size, universe))).collect(),
        )
    } else {
        ListAssignment::uniform(&graph, &(1..=size as Colour).collect())
    };
    let precol = pick_h_and_colour(&mut rng, &graph, &lists, opts.d, opts.h_fraction);
    let bip = Bipartition::of_graph(&graph).expect("construction is bipartite");
    let inst = ProblemInstance::new(
        graph,
        None,
        lists,
        precol,
        Params { delta, t: opts.t, d: opts.d },
    )?;
    Ok((inst, bip))
}

/// Seeded Erdos-Renyi simple graph.
pub fn gen_random_graph(seed: u64, n: usize, edge_prob: f64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(edge_prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("distinct pairs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::faces;
    use crate::graph::Graph;

    #[test]
    fn triangulation_is_plane_for_a_range_of_sizes() {
        for n in [3, 4, 5, 8, 13] {
            for seed in 0..4 {
                let (g, rot) = planar_triangulation(seed, n).unwrap();
                assert_eq!(g.edge_count(), 3 * n - 6, "n = {n}");
                let fs = faces(&g, &rot).unwrap();
                assert!(fs.is_plane(), "seed {seed}, n {n}");
                assert_eq!(fs.face_count(), 2 * n - 4);
            }
        }
    }

    #[test]
    fn fig1_counts_match_the_drawing() {
        let inst = gen_fig1(3, 1).unwrap();
        assert_eq!(inst.graph.vertex_count(), 10);
        assert_eq!(inst.graph.edge_count(), 9);
        assert_eq!(inst.precol.len(), 7);
        assert_eq!(inst.graph.max_degree(), 3);
        assert_eq!(inst.precol.h_max_degree(&inst.graph), 3);
        assert!(gen_fig1(1, 1).is_err());
    }

    #[test]
    fn fig2_counts_and_degree_classes() {
        let inst = gen_fig2(4, 2, 1).unwrap();
        assert_eq!(inst.graph.vertex_count(), 13);
        assert_eq!(inst.graph.edge_count(), 12);
        assert_eq!(inst.precol.len(), 8);
        let idx = inst.graph.degree_classes();
        assert_eq!(idx.class_size(4), 1);
        assert_eq!(idx.class_size(3), 4);
        assert_eq!(idx.class_size(1), 8);
        assert_eq!(inst.precol.h_max_degree(&inst.graph), 2);
        assert!(gen_fig2(4, 4, 1).is_err());
    }

    #[test]
    fn random_planar_instance_is_deterministic_and_valid() {
        let opts = RandomPlanarOptions::default();
        let a = gen_random_planar_instance(7, &opts).unwrap();
        let b = gen_random_planar_instance(7, &opts).unwrap();
        assert_eq!(a.graph.edges(), b.graph.edges());
        assert_eq!(a.precol, b.precol);
        assert!(a.graph.max_degree() <= opts.delta);
        assert!(a.precol.h_max_degree(&a.graph) <= opts.d);
        let fs = faces(&a.graph, a.rot.as_ref().unwrap()).unwrap();
        assert!(fs.is_plane());
    }

    #[test]
    fn random_planar_rejects_inconsistent_parameters() {
        let opts = RandomPlanarOptions { d: 3, t: 2, adversarial: false, ..Default::default() };
        assert!(gen_random_planar_instance(0, &opts).is_err());
        let opts = RandomPlanarOptions { d: 3, t: 2, adversarial: true, ..Default::default() };
        assert!(gen_random_planar_instance(0, &opts).is_ok());
    }

    #[test]
    fn trivial_one_vertex_instance() {
        let opts = RandomPlanarOptions { n: 1, ..Default::default() };
        let inst = gen_random_planar_instance(0, &opts).unwrap();
        assert_eq!(inst.graph.edge_count(), 0);
        assert!(crate::solver::solve(&inst).is_coloured());
    }

    #[test]
    fn bipartite_instance_has_exact_list_sizes() {
        let opts = RandomBipartiteOptions { list_mode: true, ..Default::default() };
        let (inst, bip) = gen_random_bipartite_instance(3, &opts).unwrap();
        bip.validate(&inst.graph).unwrap();
        let want = inst.params.delta + inst.params.t;
        for (_, list) in inst.lists.iter() {
            assert_eq!(list.len(), want);
        }
    }

    #[test]
    fn random_graph_is_simple() {
        let g = gen_random_graph(11, 12, 0.4);
        assert!(g.edge_count() <= 12 * 11 / 2);
        let _ = Graph::new(12, g.edges()).unwrap();
    }
}
