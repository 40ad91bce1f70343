//! Shared fixtures for the integration suites: an independent brute-force
//! feasibility oracle, deterministic stress gadgets, and small checkers.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use listedge::embedding::RotationSystem;
use listedge::generate::oriented_triangles_to_embedding;
use listedge::graph::{EdgeId, Graph, VertexId};
use listedge::model::{
    Colour, FullColouring, ListAssignment, Params, Precolouring, ProblemInstance,
};

/// Plain enumeration in edge-id order with nothing but a properness check:
/// deliberately naive so it shares no machinery with the search engine.
pub fn brute_force_extendable(inst: &ProblemInstance) -> bool {
    fn go(
        inst: &ProblemInstance,
        order: &[EdgeId],
        i: usize,
        assigned: &mut BTreeMap<EdgeId, Colour>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let e = order[i];
        let lists = inst.lists.list(e).clone();
        for c in lists {
            let clash = inst
                .graph
                .adjacent_edges(e)
                .iter()
                .any(|f| assigned.get(f) == Some(&c));
            if !clash {
                assigned.insert(e, c);
                if go(inst, order, i + 1, assigned) {
                    return true;
                }
                assigned.remove(&e);
            }
        }
        false
    }
    let order = inst.uncoloured_edges();
    let mut assigned: BTreeMap<EdgeId, Colour> = inst.precol.iter().collect();
    go(inst, &order, 0, &mut assigned)
}

pub fn assert_proper(graph: &Graph, col: &FullColouring) {
    for v in graph.vertices() {
        let mut seen = BTreeSet::new();
        for &e in graph.incident_edges(v) {
            assert!(seen.insert(col.colour(e)), "colour clash at vertex {v}");
        }
    }
}

/// A planar gadget that genuinely exercises the bad-subgraph stage when
/// t = d and Delta = 16 + d: two hub vertices of degree Delta joined by an
/// edge, both adjacent to Delta-1-d spine vertices of degree t+2, with
/// pendant precoloured edges topping up every degree. No cheap edge exists,
/// V_[2,t+1] is empty, the uncoloured part has a triangle, and the proof
/// family finds the whole hub-spine interface as the bad subgraph.
pub fn broom(d: usize, seed: u64) -> ProblemInstance {
    assert!(d >= 1);
    let t = d;
    let delta = 16 + d;
    let spine = delta - 1 - d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // vertices: hubs 0,1; spine 2..2+spine; pendant leaves appended
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    edges.push((0, 1));
    let hub_a: Vec<EdgeId> = (0..spine)
        .map(|i| {
            edges.push((0, 2 + i));
            edges.len() - 1
        })
        .collect();
    let hub_b: Vec<EdgeId> = (0..spine)
        .map(|i| {
            edges.push((1, 2 + i));
            edges.len() - 1
        })
        .collect();
    let mut precol: BTreeMap<EdgeId, Colour> = BTreeMap::new();
    let mut next_vertex = 2 + spine;
    let mut pendants: BTreeMap<VertexId, Vec<EdgeId>> = BTreeMap::new();
    for v in 0..(2 + spine) {
        let mut colours: Vec<Colour> = (1..=d as Colour).collect();
        colours.shuffle(&mut rng);
        let mut ids = Vec::new();
        for c in colours {
            let id = edges.len();
            edges.push((v, next_vertex));
            next_vertex += 1;
            precol.insert(id, c);
            ids.push(id);
        }
        pendants.insert(v, ids);
    }
    let graph = Graph::new(next_vertex, &edges).unwrap();
    assert_eq!(graph.degree(0), delta);
    assert_eq!(graph.degree(1), delta);
    for i in 0..spine {
        assert_eq!(graph.degree(2 + i), t + 2);
    }

    // rotation: hubs fan out to the spine left-to-right (mirrored on the far
    // hub), pendants dangle in the outer region
    let mut order: Vec<Vec<EdgeId>> = vec![Vec::new(); graph.vertex_count()];
    order[0] = std::iter::once(0)
        .chain(hub_a.iter().copied())
        .chain(pendants[&0].iter().copied())
        .collect();
    order[1] = std::iter::once(0)
        .chain(hub_b.iter().rev().copied())
        .chain(pendants[&1].iter().copied())
        .collect();
    for i in 0..spine {
        let v = 2 + i;
        order[v] = std::iter::once(hub_a[i])
            .chain(pendants[&v].iter().copied())
            .chain(std::iter::once(hub_b[i]))
            .collect();
    }
    for e in graph.edge_ids() {
        let (a, b) = graph.endpoints(e);
        for leaf in [a, b] {
            if leaf >= 2 + spine {
                order[leaf] = vec![e];
            }
        }
    }
    let rot = RotationSystem::new(&graph, order).unwrap();

    let lists = ListAssignment::uniform(&graph, &(1..=(delta + t) as Colour).collect());
    ProblemInstance::new(graph, Some(rot), lists, Precolouring::new(precol), Params {
        delta,
        t,
        d,
    })
    .unwrap()
}

/// An instance whose graph contains K5 (hence is not planar) while
/// G - E(H) is planar by construction: a seeded triangulation holding
/// K5 minus one edge, with the missing edge (plus optional extra matching
/// edges) precoloured. d = 1, t = 5, so d <= t - 4.
pub fn k5_gadget(seed: u64) -> ProblemInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let extra = rng.gen_range(0..5);
    let n = 5 + extra;
    // vertex 4 lands in face (1,3,2) of the K4 base: 4 is adjacent to 1,2,3
    // but not 0, giving exactly K5 minus the edge 0-4
    let mut tris = vec![[0usize, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 4], [3, 2, 4], [2, 1, 4]];
    for v in 5..n {
        let i = rng.gen_range(0..tris.len());
        let [a, b, c] = tris[i];
        tris[i] = [a, b, v];
        tris.push([b, c, v]);
        tris.push([c, a, v]);
    }
    let (g0, rot0) = oriented_triangles_to_embedding(n, &tris).unwrap();
    assert!(listedge::faces(&g0, &rot0).unwrap().is_plane());
    let protected: BTreeSet<(usize, usize)> = [
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 2),
        (1, 3),
        (2, 3),
        (1, 4),
        (2, 4),
        (3, 4),
    ]
    .into_iter()
    .collect();
    let drop: BTreeSet<EdgeId> = g0
        .edge_ids()
        .filter(|&e| !protected.contains(&g0.endpoints(e)) && rng.gen_bool(0.35))
        .collect();
    let (g0, _) = g0.delete_edges(&drop);

    // G = G0 plus the missing K5 edge in H, plus a few more matching edges
    let mut edges: Vec<(usize, usize)> = g0.edges().to_vec();
    let mut h_edges = vec![edges.len()];
    edges.push((0, 4));
    let mut used: BTreeSet<usize> = BTreeSet::from([0, 4]);
    for _ in 0..rng.gen_range(0..3usize) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b || used.contains(&a) || used.contains(&b) {
            continue;
        }
        if edges.iter().any(|&(p, q)| (p, q) == (a.min(b), a.max(b))) {
            continue;
        }
        used.insert(a);
        used.insert(b);
        h_edges.push(edges.len());
        edges.push((a.min(b), a.max(b)));
    }
    let graph = Graph::new(n, &edges).unwrap();
    let t = 5;
    let delta = graph.max_degree();
    let palette_top = (delta + t) as Colour;
    let lists = ListAssignment::uniform(&graph, &(1..=palette_top).collect());
    let precol = Precolouring::new(
        h_edges.iter().map(|&e| (e, rng.gen_range(1..=palette_top))).collect(),
    );
    ProblemInstance::new(graph, None, lists, precol, Params { delta, t, d: 1 }).unwrap()
}
