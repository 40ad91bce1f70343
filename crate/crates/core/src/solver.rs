//! The extension solver: a reduction loop over cheap-edge deletion,
//! low-degree vertex splitting, the bipartite residual path, and
//! bad-subgraph peeling, with an exact backtracking oracle as independent
//! ground truth and as the fallback outside the guaranteed regime.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bipartite::{
    extend_via_residual, list_edge_colour_bipartite_multi, Bipartition, BipartiteError,
    BipartiteMultigraph, Side,
};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{
    residual_lists_for_subgraph, verify_colouring, Colour, FullColouring, ProblemInstance,
};
use crate::search::{list_colour_exact, SearchBudget, SearchResult, DEFAULT_NODE_BUDGET};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("bad-subgraph parameters invalid: need a0 >= t+1, a0 <= a < b0, a+b0 >= Delta+t+1; got a0={a0}, a={a}, b0={b0}")]
    BadParams { a0: usize, a: usize, b0: usize },
    #[error("vertex {0} is outside V_[2,t+1]")]
    NotLowDegree(VertexId),
    #[error("vertex {0} has an uncoloured incident edge {1}")]
    UncolouredAtVertex(VertexId, EdgeId),
}

/// Thresholds `a0, a, b0` defining A = V_[a0,a] and B = V_[b0,Delta].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BadSubgraphParams {
    pub a0: usize,
    pub a: usize,
    pub b0: usize,
}

impl BadSubgraphParams {
    pub fn validate(&self, delta: usize, t: usize) -> Result<(), SolverError> {
        let ok = self.a0 > t
            && self.a0 <= self.a
            && self.b0 > self.a
            && self.a + self.b0 > delta + t;
        if ok {
            Ok(())
        } else {
            Err(SolverError::BadParams { a0: self.a0, a: self.a, b0: self.b0 })
        }
    }
}

/// A nonempty bad subgraph: an induced subgraph of the (A,B) interface whose
/// vertices all keep enough degree for the residual-list bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadSubgraph {
    pub a_side: BTreeSet<VertexId>,
    pub b_side: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

struct PeelState {
    a_set: BTreeSet<VertexId>,
    deg: BTreeMap<VertexId, usize>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    thresholds: BTreeMap<VertexId, i64>,
}

fn peel_setup(instance: &ProblemInstance, params: &BadSubgraphParams) -> PeelState {
    let p = instance.params;
    let idx = instance.graph.degree_classes();
    let a_set = idx.range(params.a0, params.a);
    let b_set = idx.range(params.b0, p.delta);
    let mut deg: BTreeMap<VertexId, usize> =
        a_set.iter().chain(b_set.iter()).map(|&v| (v, 0)).collect();
    let mut edges = BTreeMap::new();
    for e in instance.uncoloured_edges() {
        let (u, v) = instance.graph.endpoints(e);
        let crosses = (a_set.contains(&u) && b_set.contains(&v))
            || (a_set.contains(&v) && b_set.contains(&u));
        if crosses {
            edges.insert(e, (u, v));
            *deg.get_mut(&u).unwrap() += 1;
            *deg.get_mut(&v).unwrap() += 1;
        }
    }
    let thresholds = deg
        .keys()
        .map(|&v| {
            let g_deg = instance.graph.degree(v) as i64;
            let bound = if a_set.contains(&v) {
                g_deg - p.t as i64
            } else {
                params.a as i64 + g_deg - (p.delta + p.t) as i64
            };
            (v, bound)
        })
        .collect();
    PeelState { a_set, deg, edges, thresholds }
}

type VictimPicker<'a> = &'a mut dyn FnMut(&[VertexId]) -> VertexId;

fn peel_run(mut state: PeelState, mut order: Option<VictimPicker<'_>>) -> Option<BadSubgraph> {
    let mut present: BTreeSet<VertexId> = state.deg.keys().copied().collect();
    loop {
        let violating: Vec<VertexId> = present
            .iter()
            .copied()
            .filter(|v| (state.deg[v] as i64) < state.thresholds[v])
            .collect();
        if violating.is_empty() {
            break;
        }
        let victim = match order.as_mut() {
            Some(pick) => pick(&violating),
            None => violating[0],
        };
        present.remove(&victim);
        let doomed: Vec<EdgeId> = state
            .edges
            .iter()
            .filter(|(_, &(u, v))| u == victim || v == victim)
            .map(|(&e, _)| e)
            .collect();
        for e in doomed {
            let (u, v) = state.edges.remove(&e).unwrap();
            for w in [u, v] {
                if let Some(d) = state.deg.get_mut(&w) {
                    *d = d.saturating_sub(1);
                }
            }
        }
    }
    if state.edges.is_empty() {
        return None;
    }
    let mut a_side = BTreeSet::new();
    let mut b_side = BTreeSet::new();
    for &(u, v) in state.edges.values() {
        for w in [u, v] {
            if state.a_set.contains(&w) {
                a_side.insert(w);
            } else {
                b_side.insert(w);
            }
        }
    }
    Some(BadSubgraph { a_side, b_side, edges: state.edges.keys().copied().collect() })
}

/// Maximal bad induced subgraph of the (A,B) interface of G - E(H), or None.
/// Computed by deleting threshold-violating vertices to a fixed point; the
/// fixed point is order-independent.
pub fn peel_bad_subgraph(
    instance: &ProblemInstance,
    params: &BadSubgraphParams,
) -> Result<Option<BadSubgraph>, SolverError> {
    params.validate(instance.params.delta, instance.params.t)?;
    Ok(peel_run(peel_setup(instance, params), None))
}

/// Same fixed point, deleting in an arbitrary seeded order (replay testing).
pub fn peel_bad_subgraph_replay(
    instance: &ProblemInstance,
    params: &BadSubgraphParams,
    seed: u64,
) -> Result<Option<BadSubgraph>, SolverError> {
    params.validate(instance.params.delta, instance.params.t)?;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pick = |vs: &[VertexId]| vs[rng.gen_range(0..vs.len())];
    Ok(peel_run(peel_setup(instance, params), Some(&mut pick)))
}

/// Both sides of the Lemma-8 counting inequality
/// `(t+1-d)|A| <= sum_{i=b0}^{Delta} (a+i-1-(Delta+t)) |V_i|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclefixCheck {
    pub lhs: i64,
    pub rhs: i64,
    /// strict form applies (a0 > t+1 and a+b0 > Delta+t+1)
    pub strict: bool,
    /// A u B nonempty; the strict form degenerates to 0 < 0 otherwise
    pub sides_nonempty: bool,
}

impl CyclefixCheck {
    pub fn holds(&self) -> bool {
        if self.strict && self.sides_nonempty {
            self.lhs < self.rhs
        } else {
            self.lhs <= self.rhs
        }
    }
}

pub fn cyclefix_count_check(
    instance: &ProblemInstance,
    params: &BadSubgraphParams,
) -> Result<CyclefixCheck, SolverError> {
    let p = instance.params;
    params.validate(p.delta, p.t)?;
    let idx = instance.graph.degree_classes();
    let a_members = idx.range(params.a0, params.a);
    let lhs = (p.t as i64 + 1 - p.d as i64) * a_members.len() as i64;
    let mut rhs = 0i64;
    let mut b_count = 0usize;
    for i in params.b0..=p.delta {
        let size = idx.class_size(i) as i64;
        b_count += size as usize;
        rhs += (params.a as i64 + i as i64 - 1 - (p.delta + p.t) as i64) * size;
    }
    Ok(CyclefixCheck {
        lhs,
        rhs,
        strict: params.a0 > p.t + 1 && params.a + params.b0 > p.delta + p.t + 1,
        sides_nonempty: !a_members.is_empty() || b_count > 0,
    })
}

/// The Lemma's degree hypothesis: every u in A has deg_X(u) >= deg_G(u) - d.
pub fn a_degree_hypothesis_holds(instance: &ProblemInstance, params: &BadSubgraphParams) -> bool {
    let state = peel_setup(instance, params);
    state.a_set.iter().all(|&u| {
        state.deg[&u] as i64 >= instance.graph.degree(u) as i64 - instance.params.d as i64
    })
}

/// Smallest colour of L(uv) unused on the edges adjacent to uv under
/// `partial` (which must colour every edge except uv). None is possible only
/// outside the degree-sum bound.
pub fn greedy_colour_edge(
    instance: &ProblemInstance,
    partial: &BTreeMap<EdgeId, Colour>,
    uv: EdgeId,
) -> Option<Colour> {
    let mut seen = BTreeSet::new();
    for f in instance.graph.adjacent_edges(uv) {
        if let Some(&c) = partial.get(&f) {
            seen.insert(c);
        }
    }
    instance.lists.list(uv).iter().copied().find(|c| !seen.contains(c))
}

/// Leaf assignments produced by splitting a low-degree fully-precoloured
/// vertex: each incident edge now ends at its own pendant leaf.
#[derive(Debug, Clone)]
pub struct SplitVertexMap {
    pub vertex: VertexId,
    pub leaves: Vec<(EdgeId, VertexId)>,
}

/// Replace a fully-precoloured vertex v in V_[2,t+1] by pendant copies: each
/// edge uv becomes u-leaf with the same id, colour, and list. Degrees of the
/// neighbours are unchanged and |V_[2,t+1]| drops by one.
pub fn split_low_degree_vertex(
    instance: &ProblemInstance,
    v: VertexId,
) -> Result<(ProblemInstance, SplitVertexMap), SolverError> {
    let p = instance.params;
    let deg = instance.graph.degree(v);
    if deg < 2 || deg > p.t + 1 {
        return Err(SolverError::NotLowDegree(v));
    }
    for &e in instance.graph.incident_edges(v) {
        if !instance.precol.contains(e) {
            return Err(SolverError::UncolouredAtVertex(v, e));
        }
    }
    let n = instance.graph.vertex_count();
    let incident: Vec<EdgeId> = instance.graph.incident_edges(v).to_vec();
    let mut leaves = Vec::new();
    let mut ends: Vec<(VertexId, VertexId)> = instance.graph.edges().to_vec();
    for (j, &e) in incident.iter().enumerate() {
        let leaf = if j == 0 { v } else { n + j - 1 };
        let u = instance.graph.other_endpoint(e, v);
        ends[e] = (u, leaf);
        leaves.push((e, leaf));
    }
    let graph = Graph::new(n + deg - 1, &ends).expect("splitting keeps the graph simple");
    let rot = instance.rot.as_ref().map(|r| {
        let mut order: Vec<Vec<EdgeId>> = (0..graph.vertex_count())
            .map(|w| if w < n && w != v { r.order_at(w).to_vec() } else { Vec::new() })
            .collect();
        for &(e, leaf) in &leaves {
            order[leaf] = vec![e];
        }
        crate::embedding::RotationSystem::new(&graph, order).expect("pendant rotation stays valid")
    });
    let inst = ProblemInstance::new(
        graph,
        rot,
        instance.lists.clone(),
        instance.precol.clone(),
        p,
    )
    .expect("splitting preserves instance invariants");
    Ok((inst, SplitVertexMap { vertex: v, leaves }))
}

/// Which reduction failed when a witness is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StuckStage {
    GreedyNoFreeColour,
    LowDegreeVertexWithUncolouredEdge,
    BadSubgraphColouring,
    NoReductionApplies,
}

/// Frozen state handed back with a HypothesisViolation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StuckWitness {
    pub stage: StuckStage,
    pub detail: String,
    pub uncoloured: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Coloured(FullColouring),
    /// Complete search exhausted without a colouring.
    Infeasible { nodes: u64 },
    /// The reduction loop reached a state the theorem's hypotheses exclude
    /// (only reported when the exact fallback is disabled).
    HypothesisViolation(StuckWitness),
    BudgetExceeded { nodes: u64 },
}

impl SolveOutcome {
    pub fn is_coloured(&self) -> bool {
        matches!(self, SolveOutcome::Coloured(_))
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Scan all valid (a, b0) pairs instead of only the proof family.
    pub scan_wide: bool,
    /// Resolve stuck states by exact search instead of reporting them.
    pub fallback: bool,
    pub budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { scan_wide: false, fallback: true, budget: DEFAULT_NODE_BUDGET }
    }
}

fn measure(instance: &ProblemInstance) -> usize {
    let low = instance.graph.degree_classes().range(2, instance.params.t + 1).len();
    3 * instance.graph.edge_count() + low
}

fn exact_candidates(
    instance: &ProblemInstance,
) -> (BTreeMap<EdgeId, BTreeSet<Colour>>, BTreeMap<EdgeId, Vec<EdgeId>>) {
    let uncoloured: BTreeSet<EdgeId> = instance.uncoloured_edges().into_iter().collect();
    let mut cands = BTreeMap::new();
    let mut adj = BTreeMap::new();
    for &e in &uncoloured {
        let mut list = instance.lists.list(e).clone();
        let mut neighbours = Vec::new();
        for f in instance.graph.adjacent_edges(e) {
            if let Some(c) = instance.precol.colour(f) {
                list.remove(&c);
            } else if uncoloured.contains(&f) {
                neighbours.push(f);
            }
        }
        cands.insert(e, list);
        adj.insert(e, neighbours);
    }
    (cands, adj)
}

fn exact_solve(instance: &ProblemInstance, budget: &mut SearchBudget) -> SolveOutcome {
    let (cands, adj) = exact_candidates(instance);
    match list_colour_exact(&cands, &adj, budget) {
        SearchResult::Found(map) => {
            let mut all: BTreeMap<EdgeId, Colour> = instance.precol.iter().collect();
            all.extend(map);
            let col = FullColouring::from_map(&instance.graph, &all).expect("all edges covered");
            SolveOutcome::Coloured(col)
        }
        SearchResult::Exhausted => SolveOutcome::Infeasible { nodes: budget.used() },
        SearchResult::BudgetExceeded => SolveOutcome::BudgetExceeded { nodes: budget.used() },
    }
}

/// Exhaustive backtracking over the uncoloured edges: Coloured iff an
/// extension exists, within the node budget.
pub fn oracle_solve(instance: &ProblemInstance) -> SolveOutcome {
    oracle_solve_with_budget(instance, DEFAULT_NODE_BUDGET)
}

pub fn oracle_solve_with_budget(instance: &ProblemInstance, budget: u64) -> SolveOutcome {
    let mut budget = SearchBudget::new(budget);
    let outcome = exact_solve(instance, &mut budget);
    if let SolveOutcome::Coloured(ref col) = outcome {
        debug_assert!(verify_colouring(instance, col).ok());
    }
    outcome
}

fn stuck(
    instance: &ProblemInstance,
    cfg: &SolverConfig,
    budget: &mut SearchBudget,
    stage: StuckStage,
    detail: String,
) -> SolveOutcome {
    if cfg.fallback {
        exact_solve(instance, budget)
    } else {
        SolveOutcome::HypothesisViolation(StuckWitness {
            stage,
            detail,
            uncoloured: instance.uncoloured_edges(),
        })
    }
}

/// The parameter choices stage (4) tries, in order: the proof family
/// (a0 = t+2, a = t+5-l-k, b0 = Delta-3+l+k for k in 0..=3-l) when l = t-d
/// is defined, then the widened grid when requested or when l is undefined.
fn param_scan(instance: &ProblemInstance, cfg: &SolverConfig) -> Vec<BadSubgraphParams> {
    let p = instance.params;
    let mut out = Vec::new();
    if let Some(ell) = p.ell() {
        for k in 0..=(3 - ell) {
            let a = (p.t + 5) as i64 - ell as i64 - k as i64;
            let b0 = p.delta as i64 - 3 + ell as i64 + k as i64;
            if a < 1 || b0 < 1 {
                continue;
            }
            let params = BadSubgraphParams { a0: p.t + 2, a: a as usize, b0: b0 as usize };
            if params.validate(p.delta, p.t).is_ok() {
                out.push(params);
            }
        }
    }
    if cfg.scan_wide || p.ell().is_none() {
        for a in (p.t + 1)..=p.delta.saturating_sub(1) {
            let b0_min = (a + 1).max((p.delta + p.t + 1).saturating_sub(a));
            for b0 in b0_min..=p.delta {
                let params = BadSubgraphParams { a0: p.t + 1, a, b0 };
                if params.validate(p.delta, p.t).is_ok() {
                    out.push(params);
                }
            }
        }
    }
    out
}

fn colour_bad_subgraph(
    instance: &ProblemInstance,
    j: &BadSubgraph,
    partial: &BTreeMap<EdgeId, Colour>,
) -> Result<BTreeMap<EdgeId, Colour>, BipartiteError> {
    let lists_on_j = residual_lists_for_subgraph(instance, partial, &j.edges);
    let j_edges: Vec<EdgeId> = j.edges.iter().copied().collect();
    let mg = BipartiteMultigraph {
        n: instance.graph.vertex_count(),
        edges: j_edges.iter().map(|&e| instance.graph.endpoints(e)).collect(),
    };
    let side = (0..instance.graph.vertex_count())
        .map(|v| if j.b_side.contains(&v) { Side::Right } else { Side::Left })
        .collect();
    let bip = Bipartition::new(side);
    let lists: BTreeMap<EdgeId, BTreeSet<Colour>> = j_edges
        .iter()
        .enumerate()
        .map(|(i, &e)| (i, lists_on_j.list(e).clone()))
        .collect();
    let coloured = list_edge_colour_bipartite_multi(&mg, &bip, &lists)?;
    Ok(j_edges.iter().enumerate().map(|(i, &e)| (e, coloured[&i])).collect())
}

fn solve_rec(
    instance: &ProblemInstance,
    cfg: &SolverConfig,
    budget: &mut SearchBudget,
) -> SolveOutcome {
    let uncoloured = instance.uncoloured_edges();
    if uncoloured.is_empty() {
        let map: BTreeMap<EdgeId, Colour> = instance.precol.iter().collect();
        let col = FullColouring::from_map(&instance.graph, &map).expect("everything precoloured");
        return SolveOutcome::Coloured(col);
    }
    let p = instance.params;

    // components colour independently; splitting them keeps the
    // forest/bipartite stage and the claim structure component-local
    let comps = instance.graph.components();
    let edge_groups: Vec<BTreeSet<EdgeId>> = comps
        .iter()
        .map(|members| {
            instance
                .graph
                .edge_ids()
                .filter(|&e| members.contains(&instance.graph.endpoints(e).0))
                .collect::<BTreeSet<EdgeId>>()
        })
        .filter(|group| !group.is_empty())
        .collect();
    if edge_groups.len() >= 2 {
        let mut merged: BTreeMap<EdgeId, Colour> = BTreeMap::new();
        for group in &edge_groups {
            let drop: BTreeSet<EdgeId> =
                instance.graph.edge_ids().filter(|e| !group.contains(e)).collect();
            let (child, new_to_old) = instance.delete_edges(&drop);
            debug_assert!(measure(&child) < measure(instance));
            match solve_rec(&child, cfg, budget) {
                SolveOutcome::Coloured(col) => {
                    for (new, &old) in new_to_old.iter().enumerate() {
                        merged.insert(old, col.colour(new));
                    }
                }
                other => return other,
            }
        }
        let col = FullColouring::from_map(&instance.graph, &merged).expect("all edges covered");
        debug_assert!(verify_colouring(instance, &col).ok());
        return SolveOutcome::Coloured(col);
    }

    // (1) an uncoloured edge cheap enough to colour greedily last
    let cheap = uncoloured.iter().copied().find(|&e| {
        let (u, v) = instance.graph.endpoints(e);
        instance.graph.degree(u) + instance.graph.degree(v) <= p.delta + p.t + 1
    });
    if let Some(e) = cheap {
        let (child, new_to_old) = instance.delete_edges(&BTreeSet::from([e]));
        debug_assert!(measure(&child) < measure(instance));
        return match solve_rec(&child, cfg, budget) {
            SolveOutcome::Coloured(col) => {
                let mut map: BTreeMap<EdgeId, Colour> = new_to_old
                    .iter()
                    .enumerate()
                    .map(|(new, &old)| (old, col.colour(new)))
                    .collect();
                match greedy_colour_edge(instance, &map, e) {
                    Some(c) => {
                        map.insert(e, c);
                        let col = FullColouring::from_map(&instance.graph, &map)
                            .expect("all edges covered");
                        debug_assert!(verify_colouring(instance, &col).ok());
                        SolveOutcome::Coloured(col)
                    }
                    None => stuck(
                        instance,
                        cfg,
                        budget,
                        StuckStage::GreedyNoFreeColour,
                        format!("no free colour for edge {e} after colouring the rest"),
                    ),
                }
            }
            other => other,
        };
    }

    // (2) a low-degree vertex, necessarily fully precoloured here
    let low = instance.graph.degree_classes().range(2, p.t + 1);
    if let Some(&v) = low.iter().next() {
        return match split_low_degree_vertex(instance, v) {
            Ok((child, _map)) => {
                debug_assert!(measure(&child) < measure(instance));
                match solve_rec(&child, cfg, budget) {
                    // edge ids are preserved by the split, so the colouring
                    // pulls back verbatim
                    SolveOutcome::Coloured(col) => SolveOutcome::Coloured(col),
                    other => other,
                }
            }
            Err(SolverError::UncolouredAtVertex(v, e)) => stuck(
                instance,
                cfg,
                budget,
                StuckStage::LowDegreeVertexWithUncolouredEdge,
                format!("vertex {v} in V_[2,t+1] has uncoloured edge {e}"),
            ),
            Err(err) => unreachable!("v came from V_[2,t+1]: {err}"),
        };
    }

    // (3) bipartite uncoloured subgraph: residual lists + kernel colouring
    let (g_unc, _) = instance.uncoloured_subgraph();
    if let Some(bip) = Bipartition::of_graph(&g_unc) {
        match extend_via_residual(instance, &bip) {
            Ok(col) => {
                debug_assert!(verify_colouring(instance, &col).ok());
                return SolveOutcome::Coloured(col);
            }
            // outside the list-size guarantee: keep reducing
            Err(BipartiteError::ListTooSmall { .. })
            | Err(BipartiteError::TheoremViolation) => {}
            Err(err) => unreachable!("bipartition was computed for this subgraph: {err}"),
        }
    }

    // (4) peel a bad subgraph, colour the rest, then colour it from residual lists
    for params in param_scan(instance, cfg) {
        let peeled = peel_bad_subgraph(instance, &params).expect("scan yields valid params");
        let Some(j) = peeled else { continue };
        let (child, new_to_old) = instance.delete_edges(&j.edges);
        debug_assert!(measure(&child) < measure(instance));
        return match solve_rec(&child, cfg, budget) {
            SolveOutcome::Coloured(col) => {
                let mut map: BTreeMap<EdgeId, Colour> = new_to_old
                    .iter()
                    .enumerate()
                    .map(|(new, &old)| (old, col.colour(new)))
                    .collect();
                match colour_bad_subgraph(instance, &j, &map) {
                    Ok(j_colours) => {
                        map.extend(j_colours);
                        let col = FullColouring::from_map(&instance.graph, &map)
                            .expect("all edges covered");
                        debug_assert!(verify_colouring(instance, &col).ok());
                        SolveOutcome::Coloured(col)
                    }
                    Err(err) => stuck(
                        instance,
                        cfg,
                        budget,
                        StuckStage::BadSubgraphColouring,
                        format!("bad subgraph colouring failed: {err}"),
                    ),
                }
            }
            other => other,
        };
    }

    // (5) no reduction applies
    stuck(
        instance,
        cfg,
        budget,
        StuckStage::NoReductionApplies,
        "no reduction applies to the remaining instance".to_string(),
    )
}

pub fn solve_with(instance: &ProblemInstance, cfg: &SolverConfig) -> SolveOutcome {
    let mut budget = SearchBudget::new(cfg.budget);
    let outcome = solve_rec(instance, cfg, &mut budget);
    if let SolveOutcome::Coloured(ref col) = outcome {
        let verdict = verify_colouring(instance, col);
        assert!(verdict.ok(), "solver produced an invalid colouring: {:?}", verdict.violations);
    }
    outcome
}

/// Extend the precolouring, mirroring the minimal-counterexample reductions;
/// guaranteed Coloured under the theorem's hypotheses, decisive everywhere
/// else via the exact fallback.
pub fn solve(instance: &ProblemInstance) -> SolveOutcome {
    solve_with(instance, &SolverConfig::default())
}

/// Proper edge colouring of G - E(H) in fresh colours on top of the
/// precolouring; see `vizing::extend_fresh_palette`.
pub use crate::vizing::{extend_fresh_palette, vizing_edge_colour};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ListAssignment, Params, Precolouring};

    fn set(colours: &[Colour]) -> BTreeSet<Colour> {
        colours.iter().copied().collect()
    }

    fn path_instance() -> ProblemInstance {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3]));
        ProblemInstance::new(g, None, lists, Precolouring::empty(), Params { delta: 2, t: 1, d: 0 })
            .unwrap()
    }

    #[test]
    fn solve_path_greedily() {
        let outcome = solve(&path_instance());
        assert!(outcome.is_coloured());
    }

    #[test]
    fn solve_empty_edge_instance_vacuously() {
        let g = Graph::empty(1);
        let inst = ProblemInstance::new(
            g,
            None,
            ListAssignment::default(),
            Precolouring::empty(),
            Params { delta: 0, t: 1, d: 0 },
        )
        .unwrap();
        assert!(solve(&inst).is_coloured());
    }

    #[test]
    fn greedy_finds_free_colour_by_pigeonhole() {
        // deg(u)=2, deg(v)=3, Delta=3, t=1, |L|=4: at most 3 colours seen
        let g = Graph::new(6, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4]));
        let inst = ProblemInstance::new(
            g,
            None,
            lists,
            Precolouring::empty(),
            Params { delta: 3, t: 1, d: 0 },
        )
        .unwrap();
        let partial = BTreeMap::from([(1, 1), (2, 2), (3, 3), (4, 1)]);
        let c = greedy_colour_edge(&inst, &partial, 0).unwrap();
        assert_eq!(c, 4);
    }

    #[test]
    fn greedy_pendant_edge_always_succeeds() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4]));
        let inst = ProblemInstance::new(
            g,
            None,
            lists,
            Precolouring::empty(),
            Params { delta: 3, t: 1, d: 0 },
        )
        .unwrap();
        let partial = BTreeMap::from([(1, 1), (2, 2)]);
        assert!(greedy_colour_edge(&inst, &partial, 0).is_some());
    }

    #[test]
    fn split_low_degree_vertex_preserves_ids_and_measure_drops() {
        // vertex 1 of degree 2, both edges precoloured
        let g = Graph::new(4, &[(0, 1), (1, 2), (0, 3)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3]));
        let precol = Precolouring::new(BTreeMap::from([(0, 1), (1, 2)]));
        let inst =
            ProblemInstance::new(g, None, lists, precol, Params { delta: 2, t: 1, d: 2 }).unwrap();
        let before = measure(&inst);
        let (child, map) = split_low_degree_vertex(&inst, 1).unwrap();
        assert_eq!(child.graph.edge_count(), 3);
        assert_eq!(child.graph.vertex_count(), 5);
        assert_eq!(map.leaves.len(), 2);
        assert_eq!(child.precol.colour(0), Some(1));
        assert_eq!(child.precol.colour(1), Some(2));
        assert!(measure(&child) < before);
        // degrees of the neighbours unchanged
        assert_eq!(child.graph.degree(0), inst.graph.degree(0));
        assert_eq!(child.graph.degree(2), inst.graph.degree(2));
    }

    #[test]
    fn split_rejects_vertex_with_uncoloured_edge() {
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2]));
        let precol = Precolouring::new(BTreeMap::from([(0, 1)]));
        let inst =
            ProblemInstance::new(g, None, lists, precol, Params { delta: 2, t: 1, d: 1 }).unwrap();
        match split_low_degree_vertex(&inst, 1) {
            Err(SolverError::UncolouredAtVertex(1, 1)) => {}
            other => panic!("expected UncolouredAtVertex, got {other:?}"),
        }
    }

    #[test]
    fn peel_empty_interface_returns_none() {
        let inst = path_instance();
        let params = BadSubgraphParams { a0: 2, a: 2, b0: 3 };
        assert_eq!(peel_bad_subgraph(&inst, &params).unwrap(), None);
    }

    #[test]
    fn peel_rejects_invalid_params() {
        let inst = path_instance();
        let params = BadSubgraphParams { a0: 1, a: 2, b0: 3 };
        assert!(peel_bad_subgraph(&inst, &params).is_err());
    }

    #[test]
    fn cyclefix_empty_a_side_holds() {
        // star K_{1,3}: no vertex of degree exactly 2, so A = V_[2,2] is empty
        let g = Graph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let lists = ListAssignment::uniform(&g, &set(&[1, 2, 3, 4]));
        let inst = ProblemInstance::new(
            g,
            None,
            lists,
            Precolouring::empty(),
            Params { delta: 3, t: 1, d: 0 },
        )
        .unwrap();
        let params = BadSubgraphParams { a0: 2, a: 2, b0: 3 };
        let check = cyclefix_count_check(&inst, &params).unwrap();
        assert_eq!(check.lhs, 0);
        assert!(check.holds());
    }
}
