//! Mechanical execution of the discharging argument on a concrete embedded
//! instance: exact rational charges on vertices, faces, and a global pot,
//! the four transfer rules, per-vertex lower bounds, and the structural
//! claim checks that explain why a given graph is no counterexample.


use num_rational::Rational64;
use thiserror::Error;

use crate::embedding::{face_class, faces, FaceSet};
use crate::graph::VertexId;
use crate::model::ProblemInstance;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DischargeError {
    #[error("instance carries no rotation system; charges need faces")]
    MissingRotation,
    #[error("rules (c) and (d) both apply to vertex {vertex} of degree {degree}: Delta-3+l = {d_lo} <= t+5-l = {c_hi} violates the disjointness claim")]
    RuleOverlap { vertex: VertexId, degree: usize, d_lo: i64, c_hi: i64 },
    #[error("l = t - d undefined: t = {t}, d = {d} outside 0 <= t-d <= 3")]
    EllUndefined { t: usize, d: usize },
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Euler characteristic of the target surface; 2 for the plane, 1 for the
/// projective plane. Other values allowed for exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub euler: i64,
}

impl SurfaceSpec {
    pub const PLANE: SurfaceSpec = SurfaceSpec { euler: 2 };
    pub const PROJECTIVE_PLANE: SurfaceSpec = SurfaceSpec { euler: 1 };
}

impl Default for SurfaceSpec {
    fn default() -> Self {
        SurfaceSpec::PLANE
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Element {
    Vertex(VertexId),
    Face(usize),
    Pot,
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Vertex(v) => write!(f, "vertex {v}"),
            Element::Face(id) => write!(f, "face {id}"),
            Element::Pot => write!(f, "pot"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    FaceShare,
    LeafSupport,
    PotPayout,
    PotReceipt,
}

impl Rule {
    pub fn letter(&self) -> char {
        match self {
            Rule::FaceShare => 'a',
            Rule::LeafSupport => 'b',
            Rule::PotPayout => 'c',
            Rule::PotReceipt => 'd',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub rule: Rule,
    pub from: Element,
    pub to: Element,
    pub amount: Rational64,
}

/// Exact charge state: initial and current values plus the itemized
/// transfer log. Every rule application conserves the total.
#[derive(Debug, Clone)]
pub struct ChargeLedger {
    pub vertex_initial: Vec<Rational64>,
    pub face_initial: Vec<Rational64>,
    pub pot_initial: Rational64,
    pub vertex: Vec<Rational64>,
    pub face: Vec<Rational64>,
    pub pot: Rational64,
    pub faces: FaceSet,
    pub transfers: Vec<Transfer>,
}

impl ChargeLedger {
    pub fn total_initial(&self) -> Rational64 {
        self.vertex_initial.iter().sum::<Rational64>()
            + self.face_initial.iter().sum::<Rational64>()
            + self.pot_initial
    }

    pub fn total_current(&self) -> Rational64 {
        self.vertex.iter().sum::<Rational64>() + self.face.iter().sum::<Rational64>() + self.pot
    }

    pub fn conservation_holds(&self) -> bool {
        self.total_initial() == self.total_current()
    }

    fn transfer(&mut self, rule: Rule, from: Element, to: Element, amount: Rational64) {
        *self.slot(from) -= amount;
        *self.slot(to) += amount;
        self.transfers.push(Transfer { rule, from, to, amount });
    }

    fn slot(&mut self, el: Element) -> &mut Rational64 {
        match el {
            Element::Vertex(v) => &mut self.vertex[v],
            Element::Face(f) => &mut self.face[f],
            Element::Pot => &mut self.pot,
        }
    }

    /// Net charge vertex `v` received from the pot.
    pub fn pot_flow_to(&self, v: VertexId) -> Rational64 {
        let mut p = Rational64::from_integer(0);
        for t in &self.transfers {
            match (t.from, t.to) {
                (Element::Pot, Element::Vertex(w)) if w == v => p += t.amount,
                (Element::Vertex(w), Element::Pot) if w == v => p -= t.amount,
                _ => {}
            }
        }
        p
    }
}

/// Initial charges: alpha(v) = 3 deg(v) - 6, alpha(f) = -6, pot 0. The total
/// equals 6|E| - 6|V| - 6|F| and is at most -6 * euler exactly when the
/// embedding fits the surface.
pub fn initial_charges(
    instance: &ProblemInstance,
    _surface: SurfaceSpec,
) -> Result<ChargeLedger, DischargeError> {
    let rot = instance.rot.as_ref().ok_or(DischargeError::MissingRotation)?;
    let graph = &instance.graph;
    let fs = faces(graph, rot)?;
    let vertex_initial: Vec<Rational64> = graph
        .vertices()
        .map(|v| Rational64::from_integer(3 * graph.degree(v) as i64 - 6))
        .collect();
    let face_initial: Vec<Rational64> =
        fs.faces.iter().map(|_| Rational64::from_integer(-6)).collect();
    Ok(ChargeLedger {
        vertex: vertex_initial.clone(),
        face: face_initial.clone(),
        pot: Rational64::from_integer(0),
        vertex_initial,
        face_initial,
        pot_initial: Rational64::from_integer(0),
        faces: fs,
        transfers: Vec::new(),
    })
}

/// True when the initial total respects the surface bound -6 * euler.
pub fn initial_total_within_bound(ledger: &ChargeLedger, surface: SurfaceSpec) -> bool {
    ledger.total_initial() <= Rational64::from_integer(-6 * surface.euler)
}

fn pot_windows(instance: &ProblemInstance) -> Option<(i64, i64, i64, i64, usize)> {
    let p = instance.params;
    let ell = p.ell()?;
    let c_lo = p.t as i64 + 2;
    let c_hi = p.t as i64 + 5 - ell as i64;
    let d_lo = p.delta as i64 - 3 + ell as i64;
    let d_hi = p.delta as i64;
    Some((c_lo, c_hi, d_lo, d_hi, ell))
}

/// q(j) = j - Delta + 4 - l, the pot-receipt index of rule (d).
pub fn pot_receipt_index(delta: usize, ell: usize, degree: usize) -> i64 {
    degree as i64 - delta as i64 + 4 - ell as i64
}

/// Rule (d) amount: q(q+1) / (2(l+1)).
pub fn pot_receipt_amount(ell: usize, q: i64) -> Rational64 {
    Rational64::new(q * (q + 1), 2 * (ell as i64 + 1))
}

fn apply_rules_inner(
    ledger: &ChargeLedger,
    instance: &ProblemInstance,
    pot_rules: bool,
) -> Result<ChargeLedger, DischargeError> {
    let mut out = ledger.clone();
    out.transfers.clear();
    out.vertex = out.vertex_initial.clone();
    out.face = out.face_initial.clone();
    out.pot = out.pot_initial;
    let graph = &instance.graph;

    // (a) each face takes 6/m from each of its m boundary vertices of degree >= 3
    for f in &out.faces.faces.clone() {
        let m = face_class(f, graph);
        if m == 0 {
            continue;
        }
        let share = Rational64::new(6, m as i64);
        for v in f.boundary_vertices() {
            if graph.degree(v) >= 3 {
                out.transfer(Rule::FaceShare, Element::Vertex(v), Element::Face(f.id), share);
            }
        }
    }

    // (b) every leaf takes 3 from its neighbour
    for v in graph.vertices() {
        if graph.degree(v) == 1 {
            let u = graph.neighbours(v).next().expect("degree 1");
            out.transfer(
                Rule::LeafSupport,
                Element::Vertex(u),
                Element::Vertex(v),
                Rational64::from_integer(3),
            );
        }
    }

    if !pot_rules {
        return Ok(out);
    }
    let Some((c_lo, c_hi, d_lo, d_hi, ell)) = pot_windows(instance) else {
        // d <= t-4 (or d > t): rules (c) and (d) are not applied at all
        return Ok(out);
    };

    // disjointness of (c) and (d): an actual vertex in both windows names a
    // Claim-6 violation
    for v in graph.vertices() {
        let deg = graph.degree(v) as i64;
        if (c_lo..=c_hi).contains(&deg) && (d_lo..=d_hi).contains(&deg) {
            return Err(DischargeError::RuleOverlap {
                vertex: v,
                degree: deg as usize,
                d_lo,
                c_hi,
            });
        }
    }

    let p = instance.params;
    for v in graph.vertices() {
        let deg = graph.degree(v) as i64;
        if (c_lo..=c_hi).contains(&deg) {
            let amount = Rational64::from_integer(p.t as i64 + 6 - ell as i64 - deg);
            out.transfer(Rule::PotPayout, Element::Pot, Element::Vertex(v), amount);
        } else if (d_lo..=d_hi).contains(&deg) {
            let q = pot_receipt_index(p.delta, ell, deg as usize);
            out.transfer(
                Rule::PotReceipt,
                Element::Vertex(v),
                Element::Pot,
                pot_receipt_amount(ell, q),
            );
        }
    }
    Ok(out)
}

/// Apply discharging rules (a)-(d) and return the final ledger with the
/// itemized transfer log. A vertex qualifying for both (c) and (d) is a hard
/// error naming the disjointness violation.
pub fn apply_rules(
    ledger: &ChargeLedger,
    instance: &ProblemInstance,
) -> Result<ChargeLedger, DischargeError> {
    apply_rules_inner(ledger, instance, true)
}

/// Table-1 bracket 6 + h - l + (4-h)(5-h) / (2(l+1)); the rule-(d) lower
/// bound on the final charge is Delta - d - bracket, with h = Delta - deg + l.
pub fn table1_bracket(ell: usize, h: usize) -> Rational64 {
    let (ell, h) = (ell as i64, h as i64);
    Rational64::from_integer(6 + h - ell) + Rational64::new((4 - h) * (5 - h), 2 * (ell + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRegime {
    Leaf,
    HighDegree,
    OutsideClaims,
}

/// Per-vertex discharging summary: the quantities (x, y, p), the actual
/// final charge, and the applicable lower bound.
#[derive(Debug, Clone)]
pub struct VertexBound {
    pub vertex: VertexId,
    pub degree: usize,
    /// distinct faces incident to the vertex
    pub x: usize,
    /// leaf neighbours
    pub y: usize,
    /// net charge received from the pot
    pub p: Rational64,
    pub actual: Rational64,
    pub regime: BoundRegime,
    pub bound: Option<Rational64>,
    /// premises behind the bound (y <= d, incident faces of class >= 3,
    /// x + y <= deg; for leaves: no leaf neighbour)
    pub premise_ok: bool,
    pub bound_holds: Option<bool>,
    /// set when rule (d) applied: (h, bracket, Delta - d - bracket)
    pub table1: Option<(usize, Rational64, Rational64)>,
}

/// Computed bounds for every vertex after the rules ran.
pub fn vertex_bound_report(
    instance: &ProblemInstance,
    ledger: &ChargeLedger,
) -> Vec<VertexBound> {
    let graph = &instance.graph;
    let p = instance.params;
    let windows = pot_windows(instance);
    let face_classes: Vec<usize> =
        ledger.faces.faces.iter().map(|f| face_class(f, graph)).collect();
    graph
        .vertices()
        .map(|v| {
            let degree = graph.degree(v);
            let incident_faces = ledger.faces.faces_at(v);
            let x = incident_faces.len();
            let y = graph.neighbours(v).filter(|&w| graph.degree(w) == 1).count();
            let pot = ledger.pot_flow_to(v);
            let actual = ledger.vertex[v];
            let (regime, bound, premise_ok) = if degree == 1 {
                (BoundRegime::Leaf, Some(Rational64::from_integer(0)), y == 0)
            } else if degree >= p.t + 2 {
                let bound = Rational64::from_integer(degree as i64 - 6 - p.d as i64) + pot;
                let premise = y <= p.d
                    && x + y <= degree
                    && incident_faces.iter().all(|&f| face_classes[f] >= 3);
                (BoundRegime::HighDegree, Some(bound), premise)
            } else {
                (BoundRegime::OutsideClaims, None, false)
            };
            let table1 = windows.and_then(|(_, _, d_lo, d_hi, ell)| {
                let deg = degree as i64;
                if (d_lo..=d_hi).contains(&deg) {
                    let h = (p.delta as i64 - deg + ell as i64) as usize;
                    let bracket = table1_bracket(ell, h);
                    let entry = Rational64::from_integer(p.delta as i64 - p.d as i64) - bracket;
                    Some((h, bracket, entry))
                } else {
                    None
                }
            });
            VertexBound {
                vertex: v,
                degree,
                x,
                y,
                p: pot,
                actual,
                regime,
                bound,
                premise_ok,
                bound_holds: bound.map(|b| actual >= b),
                table1,
            }
        })
        .collect()
}

/// Both sides of the Claim-8 inequality with the per-k decomposition and the
/// telescoped coefficient identity, all from degree classes.
#[derive(Debug, Clone)]
pub struct Claim8Sides {
    pub lhs: Rational64,
    pub rhs: Rational64,
    /// |A_k| = |V_[t+2, t+5-l-k]| for k = 0..=3-l
    pub a_sizes: Vec<usize>,
    /// lhs recomputed as sum over k of |A_k|
    pub lhs_by_k: i64,
    /// sum_{k=0}^{q-1} (q-k) = q(q+1)/2 verified for every j in the window
    pub coefficient_identity_ok: bool,
    pub ell: usize,
}

impl Claim8Sides {
    pub fn strict_holds(&self) -> bool {
        self.lhs < self.rhs
    }
}

pub fn claim8_sides(instance: &ProblemInstance) -> Result<Claim8Sides, DischargeError> {
    let p = instance.params;
    let ell = p
        .ell()
        .ok_or(DischargeError::EllUndefined { t: p.t, d: p.d })?;
    let idx = instance.graph.degree_classes();
    let mut lhs = 0i64;
    for i in (p.t + 2)..=(p.t + 5 - ell) {
        lhs += (p.t as i64 + 6 - ell as i64 - i as i64) * idx.class_size(i) as i64;
    }
    let mut rhs = Rational64::from_integer(0);
    let mut identity_ok = true;
    let d_lo = p.delta as i64 - 3 + ell as i64;
    for j in d_lo.max(0)..=p.delta as i64 {
        if j < 0 {
            continue;
        }
        let q = pot_receipt_index(p.delta, ell, j as usize);
        if q < 1 {
            continue;
        }
        let tele: i64 = (0..q).map(|k| q - k).sum();
        identity_ok &= tele == q * (q + 1) / 2;
        rhs += pot_receipt_amount(ell, q) * Rational64::from_integer(idx.class_size(j as usize) as i64);
    }
    let a_sizes: Vec<usize> =
        (0..=(3 - ell)).map(|k| idx.range(p.t + 2, p.t + 5 - ell - k).len()).collect();
    let lhs_by_k = a_sizes.iter().map(|&s| s as i64).sum();
    Ok(Claim8Sides {
        lhs: Rational64::from_integer(lhs),
        rhs,
        a_sizes,
        lhs_by_k,
        coefficient_identity_ok: identity_ok,
        ell,
    })
}

#[derive(Debug, Clone)]
pub struct ClaimResult {
    pub holds: bool,
    pub witnesses: Vec<String>,
}

fn claim_result(witnesses: Vec<String>) -> ClaimResult {
    ClaimResult { holds: witnesses.is_empty(), witnesses }
}

/// Structural checks against the counterexample shape.
#[derive(Debug, Clone)]
pub struct ClaimChecks {
    /// every uncoloured edge has degree sum >= Delta + t + 2
    pub claim2: ClaimResult,
    /// every vertex of degree <= t+1 has all its edges precoloured
    pub claim3: ClaimResult,
    /// V_[2,t+1] is empty
    pub claim4: ClaimResult,
    /// every vertex is a precoloured-edge leaf or of degree >= t+2
    pub claim5: ClaimResult,
    /// F_0 = F_1 = F_2 = empty
    pub claim7: ClaimResult,
    /// strict inequality of Claim 8 (when l is defined)
    pub claim8: Option<Claim8Sides>,
}

fn claim_checks(instance: &ProblemInstance, ledger: &ChargeLedger) -> ClaimChecks {
    let graph = &instance.graph;
    let p = instance.params;

    let mut c2 = Vec::new();
    for e in instance.uncoloured_edges() {
        let (u, v) = graph.endpoints(e);
        if graph.degree(u) + graph.degree(v) < p.delta + p.t + 2 {
            c2.push(format!(
                "uncoloured edge {e} = ({u},{v}) has degree sum {}",
                graph.degree(u) + graph.degree(v)
            ));
        }
    }

    let mut c3 = Vec::new();
    for v in graph.vertices() {
        if (1..=p.t + 1).contains(&graph.degree(v)) {
            for &e in graph.incident_edges(v) {
                if !instance.precol.contains(e) {
                    c3.push(format!("vertex {v} of degree {} has uncoloured edge {e}", graph.degree(v)));
                }
            }
        }
    }

    let low = graph.degree_classes().range(2, p.t + 1);
    let c4: Vec<String> = low
        .iter()
        .map(|&v| format!("vertex {v} of degree {} in V_[2,t+1]", graph.degree(v)))
        .collect();

    let mut c5 = Vec::new();
    for v in graph.vertices() {
        let deg = graph.degree(v);
        let ok = if deg == 1 {
            instance.precol.contains(graph.incident_edges(v)[0])
        } else {
            deg >= p.t + 2
        };
        if !ok {
            c5.push(format!("vertex {v} of degree {deg} is neither an H-leaf nor of degree >= t+2"));
        }
    }

    let mut c7 = Vec::new();
    for f in &ledger.faces.faces {
        let m = face_class(f, graph);
        if m <= 2 {
            c7.push(format!("face {} has class m = {m}", f.id));
        }
    }

    let claim8 = claim8_sides(instance).ok();

    ClaimChecks {
        claim2: claim_result(c2),
        claim3: claim_result(c3),
        claim4: claim_result(c4),
        claim5: claim_result(c5),
        claim7: claim_result(c7),
        claim8,
    }
}

/// Full audit: ledger before/after, conservation, per-claim pass/fail, the
/// per-vertex bound table, and where negative charge survives. Descriptive
/// only; a Claim-6 overlap is reported, not repaired.
#[derive(Debug, Clone)]
pub struct AuditReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub is_plane: bool,
    pub surface: SurfaceSpec,
    pub initial_total: Rational64,
    pub initial_within_bound: bool,
    pub final_total: Rational64,
    pub conservation_ok: bool,
    pub pot_final: Rational64,
    pub rule_error: Option<String>,
    pub ell: Option<usize>,
    pub claims: ClaimChecks,
    pub vertex_bounds: Vec<VertexBound>,
    pub face_nonzero: Vec<(usize, Rational64)>,
    pub negative_elements: Vec<(Element, Rational64)>,
    pub ledger: ChargeLedger,
}

pub fn audit(
    instance: &ProblemInstance,
    surface: SurfaceSpec,
) -> Result<AuditReport, DischargeError> {
    let initial = initial_charges(instance, surface)?;
    let (after, rule_error) = match apply_rules(&initial, instance) {
        Ok(ledger) => (ledger, None),
        Err(err @ DischargeError::RuleOverlap { .. }) => {
            let partial = apply_rules_inner(&initial, instance, false)?;
            (partial, Some(err.to_string()))
        }
        Err(err) => return Err(err),
    };
    let claims = claim_checks(instance, &after);
    let vertex_bounds = vertex_bound_report(instance, &after);
    let face_nonzero: Vec<(usize, Rational64)> = after
        .face
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != Rational64::from_integer(0))
        .map(|(f, &c)| (f, c))
        .collect();
    let zero = Rational64::from_integer(0);
    let mut negative_elements: Vec<(Element, Rational64)> = Vec::new();
    for (v, &c) in after.vertex.iter().enumerate() {
        if c < zero {
            negative_elements.push((Element::Vertex(v), c));
        }
    }
    for (f, &c) in after.face.iter().enumerate() {
        if c < zero {
            negative_elements.push((Element::Face(f), c));
        }
    }
    if after.pot < zero {
        negative_elements.push((Element::Pot, after.pot));
    }
    Ok(AuditReport {
        vertices: instance.graph.vertex_count(),
        edges: instance.graph.edge_count(),
        faces: after.faces.face_count(),
        is_plane: after.faces.is_plane(),
        surface,
        initial_total: after.total_initial(),
        initial_within_bound: initial_total_within_bound(&after, surface),
        final_total: after.total_current(),
        conservation_ok: after.conservation_holds(),
        pot_final: after.pot,
        rule_error,
        ell: instance.params.ell(),
        claims,
        vertex_bounds,
        face_nonzero,
        negative_elements,
        ledger: after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::RotationSystem;
    use crate::graph::Graph;
    use crate::model::{ListAssignment, Params, Precolouring};
    use std::collections::BTreeSet as Set;

    fn rat(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    fn instance_with_rot(
        graph: Graph,
        precol: Precolouring,
        params: Params,
    ) -> ProblemInstance {
        let rot = RotationSystem::adjacency_order(&graph);
        let colours: Set<i64> = (1..=(params.delta + params.t) as i64).collect();
        let lists = ListAssignment::uniform(&graph, &colours);
        ProblemInstance::new(graph, Some(rot), lists, precol, params).unwrap()
    }

    #[test]
    fn k4_initial_charges_sum_to_minus_twelve() {
        let (g, rot) = crate::generate::planar_triangulation(0, 4).unwrap();
        let lists = ListAssignment::uniform(&g, &(1..=5).collect());
        let inst = ProblemInstance::new(
            g,
            Some(rot),
            lists,
            Precolouring::empty(),
            Params { delta: 3, t: 2, d: 0 },
        )
        .unwrap();
        let ledger = initial_charges(&inst, SurfaceSpec::PLANE).unwrap();
        assert_eq!(ledger.vertex_initial.iter().sum::<Rational64>(), rat(12));
        assert_eq!(ledger.face_initial.iter().sum::<Rational64>(), rat(-24));
        assert_eq!(ledger.total_initial(), rat(-12));
        assert!(initial_total_within_bound(&ledger, SurfaceSpec::PLANE));
    }

    #[test]
    fn triangle_and_tree_initial_totals() {
        let g = Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let inst = instance_with_rot(g, Precolouring::empty(), Params { delta: 2, t: 1, d: 0 });
        let ledger = initial_charges(&inst, SurfaceSpec::PLANE).unwrap();
        assert_eq!(ledger.total_initial(), rat(-12));

        let tree = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let inst = instance_with_rot(tree, Precolouring::empty(), Params { delta: 2, t: 1, d: 0 });
        let ledger = initial_charges(&inst, SurfaceSpec::PLANE).unwrap();
        assert_eq!(ledger.total_initial(), rat(-12));
    }

    #[test]
    fn faces_end_at_zero_and_leaves_end_at_zero() {
        // star K_{1,4}: one face of class 1, four leaves
        let g = Graph::new(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let precol = Precolouring::new(
            [(0usize, 1i64), (1, 2), (2, 3), (3, 4)].into_iter().collect(),
        );
        let inst = instance_with_rot(g, precol, Params { delta: 4, t: 8, d: 4 });
        let ledger = initial_charges(&inst, SurfaceSpec::PLANE).unwrap();
        let after = apply_rules(&ledger, &inst).unwrap();
        assert!(after.conservation_holds());
        // face of class m >= 1 gains exactly 6
        assert_eq!(after.face[0], rat(0));
        for v in 1..=4 {
            assert_eq!(after.vertex[v], rat(0), "leaf {v} final charge");
        }
        assert_eq!(after.vertex[0], rat(3 * 4 - 6) - rat(6) - rat(12));
    }

    #[test]
    fn pot_receipt_amounts_match_rule_d() {
        // q = 1 at j = Delta-3+l gives 1/(l+1)
        for ell in 0..=3usize {
            let delta = 20;
            let j = delta - 3 + ell;
            let q = pot_receipt_index(delta, ell, j);
            assert_eq!(q, 1);
            assert_eq!(pot_receipt_amount(ell, q), Rational64::new(1, ell as i64 + 1));
        }
        // l = 0, j = Delta: q = 4, amount 10 (= bracket 16 minus 6+h-l at h=0)
        let q = pot_receipt_index(20, 0, 20);
        assert_eq!(q, 4);
        assert_eq!(pot_receipt_amount(0, q), rat(10));
        assert_eq!(table1_bracket(0, 0), rat(16));
    }

    #[test]
    fn table1_matches_all_ten_cells() {
        let expected: &[(usize, usize, Rational64)] = &[
            (0, 3, rat(10)),
            (0, 2, rat(11)),
            (0, 1, rat(13)),
            (0, 0, rat(16)),
            (1, 3, Rational64::new(17, 2)),
            (1, 2, Rational64::new(17, 2)),
            (1, 1, rat(9)),
            (2, 3, Rational64::new(22, 3)),
            (2, 2, rat(7)),
            (3, 3, Rational64::new(25, 4)),
        ];
        for &(ell, h, ref want) in expected {
            assert_eq!(table1_bracket(ell, h), *want, "l={ell}, h={h}");
        }
    }

    #[test]
    fn rule_overlap_is_a_hard_error() {
        // Delta = 5, t = 1, d = 1 (l = 0): windows {3..6} and {2..5} overlap;
        // a degree-5 vertex qualifies for both
        let g = Graph::new(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]).unwrap();
        let precol = Precolouring::new([(0usize, 1i64)].into_iter().collect());
        let inst = instance_with_rot(g, precol, Params { delta: 5, t: 1, d: 1 });
        let ledger = initial_charges(&inst, SurfaceSpec::PLANE).unwrap();
        match apply_rules(&ledger, &inst) {
            Err(DischargeError::RuleOverlap { vertex: 0, degree: 5, .. }) => {}
            other => panic!("expected RuleOverlap, got {other:?}"),
        }
        // audit still reports instead of failing
        let report = audit(&inst, SurfaceSpec::PLANE).unwrap();
        assert!(report.rule_error.is_some());
        assert!(report.conservation_ok);
    }

    #[test]
    fn claim8_coefficients() {
        // coefficient at i = t+2 is 4 - l; q at l=2, j=Delta gives 2*3/6 = 1
        let g = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let inst = instance_with_rot(g, Precolouring::empty(), Params { delta: 9, t: 3, d: 1 });
        let sides = claim8_sides(&inst).unwrap();
        assert_eq!(sides.ell, 2);
        assert!(sides.coefficient_identity_ok);
        assert_eq!(pot_receipt_amount(2, pot_receipt_index(9, 2, 9)), rat(1));
        // lhs coefficient check: t+6-l-(t+2) = 4-l
        let coeff = inst.params.t as i64 + 6 - sides.ell as i64 - (inst.params.t as i64 + 2);
        assert_eq!(coeff, 4 - sides.ell as i64);
    }

    #[test]
    fn claim8_lhs_zero_when_window_empty() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        let inst = instance_with_rot(g, Precolouring::empty(), Params { delta: 8, t: 2, d: 2 });
        let sides = claim8_sides(&inst).unwrap();
        assert_eq!(sides.lhs, rat(0));
        assert_eq!(sides.lhs_by_k, 0);
    }

    #[test]
    fn audit_k4_conserves_and_totals_minus_twelve() {
        let (g, rot) = crate::generate::planar_triangulation(0, 4).unwrap();
        let lists = ListAssignment::uniform(&g, &(1..=5).collect());
        let inst = ProblemInstance::new(
            g,
            Some(rot),
            lists,
            Precolouring::empty(),
            Params { delta: 3, t: 2, d: 0 },
        )
        .unwrap();
        let report = audit(&inst, SurfaceSpec::PLANE).unwrap();
        assert!(report.conservation_ok);
        assert_eq!(report.initial_total, rat(-12));
        assert_eq!(report.final_total, rat(-12));
        assert!(report.is_plane);
    }
}
