//! Vizing Δ+1 edge colouring by fan rotation and alternating-path
//! recolouring, plus the fresh-palette extension that colours G - E(H) with
//! colours disjoint from the precolouring.

use std::collections::BTreeSet;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::model::{Colour, FullColouring, Precolouring};

struct State<'a> {
    graph: &'a Graph,
    delta: usize,
    colour: Vec<Option<usize>>,
    // at[v][c-1]: the edge coloured c at v
    at: Vec<Vec<Option<EdgeId>>>,
}

impl<'a> State<'a> {
    fn new(graph: &'a Graph) -> Self {
        let delta = graph.max_degree();
        State {
            graph,
            delta,
            colour: vec![None; graph.edge_count()],
            at: vec![vec![None; delta + 1]; graph.vertex_count()],
        }
    }

    fn is_free(&self, v: VertexId, c: usize) -> bool {
        self.at[v][c - 1].is_none()
    }

    fn free_colour(&self, v: VertexId) -> usize {
        (1..=self.delta + 1)
            .find(|&c| self.is_free(v, c))
            .expect("degree <= delta leaves a free colour")
    }

    fn set(&mut self, e: EdgeId, c: usize) {
        let (a, b) = self.graph.endpoints(e);
        self.colour[e] = Some(c);
        self.at[a][c - 1] = Some(e);
        self.at[b][c - 1] = Some(e);
    }

    fn unset(&mut self, e: EdgeId) {
        if let Some(c) = self.colour[e].take() {
            let (a, b) = self.graph.endpoints(e);
            self.at[a][c - 1] = None;
            self.at[b][c - 1] = None;
        }
    }

    /// Maximal fan of `u` starting at `v`: distinct neighbours, the edge to
    /// each successive vertex coloured with a colour free at its predecessor.
    fn build_fan(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let mut fan = vec![v];
        let mut in_fan = BTreeSet::from([v]);
        loop {
            let last = *fan.last().unwrap();
            let mut extended = false;
            for c in 1..=self.delta + 1 {
                if !self.is_free(last, c) {
                    continue;
                }
                if let Some(e) = self.at[u][c - 1] {
                    let w = self.graph.other_endpoint(e, u);
                    if in_fan.insert(w) {
                        fan.push(w);
                        extended = true;
                        break;
                    }
                }
            }
            if !extended {
                return fan;
            }
        }
    }

    /// Swap colours c and d along the maximal alternating path starting at
    /// `u` (whose first edge is coloured d; c is free at u).
    fn invert_path(&mut self, u: VertexId, c: usize, d: usize) {
        let mut path = Vec::new();
        let mut x = u;
        let mut want = d;
        while let Some(e) = self.at[x][want - 1] {
            path.push(e);
            x = self.graph.other_endpoint(e, x);
            want = if want == d { c } else { d };
        }
        for &e in &path {
            self.unset(e);
        }
        for (i, &e) in path.iter().enumerate() {
            self.set(e, if i % 2 == 0 { c } else { d });
        }
    }

    fn fan_prefix_valid(&self, u: VertexId, fan: &[VertexId], upto: usize) -> bool {
        for i in 1..=upto {
            let e = self
                .graph
                .edge_between(u, fan[i])
                .expect("fan vertices are neighbours of u");
            match self.colour[e] {
                Some(c) => {
                    if !self.is_free(fan[i - 1], c) {
                        return false;
                    }
                }
                None => return false,
            }
        }
        true
    }

    /// Rotate the fan prefix ending at index `w`: each fan edge takes the
    /// colour of its successor, the last edge gets `d`.
    fn rotate_and_finish(&mut self, u: VertexId, fan: &[VertexId], w: usize, d: usize) {
        let edges: Vec<EdgeId> = (0..=w)
            .map(|i| self.graph.edge_between(u, fan[i]).expect("fan vertices neighbour u"))
            .collect();
        let shifted: Vec<usize> = (1..=w)
            .map(|i| self.colour[edges[i]].expect("fan edges are coloured"))
            .collect();
        for &e in &edges {
            self.unset(e);
        }
        for i in 0..w {
            self.set(edges[i], shifted[i]);
        }
        self.set(edges[w], d);
    }

    fn colour_edge(&mut self, e: EdgeId) {
        let (u, v) = self.graph.endpoints(e);
        let fan = self.build_fan(u, v);
        let c = self.free_colour(u);
        let d = self.free_colour(*fan.last().unwrap());
        if !self.is_free(u, d) {
            self.invert_path(u, c, d);
        }
        // after inversion d is free at u; find a fan prefix ending where d is
        // free (longest first, which the existence proof guarantees works)
        for w in (0..fan.len()).rev() {
            if self.is_free(fan[w], d) && self.fan_prefix_valid(u, &fan, w) {
                self.rotate_and_finish(u, &fan, w, d);
                return;
            }
        }
        unreachable!("Vizing fan invariant: some rotatable prefix accepts d");
    }
}

/// Proper edge colouring of a simple graph using at most Δ+1 colours,
/// numbered from 1.
pub fn vizing_edge_colour(graph: &Graph) -> FullColouring {
    let mut state = State::new(graph);
    for e in graph.edge_ids() {
        state.colour_edge(e);
    }
    FullColouring::new(
        state
            .colour
            .into_iter()
            .map(|c| c.expect("every edge coloured") as Colour)
            .collect(),
    )
}

/// Colour G - E(H) with a fresh palette disjoint from the precolouring and
/// return the combined colouring. The fresh palette has at most
/// Δ(G - E(H)) + 1 colours, so the total stays within
/// |palette(precol)| + Δ(G - E(H)) + 1.
pub fn extend_fresh_palette(graph: &Graph, precol: &Precolouring) -> FullColouring {
    let keep: BTreeSet<EdgeId> =
        graph.edge_ids().filter(|e| !precol.contains(*e)).collect();
    let (rest, new_to_old) = graph.edge_subgraph(&keep);
    let rest_col = vizing_edge_colour(&rest);
    let base = precol.palette().into_iter().max().unwrap_or(0);
    let mut colours = vec![0; graph.edge_count()];
    for (e, c) in precol.iter() {
        colours[e] = c;
    }
    for (new, &old) in new_to_old.iter().enumerate() {
        colours[old] = base + rest_col.colour(new);
    }
    FullColouring::new(colours)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn check_proper(graph: &Graph, col: &FullColouring) {
        for v in graph.vertices() {
            let mut seen = BTreeSet::new();
            for &e in graph.incident_edges(v) {
                assert!(seen.insert(col.colour(e)), "colour clash at vertex {v}");
            }
        }
    }

    pub(crate) fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
        }
        for i in 0..5 {
            edges.push((i, i + 5));
        }
        for i in 0..5 {
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::new(10, &edges).unwrap()
    }

    #[test]
    fn c5_needs_three_colours() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let col = vizing_edge_colour(&g);
        check_proper(&g, &col);
        assert_eq!(col.palette().len(), 3);
    }

    #[test]
    fn k33_within_four_colours() {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        let g = Graph::new(6, &edges).unwrap();
        let col = vizing_edge_colour(&g);
        check_proper(&g, &col);
        assert!(col.palette().len() <= 4);
    }

    #[test]
    fn petersen_within_four_colours() {
        let g = petersen();
        let col = vizing_edge_colour(&g);
        check_proper(&g, &col);
        assert!(col.palette().len() <= 4);
    }

    #[test]
    fn fresh_palette_on_c4_matching() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let precol = Precolouring::new(BTreeMap::from([(0, 1), (2, 1)]));
        let col = extend_fresh_palette(&g, &precol);
        check_proper(&g, &col);
        assert_eq!(col.colour(0), 1);
        assert_eq!(col.colour(2), 1);
        // the two remaining edges form a matching: one fresh colour past the base
        assert!(col.palette().len() <= 1 + 2);
    }

    #[test]
    fn fresh_palette_empty_h_is_plain_vizing() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let col = extend_fresh_palette(&g, &Precolouring::empty());
        check_proper(&g, &col);
        assert!(col.palette().len() <= 3);
    }
}
