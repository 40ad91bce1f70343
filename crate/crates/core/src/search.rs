//! Exact backtracking list-edge-colouring: complete search with
//! fewest-candidates-first ordering and forward pruning, under a node budget.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::EdgeId;
use crate::model::Colour;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Shared backtrack-node counter. A node is one attempted colour assignment.
#[derive(Debug, Clone)]
pub struct SearchBudget {
    limit: u64,
    used: u64,
}

impl SearchBudget {
    pub fn new(limit: u64) -> Self {
        SearchBudget { limit, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::new(DEFAULT_NODE_BUDGET)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Found(BTreeMap<EdgeId, Colour>),
    Exhausted,
    BudgetExceeded,
}

/// Complete search for an assignment colouring every edge from its candidate
/// set with adjacent edges distinct. `adjacency` must be symmetric and only
/// mention edges present in `candidates`.
pub fn list_colour_exact(
    candidates: &BTreeMap<EdgeId, BTreeSet<Colour>>,
    adjacency: &BTreeMap<EdgeId, Vec<EdgeId>>,
    budget: &mut SearchBudget,
) -> SearchResult {
    let ids: Vec<EdgeId> = candidates.keys().copied().collect();
    let index: BTreeMap<EdgeId, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut cand: Vec<BTreeSet<Colour>> = ids.iter().map(|e| candidates[e].clone()).collect();
    let adj: Vec<Vec<usize>> = ids
        .iter()
        .map(|e| {
            adjacency
                .get(e)
                .map(|ns| ns.iter().map(|n| index[n]).collect())
                .unwrap_or_default()
        })
        .collect();
    let mut assignment: Vec<Option<Colour>> = vec![None; ids.len()];

    fn step(
        cand: &mut Vec<BTreeSet<Colour>>,
        adj: &[Vec<usize>],
        assignment: &mut Vec<Option<Colour>>,
        budget: &mut SearchBudget,
    ) -> SearchResult {
        // fewest remaining candidates first
        let next = (0..cand.len())
            .filter(|&i| assignment[i].is_none())
            .min_by_key(|&i| cand[i].len());
        let Some(i) = next else {
            return SearchResult::Found(BTreeMap::new());
        };
        let options: Vec<Colour> = cand[i].iter().copied().collect();
        for c in options {
            if !budget.tick() {
                return SearchResult::BudgetExceeded;
            }
            assignment[i] = Some(c);
            // forward prune: drop c from unassigned neighbours, remember where
            let mut pruned = Vec::new();
            let mut dead_end = false;
            for &j in &adj[i] {
                if assignment[j].is_none() && cand[j].remove(&c) {
                    pruned.push(j);
                    if cand[j].is_empty() {
                        dead_end = true;
                    }
                }
            }
            if !dead_end {
                match step(cand, adj, assignment, budget) {
                    SearchResult::Found(map) => return SearchResult::Found(map),
                    SearchResult::BudgetExceeded => return SearchResult::BudgetExceeded,
                    SearchResult::Exhausted => {}
                }
            }
            for &j in &pruned {
                cand[j].insert(c);
            }
            assignment[i] = None;
        }
        SearchResult::Exhausted
    }

    match step(&mut cand, &adj, &mut assignment, budget) {
        SearchResult::Found(_) => {
            let map = ids
                .iter()
                .enumerate()
                .map(|(i, &e)| (e, assignment[i].expect("complete assignment")))
                .collect();
            SearchResult::Found(map)
        }
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle_setup(list: &[Colour]) -> (BTreeMap<EdgeId, BTreeSet<Colour>>, BTreeMap<EdgeId, Vec<EdgeId>>) {
        let colours: BTreeSet<Colour> = list.iter().copied().collect();
        let candidates = (0..3).map(|e| (e, colours.clone())).collect();
        let adjacency = BTreeMap::from([(0, vec![1, 2]), (1, vec![0, 2]), (2, vec![0, 1])]);
        (candidates, adjacency)
    }

    #[test]
    fn triangle_needs_three_colours() {
        let (cand, adj) = triangle_setup(&[1, 2]);
        let mut budget = SearchBudget::default();
        assert_eq!(list_colour_exact(&cand, &adj, &mut budget), SearchResult::Exhausted);

        let (cand, adj) = triangle_setup(&[1, 2, 3]);
        let mut budget = SearchBudget::default();
        match list_colour_exact(&cand, &adj, &mut budget) {
            SearchResult::Found(map) => {
                let used: BTreeSet<_> = map.values().collect();
                assert_eq!(used.len(), 3);
            }
            other => panic!("expected colouring, got {other:?}"),
        }
    }

    #[test]
    fn budget_exceeded_is_distinct_from_exhausted() {
        let (cand, adj) = triangle_setup(&[1, 2]);
        let mut budget = SearchBudget::new(1);
        assert_eq!(list_colour_exact(&cand, &adj, &mut budget), SearchResult::BudgetExceeded);
    }

    #[test]
    fn empty_problem_is_trivially_found() {
        let mut budget = SearchBudget::default();
        let result = list_colour_exact(&BTreeMap::new(), &BTreeMap::new(), &mut budget);
        assert_eq!(result, SearchResult::Found(BTreeMap::new()));
    }
}
