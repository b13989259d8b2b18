//! Exact maximum-weight clique: exhaustive subset enumeration for small
//! graphs and a coloring-bounded branch and bound.

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::intervals::IntersectionGraph;

/// Largest graph [`max_clique_enum`] accepts.
pub const ENUM_VERTEX_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("{vertices} vertices exceed the enumeration cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueSolution {
    pub weight: u64,
    /// Vertex indices, ascending.
    pub vertices: Vec<usize>,
    /// False when a node budget cut the search short.
    pub optimal: bool,
    pub nodes_explored: u64,
}

impl CliqueSolution {
    pub fn labels<'g, L>(&self, graph: &'g IntersectionGraph<L>) -> Vec<&'g L> {
        self.vertices.iter().map(|&v| graph.label(v)).collect()
    }
}

/// `true` if the ascending index list of `a` precedes that of `b`.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    if diff == 0 {
        return false;
    }
    let bit = diff.trailing_zeros();
    let above = !((1u32 << bit) | ((1u32 << bit) - 1));
    if a & (1 << bit) != 0 {
        // `a` has the smaller element here unless `b` has run out.
        b & above != 0
    } else {
        a & above == 0
    }
}

/// Checks every vertex subset. Among maximum-weight cliques the one whose
/// ascending vertex list is lexicographically smallest is returned.
pub fn max_clique_enum<L>(graph: &IntersectionGraph<L>) -> Result<CliqueSolution, SolverError> {
    let n = graph.len();
    if n > ENUM_VERTEX_CAP {
        return Err(SolverError::TooManyVertices {
            vertices: n,
            cap: ENUM_VERTEX_CAP,
        });
    }
    let neighbor_masks: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).ones().fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let total = 1usize << n;
    let mut clique = vec![false; total];
    let mut weight = vec![0u64; total];
    clique[0] = true;
    let (mut best_mask, mut best_weight) = (0u32, 0u64);
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        if !clique[rest] || (neighbor_masks[low] as usize) & rest != rest {
            continue;
        }
        clique[mask] = true;
        weight[mask] = weight[rest] + graph.weight(low);
        let m = mask as u32;
        if weight[mask] > best_weight || (weight[mask] == best_weight && lex_less(m, best_mask)) {
            best_weight = weight[mask];
            best_mask = m;
        }
    }
    Ok(CliqueSolution {
        weight: best_weight,
        vertices: (0..n).filter(|&v| best_mask & (1 << v) != 0).collect(),
        optimal: true,
        nodes_explored: total as u64,
    })
}

struct Search<'g, L> {
    graph: &'g IntersectionGraph<L>,
    best_weight: u64,
    best: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    cut_off: bool,
}

impl<L> Search<'_, L> {
    /// Greedy coloring of `candidates` in their given order. Returns the
    /// vertices grouped by color and, per position, the sum of the heaviest
    /// weight of every color up to and including that vertex's color.
    fn color_bounds(&self, candidates: &[usize]) -> (Vec<usize>, Vec<u64>) {
        let mut classes: Vec<(Vec<usize>, FixedBitSet)> = Vec::new();
        for &v in candidates {
            let neighbors = self.graph.neighbors(v);
            match classes
                .iter_mut()
                .find(|(_, members)| members.is_disjoint(neighbors))
            {
                Some((list, members)) => {
                    list.push(v);
                    members.insert(v);
                }
                None => {
                    let mut members = FixedBitSet::with_capacity(self.graph.len());
                    members.insert(v);
                    classes.push((vec![v], members));
                }
            }
        }
        let mut order = Vec::with_capacity(candidates.len());
        let mut bounds = Vec::with_capacity(candidates.len());
        let mut cumulative = 0u64;
        for (list, _) in classes {
            cumulative += list
                .iter()
                .map(|&v| self.graph.weight(v))
                .max()
                .unwrap_or(0);
            for v in list {
                order.push(v);
                bounds.push(cumulative);
            }
        }
        (order, bounds)
    }

    fn expand(&mut self, current: &mut Vec<usize>, weight: u64, candidates: &[usize]) {
        self.nodes += 1;
        if weight > self.best_weight {
            self.best_weight = weight;
            self.best = current.clone();
        }
        if self.budget.is_some_and(|b| self.nodes >= b) {
            self.cut_off = !candidates.is_empty();
            return;
        }
        let (order, bounds) = self.color_bounds(candidates);
        let mut remaining = FixedBitSet::with_capacity(self.graph.len());
        remaining.extend(candidates.iter().copied());
        for idx in (0..order.len()).rev() {
            if weight + bounds[idx] <= self.best_weight {
                return;
            }
            let v = order[idx];
            let neighbors = self.graph.neighbors(v);
            let next: Vec<usize> = candidates
                .iter()
                .copied()
                .filter(|&u| remaining.contains(u) && neighbors.contains(u))
                .collect();
            current.push(v);
            self.expand(current, weight + self.graph.weight(v), &next);
            current.pop();
            remaining.set(v, false);
            if self.cut_off {
                return;
            }
        }
    }
}

/// Branch and bound over vertices ordered by descending degree (ties by
/// index), pruned by a weighted greedy-coloring bound. With a node budget
/// the best clique found so far is returned and flagged non-optimal.
pub fn max_clique_bb<L>(graph: &IntersectionGraph<L>, budget: Option<u64>) -> CliqueSolution {
    let mut order: Vec<usize> = (0..graph.len()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(graph.degree(v)), v));
    let mut search = Search {
        graph,
        best_weight: 0,
        best: Vec::new(),
        nodes: 0,
        budget,
        cut_off: false,
    };
    search.expand(&mut Vec::new(), 0, &order);
    let mut vertices = search.best;
    vertices.sort_unstable();
    CliqueSolution {
        weight: search.best_weight,
        vertices,
        optimal: !search.cut_off,
        nodes_explored: search.nodes,
    }
}
