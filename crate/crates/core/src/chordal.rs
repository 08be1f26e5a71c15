//! Chordality and the chordal base case of every solver layer.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexSet, WeightedGraph};
use crate::solution::{SolveError, SolveErrorKind, SolveOutcome, SolveResult, SolveStats};

/// `order[i]` is the vertex eliminated `i`-th. The later neighbors of `v`
/// are its neighbors at larger positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationOrder(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("order is not a permutation of 0..{n}")]
pub struct NotAPermutation {
    pub n: usize,
}

impl EliminationOrder {
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    fn check(&self, n: usize) -> Result<(), NotAPermutation> {
        let mut seen = vec![false; n];
        if self.0.len() != n {
            return Err(NotAPermutation { n });
        }
        for &v in &self.0 {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(NotAPermutation { n });
            }
        }
        Ok(())
    }
}

/// Maximum cardinality search, ties to the smallest id, reversed so that the
/// result is a perfect elimination order whenever `g` is chordal.
pub fn mcs_order(g: &WeightedGraph) -> EliminationOrder {
    let n = g.n();
    let mut count = vec![0usize; n];
    let mut picked = vec![false; n];
    let mut visit = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best = usize::MAX;
        for v in 0..n {
            if !picked[v] && (best == usize::MAX || count[v] > count[best]) {
                best = v;
            }
        }
        picked[best] = true;
        visit.push(best);
        for u in g.neighbors(best).iter() {
            count[u] += 1;
        }
    }
    visit.reverse();
    EliminationOrder(visit)
}

/// A vertex whose later neighbors are not a clique, with one nonadjacent
/// pair among them.
pub fn peo_violation(
    g: &WeightedGraph,
    ord: &EliminationOrder,
) -> Result<Option<(usize, usize, usize)>, NotAPermutation> {
    ord.check(g.n())?;
    let pos = ord.positions();
    for &v in &ord.0 {
        let later: Vec<usize> = g.neighbors(v).iter().filter(|&u| pos[u] > pos[v]).collect();
        // the earliest later neighbor must see all the others
        let Some(&parent) = later.iter().min_by_key(|&&u| pos[u]) else {
            continue;
        };
        if let Some(&u) = later.iter().find(|&&u| u != parent && !g.has_edge(parent, u)) {
            return Ok(Some((v, parent, u)));
        }
    }
    Ok(None)
}

pub fn verify_peo(g: &WeightedGraph, ord: &EliminationOrder) -> Result<bool, NotAPermutation> {
    Ok(peo_violation(g, ord)?.is_none())
}

pub fn is_chordal(g: &WeightedGraph) -> bool {
    verify_peo(g, &mcs_order(g)).expect("mcs yields a permutation")
}

/// Exact MWIS of a chordal graph in two sweeps over a perfect elimination
/// order: the forward sweep marks vertices with positive residual weight
/// and charges that residual to their later neighbors, the backward sweep
/// greedily keeps marked vertices.
///
/// Non-chordal input is rejected with the offending order and vertex.
pub fn frank_mwis(g: &WeightedGraph) -> SolveOutcome {
    let ord = mcs_order(g);
    if let Some((v, a, b)) = peo_violation(g, &ord).expect("mcs yields a permutation") {
        return Err(SolveError::new(SolveErrorKind::NotChordal {
            order: ord.0.iter().map(|&x| g.label(x)).collect(),
            vertex: g.label(v),
            missing_edge: (g.label(a), g.label(b)),
        }));
    }
    let pos = ord.positions();
    let mut residual: Vec<u64> = g.weights().to_vec();
    let mut marked = Vec::new();
    for &v in &ord.0 {
        let r = residual[v];
        if r == 0 {
            continue;
        }
        marked.push(v);
        for u in g.neighbors(v).iter().filter(|&u| pos[u] > pos[v]) {
            residual[u] = residual[u].saturating_sub(r);
        }
    }
    let mut chosen = VertexSet::new(g.n());
    for &v in marked.iter().rev() {
        if !g.neighbors(v).intersects(&chosen) {
            chosen.insert(v);
        }
    }
    let stats = SolveStats {
        chordal_calls: 1,
        ..SolveStats::default()
    };
    Ok(SolveResult::from_set(g, chosen, stats))
}
