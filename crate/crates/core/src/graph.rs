//! Immutable vertex-weighted simple graphs over dense ids, plus the bitset
//! vertex sets every other module works with.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

/// Vertex weight. Nonnegative by construction.
pub type Weight = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("vertex {v} has negative weight {weight}")]
    NegativeWeight { v: usize, weight: i64 },
    #[error("vertex {v} out of range 0..{n}")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("labels must be pairwise distinct and one per vertex")]
    BadLabels,
}

/// A set of vertex ids drawn from `0..universe`, stored as a bitset.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    universe: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        Self {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::new(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        let mut s = Self::new(universe);
        for v in ids {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Panics if `v` is outside the universe.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !was
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let (w, b) = (v / 64, v % 64);
        let was = self.words[w] >> b & 1 == 1;
        self.words[w] &= !(1 << b);
        was
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Smallest member.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn words(&self) -> impl Iterator<Item = &u64> {
        self.words.iter()
    }

    /// Raw words; callers must not set bits at or beyond the universe.
    pub fn words_mut(&mut self) -> impl Iterator<Item = &mut u64> {
        self.words.iter_mut()
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !*b;
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
            && self.words.iter().skip(other.words.len()).all(|&a| a == 0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let b = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + b);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;
    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

/// Simple undirected graph with nonnegative integer vertex weights.
///
/// `labels[v]` is the id `v` had in the graph this one was originally
/// extracted from; extraction composes labels, so they always point at the
/// outermost graph.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    adj: Vec<VertexSet>,
    weights: Vec<Weight>,
    labels: Vec<usize>,
}

impl fmt::Debug for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeightedGraph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .field("weights", &self.weights)
            .field("labels", &self.labels)
            .finish()
    }
}

impl WeightedGraph {
    /// Builds a graph, deduplicating repeated edges in either orientation.
    pub fn new(n: usize, edges: &[(usize, usize)], weights: Vec<Weight>) -> Result<Self, GraphError> {
        if weights.len() != n {
            return Err(GraphError::WeightCount {
                expected: n,
                got: weights.len(),
            });
        }
        let mut adj = vec![VertexSet::new(n); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Self {
            adj,
            weights,
            labels: (0..n).collect(),
        })
    }

    /// Same as [`WeightedGraph::new`] but accepts signed weights and rejects
    /// negative ones.
    pub fn from_signed(n: usize, edges: &[(usize, usize)], weights: &[i64]) -> Result<Self, GraphError> {
        let mut ws = Vec::with_capacity(weights.len());
        for (v, &w) in weights.iter().enumerate() {
            if w < 0 {
                return Err(GraphError::NegativeWeight { v, weight: w });
            }
            ws.push(w as Weight);
        }
        Self::new(n, edges, ws)
    }

    pub fn unit(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(n, edges, vec![1; n])
    }

    pub fn empty() -> Self {
        Self {
            adj: Vec::new(),
            weights: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<usize>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::BadLabels);
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::BadLabels);
        }
        self.labels = labels;
        Ok(self)
    }

    /// Resets labels to the identity `0..n`.
    pub fn relabeled(mut self) -> Self {
        self.labels = (0..self.n()).collect();
        self
    }

    /// Same structure and labels, new weights.
    pub fn with_weights(&self, weights: Vec<Weight>) -> Self {
        assert_eq!(weights.len(), self.n());
        Self {
            adj: self.adj.clone(),
            weights,
            labels: self.labels.clone(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn weight(&self, v: usize) -> Weight {
        self.weights[v]
    }

    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    #[inline]
    pub fn label(&self, v: usize) -> usize {
        self.labels[v]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n())
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for u in 0..self.n() {
            for v in self.adj[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { v, n: self.n() })
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.universe() == self.n() {
            return Ok(());
        }
        match s.iter().find(|&v| v >= self.n()) {
            Some(v) => Err(GraphError::VertexOutOfRange { v, n: self.n() }),
            None => Ok(()),
        }
    }

    /// `N[v]`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        let mut s = self.adj[v].clone();
        s.insert(v);
        Ok(s)
    }

    /// `N(X)`: vertices outside `X` with a neighbor in `X`.
    pub fn neighborhood_of_set(&self, x: &VertexSet) -> Result<VertexSet, GraphError> {
        self.check_set(x)?;
        let x = self.conform(x);
        let mut out = self.empty_set();
        for v in x.iter() {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(&x);
        Ok(out)
    }

    /// `V(G) \ N[X]`.
    pub fn non_neighborhood_of_set(&self, x: &VertexSet) -> Result<VertexSet, GraphError> {
        let mut closed = self.neighborhood_of_set(x)?;
        closed.union_with(&self.conform(x));
        Ok(closed.complement())
    }

    // Re-home a set onto this graph's universe; callers have already checked ranges.
    fn conform(&self, s: &VertexSet) -> VertexSet {
        if s.universe() == self.n() {
            s.clone()
        } else {
            VertexSet::from_ids(self.n(), s.iter())
        }
    }

    /// Subgraph induced by `s`. Vertex `i` of the result is the `i`-th
    /// smallest member of `s`; labels and weights are carried over.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<WeightedGraph, GraphError> {
        self.check_set(s)?;
        Ok(self.induced(&s.to_vec()))
    }

    /// Subgraph induced by `ids`, which must be in range and duplicate-free.
    /// Vertex `i` of the result is `ids[i]`.
    pub fn induced(&self, ids: &[usize]) -> WeightedGraph {
        let k = ids.len();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in ids.iter().enumerate() {
            pos[v] = i;
        }
        let mut adj = vec![VertexSet::new(k); k];
        for (i, &v) in ids.iter().enumerate() {
            for u in self.adj[v].iter() {
                let j = pos[u];
                if j != usize::MAX {
                    adj[i].insert(j);
                }
            }
        }
        WeightedGraph {
            adj,
            weights: ids.iter().map(|&v| self.weights[v]).collect(),
            labels: ids.iter().map(|&v| self.labels[v]).collect(),
        }
    }

    /// Like [`WeightedGraph::induced`] but takes vertex weights from `weights`
    /// (indexed by ids of `self`).
    pub fn induced_reweighted(&self, ids: &[usize], weights: &[Weight]) -> WeightedGraph {
        let mut sub = self.induced(ids);
        for (i, &v) in ids.iter().enumerate() {
            sub.weights[i] = weights[v];
        }
        sub
    }

    /// `G \ N[v]` together with the ids of its vertices in `self`.
    pub fn minus_closed_neighborhood(&self, v: usize) -> (WeightedGraph, Vec<usize>) {
        let mut keep = self.adj[v].complement();
        keep.remove(v);
        let ids = keep.to_vec();
        (self.induced(&ids), ids)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices())
    }

    /// Components of the subgraph induced by `within`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = within.clone();
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let comp = self.reach(start, &left);
            left.difference_with(&comp);
            out.push(comp);
        }
        out
    }

    /// Vertices reachable from `start` inside `within` (which must contain it).
    pub fn reach(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::new(self.n());
        seen.insert(start);
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = VertexSet::new(self.n());
            for v in frontier.iter() {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(within);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.reach(0, &self.vertices()).len() == self.n()
    }

    pub fn complement_graph(&self) -> WeightedGraph {
        let n = self.n();
        let adj = (0..n)
            .map(|v| {
                let mut s = self.adj[v].complement();
                s.remove(v);
                s
            })
            .collect();
        WeightedGraph {
            adj,
            weights: self.weights.clone(),
            labels: self.labels.clone(),
        }
    }

    pub fn is_independent(&self, s: &VertexSet) -> Result<bool, GraphError> {
        self.check_set(s)?;
        let s = self.conform(s);
        Ok(s.iter().all(|v| !self.adj[v].intersects(&s)))
    }

    pub fn set_weight(&self, s: &VertexSet) -> Result<Weight, GraphError> {
        self.check_set(s)?;
        Ok(s.iter().map(|v| self.weights[v]).sum())
    }

    pub fn is_clique(&self, s: &VertexSet) -> Result<bool, GraphError> {
        self.check_set(s)?;
        let s = self.conform(s);
        Ok(s.iter().all(|v| {
            let mut rest = s.clone();
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        }))
    }

    pub fn total_weight(&self) -> Weight {
        self.weights.iter().sum()
    }
}
