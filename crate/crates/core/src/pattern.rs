//! Induced-subgraph detection for small forbidden patterns.
//!
//! Detection is an exhaustive backtracking search over injective maps from
//! pattern vertices to host vertices. Candidates for the next pattern vertex
//! are filtered with bitsets against every already-mapped vertex (adjacent
//! where the pattern has an edge, nonadjacent where it has none), so every
//! complete map is an induced embedding.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexSet, WeightedGraph};

/// Largest pattern accepted by the detector.
pub const MAX_PATTERN: usize = 8;

/// Largest host graph for which [`has_clique_cutset_bruteforce`] runs.
pub const CUTSET_BRUTEFORCE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern {name} has {k} vertices; at most {MAX_PATTERN} supported")]
    TooLarge { name: String, k: usize },
    #[error("pattern edge ({0}, {1}) is invalid")]
    BadEdge(usize, usize),
    #[error("unknown pattern name `{0}`")]
    Unknown(String),
    #[error("graph has {n} vertices; brute-force cutset scan is capped at {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("graph is disconnected")]
    Disconnected,
}

/// A small pattern graph. Vertex `i` of a built-in pattern always has a
/// neighbor among `0..i`, which keeps the search connected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    name: String,
    k: usize,
    adj: Vec<u8>,
}

impl Pattern {
    pub fn new(name: impl Into<String>, k: usize, edges: &[(usize, usize)]) -> Result<Self, PatternError> {
        let name = name.into();
        if k > MAX_PATTERN {
            return Err(PatternError::TooLarge { name, k });
        }
        let mut adj = vec![0u8; k];
        for &(u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(PatternError::BadEdge(u, v));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self { name, k, adj })
    }

    fn builtin(name: &str, k: usize, edges: &[(usize, usize)]) -> Self {
        Self::new(name, k, edges).expect("catalog pattern")
    }

    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Self::builtin(&format!("P{k}"), k, &edges)
    }

    pub fn cycle(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Self::builtin(&format!("C{k}"), k, &edges)
    }

    pub fn p4() -> Self {
        Self::path(4)
    }
    pub fn p5() -> Self {
        Self::path(5)
    }
    pub fn p6() -> Self {
        Self::path(6)
    }
    pub fn c4() -> Self {
        Self::cycle(4)
    }
    pub fn c5() -> Self {
        Self::cycle(5)
    }

    /// Cycle 0-1-2-3 with roof vertex 4 on 1 and 2.
    pub fn house() -> Self {
        Self::builtin("house", 5, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (2, 4)])
    }

    /// Cycle 0-1-2-3 with pendant vertex 4 on 0.
    pub fn banner() -> Self {
        Self::builtin("banner", 5, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    }

    /// K(2,3) with sides {0, 2} and {1, 3, 4}.
    pub fn k23() -> Self {
        Self::builtin("K23", 5, &[(0, 1), (0, 3), (0, 4), (2, 1), (2, 3), (2, 4)])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.k {
            for v in u + 1..self.k {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn as_graph(&self) -> WeightedGraph {
        WeightedGraph::unit(self.k, &self.edges()).expect("valid pattern")
    }

    /// True when two adjacent pattern vertices have the same closed
    /// neighborhood. Adding a true twin to a host cannot create a copy of a
    /// pattern without true twins.
    pub fn has_true_twins(&self) -> bool {
        (0..self.k)
            .any(|u| (u + 1..self.k).any(|v| self.has_edge(u, v) && self.adj[u] | 1 << u == self.adj[v] | 1 << v))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for Pattern {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "p4" => Self::p4(),
            "p5" => Self::p5(),
            "p6" => Self::p6(),
            "c4" => Self::c4(),
            "c5" => Self::c5(),
            "house" => Self::house(),
            "banner" => Self::banner(),
            "k23" => Self::k23(),
            other => return Err(PatternError::Unknown(other.to_string())),
        })
    }
}

/// Parses a comma-separated list such as `p6,banner`.
pub fn parse_patterns(list: &str) -> Result<Vec<Pattern>, PatternError> {
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect()
}

/// Host vertex for each pattern vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PatternWitness {
    pub pattern: String,
    pub vertices: Vec<usize>,
}

impl PatternWitness {
    /// Re-checks injectivity and that the image induces exactly the pattern.
    pub fn verify(&self, g: &WeightedGraph, p: &Pattern) -> bool {
        let vs = &self.vertices;
        if vs.len() != p.order() || vs.iter().any(|&v| v >= g.n()) {
            return false;
        }
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if vs[i] == vs[j] || g.has_edge(vs[i], vs[j]) != p.has_edge(i, j) {
                    return false;
                }
            }
        }
        true
    }

    /// Maps the witness through an id table (e.g. subgraph ids to parent ids).
    pub fn mapped(&self, ids: &[usize]) -> PatternWitness {
        PatternWitness {
            pattern: self.pattern.clone(),
            vertices: self.vertices.iter().map(|&v| ids[v]).collect(),
        }
    }
}

struct Search<'a> {
    g: &'a WeightedGraph,
    p: &'a Pattern,
    map: Vec<usize>,
    used: VertexSet,
    // `Some(x)` restricts position `anchor_pos` to `x` and bans `x` elsewhere
    anchor: Option<(usize, usize)>,
}

impl Search<'_> {
    fn candidates(&self, i: usize) -> VertexSet {
        if let Some((pos, x)) = self.anchor {
            if pos == i {
                let mut c = VertexSet::new(self.g.n());
                c.insert(x);
                for j in 0..i {
                    let adj = self.g.has_edge(self.map[j], x);
                    if adj != self.p.has_edge(i, j) || self.used.contains(x) {
                        return VertexSet::new(self.g.n());
                    }
                }
                return c;
            }
        }
        let mut c = self.used.complement();
        if let Some((_, x)) = self.anchor {
            c.remove(x);
        }
        for j in 0..i {
            let nb = self.g.neighbors(self.map[j]);
            if self.p.has_edge(i, j) {
                c.intersect_with(nb);
            } else {
                c.difference_with(nb);
            }
        }
        c
    }

    fn extend(&mut self, i: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == self.p.order() {
            return visit(&self.map);
        }
        let need = self.p.degree(i);
        for c in self.candidates(i).iter() {
            if self.g.degree(c) < need {
                continue;
            }
            self.map.push(c);
            self.used.insert(c);
            let stop = self.extend(i + 1, visit);
            self.used.remove(c);
            self.map.pop();
            if stop {
                return true;
            }
        }
        false
    }
}

/// Runs `visit` on every induced embedding in lexicographic order of the
/// host-id vector until it returns `true`.
fn search(
    g: &WeightedGraph,
    p: &Pattern,
    anchor: Option<(usize, usize)>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Result<(), PatternError> {
    if p.order() > MAX_PATTERN {
        return Err(PatternError::TooLarge {
            name: p.name.clone(),
            k: p.order(),
        });
    }
    if p.order() > g.n() {
        return Ok(());
    }
    let mut s = Search {
        g,
        p,
        map: Vec::with_capacity(p.order()),
        used: VertexSet::new(g.n()),
        anchor,
    };
    s.extend(0, visit);
    Ok(())
}

/// First induced copy of `p` in `g`, lexicographically smallest as a vector
/// of host ids indexed by pattern vertex.
pub fn find_induced(g: &WeightedGraph, p: &Pattern) -> Result<Option<PatternWitness>, PatternError> {
    let mut found = None;
    search(g, p, None, &mut |m| {
        found = Some(m.to_vec());
        true
    })?;
    Ok(found.map(|vertices| PatternWitness {
        pattern: p.name.clone(),
        vertices,
    }))
}

/// Every induced embedding (all automorphic relabelings included), up to `limit`.
pub fn find_all_induced(g: &WeightedGraph, p: &Pattern, limit: usize) -> Result<Vec<PatternWitness>, PatternError> {
    let mut out = Vec::new();
    search(g, p, None, &mut |m| {
        out.push(PatternWitness {
            pattern: p.name.clone(),
            vertices: m.to_vec(),
        });
        out.len() >= limit
    })?;
    Ok(out)
}

/// An induced copy of `p` that uses vertex `x`, if one exists.
pub fn find_induced_containing(
    g: &WeightedGraph,
    p: &Pattern,
    x: usize,
) -> Result<Option<PatternWitness>, PatternError> {
    for pos in 0..p.order() {
        let mut found = None;
        search(g, p, Some((pos, x)), &mut |m| {
            found = Some(m.to_vec());
            true
        })?;
        if let Some(vertices) = found {
            return Ok(Some(PatternWitness {
                pattern: p.name.clone(),
                vertices,
            }));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreenessReport {
    pub free: bool,
    /// Whether the verdict is a certificate (exhaustive) or a sampled guess.
    pub certified: bool,
    pub witnesses: Vec<PatternWitness>,
}

/// Exhaustive check against every pattern in `family`.
pub fn is_free(g: &WeightedGraph, family: &[Pattern]) -> Result<FreenessReport, PatternError> {
    let mut witnesses = Vec::new();
    for p in family {
        if let Some(w) = find_induced(g, p)? {
            witnesses.push(w);
        }
    }
    Ok(FreenessReport {
        free: witnesses.is_empty(),
        certified: true,
        witnesses,
    })
}

/// Non-certifying check: searches `probes` random induced subgraphs on at
/// most `probe_size` vertices. A `free` verdict is only evidence.
pub fn is_free_sampled<R: Rng>(
    g: &WeightedGraph,
    family: &[Pattern],
    probes: usize,
    probe_size: usize,
    rng: &mut R,
) -> Result<FreenessReport, PatternError> {
    let mut witnesses: Vec<PatternWitness> = Vec::new();
    let mut ids: Vec<usize> = (0..g.n()).collect();
    for _ in 0..probes {
        ids.shuffle(rng);
        let mut sample = ids[..probe_size.min(g.n())].to_vec();
        sample.sort_unstable();
        let sub = g.induced(&sample);
        for p in family {
            if witnesses.iter().any(|w| w.pattern == p.name) {
                continue;
            }
            if let Some(w) = find_induced(&sub, p)? {
                witnesses.push(w.mapped(&sample));
            }
        }
        if witnesses.len() == family.len() {
            break;
        }
    }
    Ok(FreenessReport {
        free: witnesses.is_empty(),
        certified: false,
        witnesses,
    })
}

pub fn is_clique(g: &WeightedGraph, s: &VertexSet) -> Result<bool, crate::graph::GraphError> {
    g.is_clique(s)
}

/// A clique cutset of a connected graph together with the components left
/// after removing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCutset {
    pub clique: VertexSet,
    pub sides: Vec<VertexSet>,
}

/// Exhaustive scan over all vertex subsets for a clique whose removal
/// disconnects `g`. Test oracle for atom certification.
pub fn has_clique_cutset_bruteforce(g: &WeightedGraph) -> Result<Option<CliqueCutset>, PatternError> {
    let n = g.n();
    if n > CUTSET_BRUTEFORCE_CAP {
        return Err(PatternError::SizeCap {
            n,
            cap: CUTSET_BRUTEFORCE_CAP,
        });
    }
    if !g.is_connected() {
        return Err(PatternError::Disconnected);
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, u| m | 1 << u))
        .collect();
    let full: u32 = if n == 32 { !0 } else { (1u32 << n) - 1 };
    // ascending subset size keeps the reported cutset small
    let mut masks: Vec<u32> = (0..=full).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let is_clique = (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .all(|v| mask & !(1 << v) & !nbr[v] == 0);
        if !is_clique {
            continue;
        }
        let rest = full & !mask;
        if rest == 0 {
            continue;
        }
        let start = rest.trailing_zeros();
        let mut seen = 1u32 << start;
        loop {
            let mut next = seen;
            for (v, &nv) in nbr.iter().enumerate() {
                if seen >> v & 1 == 1 {
                    next |= nv & rest;
                }
            }
            if next == seen {
                break;
            }
            seen = next;
        }
        if seen != rest {
            let clique = VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1));
            let within = VertexSet::from_ids(n, (0..n).filter(|&v| rest >> v & 1 == 1));
            let sides = g.components_within(&within);
            return Ok(Some(CliqueCutset { clique, sides }));
        }
    }
    Ok(None)
}

/// Independence number at most 2, i.e. the complement is triangle-free.
pub fn alpha_at_most_2(g: &WeightedGraph) -> bool {
    find_independent_triple(g).is_none()
}

/// Three pairwise nonadjacent vertices, if any.
pub fn find_independent_triple(g: &WeightedGraph) -> Option<[usize; 3]> {
    let n = g.n();
    for u in 0..n {
        let mut non_u = g.neighbors(u).complement();
        non_u.remove(u);
        for v in non_u.iter().filter(|&v| v > u) {
            let mut both = non_u.difference(g.neighbors(v));
            both.remove(v);
            if let Some(w) = both.iter().find(|&w| w > v) {
                return Some([u, v, w]);
            }
        }
    }
    None
}
