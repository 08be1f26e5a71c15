//! Seeded instance generators. A [`GenSpec`] fully determines its output.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::modular::is_prime;
use crate::pattern::{find_induced, find_induced_containing, parse_patterns, Pattern, PatternError};

/// Largest `n` accepted by the prime generator.
pub const PRIME_GEN_CAP: usize = 40;

/// Default number of draws before the prime generator gives up.
pub const PRIME_ATTEMPTS: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("no prime graph after {attempts} attempts for {spec}")]
    BudgetExhausted { attempts: usize, spec: String },
    #[error("n = {n} exceeds the cap {cap} for {family}")]
    TooLarge { n: usize, cap: usize, family: String },
}

/// A hereditary class given by forbidden induced subgraphs, written as
/// dash-separated pattern names (`p6-banner-c5`); `p6c4` is accepted too.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    name: String,
    forbidden: Vec<Pattern>,
}

impl Class {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn forbidden(&self) -> &[Pattern] {
        &self.forbidden
    }
}

impl FromStr for Class {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let list = if s == "p6c4" {
            "p6,c4".to_string()
        } else {
            s.replace('-', ",")
        };
        let forbidden = parse_patterns(&list)?;
        if forbidden.is_empty() {
            return Err(GenError::UnknownFamily(s.to_string()));
        }
        Ok(Self {
            name: s.to_string(),
            forbidden,
        })
    }
}

/// Which generator a [`GenSpec`] runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Plain G(n, p).
    Gnp,
    /// Simplicial insertion into cliques.
    Chordal,
    /// `n` cliques and cycles glued along shared cliques.
    Glued,
    /// G(n, p) with forbidden witnesses deleted; may end below `n` vertices.
    Filtered(Class),
    /// Vertex-by-vertex growth that keeps the class; exactly `n` vertices.
    Grown(Class),
    /// Filtered draws rejected until prime.
    Prime(Class),
}

impl FromStr for Family {
    type Err = GenError;

    fn from_str(s: &str) -> Result<Self, GenError> {
        let unknown = || GenError::UnknownFamily(s.to_string());
        Ok(match s {
            "gnp" => Family::Gnp,
            "chordal" => Family::Chordal,
            "glued" => Family::Glued,
            _ => match s.split_once(':') {
                Some(("grown", c)) => Family::Grown(c.parse().map_err(|_| unknown())?),
                Some(("prime", c)) => Family::Prime(c.parse().map_err(|_| unknown())?),
                Some(_) => return Err(unknown()),
                None => Family::Filtered(s.parse().map_err(|_| unknown())?),
            },
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Gnp => f.write_str("gnp"),
            Family::Chordal => f.write_str("chordal"),
            Family::Glued => f.write_str("glued"),
            Family::Filtered(c) => f.write_str(&c.name),
            Family::Grown(c) => write!(f, "grown:{}", c.name),
            Family::Prime(c) => write!(f, "prime:{}", c.name),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    /// Edge probability, or the density knob of the family.
    pub p: f64,
    pub seed: u64,
    /// Inclusive weight range; unit weights when absent.
    pub weights: Option<(Weight, Weight)>,
}

impl GenSpec {
    pub fn new(family: Family, n: usize, p: f64, seed: u64) -> Self {
        Self {
            family,
            n,
            p,
            seed,
            weights: None,
        }
    }

    pub fn weighted(mut self, lo: Weight, hi: Weight) -> Self {
        self.weights = Some((lo, hi));
        self
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} p={} seed={}", self.family, self.n, self.p, self.seed)?;
        if let Some((lo, hi)) = self.weights {
            write!(f, " weights={lo}..={hi}")?;
        }
        Ok(())
    }
}

/// Runs the generator named by `spec.family`.
pub fn generate(spec: &GenSpec) -> Result<WeightedGraph, GenError> {
    match &spec.family {
        Family::Gnp => Ok(gen_gnp(spec)),
        Family::Chordal => Ok(gen_chordal(spec)),
        Family::Glued => Ok(gen_glued(spec).graph),
        Family::Filtered(c) => gen_random_filtered(spec, c.forbidden()),
        Family::Grown(c) => gen_grown(spec, c.forbidden()),
        Family::Prime(c) => gen_prime_filtered(spec, c.forbidden(), PRIME_ATTEMPTS),
    }
}

fn weigh(n: usize, edges: &[(usize, usize)], spec: &GenSpec, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let weights = match spec.weights {
        Some((lo, hi)) => (0..n).map(|_| rng.gen_range(lo..=hi)).collect(),
        None => vec![1; n],
    };
    WeightedGraph::new(n, edges, weights).expect("generated edges are valid")
}

fn gnp_edges(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let p = p.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

pub fn gen_gnp(spec: &GenSpec) -> WeightedGraph {
    let mut rng = spec.rng();
    let edges = gnp_edges(spec.n, spec.p, &mut rng);
    weigh(spec.n, &edges, spec, &mut rng)
}

/// G(n, p), then repeatedly deletes a seeded-random vertex of the first
/// forbidden witness until none is left. The result is certified free of
/// `forbidden`, with vertices renumbered `0..`.
pub fn gen_random_filtered(spec: &GenSpec, forbidden: &[Pattern]) -> Result<WeightedGraph, GenError> {
    let mut rng = spec.rng();
    let edges = gnp_edges(spec.n, spec.p, &mut rng);
    let mut g = WeightedGraph::unit(spec.n, &edges).expect("valid edges");
    'outer: loop {
        for p in forbidden {
            if let Some(w) = find_induced(&g, p)? {
                let victim = w.vertices[rng.gen_range(0..w.vertices.len())];
                let keep: Vec<usize> = (0..g.n()).filter(|&v| v != victim).collect();
                g = g.induced(&keep);
                continue 'outer;
            }
        }
        break;
    }
    Ok(weigh(g.n(), &g.edges(), spec, &mut rng))
}

/// Adds vertices one at a time. Each newcomer alternates between drawing a
/// G(n, p)-style neighborhood (thinner on every retry) and copying a
/// perturbed neighborhood of an existing vertex, keeping the first draw
/// through which no forbidden copy appears; after enough failures it
/// becomes a true twin of an existing vertex. Exactly `spec.n` vertices.
///
/// The twin step cannot create a forbidden copy provided no forbidden
/// pattern has a pair of true twins: a copy using the twin but not its
/// original maps onto an older copy, and a copy using both would give
/// the pattern true twins.
pub fn gen_grown(spec: &GenSpec, forbidden: &[Pattern]) -> Result<WeightedGraph, GenError> {
    const TRIES: usize = 24;
    assert!(
        forbidden.iter().all(|p| !p.has_true_twins() && p.order() > 1),
        "grown generation needs twin-free patterns"
    );
    let mut rng = spec.rng();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut g = WeightedGraph::empty();
    for x in 0..spec.n {
        let mut accepted = None;
        let mut p = spec.p.clamp(0.0, 1.0);
        for t in 0..TRIES {
            let nbrs: Vec<usize> = if t % 2 == 1 && x > 0 {
                perturbed(&g, rng.gen_range(0..x), &mut rng)
            } else {
                (0..x).filter(|_| rng.gen_bool(p)).collect()
            };
            let trial = grow(&g, &edges, x, &nbrs);
            let mut clean = true;
            for pat in forbidden {
                if find_induced_containing(&trial, pat, x)?.is_some() {
                    clean = false;
                    break;
                }
            }
            if clean {
                accepted = Some(nbrs);
                break;
            }
            p *= 0.85;
        }
        let nbrs = accepted.unwrap_or_else(|| {
            let u = rng.gen_range(0..x);
            let mut n: Vec<usize> = g.neighbors(u).iter().collect();
            n.push(u);
            n.sort_unstable();
            n
        });
        edges.extend(nbrs.iter().map(|&u| (u, x)));
        g = WeightedGraph::unit(x + 1, &edges).expect("valid edges");
    }
    Ok(weigh(spec.n, &edges, spec, &mut rng))
}

/// Neighborhood of `u` (plus `u` itself half the time) with up to three
/// memberships flipped.
fn perturbed(g: &WeightedGraph, u: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut s = g.neighbors(u).clone();
    if rng.gen_bool(0.5) {
        s.insert(u);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let v = rng.gen_range(0..g.n());
        if !s.remove(v) {
            s.insert(v);
        }
    }
    s.to_vec()
}

fn grow(g: &WeightedGraph, edges: &[(usize, usize)], x: usize, nbrs: &[usize]) -> WeightedGraph {
    debug_assert_eq!(g.n(), x);
    let mut e = edges.to_vec();
    e.extend(nbrs.iter().map(|&u| (u, x)));
    WeightedGraph::unit(x + 1, &e).expect("valid edges")
}

/// Each new vertex attaches to a seeded subset of a clique around a random
/// existing vertex (each member kept with probability `p`), so insertion
/// order reversed is a perfect elimination ordering.
pub fn gen_chordal(spec: &GenSpec) -> WeightedGraph {
    let mut rng = spec.rng();
    let mut adj: Vec<Vec<usize>> = Vec::with_capacity(spec.n);
    let mut edges = Vec::new();
    for x in 0..spec.n {
        let mut nbrs = Vec::new();
        if x > 0 {
            let u = rng.gen_range(0..x);
            let mut clique = vec![u];
            let mut cand = adj[u].clone();
            cand.shuffle(&mut rng);
            for c in cand {
                if clique.iter().all(|&k| adj[k].contains(&c)) {
                    clique.push(c);
                }
            }
            nbrs = clique
                .into_iter()
                .filter(|_| rng.gen_bool(spec.p.clamp(0.0, 1.0)))
                .collect();
        }
        for &u in &nbrs {
            adj[u].push(x);
            edges.push((u, x));
        }
        adj.push(nbrs);
    }
    weigh(spec.n, &edges, spec, &mut rng)
}

/// A glued instance with the pieces and shared cliques it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedInstance {
    pub graph: WeightedGraph,
    /// Vertex set of each glued piece, ascending.
    pub pieces: Vec<Vec<usize>>,
    /// Clique each later piece shares with the earlier ones, ascending.
    pub cutsets: Vec<Vec<usize>>,
}

/// `spec.n` pieces, each a clique K2..K5 or a cycle C4..C6, glued one after
/// another onto a random clique of an earlier piece: a shared edge with
/// probability `p` when both pieces have more than two vertices, else a
/// shared vertex. No piece is swallowed, so the pieces are exactly the atoms.
pub fn gen_glued(spec: &GenSpec) -> GluedInstance {
    let mut rng = spec.rng();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    // cliques of size 1 and 2 available for gluing, per piece
    let mut piece_edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut cutsets = Vec::new();
    let mut next = 0;
    for i in 0..spec.n {
        let cycle = rng.gen_bool(0.5);
        let k = if cycle {
            rng.gen_range(4..=6)
        } else {
            rng.gen_range(2..=5)
        };
        let local: Vec<(usize, usize)> = if cycle {
            (0..k).map(|j| (j, (j + 1) % k)).collect()
        } else {
            (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect()
        };
        let mut ids: Vec<Option<usize>> = vec![None; k];
        if i > 0 {
            let host = rng.gen_range(0..pieces.len());
            if k > 2 && pieces[host].len() > 2 && rng.gen_bool(spec.p.clamp(0.0, 1.0)) {
                let (a, b) = piece_edges[host][rng.gen_range(0..piece_edges[host].len())];
                // local edge (0, 1) exists in both cliques and cycles
                ids[0] = Some(a);
                ids[1] = Some(b);
                cutsets.push(vec![a.min(b), a.max(b)]);
            } else {
                let a = pieces[host][rng.gen_range(0..pieces[host].len())];
                ids[0] = Some(a);
                cutsets.push(vec![a]);
            }
        }
        let ids: Vec<usize> = ids
            .into_iter()
            .map(|id| {
                id.unwrap_or_else(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect();
        let global: Vec<(usize, usize)> = local.iter().map(|&(a, b)| (ids[a], ids[b])).collect();
        edges.extend(&global);
        let mut vs = ids.clone();
        vs.sort_unstable();
        pieces.push(vs);
        piece_edges.push(global);
    }
    let graph = weigh(next, &edges, spec, &mut rng);
    GluedInstance { graph, pieces, cutsets }
}

/// Filtered draws under derived seeds until one is prime with at least four
/// vertices; `spec.n` is capped at [`PRIME_GEN_CAP`].
pub fn gen_prime_filtered(spec: &GenSpec, forbidden: &[Pattern], attempts: usize) -> Result<WeightedGraph, GenError> {
    if spec.n > PRIME_GEN_CAP {
        return Err(GenError::TooLarge {
            n: spec.n,
            cap: PRIME_GEN_CAP,
            family: spec.family.to_string(),
        });
    }
    let mut seeds = spec.rng();
    for _ in 0..attempts {
        let draw = GenSpec {
            seed: seeds.gen(),
            ..spec.clone()
        };
        let g = gen_random_filtered(&draw, forbidden)?;
        if g.n() >= 4 && is_prime(&g) {
            return Ok(g);
        }
    }
    Err(GenError::BudgetExhausted {
        attempts,
        spec: spec.to_string(),
    })
}

/// Vertices of `g` that are true twins of an earlier vertex; handy for tests.
pub fn true_twin_pairs(g: &WeightedGraph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        let mut nu: VertexSet = g.neighbors(u).clone();
        nu.insert(u);
        for v in u + 1..g.n() {
            let mut nv = g.neighbors(v).clone();
            nv.insert(v);
            if nu == nv {
                out.push((u, v));
            }
        }
    }
    out
}
