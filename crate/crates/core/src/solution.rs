//! Solver return type, counters, and the error type shared by every layer.

use std::fmt;
use std::ops::AddAssign;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::pattern::PatternWitness;

/// Work counters accumulated through the whole reduction chain.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    /// Atoms handed to a fold (one per decomposition step).
    pub atoms: u64,
    /// Invocations of the nearly-C pivot reduction.
    pub nearly_c_calls: u64,
    /// Pivots actually expanded inside those reductions.
    pub pivots: u64,
    /// Chordal base-case solves.
    pub chordal_calls: u64,
    /// Non-chordal pieces solved by the independence-number-two rule.
    pub alpha2_solves: u64,
    /// Non-chordal pieces that fell through to the exhaustive oracle.
    pub oracle_fallbacks: u64,
    /// Prime quotients handed to a prime solver.
    pub prime_quotients: u64,
}

impl AddAssign for SolveStats {
    fn add_assign(&mut self, o: Self) {
        self.atoms += o.atoms;
        self.nearly_c_calls += o.nearly_c_calls;
        self.pivots += o.pivots;
        self.chordal_calls += o.chordal_calls;
        self.alpha2_solves += o.alpha2_solves;
        self.oracle_fallbacks += o.oracle_fallbacks;
        self.prime_quotients += o.prime_quotients;
    }
}

/// An independent set of the graph a solver was handed, in that graph's
/// local ids, with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub chosen: VertexSet,
    pub weight: Weight,
    pub stats: SolveStats,
}

impl SolveResult {
    pub fn empty(n: usize) -> Self {
        Self {
            chosen: VertexSet::new(n),
            weight: 0,
            stats: SolveStats::default(),
        }
    }

    pub fn single(g: &WeightedGraph, v: usize) -> Self {
        let mut chosen = VertexSet::new(g.n());
        chosen.insert(v);
        Self {
            chosen,
            weight: g.weight(v),
            stats: SolveStats::default(),
        }
    }

    /// Builds a result from a set, computing its weight in `g`.
    pub fn from_set(g: &WeightedGraph, chosen: VertexSet, stats: SolveStats) -> Self {
        let weight = chosen.iter().map(|v| g.weight(v)).sum();
        Self { chosen, weight, stats }
    }

    /// Re-expresses the chosen set in a parent graph of `n` vertices, where
    /// local vertex `i` is `ids[i]`. The weight is kept as is.
    pub fn lift(self, n: usize, ids: &[usize]) -> Self {
        Self {
            chosen: VertexSet::from_ids(n, self.chosen.iter().map(|v| ids[v])),
            weight: self.weight,
            stats: self.stats,
        }
    }

    /// Original vertex labels of the chosen set, ascending.
    pub fn labels(&self, g: &WeightedGraph) -> Vec<usize> {
        let mut out: Vec<usize> = self.chosen.iter().map(|v| g.label(v)).collect();
        out.sort_unstable();
        out
    }

    /// Checks independence and that `weight` is the set's weight in `g`.
    pub fn verify(&self, g: &WeightedGraph) -> bool {
        self.chosen.universe() == g.n()
            && g.is_independent(&self.chosen).unwrap_or(false)
            && g.set_weight(&self.chosen).ok() == Some(self.weight)
    }
}

/// Solver layer, weakest class first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Chordal,
    L1,
    L2,
    L3,
    L4,
    Oracle,
}

impl Layer {
    pub fn name(self) -> &'static str {
        match self {
            Layer::Chordal => "chordal",
            Layer::L1 => "l1",
            Layer::L2 => "l2",
            Layer::L3 => "l3",
            Layer::L4 => "l4",
            Layer::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Layer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "chordal" => Layer::Chordal,
            "l1" => Layer::L1,
            "l2" => Layer::L2,
            "l3" => Layer::L3,
            "l4" => Layer::L4,
            "oracle" => Layer::Oracle,
            other => return Err(format!("unknown layer `{other}`")),
        })
    }
}

/// One hop of the call chain an error travelled through. Vertex ids are
/// labels of the outermost graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "frame", rename_all = "snake_case")]
pub enum TraceFrame {
    Layer {
        layer: Layer,
    },
    Component {
        index: usize,
    },
    /// Child indices from the modular decomposition root.
    MdNode {
        path: Vec<usize>,
    },
    FoldStep {
        index: usize,
    },
    Pivot {
        vertex: usize,
    },
}

impl fmt::Display for TraceFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceFrame::Layer { layer } => write!(f, "{layer}"),
            TraceFrame::Component { index } => write!(f, "component {index}"),
            TraceFrame::MdNode { path } => write!(f, "md node {path:?}"),
            TraceFrame::FoldStep { index } => write!(f, "atom step {index}"),
            TraceFrame::Pivot { vertex } => write!(f, "pivot {vertex}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveErrorKind {
    /// `vertex` has later neighbors `missing_edge` that are not adjacent in
    /// the given elimination order.
    NotChordal {
        order: Vec<usize>,
        vertex: usize,
        missing_edge: (usize, usize),
    },
    SizeCap {
        n: usize,
        cap: usize,
    },
    /// The input is outside the class the solver was asked to trust.
    ClassViolation {
        reason: String,
        witness: PatternWitness,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub struct SolveError {
    pub kind: SolveErrorKind,
    /// Innermost frame first.
    pub trace: Vec<TraceFrame>,
}

impl SolveError {
    pub fn new(kind: SolveErrorKind) -> Self {
        Self {
            kind,
            trace: Vec::new(),
        }
    }

    pub fn at(mut self, frame: TraceFrame) -> Self {
        self.trace.push(frame);
        self
    }

    pub fn is_size_cap(&self) -> bool {
        matches!(self.kind, SolveErrorKind::SizeCap { .. })
    }
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SolveErrorKind::NotChordal {
                vertex, missing_edge, ..
            } => write!(
                f,
                "not chordal: later neighbors {} and {} of vertex {vertex} are nonadjacent",
                missing_edge.0, missing_edge.1
            )?,
            SolveErrorKind::SizeCap { n, cap } => write!(f, "graph with {n} vertices exceeds cap {cap}")?,
            SolveErrorKind::ClassViolation { reason, witness } => write!(
                f,
                "class violation: {reason}; induced {} on {:?}",
                witness.pattern, witness.vertices
            )?,
        }
        if !self.trace.is_empty() {
            let path: Vec<String> = self.trace.iter().rev().map(ToString::to_string).collect();
            write!(f, " (at {})", path.join(" > "))?;
        }
        Ok(())
    }
}

pub type SolveOutcome = Result<SolveResult, SolveError>;
