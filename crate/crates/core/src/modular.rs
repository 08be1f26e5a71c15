//! Modular decomposition and MWIS by recursion over the decomposition tree.
//!
//! The tree is built top-down: a disconnected vertex set becomes a parallel
//! node over its components, a set with disconnected complement becomes a
//! series node over its co-components, and anything else is a prime node
//! over its maximal proper modules. Maximal modules of a prime node are
//! found from pairwise module closures. This is cubic-ish rather than linear,
//! which is fine at the sizes the solver stack targets.

use serde::Serialize;

use crate::graph::{GraphError, VertexSet, Weight, WeightedGraph};
use crate::solution::{SolveOutcome, SolveResult, SolveStats, TraceFrame};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "vertex", rename_all = "lowercase")]
pub enum MdKind {
    Leaf(usize),
    Series,
    Parallel,
    Prime,
}

/// A node of the modular decomposition tree. Ids are local to the graph the
/// tree was built for.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MdNode {
    pub kind: MdKind,
    pub vertices: VertexSet,
    pub children: Vec<MdNode>,
    /// Graph on one representative per child (the child's smallest vertex),
    /// in child order, labels carried over from the graph. Absent on leaves.
    #[serde(skip)]
    pub quotient: Option<WeightedGraph>,
    /// Subtree MWIS weight, filled in by [`evaluate`].
    pub alpha: Option<Weight>,
}

#[derive(Serialize)]
struct QuotientView {
    representatives: Vec<usize>,
    edges: Vec<(usize, usize)>,
}

impl MdNode {
    pub fn representative(&self) -> usize {
        self.vertices.first().expect("nonempty module")
    }

    /// Every node of the subtree, preorder.
    pub fn walk(&self) -> Vec<&MdNode> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            let node = out[i];
            out.extend(node.children.iter());
            i += 1;
        }
        out
    }

    /// JSON with quotients rendered as representative/edge lists. Vertex ids
    /// are mapped through `g`'s labels.
    pub fn to_json(&self, g: &WeightedGraph) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        let kind = match self.kind {
            MdKind::Leaf(_) => "leaf",
            MdKind::Series => "series",
            MdKind::Parallel => "parallel",
            MdKind::Prime => "prime",
        };
        obj.insert("kind".into(), kind.into());
        let labels: Vec<usize> = self.vertices.iter().map(|v| g.label(v)).collect();
        obj.insert("vertices".into(), serde_json::json!(labels));
        if let Some(a) = self.alpha {
            obj.insert("alpha".into(), a.into());
        }
        if let Some(q) = &self.quotient {
            let view = QuotientView {
                representatives: q.labels().to_vec(),
                edges: q.edges(),
            };
            obj.insert("quotient".into(), serde_json::to_value(view).expect("serializable"));
        }
        if !self.children.is_empty() {
            let kids: Vec<_> = self.children.iter().map(|c| c.to_json(g)).collect();
            obj.insert("children".into(), kids.into());
        }
        serde_json::Value::Object(obj)
    }
}

/// True iff no vertex outside `m` distinguishes two members of `m`.
pub fn is_module(g: &WeightedGraph, m: &VertexSet) -> Result<bool, GraphError> {
    let _ = g.set_weight(m)?;
    let m = VertexSet::from_ids(g.n(), m.iter());
    let Some(first) = m.first() else {
        return Ok(true);
    };
    let outside = m.complement();
    Ok(m.iter().all(|x| {
        let mut diff = g.neighbors(x).clone();
        let mut other = g.neighbors(first).clone();
        diff.intersect_with(&outside);
        other.intersect_with(&outside);
        diff == other
    }))
}

/// Smallest module of `g[within]` containing `a` and `b`. Stops early and
/// returns `None` once it covers all of `within`.
fn closure(g: &WeightedGraph, within: &VertexSet, size: usize, a: usize, b: usize) -> Option<VertexSet> {
    let mut m = VertexSet::new(g.n());
    m.insert(a);
    m.insert(b);
    let mut count = 2;
    let mut stack = vec![b];
    while let Some(y) = stack.pop() {
        // outside vertices that see exactly one of y and a split the module
        let mut split = g.neighbors(y).clone();
        for (s, t) in split.words_mut().zip(g.neighbors(a).words()) {
            *s ^= *t;
        }
        split.intersect_with(within);
        split.difference_with(&m);
        for z in split.iter() {
            m.insert(z);
            count += 1;
            stack.push(z);
        }
        if count >= size {
            return None;
        }
    }
    Some(m)
}

/// Maximal proper modules of `g[within]`, assuming it is connected and
/// co-connected (so they partition `within`).
fn maximal_modules(g: &WeightedGraph, within: &VertexSet) -> Vec<VertexSet> {
    let size = within.len();
    let mut left = within.clone();
    let mut out = Vec::new();
    while let Some(v) = left.first() {
        let mut module = VertexSet::new(g.n());
        module.insert(v);
        let mut todo = left.clone();
        todo.remove(v);
        while let Some(u) = todo.first() {
            todo.remove(u);
            if let Some(c) = closure(g, within, size, v, u) {
                todo.difference_with(&c);
                module.union_with(&c);
            }
        }
        left.difference_with(&module);
        out.push(module);
    }
    out
}

fn complement_components(g: &WeightedGraph, within: &VertexSet) -> Vec<VertexSet> {
    let mut left = within.clone();
    let mut out = Vec::new();
    while let Some(start) = left.first() {
        let mut seen = VertexSet::new(g.n());
        seen.insert(start);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let mut next = within.difference(g.neighbors(v));
            next.difference_with(&seen);
            for u in next.iter() {
                seen.insert(u);
                stack.push(u);
            }
        }
        left.difference_with(&seen);
        out.push(seen);
    }
    out
}

fn build(g: &WeightedGraph, within: VertexSet) -> MdNode {
    if within.len() == 1 {
        let v = within.first().expect("nonempty");
        return MdNode {
            kind: MdKind::Leaf(v),
            vertices: within,
            children: Vec::new(),
            quotient: None,
            alpha: None,
        };
    }
    let comps = g.components_within(&within);
    let (kind, parts) = if comps.len() > 1 {
        (MdKind::Parallel, comps)
    } else {
        let cocomps = complement_components(g, &within);
        if cocomps.len() > 1 {
            (MdKind::Series, cocomps)
        } else {
            (MdKind::Prime, maximal_modules(g, &within))
        }
    };
    let mut children: Vec<MdNode> = parts.into_iter().map(|p| build(g, p)).collect();
    children.sort_by_key(MdNode::representative);
    let reps: Vec<usize> = children.iter().map(MdNode::representative).collect();
    let quotient = g.induced(&reps);
    MdNode {
        kind,
        vertices: within,
        children,
        quotient: Some(quotient),
        alpha: None,
    }
}

/// Modular decomposition tree of a nonempty graph; `None` for the empty graph.
pub fn md_tree(g: &WeightedGraph) -> Option<MdNode> {
    if g.n() == 0 {
        return None;
    }
    Some(build(g, g.vertices()))
}

/// Only trivial modules. Graphs with at most two vertices qualify vacuously.
pub fn is_prime(g: &WeightedGraph) -> bool {
    match md_tree(g) {
        None => true,
        Some(root) => g.n() <= 2 || (root.kind == MdKind::Prime && root.children.iter().all(|c| c.children.is_empty())),
    }
}

/// Fills `alpha` bottom-up and returns the subtree's optimum in `g`'s ids.
///
/// Leaves weigh their vertex, parallel nodes sum their children, series
/// nodes take the best child, and prime nodes hand their quotient, weighted
/// by the children's optima, to `prime_solver`. The chosen set is the union
/// of the chosen children's sets.
pub fn evaluate(
    g: &WeightedGraph,
    node: &mut MdNode,
    path: &mut Vec<usize>,
    prime_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome,
) -> SolveOutcome {
    if let MdKind::Leaf(v) = node.kind {
        node.alpha = Some(g.weight(v));
        return Ok(SolveResult::single(g, v));
    }
    let mut kids = Vec::with_capacity(node.children.len());
    for (i, child) in node.children.iter_mut().enumerate() {
        path.push(i);
        let r = evaluate(g, child, path, prime_solver);
        path.pop();
        kids.push(r?);
    }
    let mut stats = SolveStats::default();
    for k in &kids {
        stats += k.stats;
    }
    let mut chosen = VertexSet::new(g.n());
    let picked: Vec<usize> = match node.kind {
        MdKind::Parallel => (0..kids.len()).collect(),
        MdKind::Series => {
            let mut best = 0;
            for (i, k) in kids.iter().enumerate() {
                if k.weight > kids[best].weight {
                    best = i;
                }
            }
            vec![best]
        }
        MdKind::Prime => {
            let q = node.quotient.as_ref().expect("prime nodes carry a quotient");
            let q = q.with_weights(kids.iter().map(|k| k.weight).collect());
            let r = prime_solver(&q).map_err(|e| e.at(TraceFrame::MdNode { path: path.clone() }))?;
            stats += r.stats;
            stats.prime_quotients += 1;
            r.chosen.to_vec()
        }
        MdKind::Leaf(_) => unreachable!(),
    };
    for i in picked {
        chosen.union_with(&kids[i].chosen);
    }
    let r = SolveResult::from_set(g, chosen, stats);
    node.alpha = Some(r.weight);
    Ok(r)
}

/// MWIS of `g` from MWIS on its prime quotients.
pub fn mwis_via_md(g: &WeightedGraph, prime_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome) -> SolveOutcome {
    match md_tree(g) {
        None => Ok(SolveResult::empty(0)),
        Some(mut root) => evaluate(g, &mut root, &mut Vec::new(), prime_solver),
    }
}
