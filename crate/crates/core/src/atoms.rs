//! Clique-separator decomposition into atoms, and MWIS by folding atom
//! optima into the remainder of the graph.

use serde::Serialize;
use thiserror::Error;

use crate::chordal::EliminationOrder;
use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::solution::{SolveOutcome, SolveResult, SolveStats, TraceFrame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("graph is disconnected; decompose components separately")]
pub struct Disconnected;

/// A minimal elimination ordering with the fill edges it induces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillResult {
    pub order: EliminationOrder,
    /// Fill edges `(u, v)` with `u < v`, sorted.
    pub fill: Vec<(usize, usize)>,
}

impl FillResult {
    /// Adjacency of the triangulated graph.
    pub fn filled_graph(&self, g: &WeightedGraph) -> WeightedGraph {
        let mut edges = g.edges();
        edges.extend_from_slice(&self.fill);
        WeightedGraph::new(g.n(), &edges, g.weights().to_vec()).expect("valid fill")
    }
}

/// MCS-M: numbers vertices from last to first, always taking an unnumbered
/// vertex of largest label (ties to smallest id). Every unnumbered `u`
/// reachable from the chosen vertex through unnumbered vertices of label
/// strictly below `label(u)` gets its label bumped, and becomes a fill
/// neighbor if not already adjacent.
pub fn mcsm(g: &WeightedGraph) -> Result<FillResult, Disconnected> {
    if !g.is_connected() {
        return Err(Disconnected);
    }
    let n = g.n();
    let mut label = vec![0i64; n];
    let mut numbered = vec![false; n];
    let mut picked = Vec::with_capacity(n);
    let mut fill = Vec::new();
    // bottleneck[u]: least possible max label over interior vertices of a
    // path from the chosen vertex to u; -1 when adjacent
    let mut bottleneck = vec![i64::MAX; n];
    let mut done = vec![false; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&u| !numbered[u])
            .max_by(|&a, &b| label[a].cmp(&label[b]).then(b.cmp(&a)))
            .expect("unnumbered vertex left");
        numbered[v] = true;
        picked.push(v);

        for u in 0..n {
            bottleneck[u] = i64::MAX;
            done[u] = numbered[u];
        }
        for u in g.neighbors(v).iter().filter(|&u| !numbered[u]) {
            bottleneck[u] = -1;
        }
        let mut reached = Vec::new();
        loop {
            let next = (0..n)
                .filter(|&u| !done[u] && bottleneck[u] != i64::MAX)
                .min_by_key(|&u| (bottleneck[u], u));
            let Some(x) = next else { break };
            done[x] = true;
            if bottleneck[x] < label[x] {
                reached.push(x);
            }
            let through = bottleneck[x].max(label[x]);
            for y in g.neighbors(x).iter() {
                if !done[y] && through < bottleneck[y] {
                    bottleneck[y] = through;
                }
            }
        }
        for u in reached {
            label[u] += 1;
            if !g.has_edge(u, v) {
                fill.push((u.min(v), u.max(v)));
            }
        }
    }
    picked.reverse();
    fill.sort_unstable();
    Ok(FillResult {
        order: EliminationOrder(picked),
        fill,
    })
}

/// One split: `vertices` induce an atom of the graph that remained at this
/// step, and `separator` is the clique shared with what remains afterwards.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomStep {
    /// Ids in the decomposed graph, ascending.
    pub vertices: Vec<usize>,
    /// Ids in the decomposed graph, ascending. Empty on the final step.
    pub separator: Vec<usize>,
    pub atom: WeightedGraph,
}

/// Sequence of atoms split off by clique separators; the last step holds
/// the final atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomTree {
    pub n: usize,
    pub steps: Vec<AtomStep>,
}

#[derive(Serialize)]
struct StepView {
    atom: Vec<usize>,
    separator: Vec<usize>,
    edges: usize,
}

impl AtomTree {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// JSON listing each step's atom and separator by label of `g`.
    pub fn to_json(&self, g: &WeightedGraph) -> serde_json::Value {
        let steps: Vec<StepView> = self
            .steps
            .iter()
            .map(|s| StepView {
                atom: s.vertices.iter().map(|&v| g.label(v)).collect(),
                separator: s.separator.iter().map(|&v| g.label(v)).collect(),
                edges: s.atom.m(),
            })
            .collect();
        serde_json::json!({ "n": self.n, "atoms": steps })
    }
}

/// Decomposes a connected graph by clique separators.
///
/// Walks a minimal elimination ordering; whenever a vertex's later
/// neighbors in the triangulation form a clique of the original graph that
/// is a minimal separator of the remaining graph, the component holding
/// the vertex is split off together with that clique.
pub fn atom_decomposition(g: &WeightedGraph) -> Result<AtomTree, Disconnected> {
    let n = g.n();
    if n == 0 {
        return Ok(AtomTree { n, steps: Vec::new() });
    }
    let fr = mcsm(g)?;
    let filled = fr.filled_graph(g);
    let pos = fr.order.positions();
    let mut remaining = g.vertices();
    let mut steps = Vec::new();
    for &x in &fr.order.0 {
        if !remaining.contains(x) {
            continue;
        }
        let mut sep = VertexSet::new(n);
        for u in filled.neighbors(x).iter().filter(|&u| pos[u] > pos[x]) {
            if remaining.contains(u) {
                sep.insert(u);
            }
        }
        if sep.is_empty() || !g.is_clique(&sep).expect("in range") {
            continue;
        }
        let rest = remaining.difference(&sep);
        let comp = g.reach(x, &rest);
        if comp.len() == rest.len() || !is_full(g, &comp, &sep) {
            continue;
        }
        // a minimal separator also has a full component on the far side;
        // without one the split would only produce a redundant atom
        let far = rest.difference(&comp);
        if !g.components_within(&far).iter().any(|c| is_full(g, c, &sep)) {
            continue;
        }
        let atom_set = comp.union(&sep);
        let vertices = atom_set.to_vec();
        steps.push(AtomStep {
            atom: g.induced(&vertices),
            vertices,
            separator: sep.to_vec(),
        });
        remaining.difference_with(&comp);
    }
    let vertices = remaining.to_vec();
    steps.push(AtomStep {
        atom: g.induced(&vertices),
        vertices,
        separator: Vec::new(),
    });
    Ok(AtomTree { n, steps })
}

fn is_full(g: &WeightedGraph, comp: &VertexSet, sep: &VertexSet) -> bool {
    sep.is_subset(&g.neighborhood_of_set(comp).expect("in range"))
}

struct Folded {
    separator: Vec<usize>,
    without_separator: VertexSet,
    with_vertex: Vec<(usize, VertexSet)>,
}

fn solve_part(
    g: &WeightedGraph,
    ids: &[usize],
    weights: &[Weight],
    atom_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome,
) -> SolveOutcome {
    let sub = g.induced_reweighted(ids, weights);
    Ok(atom_solver(&sub)?.lift(g.n(), ids))
}

/// Combines atom optima into an optimum of the whole graph.
///
/// Steps are consumed in order. For an atom `A` with separator clique `Q`
/// against the remainder `R`, an independent set meets `Q` in at most one
/// vertex and `Q` separates, so with `a0 = α(A \ Q)` and
/// `a(q) = w(q) + α(A \ N[q])` the optimum of `A ∪ R` is `a0` plus the
/// optimum of `R` after reweighting each `q` to `a(q) - a0` (dropping `q`
/// when that is not positive). The chosen set is rebuilt in reverse by
/// splicing in the atom-side set matching the remainder's choice on `Q`.
///
/// `atom_solver` is only ever handed induced subgraphs of atoms.
pub fn fold_mwis(
    g: &WeightedGraph,
    tree: &AtomTree,
    atom_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome,
) -> SolveOutcome {
    let n = g.n();
    let Some((last, splits)) = tree.steps.split_last() else {
        return Ok(SolveResult::empty(n));
    };
    let mut weights = g.weights().to_vec();
    let mut alive = g.vertices();
    let mut stats = SolveStats::default();
    let mut offset: Weight = 0;
    let mut folded = Vec::with_capacity(splits.len());

    for (i, step) in splits.iter().enumerate() {
        let tag = |e: crate::solution::SolveError| e.at(TraceFrame::FoldStep { index: i });
        stats.atoms += 1;
        let atom: Vec<usize> = step.vertices.iter().copied().filter(|&v| alive.contains(v)).collect();
        let sep: Vec<usize> = step.separator.iter().copied().filter(|&v| alive.contains(v)).collect();
        let sep_set = VertexSet::from_ids(n, sep.iter().copied());
        let inner: Vec<usize> = atom.iter().copied().filter(|&v| !sep_set.contains(v)).collect();

        let base = solve_part(g, &inner, &weights, atom_solver).map_err(tag)?;
        stats += base.stats;
        let mut with_vertex = Vec::with_capacity(sep.len());
        let mut gains = Vec::with_capacity(sep.len());
        for &q in &sep {
            let ids: Vec<usize> = inner.iter().copied().filter(|&v| !g.has_edge(q, v)).collect();
            let mut r = solve_part(g, &ids, &weights, atom_solver).map_err(tag)?;
            stats += r.stats;
            r.chosen.insert(q);
            gains.push(weights[q] + r.weight);
            with_vertex.push((q, r.chosen));
        }
        offset += base.weight;
        for (&q, &gain) in sep.iter().zip(&gains) {
            if gain > base.weight {
                weights[q] = gain - base.weight;
            } else {
                alive.remove(q);
            }
        }
        for &v in &inner {
            alive.remove(v);
        }
        folded.push(Folded {
            separator: sep,
            without_separator: base.chosen,
            with_vertex,
        });
    }

    stats.atoms += 1;
    let ids: Vec<usize> = last.vertices.iter().copied().filter(|&v| alive.contains(v)).collect();
    let top =
        solve_part(g, &ids, &weights, atom_solver).map_err(|e| e.at(TraceFrame::FoldStep { index: splits.len() }))?;
    stats += top.stats;
    let folded_weight = offset + top.weight;
    let mut chosen = top.chosen;
    for f in folded.iter().rev() {
        let hit = f.separator.iter().position(|&q| chosen.contains(q));
        match hit {
            Some(j) => chosen.union_with(&f.with_vertex[j].1),
            None => chosen.union_with(&f.without_separator),
        }
    }
    let r = SolveResult::from_set(g, chosen, stats);
    debug_assert_eq!(r.weight, folded_weight, "fold bookkeeping drifted");
    Ok(r)
}

/// Runs `atom_solver` through a clique-separator decomposition of every
/// connected component and sums the results.
pub fn solve_by_atoms(g: &WeightedGraph, atom_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome) -> SolveOutcome {
    let mut chosen = g.empty_set();
    let mut stats = SolveStats::default();
    for (i, comp) in g.components().into_iter().enumerate() {
        let ids = comp.to_vec();
        let sub = g.induced(&ids);
        let tree = atom_decomposition(&sub).expect("components are connected");
        let r = fold_mwis(&sub, &tree, atom_solver).map_err(|e| e.at(TraceFrame::Component { index: i }))?;
        stats += r.stats;
        chosen.union_with(&r.lift(g.n(), &ids).chosen);
    }
    Ok(SolveResult::from_set(g, chosen, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::is_chordal;
    use crate::solver::oracle_mwis;

    fn g(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::unit(n, edges).unwrap()
    }

    fn cycle(n: usize) -> WeightedGraph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        g(n, &e)
    }

    fn bowtie() -> WeightedGraph {
        g(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    }

    #[test]
    fn mcsm_examples() {
        let p4 = g(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(mcsm(&p4).unwrap().fill.is_empty());
        assert!(mcsm(&bowtie()).unwrap().fill.is_empty());
        let c4 = mcsm(&cycle(4)).unwrap();
        assert_eq!(c4.fill.len(), 1);
        assert!(is_chordal(&c4.filled_graph(&cycle(4))));
        let c5 = mcsm(&cycle(5)).unwrap();
        assert_eq!(c5.fill.len(), 2);
        assert!(is_chordal(&c5.filled_graph(&cycle(5))));
        assert_eq!(mcsm(&g(2, &[])), Err(Disconnected));
    }

    #[test]
    fn decomposition_examples() {
        let t = atom_decomposition(&bowtie()).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.steps[0].separator, vec![2]);
        assert!(t.steps.iter().all(|s| s.vertices.len() == 3));
        assert!(t.steps.last().unwrap().separator.is_empty());

        let t = atom_decomposition(&cycle(4)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.steps[0].vertices, vec![0, 1, 2, 3]);

        let k5 = g(
            5,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (0, 4),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 3),
                (2, 4),
                (3, 4),
            ],
        );
        assert_eq!(atom_decomposition(&k5).unwrap().len(), 1);
    }

    #[test]
    fn fold_examples() {
        let mut oracle = |h: &WeightedGraph| oracle_mwis(h);
        let bt = bowtie();
        let r = fold_mwis(&bt, &atom_decomposition(&bt).unwrap(), &mut oracle).unwrap();
        assert_eq!(r.weight, 2);
        assert!(r.verify(&bt) && !r.chosen.contains(2));

        let c5 = cycle(5);
        let t = atom_decomposition(&c5).unwrap();
        let (r, o) = (fold_mwis(&c5, &t, &mut oracle).unwrap(), oracle_mwis(&c5).unwrap());
        assert_eq!((r.weight, r.chosen), (o.weight, o.chosen));

        let p3 = g(3, &[(0, 1), (1, 2)]);
        let r = fold_mwis(&p3, &atom_decomposition(&p3).unwrap(), &mut oracle).unwrap();
        assert_eq!(r.weight, 2);
        assert!(r.verify(&p3));
    }

    #[test]
    fn fold_prefers_heavy_separator() {
        // the cut vertex outweighs both wings
        let bt = WeightedGraph::new(5, &bowtie().edges(), vec![1, 1, 10, 1, 1]).unwrap();
        let r = solve_by_atoms(&bt, &mut |h| oracle_mwis(h)).unwrap();
        assert_eq!((r.weight, r.chosen.to_vec()), (10, vec![2]));
    }
}
