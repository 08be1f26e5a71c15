//! Exhaustive branch-and-bound MWIS, the ground truth for every layer.

use crate::graph::{VertexSet, WeightedGraph};
use crate::solution::{SolveError, SolveErrorKind, SolveOutcome, SolveResult, SolveStats};

/// Hard size cap of [`oracle_mwis`].
pub const ORACLE_CAP: usize = 30;

struct Bnb<'a> {
    nbr: Vec<u64>,
    w: &'a [u64],
    // vertices by weight, heaviest first
    by_weight: Vec<usize>,
    best: u64,
    best_set: u64,
}

impl Bnb<'_> {
    /// Greedy clique cover of `cands`; the heaviest vertex of each clique
    /// bounds what that clique can contribute.
    fn bound(&self, cands: u64) -> u64 {
        let mut common: Vec<u64> = Vec::new();
        let mut total = 0;
        for &v in &self.by_weight {
            if cands >> v & 1 == 0 {
                continue;
            }
            match common.iter_mut().find(|c| **c >> v & 1 == 1) {
                Some(c) => *c &= self.nbr[v],
                None => {
                    common.push(self.nbr[v]);
                    total += self.w[v];
                }
            }
        }
        total
    }

    fn run(&mut self, mut cands: u64, mut weight: u64, mut set: u64) {
        // vertices with no candidate neighbor always join
        loop {
            let mut isolated = 0u64;
            let mut c = cands;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                if self.nbr[v] & cands == 0 {
                    isolated |= 1 << v;
                }
            }
            if isolated == 0 {
                break;
            }
            cands &= !isolated;
            set |= isolated;
            let mut c = isolated;
            while c != 0 {
                weight += self.w[c.trailing_zeros() as usize];
                c &= c - 1;
            }
        }
        if cands == 0 {
            if weight > self.best {
                self.best = weight;
                self.best_set = set;
            }
            return;
        }
        if weight + self.bound(cands) <= self.best {
            return;
        }
        // branch on the candidate with most candidate neighbors
        let mut pick = usize::MAX;
        let mut pick_deg = 0;
        let mut c = cands;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            let d = (self.nbr[v] & cands).count_ones();
            if pick == usize::MAX || d > pick_deg {
                pick = v;
                pick_deg = d;
            }
        }
        let v = pick;
        self.run(cands & !(1 << v) & !self.nbr[v], weight + self.w[v], set | 1 << v);
        self.run(cands & !(1 << v), weight, set);
    }
}

/// Exact MWIS by branch and bound, for graphs with at most `cap` (≤ 64)
/// vertices.
pub fn oracle_mwis_capped(g: &WeightedGraph, cap: usize) -> SolveOutcome {
    let n = g.n();
    let cap = cap.min(64);
    if n > cap {
        return Err(SolveError::new(SolveErrorKind::SizeCap { n, cap }));
    }
    let nbr: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u))
        .collect();
    let mut by_weight: Vec<usize> = (0..n).collect();
    by_weight.sort_by(|&a, &b| g.weight(b).cmp(&g.weight(a)).then(a.cmp(&b)));
    let mut bnb = Bnb {
        nbr,
        w: g.weights(),
        by_weight,
        best: 0,
        best_set: 0,
    };
    let all = if n == 64 { !0 } else { (1u64 << n) - 1 };
    bnb.run(all, 0, 0);
    let chosen = VertexSet::from_ids(n, (0..n).filter(|&v| bnb.best_set >> v & 1 == 1));
    Ok(SolveResult::from_set(g, chosen, SolveStats::default()))
}

/// Exact MWIS by branch and bound; rejects graphs above [`ORACLE_CAP`].
pub fn oracle_mwis(g: &WeightedGraph) -> SolveOutcome {
    oracle_mwis_capped(g, ORACLE_CAP)
}
