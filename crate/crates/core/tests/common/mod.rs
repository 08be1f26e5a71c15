//! Brute-force references shared by the integration tests. Nothing here
//! calls the library's own solvers or decompositions.
#![allow(dead_code)]

use mwis_core::{Weight, WeightedGraph};

fn masks(g: &WeightedGraph) -> Vec<u64> {
    assert!(g.n() <= 24, "brute force is for small graphs");
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, u| m | 1 << u))
        .collect()
}

/// Maximum weight over every independent set, by plain enumeration.
pub fn brute_mwis(g: &WeightedGraph) -> Weight {
    fn go(v: usize, allowed: u64, nbr: &[u64], w: &[Weight]) -> Weight {
        if v == nbr.len() {
            return 0;
        }
        let skip = go(v + 1, allowed, nbr, w);
        if allowed >> v & 1 == 1 {
            skip.max(w[v] + go(v + 1, allowed & !nbr[v], nbr, w))
        } else {
            skip
        }
    }
    let nbr = masks(g);
    go(0, u64::MAX, &nbr, g.weights())
}

/// No outside vertex sees some but not all of `m`.
pub fn brute_is_module(g: &WeightedGraph, m: u64) -> bool {
    let nbr = masks(g);
    (0..g.n()).filter(|&x| m >> x & 1 == 0).all(|x| {
        let seen = nbr[x] & m;
        seen == 0 || seen == m
    })
}

/// Only trivial modules, checked over every vertex subset.
pub fn brute_is_prime(g: &WeightedGraph) -> bool {
    let n = g.n();
    assert!(n <= 16);
    let full = (1u64 << n) - 1;
    (1..full)
        .filter(|m: &u64| m.count_ones() >= 2)
        .all(|m| !brute_is_module(g, m))
}

/// Some clique whose removal disconnects the graph.
pub fn brute_has_clique_cutset(g: &WeightedGraph) -> bool {
    let n = g.n();
    let nbr = masks(g);
    let full = (1u64 << n) - 1;
    (0..full).any(|s| {
        let clique = (0..n)
            .filter(|&v| s >> v & 1 == 1)
            .all(|v| s & !(1 << v) & !nbr[v] == 0);
        let rest = full & !s;
        clique && rest != 0 && !connected(&nbr, rest)
    })
}

pub fn connected(nbr: &[u64], within: u64) -> bool {
    if within == 0 {
        return true;
    }
    let mut seen = 1u64 << within.trailing_zeros();
    loop {
        let mut next = seen;
        for (v, &nb) in nbr.iter().enumerate() {
            if seen >> v & 1 == 1 {
                next |= nb & within;
            }
        }
        if next == seen {
            return seen == within;
        }
        seen = next;
    }
}

/// Whether `g` has an induced copy of the graph on `k` vertices with the
/// given edges, by trying every injective map.
pub fn brute_contains(g: &WeightedGraph, k: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![vec![false; k]; k];
    for &(a, b) in edges {
        adj[a][b] = true;
        adj[b][a] = true;
    }
    fn go(g: &WeightedGraph, adj: &[Vec<bool>], map: &mut Vec<usize>) -> bool {
        let i = map.len();
        if i == adj.len() {
            return true;
        }
        for c in 0..g.n() {
            if map.contains(&c) || (0..i).any(|j| g.has_edge(map[j], c) != adj[i][j]) {
                continue;
            }
            map.push(c);
            if go(g, adj, map) {
                return true;
            }
            map.pop();
        }
        false
    }
    go(g, &adj, &mut Vec::new())
}
