//! Size/time tables for the main solver on generated instances.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::generators::{generate, Family, GenError, GenSpec};
use crate::graph::Weight;
use crate::solution::{SolveError, SolveStats};
use crate::solver::solve_p6_banner;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub weight: Weight,
    pub seconds: f64,
    pub stats: SolveStats,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// One generated instance per size, solved with the (P6, banner)-free layer.
pub fn bench(family: &Family, sizes: &[usize], p: f64, seed: u64) -> Result<Vec<BenchRow>, BenchError> {
    sizes
        .iter()
        .map(|&n| {
            let g = generate(&GenSpec::new(family.clone(), n, p, seed).weighted(1, 100))?;
            let start = Instant::now();
            let r = solve_p6_banner(&g)?;
            let took: Duration = start.elapsed();
            Ok(BenchRow {
                n: g.n(),
                m: g.m(),
                weight: r.weight,
                seconds: took.as_secs_f64(),
                stats: r.stats,
            })
        })
        .collect()
}

pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>6} {:>7} {:>9} {:>10} {:>8} {:>9}",
        "n", "m", "weight", "seconds", "atoms", "pivots"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:>6} {:>7} {:>9} {:>10.4} {:>8} {:>9}",
            r.n, r.m, r.weight, r.seconds, r.stats.atoms, r.stats.pivots
        );
    }
    s
}
