//! Randomized comparison of a solver layer against the exhaustive oracle
//! on generated instances of that layer's class.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chordal::is_chordal;
use crate::generators::{generate, Class, Family, GenSpec};
use crate::graph::{Weight, WeightedGraph};
use crate::pattern::is_free;
use crate::solution::Layer;
use crate::solver::{oracle_mwis, Solver};

/// The class a layer is trusted on, as a generator class name; `None` for
/// the chordal layer (its own generator) and the oracle (anything).
pub fn layer_class(layer: Layer) -> Option<&'static str> {
    match layer {
        Layer::L1 => Some("p6c4"),
        Layer::L2 => Some("p6-banner-house"),
        Layer::L3 => Some("p6-banner-c5"),
        Layer::L4 => Some("p6-banner"),
        Layer::Chordal | Layer::Oracle => None,
    }
}

/// The generator spec for trial `index` of a run seeded with `seed`: size
/// in `1..=nmax`, density in `[0.1, 0.9]`, weights in `[0, 100]`, and for
/// class layers alternately witness-deletion and grown instances.
pub fn trial_spec(layer: Layer, index: u64, nmax: usize, seed: u64) -> GenSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let n = rng.gen_range(1..=nmax.max(1));
    let p = rng.gen_range(0.1..=0.9);
    let family = match layer_class(layer) {
        Some(c) => {
            let class: Class = c.parse().expect("known class");
            if index.is_multiple_of(2) {
                Family::Filtered(class)
            } else {
                Family::Grown(class)
            }
        }
        None if layer == Layer::Chordal => Family::Chordal,
        None => Family::Gnp,
    };
    GenSpec::new(family, n, p, rng.gen()).weighted(0, 100)
}

/// Instance plus what went wrong on it.
#[derive(Debug, Clone)]
pub struct Mismatch {
    pub trial: u64,
    pub spec: GenSpec,
    pub graph: WeightedGraph,
    pub expected: Weight,
    /// Layer weight, or the error it raised.
    pub got: Result<Weight, String>,
}

#[derive(Debug, Clone, Default)]
pub struct FuzzSummary {
    pub trials: u64,
    pub max_n: usize,
    pub oracle_fallbacks: u64,
    pub alpha2_solves: u64,
}

/// Runs `trials` seeded trials in order and stops at the first mismatch.
pub fn fuzz(layer: Layer, trials: u64, nmax: usize, seed: u64) -> Result<FuzzSummary, Box<Mismatch>> {
    let solver = Solver::default();
    let mut summary = FuzzSummary::default();
    for i in 0..trials {
        let spec = trial_spec(layer, i, nmax, seed);
        let g = generate(&spec).expect("fuzz specs are generable");
        if let Some(c) = layer_class(layer) {
            let class: Class = c.parse().expect("known class");
            assert!(
                is_free(&g, class.forbidden()).expect("catalog").free,
                "generator left the class: {spec}"
            );
        } else if layer == Layer::Chordal {
            assert!(is_chordal(&g), "generator left the class: {spec}");
        }
        let expected = oracle_mwis(&g).expect("nmax within the oracle cap").weight;
        let got = solver.solve(layer, &g);
        let ok = matches!(&got, Ok(r) if r.weight == expected && r.verify(&g));
        if !ok {
            return Err(Box::new(Mismatch {
                trial: i,
                spec,
                graph: g,
                expected,
                got: got.map(|r| r.weight).map_err(|e| e.to_string()),
            }));
        }
        let stats = got.expect("checked").stats;
        summary.trials += 1;
        summary.max_n = summary.max_n.max(g.n());
        summary.oracle_fallbacks += stats.oracle_fallbacks;
        summary.alpha2_solves += stats.alpha2_solves;
    }
    Ok(summary)
}
