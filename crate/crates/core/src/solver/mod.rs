//! The layered MWIS solvers.
//!
//! | layer   | trusted class               | route                                              |
//! |---------|-----------------------------|----------------------------------------------------|
//! | chordal | chordal                     | two-sweep elimination-order solve                  |
//! | L1      | (P6, C4)-free               | atoms, each nearly chordal                         |
//! | L2      | (P6, banner, house)-free    | prime quotients are (P6, C4)-free, solved by L1    |
//! | L3      | (P6, banner, C5)-free       | prime quotients, atoms nearly house-free, L2 below |
//! | L4      | (P6, banner)-free           | prime quotients, atoms nearly C5-free, L3 below    |
//!
//! Every layer stays exact outside its class: L1 falls back to the
//! independence-number-two rule and then to the oracle on non-chordal pieces,
//! so a false class assumption costs time (or hits the oracle's size cap)
//! but never produces a wrong answer.

mod oracle;

pub use oracle::{oracle_mwis, oracle_mwis_capped, ORACLE_CAP};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::atoms::solve_by_atoms;
use crate::chordal::{frank_mwis, is_chordal};
use crate::graph::{VertexSet, WeightedGraph};
use crate::modular::mwis_via_md;
use crate::pattern::{find_induced, is_free_sampled, Pattern, PatternWitness};
use crate::solution::{Layer, SolveError, SolveErrorKind, SolveOutcome, SolveResult, SolveStats, TraceFrame};

/// Largest graph whose class membership `auto_solve` certifies exhaustively.
pub const CERTIFY_CAP: usize = 60;

/// Knobs shared by every layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Size cap for the oracle fallback inside L1.
    pub oracle_cap: usize,
    /// Search every prime quotient reaching L2 for an induced C4, and report
    /// one as a class violation instead of quietly solving around it.
    pub check_lemmas: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            oracle_cap: ORACLE_CAP,
            check_lemmas: false,
        }
    }
}

/// Best solution over all pivots `v` of `w(v) + c_solver(H \ N[v])`, or the
/// empty set. Any nonempty independent set contains some pivot and avoids
/// that pivot's neighborhood, so this is exact whenever `c_solver` is exact
/// on each `H \ N[v]`.
///
/// Pivots run in ascending id order. A pivot is skipped when it has zero
/// weight (some other member of its set is a pivot too) or when even the
/// total weight of `H \ N[v]` cannot beat the incumbent.
pub fn nearly_c_mwis(h: &WeightedGraph, c_solver: &mut dyn FnMut(&WeightedGraph) -> SolveOutcome) -> SolveOutcome {
    let n = h.n();
    let mut best = SolveResult::empty(n);
    let mut stats = SolveStats {
        nearly_c_calls: 1,
        ..SolveStats::default()
    };
    for v in 0..n {
        let wv = h.weight(v);
        if wv == 0 {
            continue;
        }
        let mut rest = h.neighbors(v).complement();
        rest.remove(v);
        let room: u64 = rest.iter().map(|u| h.weight(u)).sum();
        if wv + room <= best.weight {
            continue;
        }
        stats.pivots += 1;
        let ids = rest.to_vec();
        let sub = h.induced(&ids);
        let r = c_solver(&sub).map_err(|e| e.at(TraceFrame::Pivot { vertex: h.label(v) }))?;
        stats += r.stats;
        if wv + r.weight > best.weight {
            let mut lifted = r.lift(n, &ids);
            lifted.chosen.insert(v);
            lifted.weight += wv;
            best = lifted;
        }
    }
    best.stats = stats;
    Ok(best)
}

/// Best single vertex or nonadjacent pair; exact when α ≤ 2.
fn best_pair(g: &WeightedGraph) -> SolveResult {
    let n = g.n();
    let mut best: Vec<usize> = Vec::new();
    let mut best_w = 0;
    for u in 0..n {
        if g.weight(u) > best_w {
            best_w = g.weight(u);
            best = vec![u];
        }
        for v in (u + 1..n).filter(|&v| !g.has_edge(u, v)) {
            if g.weight(u) + g.weight(v) > best_w {
                best_w = g.weight(u) + g.weight(v);
                best = vec![u, v];
            }
        }
    }
    SolveResult::from_set(g, VertexSet::from_ids(n, best), SolveStats::default())
}

/// Layer entry points under one configuration.
#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    pub config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Self { config }
    }

    pub fn solve(&self, layer: Layer, g: &WeightedGraph) -> SolveOutcome {
        match layer {
            Layer::Chordal => self.chordal(g),
            Layer::L1 => self.l1(g),
            Layer::L2 => self.l2(g),
            Layer::L3 => self.l3(g),
            Layer::L4 => self.l4(g),
            Layer::Oracle => oracle_mwis_capped(g, self.config.oracle_cap),
        }
    }

    pub fn chordal(&self, g: &WeightedGraph) -> SolveOutcome {
        frank_mwis(g).map_err(|e| e.at(TraceFrame::Layer { layer: Layer::Chordal }))
    }

    /// Base case under L1: chordal pieces go to the chordal solver, others
    /// to the α ≤ 2 rule or, failing that, the capped oracle.
    fn chordal_or_fallback(&self, piece: &WeightedGraph) -> SolveOutcome {
        match frank_mwis(piece) {
            Ok(r) => Ok(r),
            Err(SolveError {
                kind: SolveErrorKind::NotChordal { .. },
                ..
            }) => {
                if crate::pattern::alpha_at_most_2(piece) {
                    let mut r = best_pair(piece);
                    r.stats.alpha2_solves += 1;
                    Ok(r)
                } else {
                    let mut r = oracle_mwis_capped(piece, self.config.oracle_cap)?;
                    r.stats.oracle_fallbacks += 1;
                    Ok(r)
                }
            }
            Err(e) => Err(e),
        }
    }

    /// (P6, C4)-free graphs.
    pub fn l1(&self, g: &WeightedGraph) -> SolveOutcome {
        solve_by_atoms(g, &mut |atom| nearly_c_mwis(atom, &mut |p| self.chordal_or_fallback(p)))
            .map_err(|e| e.at(TraceFrame::Layer { layer: Layer::L1 }))
    }

    /// (P6, banner, house)-free graphs.
    pub fn l2(&self, g: &WeightedGraph) -> SolveOutcome {
        mwis_via_md(g, &mut |q| {
            if self.config.check_lemmas {
                if let Some(w) = find_induced(q, &Pattern::c4()).expect("catalog pattern") {
                    return Err(violation(
                        q,
                        "prime (banner, house)-free graphs are C4-free, but this prime quotient has an induced C4",
                        w,
                    ));
                }
            }
            self.l1(q)
        })
        .map_err(|e| e.at(TraceFrame::Layer { layer: Layer::L2 }))
    }

    /// (P6, banner, C5)-free graphs.
    pub fn l3(&self, g: &WeightedGraph) -> SolveOutcome {
        mwis_via_md(g, &mut |q| {
            solve_by_atoms(q, &mut |atom| nearly_c_mwis(atom, &mut |h| self.l2(h)))
        })
        .map_err(|e| e.at(TraceFrame::Layer { layer: Layer::L3 }))
    }

    /// (P6, banner)-free graphs.
    pub fn l4(&self, g: &WeightedGraph) -> SolveOutcome {
        mwis_via_md(g, &mut |q| {
            solve_by_atoms(q, &mut |atom| nearly_c_mwis(atom, &mut |h| self.l3(h)))
        })
        .map_err(|e| e.at(TraceFrame::Layer { layer: Layer::L4 }))
    }
}

fn violation(g: &WeightedGraph, reason: &str, w: PatternWitness) -> SolveError {
    let labels: Vec<usize> = w.vertices.iter().map(|&v| g.label(v)).collect();
    SolveError::new(SolveErrorKind::ClassViolation {
        reason: reason.to_string(),
        witness: PatternWitness {
            pattern: w.pattern,
            vertices: labels,
        },
    })
}

pub fn solve_p6c4(g: &WeightedGraph) -> SolveOutcome {
    Solver::default().l1(g)
}

pub fn solve_p6_banner_house(g: &WeightedGraph) -> SolveOutcome {
    Solver::default().l2(g)
}

pub fn solve_p6_banner_c5(g: &WeightedGraph) -> SolveOutcome {
    Solver::default().l3(g)
}

pub fn solve_p6_banner(g: &WeightedGraph) -> SolveOutcome {
    Solver::default().l4(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Certify class membership first, then run the weakest fitting layer.
    Strict,
    /// Trust the caller and run the most general layer.
    Permissive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certification {
    Exhaustive,
    /// Random probes only; not a certificate.
    Sampled,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AutoResult {
    pub result: SolveResult,
    pub layer: Layer,
    pub certification: Certification,
}

/// Which layer's class a graph belongs to, by pattern search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProfile {
    pub chordal: bool,
    pub witnesses: Vec<PatternWitness>,
    pub certification: Certification,
}

impl ClassProfile {
    fn contains(&self, name: &str) -> bool {
        self.witnesses.iter().any(|w| w.pattern == name)
    }

    /// Weakest layer whose class contains the graph.
    pub fn weakest_layer(&self) -> Option<Layer> {
        let p6 = self.contains("P6");
        let banner = self.contains("banner");
        if self.chordal {
            Some(Layer::Chordal)
        } else if !p6 && !self.contains("C4") {
            Some(Layer::L1)
        } else if !p6 && !banner && !self.contains("house") {
            Some(Layer::L2)
        } else if !p6 && !banner && !self.contains("C5") {
            Some(Layer::L3)
        } else if !p6 && !banner {
            Some(Layer::L4)
        } else {
            None
        }
    }
}

/// Forbidden patterns of each layer's class; empty for the chordal layer
/// (checked by elimination order instead) and the oracle.
pub fn layer_patterns(layer: Layer) -> Vec<Pattern> {
    match layer {
        Layer::L1 => vec![Pattern::p6(), Pattern::c4()],
        Layer::L2 => vec![Pattern::p6(), Pattern::banner(), Pattern::house()],
        Layer::L3 => vec![Pattern::p6(), Pattern::banner(), Pattern::c5()],
        Layer::L4 => vec![Pattern::p6(), Pattern::banner()],
        Layer::Chordal | Layer::Oracle => Vec::new(),
    }
}

/// Runs one named layer. Strict mode first checks membership in the
/// layer's class (exhaustively up to [`CERTIFY_CAP`] vertices, sampled
/// beyond; chordality is always exact) and rejects with a witness.
pub fn solve_layer_with(
    solver: &Solver,
    g: &WeightedGraph,
    layer: Layer,
    mode: Mode,
) -> Result<AutoResult, SolveError> {
    let mut certification = Certification::None;
    if mode == Mode::Strict && layer != Layer::Oracle {
        let family = layer_patterns(layer);
        certification = Certification::Exhaustive;
        if !family.is_empty() {
            let report = if g.n() <= CERTIFY_CAP {
                crate::pattern::is_free(g, &family)
            } else {
                certification = Certification::Sampled;
                let mut rng = ChaCha8Rng::seed_from_u64(0);
                is_free_sampled(g, &family, 200, 24, &mut rng)
            }
            .expect("catalog patterns");
            if let Some(w) = report.witnesses.into_iter().next() {
                let reason = format!("input is not in the class of layer {layer}");
                return Err(violation(g, &reason, w));
            }
        }
    }
    Ok(AutoResult {
        result: solver.solve(layer, g)?,
        layer,
        certification,
    })
}

/// Searches for every pattern that separates the layers. Exhaustive up to
/// [`CERTIFY_CAP`] vertices, sampled (deterministically seeded) beyond.
pub fn classify(g: &WeightedGraph) -> ClassProfile {
    let family = [
        Pattern::p6(),
        Pattern::banner(),
        Pattern::c4(),
        Pattern::house(),
        Pattern::c5(),
    ];
    let chordal = is_chordal(g);
    let report = if g.n() <= CERTIFY_CAP {
        crate::pattern::is_free(g, &family)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        is_free_sampled(g, &family, 200, 24, &mut rng)
    }
    .expect("catalog patterns");
    ClassProfile {
        chordal,
        certification: if report.certified {
            Certification::Exhaustive
        } else {
            Certification::Sampled
        },
        witnesses: report.witnesses,
    }
}

/// Strict mode certifies (or, above [`CERTIFY_CAP`], samples) membership and
/// dispatches the weakest layer that fits, rejecting graphs outside
/// (P6, banner)-free with a witness. Permissive mode runs L4 unchecked.
pub fn auto_solve(g: &WeightedGraph, mode: Mode) -> Result<AutoResult, SolveError> {
    auto_solve_with(&Solver::default(), g, mode)
}

pub fn auto_solve_with(solver: &Solver, g: &WeightedGraph, mode: Mode) -> Result<AutoResult, SolveError> {
    match mode {
        Mode::Permissive => Ok(AutoResult {
            result: solver.l4(g)?,
            layer: Layer::L4,
            certification: Certification::None,
        }),
        Mode::Strict => {
            let profile = classify(g);
            let Some(layer) = profile.weakest_layer() else {
                let w = profile
                    .witnesses
                    .iter()
                    .find(|w| w.pattern == "P6" || w.pattern == "banner")
                    .cloned()
                    .expect("a P6 or banner witness");
                return Err(violation(g, "input is not (P6, banner)-free", w));
            };
            Ok(AutoResult {
                result: solver.solve(layer, g)?,
                layer,
                certification: profile.certification,
            })
        }
    }
}
