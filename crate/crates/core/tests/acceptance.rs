//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails. Counterexamples are written under the cargo target
//! temp directory.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mwis_core::atoms::{atom_decomposition, fold_mwis};
use mwis_core::audit::{audit_graph, audit_lemmas, ClaimSuite, LemmaOutcome};
use mwis_core::bench::{bench, bench_table};
use mwis_core::chordal::is_chordal;
use mwis_core::fuzz::trial_spec;
use mwis_core::generators::{gen_glued, generate, Class, Family, GenSpec};
use mwis_core::io::{emit_instance, parse_instance, ResultEnvelope};
use mwis_core::modular::{is_module, md_tree, mwis_via_md, MdKind};
use mwis_core::pattern::{find_induced_containing, has_clique_cutset_bruteforce, is_free, Pattern};
use mwis_core::solver::{auto_solve, oracle_mwis, solve_layer_with, Mode, Solver};
use mwis_core::{Layer, SolveOutcome, VertexSet, WeightedGraph};

use common::{brute_has_clique_cutset, brute_is_module, brute_is_prime, brute_mwis};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn save(tag: &str, g: &WeightedGraph, note: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("counterexample-{tag}.mwis"));
    std::fs::write(&path, format!("c {note}\n{}", emit_instance(g))).expect("writable temp dir");
    path
}

/// Oracle agreement of `layer` on `trials` in-class instances (n <= 18,
/// weights in [0, 100]). The returned set must be independent and weigh
/// what the solver claims, and both exhaustive references must agree.
fn layer_trials(layer: Layer, trials: u64, seed: u64) -> Verdict {
    let solver = Solver::default();
    let (mut fallbacks, mut alpha2, mut max_n, mut nontrivial) = (0, 0, 0, 0);
    for i in 0..trials {
        let spec = trial_spec(layer, i, 18, seed);
        let g = generate(&spec).map_err(|e| format!("trial {i}: {e}"))?;
        let in_class = match &spec.family {
            Family::Chordal => is_chordal(&g),
            Family::Filtered(c) | Family::Grown(c) => is_free(&g, c.forbidden()).unwrap().free,
            _ => unreachable!("layer trials use class families"),
        };
        if !in_class {
            return Err(format!("trial {i}: generator left the class ({spec})"));
        }
        let oracle = oracle_mwis(&g).unwrap().weight;
        let brute = brute_mwis(&g);
        let r = solver.solve(layer, &g);
        let ok = matches!(&r, Ok(r) if r.weight == oracle && r.verify(&g)) && oracle == brute;
        if !ok {
            let path = save(&format!("{layer}-{i}"), &g, &format!("{spec}"));
            return Err(format!(
                "trial {i}: oracle {oracle}, brute force {brute}, {layer} {:?}; saved {}",
                r.map(|r| r.weight),
                path.display()
            ));
        }
        let stats = r.unwrap().stats;
        fallbacks += stats.oracle_fallbacks;
        alpha2 += stats.alpha2_solves;
        max_n = max_n.max(g.n());
        nontrivial += u64::from(g.n() >= 8 && g.m() > 0);
    }
    Ok(format!(
        "{trials}/{trials} agree (largest n {max_n}, {nontrivial} with n>=8; oracle fallbacks {fallbacks}, alpha<=2 solves {alpha2})"
    ))
}

fn criterion_1() -> Verdict {
    layer_trials(Layer::L4, 500, 1)
}

fn criterion_2() -> Verdict {
    let mut parts = Vec::new();
    for layer in [Layer::L1, Layer::L2, Layer::L3, Layer::Chordal] {
        parts.push(format!(
            "{layer}: {}",
            layer_trials(layer, 300, 2).map_err(|e| format!("{layer}: {e}"))?
        ));
    }
    Ok(parts.join("; "))
}

fn random_graph(n: usize, seed: u64) -> WeightedGraph {
    let p = 0.15 + (seed % 7) as f64 * 0.1;
    generate(&GenSpec::new(Family::Gnp, n, p, seed).weighted(0, 100)).unwrap()
}

fn criterion_3() -> Verdict {
    let mut oracle = |h: &WeightedGraph| -> SolveOutcome { oracle_mwis(h) };
    let mut connected = 0;
    let mut multi_atom = 0;
    let mut seed = 0;
    while connected < 300 {
        seed += 1;
        let g = random_graph(2 + (seed as usize % 13), seed);
        if !g.is_connected() {
            continue;
        }
        connected += 1;
        let tree = atom_decomposition(&g).unwrap();
        multi_atom += usize::from(tree.len() > 1);
        let r = fold_mwis(&g, &tree, &mut oracle).unwrap();
        let want = brute_mwis(&g);
        if r.weight != want || !r.verify(&g) {
            let path = save(&format!("fold-{seed}"), &g, "fold mismatch");
            return Err(format!("fold gave {} vs {want}; saved {}", r.weight, path.display()));
        }
    }
    let mut with_prime = 0;
    for seed in 0..100 {
        let g = random_graph(1 + (seed as usize % 14), 10_000 + seed);
        let r = mwis_via_md(&g, &mut oracle).unwrap();
        let want = brute_mwis(&g);
        if r.weight != want || !r.verify(&g) {
            let path = save(&format!("md-{seed}"), &g, "md mismatch");
            return Err(format!("md gave {} vs {want}; saved {}", r.weight, path.display()));
        }
        with_prime += usize::from(md_tree(&g).is_some_and(|t| t.walk().iter().any(|n| n.kind == MdKind::Prime)));
    }
    Ok(format!(
        "fold 300/300 ({multi_atom} with several atoms), md 100/100 ({with_prime} with prime nodes)"
    ))
}

fn prime_instance(class: &str, i: u64) -> WeightedGraph {
    let n = 6 + (i as usize % 11);
    let p = 0.2 + (i % 7) as f64 * 0.1;
    let family = Family::Prime(class.parse::<Class>().unwrap());
    generate(&GenSpec::new(family, n, p, 40_000 + i)).unwrap()
}

/// A prime graph from `forbidden`-free growth around a planted `h` on
/// vertices 0..5, with vertex 5 kept away from it. Vertex 6 links 5 to `h`.
/// `None` if the result is not prime.
fn planted(h: &Pattern, forbidden: &[Pattern], n: usize, seed: u64) -> Option<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = h.edges();
    let p = rng.gen_range(0.2..0.6);
    for x in 6..n {
        let accepted = (0..50).find_map(|_| {
            let nbrs: Vec<usize> = if x == 6 {
                let mut s: Vec<usize> = (0..5).filter(|_| rng.gen_bool(0.5)).collect();
                if s.is_empty() {
                    s.push(rng.gen_range(0..5));
                }
                s.push(5);
                s
            } else {
                (0..x).filter(|_| rng.gen_bool(p)).collect()
            };
            let mut trial = edges.clone();
            trial.extend(nbrs.iter().map(|&u| (u, x)));
            let g = WeightedGraph::unit(x + 1, &trial).unwrap();
            let clean = forbidden
                .iter()
                .all(|f| find_induced_containing(&g, f, x).unwrap().is_none());
            clean.then_some(trial)
        })?;
        edges = accepted;
    }
    let weights = (0..n).map(|_| rng.gen_range(0..=100)).collect();
    let g = WeightedGraph::new(n, &edges, weights).unwrap();
    brute_is_prime(&g).then_some(g)
}

fn criterion_4() -> Verdict {
    const INSTANCES: u64 = 100;
    let mut line = Vec::new();

    for (class, lemma) in [("banner-house", "C4"), ("banner", "K23")] {
        for i in 0..INSTANCES {
            let g = prime_instance(class, i);
            if !brute_is_prime(&g) {
                return Err(format!("{class} #{i}: generator output is not prime"));
            }
            let r = audit_lemmas(&g);
            let outcome = if lemma == "C4" { &r.c4_free } else { &r.k23_free };
            if *outcome != LemmaOutcome::Holds {
                let path = save(&format!("lemma-{lemma}-{i}"), &g, &format!("{outcome:?}"));
                return Err(format!(
                    "{lemma} lemma on {class} #{i}: {outcome:?}; saved {}",
                    path.display()
                ));
            }
        }
        line.push(format!("{lemma}-freeness {INSTANCES}/{INSTANCES}"));
    }

    for (class, kind) in [("p6-banner-c5", "house"), ("p6-banner", "C5")] {
        let (mut embeddings, mut atoms, mut with_pivot) = (0, 0, 0);
        for i in 0..INSTANCES {
            let g = prime_instance(class, i);
            let r = audit_graph(&g, None).unwrap();
            let suite = if kind == "house" { &r.house_claims } else { &r.c5_claims };
            let nearly_ok = r.atoms.iter().all(|a| {
                let v = if kind == "house" {
                    a.nearly_house_free
                } else {
                    a.nearly_c5_free
                };
                v == Some(true)
            });
            let claims_ok = matches!(suite, ClaimSuite::NoPivot | ClaimSuite::Audited { .. }) && !suite.is_violation();
            if !nearly_ok || !claims_ok || r.has_violation() || r.atoms.is_empty() {
                let path = save(&format!("audit-{kind}-{i}"), &g, "audit failure");
                return Err(format!(
                    "{kind} audit on {class} #{i} failed:\n{}saved {}",
                    r.to_text(&g),
                    path.display()
                ));
            }
            atoms += r.atoms.len();
            if let ClaimSuite::Audited { embeddings: e, .. } = suite {
                embeddings += e;
                with_pivot += 1;
            }
        }
        let (h, forbidden) = if kind == "house" {
            (Pattern::house(), vec![Pattern::p6(), Pattern::banner(), Pattern::c5()])
        } else {
            (Pattern::c5(), vec![Pattern::p6(), Pattern::banner()])
        };
        let (mut planted_ok, mut seed) = (0, 0);
        while planted_ok < INSTANCES {
            seed += 1;
            if seed > 20_000 {
                return Err(format!(
                    "only {planted_ok} planted prime {kind} instances in 20000 attempts"
                ));
            }
            let Some(g) = planted(&h, &forbidden, 8 + (seed as usize % 9), 50_000 + seed) else {
                continue;
            };
            planted_ok += 1;
            let r = audit_graph(&g, None).unwrap();
            let suite = if kind == "house" { &r.house_claims } else { &r.c5_claims };
            let ClaimSuite::Audited { embeddings: e, .. } = suite else {
                return Err(format!("planted {kind} #{seed}: claims not audited ({suite:?})"));
            };
            if suite.is_violation() || r.has_violation() {
                let path = save(&format!("planted-{kind}-{seed}"), &g, "audit failure");
                return Err(format!(
                    "planted {kind} #{seed} failed:\n{}saved {}",
                    r.to_text(&g),
                    path.display()
                ));
            }
            embeddings += e;
            atoms += r.atoms.len();
            with_pivot += 1;
        }
        line.push(format!(
            "{kind} audit {INSTANCES}/{INSTANCES} random + {INSTANCES}/{INSTANCES} planted ({atoms} atoms nearly {kind}-free, claims on {embeddings} embeddings in {with_pivot} graphs)"
        ));
    }
    Ok(line.join("; "))
}

fn check_atoms(g: &WeightedGraph) -> Result<usize, String> {
    let mut checked = 0;
    for comp in g.components() {
        let ids = comp.to_vec();
        let sub = g.induced(&ids);
        let tree = atom_decomposition(&sub).unwrap();
        let mut remaining = sub.vertices();
        let mut covered = VertexSet::new(sub.n());
        for (k, step) in tree.steps.iter().enumerate() {
            let atom = VertexSet::from_ids(sub.n(), step.vertices.iter().copied());
            let sep = VertexSet::from_ids(sub.n(), step.separator.iter().copied());
            covered.union_with(&atom);
            if !sub.is_clique(&sep).unwrap() {
                return Err(format!("step {k}: separator {:?} is not a clique", step.separator));
            }
            let inner = atom.difference(&sep);
            let rest = remaining.difference(&atom);
            if k + 1 < tree.len() {
                let touching = inner.iter().any(|v| sub.neighbors(v).intersects(&rest));
                if inner.is_empty() || rest.is_empty() || touching {
                    return Err(format!("step {k}: separator {:?} does not separate", step.separator));
                }
            }
            if step.atom.n() <= 16 {
                let lib = has_clique_cutset_bruteforce(&step.atom).unwrap();
                if lib.is_some() || brute_has_clique_cutset(&step.atom) {
                    return Err(format!("step {k}: atom {:?} has a clique cutset", step.vertices));
                }
                checked += 1;
            }
            remaining.difference_with(&inner);
        }
        if covered != sub.vertices()
            || sub.edges().iter().any(|&(u, v)| {
                !tree
                    .steps
                    .iter()
                    .any(|s| s.vertices.contains(&u) && s.vertices.contains(&v))
            })
        {
            return Err("atoms do not cover every vertex and edge".into());
        }
    }
    Ok(checked)
}

fn check_md(g: &WeightedGraph) -> Result<usize, String> {
    let Some(root) = md_tree(g) else { return Ok(0) };
    let mut quotients = 0;
    for node in root.walk() {
        for c in &node.children {
            if !is_module(g, &c.vertices).unwrap() {
                return Err(format!("child {:?} is not a module", c.vertices));
            }
            let mask = c.vertices.iter().fold(0u64, |m, v| m | 1 << v);
            if g.n() <= 24 && !brute_is_module(g, mask) {
                return Err(format!("brute force rejects module {:?}", c.vertices));
            }
        }
        if node.kind == MdKind::Prime {
            let q = node.quotient.as_ref().expect("internal nodes carry quotients");
            if q.n() <= 12 {
                if !brute_is_prime(q) {
                    return Err(format!("prime quotient of {:?} has a nontrivial module", node.vertices));
                }
                quotients += 1;
            }
        }
    }
    Ok(quotients)
}

fn criterion_5() -> Verdict {
    let mut graphs: Vec<WeightedGraph> = (0..150)
        .map(|s| random_graph(3 + (s as usize % 14), 20_000 + s))
        .collect();
    graphs.extend((0..60).map(|s| gen_glued(&GenSpec::new(Family::Glued, 2 + (s as usize % 4), 0.5, s)).graph));
    graphs.extend((0..90).map(|i| generate(&trial_spec(Layer::L4, i, 16, 5)).unwrap()));
    let (mut atoms, mut quotients) = (0, 0);
    for (i, g) in graphs.iter().enumerate() {
        let fail = |e: String| {
            let path = save(&format!("decomposition-{i}"), g, &e);
            format!("graph {i}: {e}; saved {}", path.display())
        };
        atoms += check_atoms(g).map_err(fail)?;
        quotients += check_md(g).map_err(fail)?;
    }
    Ok(format!(
        "{} graphs: {atoms} atoms cutset-free, separators cliques, md children modules, {quotients} prime quotients brute-force prime",
        graphs.len()
    ))
}

fn criterion_6() -> Verdict {
    let class: Class = "p6-banner".parse().unwrap();
    let spec = GenSpec::new(Family::Grown(class.clone()), 200, 0.5, 6).weighted(1, 100);
    let g = generate(&spec).unwrap();
    if g.n() != 200 {
        return Err(format!("generated {} vertices", g.n()));
    }
    let start = Instant::now();
    let r = solve_layer_with(&Solver::default(), &g, Layer::L4, Mode::Permissive).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    if !r.result.verify(&g) {
        return Err("invalid solution".into());
    }
    if took >= Duration::from_secs(60) {
        return Err(format!("n=200 took {took:?}"));
    }
    let rows = bench(&Family::Grown(class), &[25, 50, 100], 0.5, 6).map_err(|e| e.to_string())?;
    let table = bench_table(&rows);
    Ok(format!(
        "n=200, m={} solved in {:.3}s (weight {})\n{}",
        g.m(),
        took.as_secs_f64(),
        r.result.weight,
        table.trim_end()
    ))
}

fn envelope_bytes(spec: &GenSpec) -> String {
    let g = generate(spec).unwrap();
    let g = parse_instance(emit_instance(&g).as_bytes()).unwrap();
    let a = auto_solve(&g, Mode::Permissive).unwrap();
    let strict = auto_solve(&g, Mode::Strict).ok();
    let env = ResultEnvelope::new(&g, &a.result, a.layer, a.certification, None).unwrap();
    let mut out = env.to_json();
    if let Some(s) = strict {
        out.push_str(
            &ResultEnvelope::new(&g, &s.result, s.layer, s.certification, None)
                .unwrap()
                .to_json(),
        );
    }
    out
}

fn criterion_7() -> Verdict {
    let families = ["p6-banner", "grown:p6-banner", "chordal", "prime:p6-banner", "gnp"];
    let mut count = 0;
    for fam in families {
        for seed in 0..10 {
            let spec = GenSpec::new(fam.parse().unwrap(), 14, 0.4, seed).weighted(0, 100);
            let (a, b) = (envelope_bytes(&spec), envelope_bytes(&spec));
            if a != b {
                return Err(format!("{spec}: envelopes differ"));
            }
            count += 1;
        }
    }
    Ok(format!("{count} regenerated instances gave byte-identical envelopes"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("oracle equivalence, (P6, banner)-free layer", criterion_1),
        ("oracle equivalence per layer", criterion_2),
        ("fold and modular combination", criterion_3),
        ("structural lemma and claim audits", criterion_4),
        ("decomposition certificates", criterion_5),
        ("n=200 performance", criterion_6),
        ("determinism", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {} [{name}]: PASS in {secs:.1}s: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} [{name}]: FAIL in {secs:.1}s: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 7 criteria passed");
}
