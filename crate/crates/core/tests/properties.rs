//! Property tests over random graphs and generated class instances.

mod common;

use mwis_core::atoms::{atom_decomposition, fold_mwis};
use mwis_core::audit::compute_asets;
use mwis_core::chordal::{frank_mwis, is_chordal, mcs_order, verify_peo};
use mwis_core::fuzz::trial_spec;
use mwis_core::generators::{generate, Family, GenSpec};
use mwis_core::io::{emit_instance, parse_instance};
use mwis_core::modular::{is_module, md_tree, mwis_via_md, MdKind};
use mwis_core::pattern::{find_all_induced, find_induced, is_free, Pattern};
use mwis_core::solver::{oracle_mwis, Solver};
use mwis_core::{Layer, SolveOutcome, VertexSet, Weight, WeightedGraph};
use proptest::prelude::*;

use common::{brute_contains, brute_mwis};

fn graph_from(n: usize, bits: &[bool], weights: &[Weight]) -> WeightedGraph {
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 0..n {
        for u in 0..v {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    WeightedGraph::new(n, &edges, weights[..n].to_vec()).unwrap()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (0..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2),
            proptest::collection::vec(0..=100u64, n),
        )
            .prop_map(move |(bits, w)| graph_from(n, &bits, &w))
    })
}

/// A generated member of the class `layer` is meant for.
fn arb_class_graph(layer: Layer, nmax: usize) -> impl Strategy<Value = WeightedGraph> {
    (any::<u64>(), 0..64u64).prop_map(move |(seed, i)| generate(&trial_spec(layer, i, nmax, seed)).unwrap())
}

fn pb() -> Vec<Pattern> {
    vec![Pattern::p6(), Pattern::banner()]
}

fn small_patterns() -> Vec<Pattern> {
    vec![
        Pattern::p4(),
        Pattern::c4(),
        Pattern::c5(),
        Pattern::house(),
        Pattern::banner(),
        Pattern::p5(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn closed_neighborhood_is_neighbors_plus_self(g in arb_graph(12)) {
        for v in 0..g.n() {
            let mut want = g.neighbors(v).clone();
            want.insert(v);
            prop_assert_eq!(g.closed_neighborhood(v).unwrap(), want);
            prop_assert!(!g.neighbors(v).contains(v));
            for u in g.neighbors(v).iter() {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn induced_composes(g in arb_graph(12), keep in any::<u64>(), keep2 in any::<u64>()) {
        let a: Vec<usize> = (0..g.n()).filter(|v| keep >> v & 1 == 1).collect();
        let ga = g.induced(&a);
        let b: Vec<usize> = (0..ga.n()).filter(|v| keep2 >> v & 1 == 1).collect();
        let direct: Vec<usize> = b.iter().map(|&i| a[i]).collect();
        let (twice, once) = (ga.induced(&b), g.induced(&direct));
        prop_assert_eq!(twice.edges(), once.edges());
        prop_assert_eq!(twice.weights(), once.weights());
        prop_assert_eq!(twice.labels(), once.labels());
    }

    #[test]
    fn components_partition_vertices(g in arb_graph(14)) {
        let comps = g.components();
        let mut seen = VertexSet::new(g.n());
        for c in &comps {
            prop_assert!(!c.is_empty());
            prop_assert!(!seen.intersects(c));
            seen.union_with(c);
            let first = c.first().unwrap();
            prop_assert_eq!(&g.reach(first, &g.vertices()), c);
        }
        prop_assert_eq!(seen, g.vertices());
    }

    #[test]
    fn witnesses_are_induced_and_match_naive_search(g in arb_graph(9)) {
        for p in small_patterns() {
            let found = find_induced(&g, &p).unwrap();
            if let Some(w) = &found {
                prop_assert!(w.verify(&g, &p));
            }
            prop_assert_eq!(found.is_some(), brute_contains(&g, p.order(), &p.edges()), "{}", p.name());
        }
    }

    #[test]
    fn all_embeddings_verify(g in arb_graph(9)) {
        let p = Pattern::c4();
        let all = find_all_induced(&g, &p, usize::MAX).unwrap();
        for w in &all {
            prop_assert!(w.verify(&g, &p));
        }
        // each induced C4 has 8 automorphic embeddings
        prop_assert_eq!(all.len() % 8, 0);
    }

    #[test]
    fn freeness_is_hereditary(g in arb_class_graph(Layer::L4, 14), keep in any::<u64>()) {
        let ids: Vec<usize> = (0..g.n()).filter(|v| keep >> v & 1 == 1).collect();
        prop_assert!(is_free(&g, &pb()).unwrap().free);
        prop_assert!(is_free(&g.induced(&ids), &pb()).unwrap().free);
    }

    #[test]
    fn mcs_gives_peo_on_chordal_graphs(g in arb_class_graph(Layer::Chordal, 20)) {
        prop_assert!(is_chordal(&g));
        prop_assert!(verify_peo(&g, &mcs_order(&g)).unwrap());
        let r = frank_mwis(&g).unwrap();
        prop_assert!(r.verify(&g));
        prop_assert_eq!(r.weight, brute_mwis(&g));
    }

    #[test]
    fn zero_weight_vertices_do_not_matter(g in arb_class_graph(Layer::Chordal, 16)) {
        let keep: Vec<usize> = (0..g.n()).filter(|&v| g.weight(v) > 0).collect();
        let a = frank_mwis(&g).unwrap().weight;
        prop_assert_eq!(a, frank_mwis(&g.induced(&keep)).unwrap().weight);
    }

    #[test]
    fn md_children_are_modules_partitioning_their_parent(g in arb_graph(12)) {
        let Some(root) = md_tree(&g) else {
            prop_assert_eq!(g.n(), 0);
            return Ok(());
        };
        prop_assert_eq!(&root.vertices, &g.vertices());
        for node in root.walk() {
            if let MdKind::Leaf(v) = node.kind {
                prop_assert_eq!(node.vertices.to_vec(), vec![v]);
                continue;
            }
            prop_assert!(node.children.len() >= 2);
            let mut seen = VertexSet::new(g.n());
            for c in &node.children {
                prop_assert!(is_module(&g, &c.vertices).unwrap());
                prop_assert!(!seen.intersects(&c.vertices));
                seen.union_with(&c.vertices);
            }
            prop_assert_eq!(&seen, &node.vertices);
            let adjacent = |i: usize, j: usize| {
                g.has_edge(node.children[i].representative(), node.children[j].representative())
            };
            let k = node.children.len();
            let pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j)));
            match node.kind {
                MdKind::Series => prop_assert!(pairs.clone().all(|(i, j)| adjacent(i, j))),
                MdKind::Parallel => prop_assert!(pairs.clone().all(|(i, j)| !adjacent(i, j))),
                _ => {}
            }
        }
    }

    #[test]
    fn md_combination_matches_brute_force(g in arb_graph(12)) {
        let mut oracle = |h: &WeightedGraph| -> SolveOutcome { oracle_mwis(h) };
        let r = mwis_via_md(&g, &mut oracle).unwrap();
        prop_assert!(r.verify(&g));
        prop_assert_eq!(r.weight, brute_mwis(&g));
    }

    #[test]
    fn fold_only_hands_out_class_members(g in arb_class_graph(Layer::L4, 14)) {
        for comp in g.components() {
            let sub = g.induced(&comp.to_vec());
            let tree = atom_decomposition(&sub).unwrap();
            let mut handed = Vec::new();
            let mut solver = |h: &WeightedGraph| -> SolveOutcome {
                handed.push(h.clone());
                oracle_mwis(h)
            };
            let r = fold_mwis(&sub, &tree, &mut solver).unwrap();
            prop_assert_eq!(r.weight, brute_mwis(&sub));
            for h in &handed {
                prop_assert!(is_free(h, &pb()).unwrap().free);
            }
        }
    }

    #[test]
    fn separators_are_cliques(g in arb_graph(14)) {
        for comp in g.components() {
            let sub = g.induced(&comp.to_vec());
            let tree = atom_decomposition(&sub).unwrap();
            for step in &tree.steps {
                let sep = VertexSet::from_ids(sub.n(), step.separator.iter().copied());
                prop_assert!(sub.is_clique(&sep).unwrap());
                prop_assert!(step.separator.iter().all(|v| step.vertices.contains(v)));
            }
        }
    }

    #[test]
    fn oracle_matches_brute_force(g in arb_graph(16)) {
        let r = oracle_mwis(&g).unwrap();
        prop_assert!(r.verify(&g));
        prop_assert_eq!(r.weight, brute_mwis(&g));
    }

    #[test]
    fn layers_agree_on_their_classes(g in arb_class_graph(Layer::L4, 16)) {
        let solver = Solver::default();
        let want = brute_mwis(&g);
        for layer in [Layer::L4, Layer::Oracle] {
            let r = solver.solve(layer, &g).unwrap();
            prop_assert!(r.verify(&g));
            prop_assert_eq!(r.weight, want, "{}", layer);
        }
    }

    #[test]
    fn weaker_layers_agree_on_their_classes(
        g1 in arb_class_graph(Layer::L1, 14),
        g2 in arb_class_graph(Layer::L2, 14),
        g3 in arb_class_graph(Layer::L3, 14),
    ) {
        let solver = Solver::default();
        for (layer, g) in [(Layer::L1, &g1), (Layer::L2, &g2), (Layer::L3, &g3)] {
            let r = solver.solve(layer, g).unwrap();
            prop_assert!(r.verify(g));
            prop_assert_eq!(r.weight, brute_mwis(g), "{}", layer);
        }
    }

    #[test]
    fn deleting_a_vertex_never_helps(g in arb_class_graph(Layer::L4, 14), pick in any::<usize>()) {
        prop_assume!(g.n() > 0);
        let v = pick % g.n();
        let rest: Vec<usize> = (0..g.n()).filter(|&u| u != v).collect();
        let solver = Solver::default();
        let full = solver.l4(&g).unwrap().weight;
        prop_assert!(solver.l4(&g.induced(&rest)).unwrap().weight <= full);
    }

    #[test]
    fn scaling_weights_scales_the_optimum(g in arb_class_graph(Layer::L4, 14), k in 1..50u64) {
        let solver = Solver::default();
        let base = solver.l4(&g).unwrap();
        let scaled = g.with_weights(g.weights().iter().map(|w| w * k).collect());
        let r = solver.l4(&scaled).unwrap();
        prop_assert_eq!(r.weight, base.weight * k);
    }

    #[test]
    fn stats_are_consistent(g in arb_class_graph(Layer::L4, 16)) {
        let r = Solver::default().l4(&g).unwrap();
        prop_assert_eq!(g.set_weight(&r.chosen).unwrap(), r.weight);
        prop_assert!(g.is_independent(&r.chosen).unwrap());
        prop_assert!(r.stats.pivots <= r.stats.nearly_c_calls * g.n() as u64);
        prop_assert!(r.chosen.is_subset(&g.vertices()));
    }

    #[test]
    fn asets_cover_the_neighborhood_of_every_embedding(g in arb_graph(11)) {
        for p in [Pattern::c5(), Pattern::house()] {
            for v in 0..g.n() {
                let (rest, ids) = g.minus_closed_neighborhood(v);
                for w in find_all_induced(&rest, &p, 20).unwrap() {
                    let w = w.mapped(&ids);
                    let a = compute_asets(&g, v, &w).unwrap();
                    let (plus, minus) = (a.a_plus_all(), a.a_minus_all());
                    prop_assert!(!plus.intersects(&minus));
                    prop_assert!(a.q.contains(v));
                    let total: usize = a.a_plus.iter().chain(&a.a_minus).map(VertexSet::len).sum();
                    prop_assert_eq!(total, plus.len() + minus.len());
                    for i in 0..5 {
                        for x in a.a_plus[i].iter().chain(a.a_minus[i].iter()) {
                            prop_assert_eq!(a.nh(&g, x).count_ones() as usize, i + 1);
                        }
                    }
                    prop_assert!(a.b1.is_subset(&a.a_plus[1]) && a.b2.is_subset(&a.a_plus[1]));
                }
            }
        }
    }

    #[test]
    fn generators_are_reproducible(seed in any::<u64>(), n in 0..20usize, p in 0.0..1.0f64) {
        for fam in ["gnp", "chordal", "p6-banner", "grown:p6-banner"] {
            let spec = GenSpec::new(fam.parse::<Family>().unwrap(), n, p, seed).weighted(0, 9);
            prop_assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        }
    }

    #[test]
    fn instances_round_trip(g in arb_graph(14)) {
        let back = parse_instance(emit_instance(&g).as_bytes()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.weights(), g.weights());
        prop_assert_eq!(emit_instance(&back), emit_instance(&g));
    }
}
