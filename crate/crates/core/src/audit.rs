//! Executable checks of the structural facts the layered solvers rely on:
//! A-set partitions around an embedded house or C5, the claims proved about
//! them, nearly-C tests on atoms, and the C4 / K(2,3) lemmas for prime graphs.

use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::atoms::atom_decomposition;
use crate::graph::{VertexSet, WeightedGraph};
use crate::modular::is_prime;
use crate::pattern::{find_all_induced, find_induced, Pattern, PatternWitness};

/// Which 5-vertex pattern an [`ASetPartition`] is built around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedded {
    /// Cycle v1 v2 v3 v4 with roof v5 on v2 and v3.
    House,
    /// Cycle v1 .. v5.
    C5,
}

impl Embedded {
    pub fn pattern(self) -> Pattern {
        match self {
            Embedded::House => Pattern::house(),
            Embedded::C5 => Pattern::c5(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuditError {
    #[error("pivot {0} out of range")]
    PivotOutOfRange(usize),
    #[error("embedding must be a house or C5, got {0}")]
    WrongPattern(String),
    #[error("vertices {0:?} do not induce the {1} in the stated order")]
    NotInduced(Vec<usize>, String),
    #[error("embedding meets the closed neighborhood of pivot {0}")]
    TouchesPivot(usize),
    #[error("partition invariant broken: {0}")]
    Invariant(String),
}

/// The sets around pivot `v` and an embedding `H` of G \ N[v].
///
/// `q` is the component of G \ N[H] holding the pivot; `a_plus[i - 1]` and
/// `a_minus[i - 1]` split `A_i = {x outside H : |N_H(x)| = i}` by whether
/// `x` has a neighbor in `q`. Everything is in ids of the audited graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ASetPartition {
    pub kind: Embedded,
    pub pivot: usize,
    /// `h[i]` is `v_{i+1}`.
    pub h: [usize; 5],
    pub q: VertexSet,
    pub a_plus: [VertexSet; 5],
    pub a_minus: [VertexSet; 5],
    /// House only: members of `A_2^+` seeing exactly {v2, v3}.
    pub b1: VertexSet,
    /// House only: members of `A_2^+` seeing exactly {v1, v4}.
    pub b2: VertexSet,
}

impl ASetPartition {
    pub fn a_plus_all(&self) -> VertexSet {
        self.a_plus
            .iter()
            .fold(VertexSet::new(self.q.universe()), |acc, s| acc.union(s))
    }

    pub fn a_minus_all(&self) -> VertexSet {
        self.a_minus
            .iter()
            .fold(VertexSet::new(self.q.universe()), |acc, s| acc.union(s))
    }

    /// `N_H(x)` as a bitmask, bit `i` standing for `v_{i+1}`.
    pub fn nh(&self, g: &WeightedGraph, x: usize) -> u8 {
        self.h
            .iter()
            .enumerate()
            .filter(|&(_, &hv)| g.has_edge(x, hv))
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

const fn bits(vs: &[usize]) -> u8 {
    let mut m = 0;
    let mut i = 0;
    while i < vs.len() {
        m |= 1 << (vs[i] - 1);
        i += 1;
    }
    m
}

/// Builds the A-sets for pivot `v` and the embedding `h` (house or C5,
/// vertex `i` of the witness playing `v_{i+1}`).
pub fn compute_asets(g: &WeightedGraph, v: usize, h: &PatternWitness) -> Result<ASetPartition, AuditError> {
    let kind = match h.pattern.as_str() {
        "house" => Embedded::House,
        "C5" => Embedded::C5,
        other => return Err(AuditError::WrongPattern(other.to_string())),
    };
    if v >= g.n() {
        return Err(AuditError::PivotOutOfRange(v));
    }
    if !h.verify(g, &kind.pattern()) {
        return Err(AuditError::NotInduced(h.vertices.clone(), h.pattern.clone()));
    }
    let hs = VertexSet::from_ids(g.n(), h.vertices.iter().copied());
    let closed_v = g.closed_neighborhood(v).expect("pivot in range");
    if closed_v.intersects(&hs) {
        return Err(AuditError::TouchesPivot(v));
    }
    let nh_set = g.neighborhood_of_set(&hs).expect("in range");
    let outside = g.non_neighborhood_of_set(&hs).expect("in range");
    let q = g.reach(v, &outside);

    let empty = VertexSet::new(g.n());
    let mut p = ASetPartition {
        kind,
        pivot: v,
        h: h.vertices.clone().try_into().expect("five vertices"),
        q,
        a_plus: std::array::from_fn(|_| empty.clone()),
        a_minus: std::array::from_fn(|_| empty.clone()),
        b1: empty.clone(),
        b2: empty,
    };
    for x in nh_set.iter() {
        let mask = p.nh(g, x);
        let i = mask.count_ones() as usize - 1;
        if g.neighbors(x).intersects(&p.q) {
            p.a_plus[i].insert(x);
            if kind == Embedded::House && mask == bits(&[2, 3]) {
                p.b1.insert(x);
            }
            if kind == Embedded::House && mask == bits(&[1, 4]) {
                p.b2.insert(x);
            }
        } else {
            p.a_minus[i].insert(x);
        }
    }

    if p.a_plus_all().union(&p.a_minus_all()) != nh_set {
        return Err(AuditError::Invariant("A-sets do not cover N(H)".into()));
    }
    if !p.q.contains(v) || g.reach(v, &p.q) != p.q {
        return Err(AuditError::Invariant("Q is not the pivot's component".into()));
    }
    if g.neighborhood_of_set(&p.q).expect("in range") != p.a_plus_all() {
        return Err(AuditError::Invariant("A+ differs from N(Q)".into()));
    }
    Ok(p)
}

/// Outcome of one claim, with offending vertices (audited-graph ids) on failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub claim: &'static str,
    pub holds: bool,
    pub offenders: Vec<usize>,
}

impl ClaimCheck {
    fn of(claim: &'static str, offenders: Option<Vec<usize>>) -> Self {
        Self {
            claim,
            holds: offenders.is_none(),
            offenders: offenders.unwrap_or_default(),
        }
    }
}

/// Claim results for one (pivot, embedding) pair. On a failure, `certificate`
/// holds a forbidden pattern found in the graph, which shows the input was
/// outside the class the claims assume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimReport {
    pub kind: Embedded,
    pub pivot: usize,
    pub embedding: Vec<usize>,
    pub checks: Vec<ClaimCheck>,
    pub certificate: Option<PatternWitness>,
}

impl ClaimReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ClaimCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }
}

fn first_member(s: &VertexSet) -> Option<Vec<usize>> {
    s.first().map(|x| vec![x])
}

fn bad_vertex(s: &VertexSet, ok: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
    s.iter().find(|&x| !ok(x)).map(|x| vec![x])
}

fn non_edge(g: &WeightedGraph, s: &VertexSet) -> Option<Vec<usize>> {
    let vs = s.to_vec();
    for (i, &x) in vs.iter().enumerate() {
        if let Some(&y) = vs[i + 1..].iter().find(|&&y| !g.has_edge(x, y)) {
            return Some(vec![x, y]);
        }
    }
    None
}

fn non_edge_between(g: &WeightedGraph, a: &VertexSet, b: &VertexSet) -> Option<Vec<usize>> {
    a.iter()
        .find_map(|x| b.iter().find(|&y| x != y && !g.has_edge(x, y)).map(|y| vec![x, y]))
}

fn certificate(g: &WeightedGraph, family: &[Pattern]) -> Option<PatternWitness> {
    family.iter().find_map(|p| find_induced(g, p).expect("catalog pattern"))
}

/// The eight claims about a house embedding, meant for prime
/// (P6, banner, C5)-free graphs.
pub fn audit_house_claims(p: &ASetPartition, g: &WeightedGraph) -> ClaimReport {
    let ap = p.a_plus_all();
    let checks = vec![
        ClaimCheck::of("A1+ is empty", first_member(&p.a_plus[0])),
        ClaimCheck::of(
            "every x in A2+ sees exactly {v2,v3} or {v1,v4}",
            bad_vertex(
                &p.a_plus[1],
                |x| matches!(p.nh(g, x), m if m == bits(&[2, 3]) || m == bits(&[1, 4])),
            ),
        ),
        ClaimCheck::of(
            "B1 and B2 are not both nonempty",
            match (p.b1.first(), p.b2.first()) {
                (Some(x), Some(y)) => Some(vec![x, y]),
                _ => None,
            },
        ),
        ClaimCheck::of(
            "every x in A3+ sees exactly {v2,v3,v5}",
            bad_vertex(&p.a_plus[2], |x| p.nh(g, x) == bits(&[2, 3, 5])),
        ),
        ClaimCheck::of(
            "every x in A4+ sees exactly {v1,v2,v3,v4}",
            bad_vertex(&p.a_plus[3], |x| p.nh(g, x) == bits(&[1, 2, 3, 4])),
        ),
        ClaimCheck::of("A+ minus B2 is a clique", non_edge(g, &ap.difference(&p.b2))),
        ClaimCheck::of("B2 is a clique", non_edge(g, &p.b2)),
        ClaimCheck::of("A+ is a clique", non_edge(g, &ap)),
    ];
    finish(p, g, checks, &[Pattern::p6(), Pattern::banner(), Pattern::c5()])
}

/// The claims about a C5 embedding, meant for prime (P6, banner)-free
/// graphs. Indices of the cycle are taken mod 5.
pub fn audit_c5_claims(p: &ASetPartition, g: &WeightedGraph) -> ClaimReport {
    let consecutive = |i: usize| bits(&[i, i % 5 + 1, (i + 1) % 5 + 1]);
    // d[i] = D_{i+1}: members of A3+ seeing v_i, v_{i+1}, v_{i+2}
    let d: Vec<VertexSet> = (1..=5)
        .map(|i| VertexSet::from_ids(g.n(), p.a_plus[2].iter().filter(|&x| p.nh(g, x) == consecutive(i))))
        .collect();
    let d_union = d.iter().fold(VertexSet::new(g.n()), |acc, s| acc.union(s));
    let a3 = p.a_plus[2].union(&p.a_minus[2]);
    let checks = vec![
        ClaimCheck::of(
            "A1+, A2+ and A4+ are empty",
            first_member(&p.a_plus[0].union(&p.a_plus[1]).union(&p.a_plus[3])),
        ),
        ClaimCheck::of(
            "every x in A3 sees three consecutive cycle vertices",
            bad_vertex(&a3, |x| (1..=5).any(|i| p.nh(g, x) == consecutive(i))),
        ),
        ClaimCheck::of(
            "the sets D1..D5 partition A3+",
            first_member(&p.a_plus[2].difference(&d_union)),
        ),
        ClaimCheck::of("A3+ is a clique", non_edge(g, &p.a_plus[2])),
        ClaimCheck::of("A5+ is a clique", non_edge(g, &p.a_plus[4])),
        ClaimCheck::of(
            "A3+ is complete to A5+",
            non_edge_between(g, &p.a_plus[2], &p.a_plus[4]),
        ),
        ClaimCheck::of("A+ is a clique", non_edge(g, &p.a_plus_all())),
    ];
    finish(p, g, checks, &[Pattern::p6(), Pattern::banner()])
}

fn finish(p: &ASetPartition, g: &WeightedGraph, checks: Vec<ClaimCheck>, family: &[Pattern]) -> ClaimReport {
    let failed = checks.iter().any(|c| !c.holds);
    ClaimReport {
        kind: p.kind,
        pivot: p.pivot,
        embedding: p.h.to_vec(),
        checks,
        certificate: if failed { certificate(g, family) } else { None },
    }
}

/// `Some((v, witness))` if some `G \ N[v]` contains a member of `family`;
/// the witness is in ids of `g`.
pub fn verify_nearly(g: &WeightedGraph, family: &[Pattern]) -> Option<(usize, PatternWitness)> {
    (0..g.n()).find_map(|v| {
        let (sub, ids) = g.minus_closed_neighborhood(v);
        certificate(&sub, family).map(|w| (v, w.mapped(&ids)))
    })
}

/// Result of applying a lemma to one graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemmaOutcome {
    NotApplicable { reason: String },
    Holds,
    Violated { witness: PatternWitness },
}

impl LemmaOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, LemmaOutcome::Violated { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub prime: bool,
    /// Prime (banner, house)-free graphs are C4-free.
    pub c4_free: LemmaOutcome,
    /// Prime banner-free graphs are K(2,3)-free.
    pub k23_free: LemmaOutcome,
}

/// Applies both lemmas where their hypotheses hold. Primality comes from
/// the modular decomposition; non-prime inputs are never reported as
/// violations.
pub fn audit_lemmas(g: &WeightedGraph) -> LemmaReport {
    let prime = is_prime(g);
    let has = |p: Pattern| find_induced(g, &p).expect("catalog pattern");
    let banner = has(Pattern::banner());
    let lemma = |hyp: Option<String>, target: Pattern| match hyp {
        Some(reason) => LemmaOutcome::NotApplicable { reason },
        None => match has(target) {
            Some(witness) => LemmaOutcome::Violated { witness },
            None => LemmaOutcome::Holds,
        },
    };
    let not_prime = (!prime).then(|| "graph is not prime".to_string());
    let banner_reason = banner.as_ref().map(|_| "graph contains a banner".to_string());
    let c4_hyp = not_prime
        .clone()
        .or_else(|| banner_reason.clone())
        .or_else(|| has(Pattern::house()).map(|_| "graph contains a house".to_string()));
    LemmaReport {
        prime,
        c4_free: lemma(c4_hyp, Pattern::c4()),
        k23_free: lemma(not_prime.or(banner_reason), Pattern::k23()),
    }
}

/// Claim audits for one pattern kind over many (pivot, embedding) pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ClaimSuite {
    NotApplicable {
        reason: String,
    },
    /// No pivot leaves a copy of the pattern outside its closed neighborhood.
    NoPivot,
    Audited {
        embeddings: usize,
        failures: Vec<ClaimReport>,
    },
}

impl ClaimSuite {
    pub fn is_violation(&self) -> bool {
        matches!(self, ClaimSuite::Audited { failures, .. } if !failures.is_empty())
    }
}

/// One atom's nearly-C verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomCheck {
    /// Atom vertices in ids of the audited graph.
    pub atom: Vec<usize>,
    pub nearly_house_free: Option<bool>,
    pub nearly_c5_free: Option<bool>,
    /// `(pivot, witness)` in audited-graph ids when a check fails.
    pub counterexample: Option<(usize, PatternWitness)>,
}

/// Everything the audit knows about one graph. Vertex ids are those of the
/// audited graph; [`AuditReport::to_json`] and the text form use labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub prime: bool,
    pub p6_free: bool,
    pub banner_free: bool,
    pub c5_free: bool,
    pub lemmas: LemmaReport,
    pub house_claims: ClaimSuite,
    pub c5_claims: ClaimSuite,
    pub atoms: Vec<AtomCheck>,
}

impl AuditReport {
    /// Any lemma, claim or nearly-C check failed on an input that met its
    /// hypotheses.
    pub fn has_violation(&self) -> bool {
        self.lemmas.c4_free.is_violation()
            || self.lemmas.k23_free.is_violation()
            || self.house_claims.is_violation()
            || self.c5_claims.is_violation()
            || self.atoms.iter().any(|a| a.counterexample.is_some())
    }

    pub fn to_json(&self, g: &WeightedGraph) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        relabel(&mut v, g);
        v
    }

    pub fn to_text(&self, g: &WeightedGraph) -> String {
        let l = |vs: &[usize]| vs.iter().map(|&v| g.label(v).to_string()).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let yn = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(s, "vertices: {}", self.n);
        let _ = writeln!(
            s,
            "prime: {}  P6-free: {}  banner-free: {}  C5-free: {}",
            yn(self.prime),
            yn(self.p6_free),
            yn(self.banner_free),
            yn(self.c5_free)
        );
        for (name, o) in [
            ("C4-free lemma", &self.lemmas.c4_free),
            ("K23-free lemma", &self.lemmas.k23_free),
        ] {
            let _ = match o {
                LemmaOutcome::NotApplicable { reason } => writeln!(s, "{name}: not applicable ({reason})"),
                LemmaOutcome::Holds => writeln!(s, "{name}: holds"),
                LemmaOutcome::Violated { witness } => {
                    writeln!(
                        s,
                        "{name}: VIOLATED by {} on [{}]",
                        witness.pattern,
                        l(&witness.vertices)
                    )
                }
            };
        }
        for (name, suite) in [("house claims", &self.house_claims), ("C5 claims", &self.c5_claims)] {
            let _ = match suite {
                ClaimSuite::NotApplicable { reason } => writeln!(s, "{name}: not applicable ({reason})"),
                ClaimSuite::NoPivot => writeln!(s, "{name}: no pivot"),
                ClaimSuite::Audited { embeddings, failures } => {
                    let _ = writeln!(s, "{name}: {embeddings} embeddings, {} failing", failures.len());
                    for f in failures {
                        for c in f.failures() {
                            let _ = writeln!(
                                s,
                                "  pivot {} on [{}]: FAILS \"{}\" at [{}]",
                                g.label(f.pivot),
                                l(&f.embedding),
                                c.claim,
                                l(&c.offenders)
                            );
                        }
                        if let Some(w) = &f.certificate {
                            let _ = writeln!(s, "  input contains {} on [{}]", w.pattern, l(&w.vertices));
                        }
                    }
                    Ok(())
                }
            };
        }
        for a in &self.atoms {
            let show = |b: Option<bool>| b.map_or("-", yn);
            let _ = writeln!(
                s,
                "atom [{}]: nearly house-free {}, nearly C5-free {}",
                l(&a.atom),
                show(a.nearly_house_free),
                show(a.nearly_c5_free)
            );
            if let Some((v, w)) = &a.counterexample {
                let _ = writeln!(
                    s,
                    "  pivot {} leaves {} on [{}]",
                    g.label(*v),
                    w.pattern,
                    l(&w.vertices)
                );
            }
        }
        s
    }
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} pivot {} on {:?}:", self.kind, self.pivot, self.embedding)?;
        for c in &self.checks {
            write!(f, " [{}: {}]", c.claim, if c.holds { "ok" } else { "FAIL" })?;
        }
        Ok(())
    }
}

// Vertex-valued fields of the serialized report, rewritten to labels.
fn relabel(v: &mut serde_json::Value, g: &WeightedGraph) {
    use serde_json::Value;
    const ID_KEYS: [&str; 6] = ["pivot", "embedding", "offenders", "vertices", "atom", "counterexample"];
    match v {
        Value::Object(map) => {
            for (k, val) in map.iter_mut() {
                if ID_KEYS.contains(&k.as_str()) {
                    relabel_ids(val, g);
                } else {
                    relabel(val, g);
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| relabel(x, g)),
        _ => {}
    }
}

fn relabel_ids(v: &mut serde_json::Value, g: &WeightedGraph) {
    use serde_json::Value;
    match v {
        Value::Number(n) => {
            let id = n.as_u64().expect("vertex id") as usize;
            *v = Value::from(g.label(id));
        }
        Value::Array(items) => items.iter_mut().for_each(|x| relabel_ids(x, g)),
        Value::Object(_) => relabel(v, g),
        _ => {}
    }
}

/// Audits every pivot (or just `pivot`) and every embedding of the pattern
/// in `G \ N[pivot]`, in all automorphic labelings.
fn claim_suite(
    g: &WeightedGraph,
    kind: Embedded,
    hypothesis: Option<String>,
    pivot: Option<usize>,
    audit: fn(&ASetPartition, &WeightedGraph) -> ClaimReport,
) -> ClaimSuite {
    if let Some(reason) = hypothesis {
        return ClaimSuite::NotApplicable { reason };
    }
    let pivots: Vec<usize> = match pivot {
        Some(v) => vec![v],
        None => (0..g.n()).collect(),
    };
    let mut embeddings = 0;
    let mut failures = Vec::new();
    for v in pivots {
        let (sub, ids) = g.minus_closed_neighborhood(v);
        for w in find_all_induced(&sub, &kind.pattern(), usize::MAX).expect("catalog pattern") {
            let part = compute_asets(g, v, &w.mapped(&ids)).expect("embedding avoids N[v]");
            embeddings += 1;
            let r = audit(&part, g);
            if !r.all_hold() {
                failures.push(r);
            }
        }
    }
    if embeddings == 0 {
        ClaimSuite::NoPivot
    } else {
        ClaimSuite::Audited { embeddings, failures }
    }
}

/// Full audit. Claim suites and atom checks run only where the graph meets
/// their hypotheses; `pivot` restricts the claim suites to one pivot.
pub fn audit_graph(g: &WeightedGraph, pivot: Option<usize>) -> Result<AuditReport, AuditError> {
    if let Some(v) = pivot.filter(|&v| v >= g.n()) {
        return Err(AuditError::PivotOutOfRange(v));
    }
    let free = |p: Pattern| find_induced(g, &p).expect("catalog pattern").is_none();
    let prime = is_prime(g);
    let (p6_free, banner_free, c5_free) = (free(Pattern::p6()), free(Pattern::banner()), free(Pattern::c5()));
    let c5_hyp = if !prime {
        Some("graph is not prime".to_string())
    } else if !(p6_free && banner_free) {
        Some("graph is not (P6, banner)-free".to_string())
    } else {
        None
    };
    let house_hyp = c5_hyp
        .clone()
        .or_else(|| (!c5_free).then(|| "graph contains a C5".to_string()));

    let mut atoms = Vec::new();
    if c5_hyp.is_none() && g.n() > 0 {
        for comp in g.components() {
            let ids = comp.to_vec();
            let sub = g.induced(&ids);
            let tree = atom_decomposition(&sub).expect("component is connected");
            for step in &tree.steps {
                let atom_ids: Vec<usize> = step.vertices.iter().map(|&v| ids[v]).collect();
                let lift = |(v, w): (usize, PatternWitness)| {
                    let w = w.mapped(&step.vertices).mapped(&ids);
                    (ids[step.vertices[v]], w)
                };
                let c5 = verify_nearly(&step.atom, &[Pattern::c5()]).map(lift);
                let house = if house_hyp.is_none() {
                    Some(verify_nearly(&step.atom, &[Pattern::house()]).map(lift))
                } else {
                    None
                };
                atoms.push(AtomCheck {
                    atom: atom_ids,
                    nearly_house_free: house.as_ref().map(Option::is_none),
                    nearly_c5_free: Some(c5.is_none()),
                    counterexample: c5.or(house.flatten()),
                });
            }
        }
    }

    Ok(AuditReport {
        n: g.n(),
        prime,
        p6_free,
        banner_free,
        c5_free,
        lemmas: audit_lemmas(g),
        house_claims: claim_suite(g, Embedded::House, house_hyp, pivot, audit_house_claims),
        c5_claims: claim_suite(g, Embedded::C5, c5_hyp, pivot, audit_c5_claims),
        atoms,
    })
}
