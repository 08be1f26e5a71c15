//! The text instance format and the JSON result envelope.
//!
//! ```text
//! c comment
//! p mwis <n> <m>
//! n <id> <weight>      (1-based id; vertices without a line weigh 1)
//! e <u> <v>            (1-based ids)
//! ```

use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{VertexSet, Weight, WeightedGraph};
use crate::solution::{Layer, SolveResult, SolveStats};
use crate::solver::Certification;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based; 0 for problems with the file as a whole.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("input is not valid UTF-8")]
    NotUtf8,
    #[error("missing `p mwis <n> <m>` header")]
    MissingHeader,
    #[error("second `p` line")]
    DuplicateHeader,
    #[error("`{0}` line before the `p` line")]
    BeforeHeader(char),
    #[error("malformed header, expected `p mwis <n> <m>`")]
    BadHeader,
    #[error("malformed `{0}` line")]
    BadLine(char),
    #[error("unknown line type `{0}`")]
    UnknownLine(String),
    #[error("vertex {id} out of range 1..={n}")]
    OutOfRange { id: i64, n: usize },
    #[error("negative weight {weight} for vertex {id}")]
    NegativeWeight { id: usize, weight: i64 },
    #[error("vertex {0} already has a weight")]
    DuplicateWeight(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("header declares {declared} edges but {found} distinct edges follow")]
    EdgeCount { declared: usize, found: usize },
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn fields<const K: usize>(rest: std::str::SplitWhitespace<'_>) -> Option<[i64; K]> {
    let v: Vec<i64> = rest.map(|t| t.parse().ok()).collect::<Option<_>>()?;
    v.try_into().ok()
}

/// Parses an instance. Vertex `i` of the result has label `i + 1`, its id
/// in the file.
pub fn parse_instance(bytes: &[u8]) -> Result<WeightedGraph, ParseError> {
    let text = std::str::from_utf8(bytes).map_err(|_| err(0, ParseErrorKind::NotUtf8))?;
    let mut header: Option<(usize, usize, usize)> = None;
    let mut weights: Vec<Option<Weight>> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let mut toks = raw.split_whitespace();
        let Some(kind) = toks.next() else { continue };
        match kind {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader));
                }
                if toks.next() != Some("mwis") {
                    return Err(err(line, ParseErrorKind::BadHeader));
                }
                let [n, m] = fields::<2>(toks)
                    .filter(|f| f.iter().all(|&x| x >= 0))
                    .ok_or(err(line, ParseErrorKind::BadHeader))?;
                header = Some((n as usize, m as usize, line));
                weights = vec![None; n as usize];
            }
            "n" | "e" => {
                let tag = kind.chars().next().expect("nonempty");
                let Some((n, _, _)) = header else {
                    return Err(err(line, ParseErrorKind::BeforeHeader(tag)));
                };
                let [a, b] = fields::<2>(toks).ok_or(err(line, ParseErrorKind::BadLine(tag)))?;
                let vertex = |id: i64| {
                    if id < 1 || id as usize > n {
                        Err(err(line, ParseErrorKind::OutOfRange { id, n }))
                    } else {
                        Ok(id as usize - 1)
                    }
                };
                if tag == 'n' {
                    let v = vertex(a)?;
                    if b < 0 {
                        return Err(err(line, ParseErrorKind::NegativeWeight { id: v + 1, weight: b }));
                    }
                    if weights[v].replace(b as Weight).is_some() {
                        return Err(err(line, ParseErrorKind::DuplicateWeight(v + 1)));
                    }
                } else {
                    let (u, v) = (vertex(a)?, vertex(b)?);
                    if u == v {
                        return Err(err(line, ParseErrorKind::SelfLoop(u + 1)));
                    }
                    edges.push((u.min(v), u.max(v)));
                }
            }
            other => return Err(err(line, ParseErrorKind::UnknownLine(other.to_string()))),
        }
    }

    let (n, m, header_line) = header.ok_or(err(0, ParseErrorKind::MissingHeader))?;
    edges.sort_unstable();
    edges.dedup();
    if edges.len() != m {
        return Err(err(
            header_line,
            ParseErrorKind::EdgeCount {
                declared: m,
                found: edges.len(),
            },
        ));
    }
    let weights = weights.into_iter().map(|w| w.unwrap_or(1)).collect();
    let g = WeightedGraph::new(n, &edges, weights).expect("validated above");
    Ok(g.with_labels((1..=n).collect()).expect("distinct labels"))
}

/// Writes `g` in the instance format, vertex `i` as id `i + 1`, with every
/// weight spelled out and edges sorted.
pub fn emit_instance(g: &WeightedGraph) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "p mwis {} {}", g.n(), g.m());
    for v in 0..g.n() {
        let _ = writeln!(s, "n {} {}", v + 1, g.weight(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvelopeError {
    #[error("refusing to report a non-independent set")]
    NotIndependent,
    #[error("reported weight {claimed} but the set weighs {actual}")]
    WeightMismatch { claimed: Weight, actual: Weight },
}

/// The machine-readable answer to a solve. Keys serialize in declaration
/// order, which is alphabetical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultEnvelope {
    pub certification: Certification,
    /// Class membership was checked exhaustively.
    pub certified: bool,
    /// Labels of the chosen vertices (file ids for parsed instances), ascending.
    pub chosen: Vec<usize>,
    pub layer: Layer,
    pub m: usize,
    pub n: usize,
    pub stats: SolveStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    pub weight: Weight,
}

impl ResultEnvelope {
    /// Re-verifies `r` against `g` and refuses to build an envelope for an
    /// invalid solution.
    pub fn new(
        g: &WeightedGraph,
        r: &SolveResult,
        layer: Layer,
        certification: Certification,
        wall: Option<Duration>,
    ) -> Result<Self, EnvelopeError> {
        let chosen = VertexSet::from_ids(g.n(), r.chosen.iter());
        if !g.is_independent(&chosen).unwrap_or(false) {
            return Err(EnvelopeError::NotIndependent);
        }
        let actual = g.set_weight(&chosen).expect("in range");
        if actual != r.weight {
            return Err(EnvelopeError::WeightMismatch {
                claimed: r.weight,
                actual,
            });
        }
        let mut labels = r.labels(g);
        labels.sort_unstable();
        Ok(Self {
            certification,
            certified: certification == Certification::Exhaustive,
            chosen: labels,
            layer,
            m: g.m(),
            n: g.n(),
            stats: r.stats,
            wall_ms: wall.map(|d| d.as_secs_f64() * 1e3),
            weight: r.weight,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let chosen: Vec<String> = self.chosen.iter().map(ToString::to_string).collect();
        format!(
            "weight {}\nchosen {}\nlayer {} ({})\n",
            self.weight,
            chosen.join(" "),
            self.layer,
            match self.certification {
                Certification::Exhaustive => "class certified",
                Certification::Sampled => "class sampled, not certified",
                Certification::None => "class trusted",
            }
        )
    }
}
