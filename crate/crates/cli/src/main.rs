//! `mwis`: solve, check, decompose, generate, fuzz, audit and bench.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use mwis_core::atoms::atom_decomposition;
use mwis_core::audit::audit_graph;
use mwis_core::bench::{bench, bench_table};
use mwis_core::fuzz::fuzz;
use mwis_core::generators::{generate, Family, GenError, GenSpec};
use mwis_core::io::{emit_instance, parse_instance, ResultEnvelope};
use mwis_core::modular::md_tree;
use mwis_core::pattern::{find_induced, is_free, parse_patterns, Pattern, PatternWitness};
use mwis_core::solver::{auto_solve_with, solve_layer_with, Mode, Solver, SolverConfig, ORACLE_CAP};
use mwis_core::{Layer, SolveError, SolveErrorKind, WeightedGraph};

const EXIT_NOT_FREE: u8 = 1;
const EXIT_CLASS: u8 = 2;
const EXIT_SIZE_CAP: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(
    name = "mwis",
    version,
    about = "Exact maximum weight independent set on (P6, banner)-free graphs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum LayerArg {
    Auto,
    L4,
    L3,
    L2,
    L1,
    Chordal,
    Oracle,
}

impl LayerArg {
    fn layer(self) -> Option<Layer> {
        match self {
            LayerArg::Auto => None,
            LayerArg::L4 => Some(Layer::L4),
            LayerArg::L3 => Some(Layer::L3),
            LayerArg::L2 => Some(Layer::L2),
            LayerArg::L1 => Some(Layer::L1),
            LayerArg::Chordal => Some(Layer::Chordal),
            LayerArg::Oracle => Some(Layer::Oracle),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FuzzLayer {
    L4,
    L3,
    L2,
    L1,
    Chordal,
    Oracle,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Permissive,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Modular,
    Atoms,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an instance and print the result envelope.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        layer: LayerArg,
        #[arg(long, value_enum, default_value = "strict")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        /// Include wall time in the envelope (makes output run-dependent).
        #[arg(long)]
        timing: bool,
        /// Report a C4 inside a prime quotient at layer 2 as a class violation.
        #[arg(long)]
        check_lemmas: bool,
    },
    /// Exhaustively search for the listed induced patterns.
    Check {
        file: PathBuf,
        /// Comma-separated: p4,p5,p6,c4,c5,house,banner,k23
        #[arg(long)]
        patterns: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the modular decomposition or the clique-separator atoms.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        json: bool,
    },
    /// Generate an instance file on stdout.
    Gen {
        /// gnp, chordal, glued, a class like p6-banner, grown:<class> or prime:<class>
        #[arg(long)]
        family: String,
        /// Vertex count; filtered families can come out smaller after witness deletion.
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        seed: u64,
        /// Weights uniform in [0, wmax]; unit weights if absent.
        #[arg(long)]
        wmax: Option<u64>,
    },
    /// Compare a layer with the exhaustive oracle on generated instances.
    Fuzz {
        #[arg(long, value_enum)]
        layer: FuzzLayer,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        seed: u64,
        /// Where to write a counterexample instance.
        #[arg(long, default_value = "counterexample.mwis")]
        out: PathBuf,
    },
    /// Run the structural audits on an instance.
    Audit {
        file: PathBuf,
        /// Restrict claim audits to this vertex (file id).
        #[arg(long)]
        pivot: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Time the (P6, banner)-free solver on generated instances.
    Bench {
        #[arg(long)]
        family: String,
        /// Comma-separated sizes.
        #[arg(long)]
        sizes: String,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        json: bool,
    },
}

/// Message and exit code of a failed command.
struct Fail(u8, String);

impl Fail {
    fn usage(msg: impl Into<String>) -> Self {
        Fail(EXIT_USAGE, msg.into())
    }

    fn data(msg: impl Into<String>) -> Self {
        Fail(EXIT_DATA, msg.into())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("mwis: {msg}");
            ExitCode::from(code)
        }
    }
}

fn read_graph(path: &Path) -> Result<WeightedGraph, Fail> {
    let bytes = fs::read(path).map_err(|e| Fail::data(format!("{}: {e}", path.display())))?;
    parse_instance(&bytes).map_err(|e| Fail::data(format!("{}: {e}", path.display())))
}

fn json(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("plain data")
}

fn witness_text(g: &WeightedGraph, w: &PatternWitness) -> String {
    let ids: Vec<String> = w.vertices.iter().map(|&v| g.label(v).to_string()).collect();
    format!("{} on [{}]", w.pattern, ids.join(" "))
}

fn run(cmd: Cmd) -> Result<u8, Fail> {
    match cmd {
        Cmd::Solve {
            file,
            layer,
            mode,
            json: as_json,
            timing,
            check_lemmas,
        } => {
            let g = read_graph(&file)?;
            let solver = Solver::new(SolverConfig {
                check_lemmas,
                ..SolverConfig::default()
            });
            let mode = match mode {
                ModeArg::Strict => Mode::Strict,
                ModeArg::Permissive => Mode::Permissive,
            };
            let start = Instant::now();
            let outcome = match layer.layer() {
                None => auto_solve_with(&solver, &g, mode),
                Some(l) => solve_layer_with(&solver, &g, l, mode),
            }
            .map(|a| (a.result, a.layer, a.certification));
            let wall = timing.then(|| start.elapsed());
            let (result, layer, cert) = outcome.map_err(|e| solve_failure(&g, e))?;
            let env = ResultEnvelope::new(&g, &result, layer, cert, wall)
                .map_err(|e| Fail(1, format!("internal error: {e}")))?;
            if as_json {
                println!("{}", env.to_json());
            } else {
                print!("{}", env.to_text());
            }
            Ok(0)
        }
        Cmd::Check {
            file,
            patterns,
            json: as_json,
        } => {
            let g = read_graph(&file)?;
            let family = parse_patterns(&patterns).map_err(|e| Fail::usage(e.to_string()))?;
            let report = is_free(&g, &family).map_err(|e| Fail::usage(e.to_string()))?;
            if as_json {
                let mut labeled = report.clone();
                for w in &mut labeled.witnesses {
                    w.vertices = w.vertices.iter().map(|&v| g.label(v)).collect();
                }
                println!("{}", json(&labeled));
            } else if report.free {
                println!("free");
            } else {
                println!("not free");
                for w in &report.witnesses {
                    println!("  {}", witness_text(&g, w));
                }
            }
            Ok(if report.free { 0 } else { EXIT_NOT_FREE })
        }
        Cmd::Decompose {
            file,
            what,
            json: as_json,
        } => {
            let g = read_graph(&file)?;
            let value = match what {
                What::Modular => md_tree(&g).map_or(serde_json::Value::Null, |t| t.to_json(&g)),
                What::Atoms => {
                    let comps: Vec<serde_json::Value> = g
                        .components()
                        .into_iter()
                        .map(|c| {
                            let sub = g.induced(&c.to_vec());
                            atom_decomposition(&sub).expect("connected").to_json(&sub)
                        })
                        .collect();
                    serde_json::json!({ "components": comps })
                }
            };
            if as_json {
                println!("{}", json(&value));
            } else {
                print!("{}", decomposition_text(&value, what));
            }
            Ok(0)
        }
        Cmd::Gen {
            family,
            n,
            p,
            seed,
            wmax,
        } => {
            let family: Family = family.parse().map_err(|e: GenError| Fail::usage(e.to_string()))?;
            let mut spec = GenSpec::new(family, n, p, seed);
            if let Some(w) = wmax {
                spec = spec.weighted(0, w);
            }
            let g = generate(&spec).map_err(|e| Fail(1, e.to_string()))?;
            print!("c {spec}\n{}", emit_instance(&g));
            Ok(0)
        }
        Cmd::Fuzz {
            layer,
            trials,
            nmax,
            seed,
            out,
        } => {
            if nmax > ORACLE_CAP {
                return Err(Fail::usage(format!(
                    "--nmax {nmax} exceeds the oracle cap {ORACLE_CAP}"
                )));
            }
            let layer = match layer {
                FuzzLayer::L4 => Layer::L4,
                FuzzLayer::L3 => Layer::L3,
                FuzzLayer::L2 => Layer::L2,
                FuzzLayer::L1 => Layer::L1,
                FuzzLayer::Chordal => Layer::Chordal,
                FuzzLayer::Oracle => Layer::Oracle,
            };
            match fuzz(layer, trials, nmax, seed) {
                Ok(s) => {
                    println!(
                        "{layer}: {} trials agree with the oracle (largest n {}, oracle fallbacks {}, alpha<=2 solves {})",
                        s.trials, s.max_n, s.oracle_fallbacks, s.alpha2_solves
                    );
                    Ok(0)
                }
                Err(m) => {
                    let got = match &m.got {
                        Ok(w) => w.to_string(),
                        Err(e) => format!("error: {e}"),
                    };
                    let text = format!(
                        "c fuzz counterexample, trial {} ({})\nc oracle {} layer {layer} {got}\n{}",
                        m.trial,
                        m.spec,
                        m.expected,
                        emit_instance(&m.graph)
                    );
                    fs::write(&out, text).map_err(|e| Fail(1, format!("{}: {e}", out.display())))?;
                    Err(Fail(
                        1,
                        format!(
                            "trial {}: oracle {} but {layer} gave {got}; instance written to {}",
                            m.trial,
                            m.expected,
                            out.display()
                        ),
                    ))
                }
            }
        }
        Cmd::Audit {
            file,
            pivot,
            json: as_json,
        } => {
            let g = read_graph(&file)?;
            let pivot = match pivot {
                None => None,
                Some(id) => Some(
                    g.labels()
                        .iter()
                        .position(|&l| l == id)
                        .ok_or_else(|| Fail::usage(format!("no vertex {id}")))?,
                ),
            };
            let report = audit_graph(&g, pivot).map_err(|e| Fail::usage(e.to_string()))?;
            if as_json {
                println!("{}", json(&report.to_json(&g)));
            } else {
                print!("{}", report.to_text(&g));
            }
            Ok(if report.has_violation() { 1 } else { 0 })
        }
        Cmd::Bench {
            family,
            sizes,
            seed,
            p,
            json: as_json,
        } => {
            let family: Family = family.parse().map_err(|e: GenError| Fail::usage(e.to_string()))?;
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| Fail::usage("--sizes must be a comma-separated list of integers"))?;
            let rows = bench(&family, &sizes, p, seed).map_err(|e| Fail(1, e.to_string()))?;
            if as_json {
                println!("{}", json(&rows));
            } else {
                print!("{}", bench_table(&rows));
            }
            Ok(0)
        }
    }
}

fn solve_failure(g: &WeightedGraph, e: SolveError) -> Fail {
    let code = match &e.kind {
        SolveErrorKind::SizeCap { .. } => EXIT_SIZE_CAP,
        SolveErrorKind::ClassViolation { .. } | SolveErrorKind::NotChordal { .. } => EXIT_CLASS,
    };
    let hint = match &e.kind {
        SolveErrorKind::SizeCap { .. } => {
            let banner = find_induced(g, &Pattern::banner()).ok().flatten();
            match banner.or_else(|| find_induced(g, &Pattern::p6()).ok().flatten()) {
                Some(w) => format!(" (input contains {})", witness_text(g, &w)),
                None => String::new(),
            }
        }
        _ => String::new(),
    };
    Fail(code, format!("{e}{hint}"))
}

fn decomposition_text(v: &serde_json::Value, what: What) -> String {
    let ids = |a: &serde_json::Value| {
        a.as_array()
            .map(|xs| xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .unwrap_or_default()
    };
    let mut out = String::new();
    match what {
        What::Atoms => {
            for (i, comp) in v["components"].as_array().into_iter().flatten().enumerate() {
                out.push_str(&format!("component {i}\n"));
                for step in comp["atoms"].as_array().into_iter().flatten() {
                    out.push_str(&format!(
                        "  atom [{}] separator [{}]\n",
                        ids(&step["atom"]),
                        ids(&step["separator"])
                    ));
                }
            }
        }
        What::Modular => {
            fn walk(v: &serde_json::Value, depth: usize, out: &mut String, ids: &dyn Fn(&serde_json::Value) -> String) {
                if v.is_null() {
                    return;
                }
                let kind = v["kind"].as_str().unwrap_or("?");
                out.push_str(&format!("{}{kind} [{}]\n", "  ".repeat(depth), ids(&v["vertices"])));
                for c in v["children"].as_array().into_iter().flatten() {
                    walk(c, depth + 1, out, ids);
                }
            }
            walk(v, 0, &mut out, &ids);
        }
    }
    out
}
