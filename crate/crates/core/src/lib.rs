//! Exact maximum weight independent set on hereditary graph classes defined
//! by forbidden induced subgraphs, built from chordal solves, clique-separator
//! decomposition and modular decomposition.

pub mod atoms;
pub mod audit;
pub mod bench;
pub mod chordal;
pub mod fuzz;
pub mod generators;
pub mod graph;
pub mod io;
pub mod modular;
pub mod pattern;
pub mod solution;
pub mod solver;

pub use graph::{GraphError, VertexSet, Weight, WeightedGraph};
pub use pattern::{Pattern, PatternWitness};
pub use solution::{Layer, SolveError, SolveErrorKind, SolveOutcome, SolveResult, SolveStats};
pub use solver::{auto_solve, Mode, Solver, SolverConfig};
