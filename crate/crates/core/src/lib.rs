//! Maximum-leaf spanning trees: a linear-time greedy 2-approximation, the
//! rank-based certificate that proves its quality on each run, and exact
//! brute-force oracles for small graphs.
//!
//! ```
//! use maxleaf_core::{analyze, generate::grid, solve, StartPolicy};
//!
//! let g = grid(4, 4);
//! let run = solve(&g, StartPolicy::FirstEligible).unwrap();
//! let analysis = analyze(&g, &run.tree, &run.trace).unwrap();
//! assert!(analysis.certificate.upper_bound < 2 * run.tree.leaf_count());
//! ```

pub mod certificate;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod scaling;
pub mod search;
pub mod solver;
pub mod tree;

pub use certificate::{
    analyze, assign_ranks, build_forest, check_lemmas, compute_certificate, Analysis, Certificate, CertificateError,
    LemmaReport, RankAssignment, RankForest,
};
pub use generate::{generate, Family, GenerateError, InstanceSpec};
pub use graph::{Graph, GraphError, Neighbors, VertexId};
pub use io::{parse, serialize, to_dot, Format, ParseError};
pub use oracle::{compare, max_leaf_exact, Comparison, OracleError, OracleResult};
pub use search::{tight_search, TightInstance, TightSearchConfig};
pub use solver::{pick_start, solve, tree, Case, ExpansionStep, ExpansionTrace, Solution, SolveError, StartPolicy};
pub use tree::{is_spanning_tree, verify_spanning_tree, SpanningTree, TreeDefect};
