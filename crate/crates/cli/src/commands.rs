use std::fmt::Write as _;
use std::io::Read;

use maxleaf_core::oracle::{max_leaf_exact, CompareError, OracleOptions};
use maxleaf_core::scaling::{ladder_csv, run_ladder, LadderConfig};
use maxleaf_core::{
    analyze, compare, generate, parse, serialize, solve, tight_search, to_dot, CertificateError, Family, Format,
    GenerateError, Graph, InstanceSpec, OracleError, SolveError, SpanningTree, TightSearchConfig,
};

use crate::{Command, InputArgs};

pub const EXIT_OTHER: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_DISCONNECTED: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;
pub const EXIT_BUDGET: u8 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Partial results printed before the error.
    pub stdout: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into(), stdout: String::new() }
    }

    fn with_stdout(mut self, out: String) -> Self {
        self.stdout = out;
        self
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        let code = match e {
            SolveError::Disconnected => EXIT_DISCONNECTED,
            _ => EXIT_OTHER,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Disconnected => CliError::new(EXIT_DISCONNECTED, e.to_string()),
            OracleError::BudgetExceeded { ref partial, .. } => {
                let out = partial
                    .as_ref()
                    .map(|p| format!("opt>={}\ntrees_examined={}\n", p.opt_leaves, p.trees_examined))
                    .unwrap_or_default();
                CliError::new(EXIT_BUDGET, e.to_string()).with_stdout(out)
            }
            OracleError::Empty => CliError::new(EXIT_OTHER, e.to_string()),
        }
    }
}

impl From<CertificateError> for CliError {
    fn from(e: CertificateError) -> Self {
        let code = match e {
            CertificateError::TooSmall(_) => EXIT_OTHER,
            _ => EXIT_VIOLATION,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<CompareError> for CliError {
    fn from(e: CompareError) -> Self {
        match e {
            CompareError::Solve(e) => e.into(),
            CompareError::Oracle(e) => e.into(),
            CompareError::Certificate(e) => e.into(),
        }
    }
}

fn generate_from(spec: &str, seed: u64) -> Result<Graph, CliError> {
    let bad = |e: GenerateError| CliError::new(EXIT_PARSE, e.to_string());
    let family: Family = spec.parse().map_err(bad)?;
    generate(&InstanceSpec::new(family, seed)).map_err(bad)
}

fn load(input: &InputArgs) -> Result<Graph, CliError> {
    let g = if let Some(spec) = &input.source.generator {
        generate_from(spec, input.seed)?
    } else {
        let path = input.source.path.as_deref().unwrap_or("-");
        let text = if path == "-" {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::new(EXIT_OTHER, format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::new(EXIT_OTHER, format!("{path}: {e}")))?
        };
        parse(&text, input.format).map_err(|e| CliError::new(EXIT_PARSE, format!("{path}: {e}")))?
    };
    if !g.is_connected() {
        return Err(CliError::new(EXIT_DISCONNECTED, "graph is not connected"));
    }
    Ok(g)
}

fn write_tree_edges(out: &mut String, t: &SpanningTree) {
    let mut edges: Vec<_> = t.edges().map(|(u, v)| (u.min(v), u.max(v))).collect();
    edges.sort_unstable();
    for (u, v) in edges {
        let _ = writeln!(out, "{u} {v}");
    }
}

pub fn run(command: Command) -> Result<String, CliError> {
    let mut out = String::new();
    match command {
        Command::Solve { input, policy, edges, dot, trace } => {
            let g = load(&input)?;
            let s = solve(&g, policy.start_policy)?;
            let _ = writeln!(out, "n={}\nm={}\nleaves={}", g.n(), g.m(), s.tree.leaf_count());
            if trace {
                for step in s.trace.steps() {
                    let _ = writeln!(out, "{step}");
                }
            }
            if edges {
                write_tree_edges(&mut out, &s.tree);
            }
            if dot {
                out.push_str(&to_dot(&g, Some(&s.tree)));
            }
        }
        Command::Certify { input, policy } => {
            let g = load(&input)?;
            if g.n() < 3 {
                return Err(CliError::new(EXIT_OTHER, format!("certify needs at least 3 vertices, got {}", g.n())));
            }
            let s = solve(&g, policy.start_policy)?;
            let a = analyze(&g, &s.tree, &s.trace)?;
            let passed = a.lemmas.passed();
            let _ = writeln!(out, "{}\nlemmas={}", a.certificate, if passed { "pass" } else { "fail" });
            if !passed {
                let mut msg = String::from("lemma violations:");
                for (i, check) in a.lemmas.checks().iter().enumerate() {
                    if !check.passed() {
                        let _ = write!(msg, " lemma{}={} (e.g. {:?})", i + 1, check.violations, check.witnesses[0]);
                    }
                }
                return Err(CliError::new(EXIT_VIOLATION, msg).with_stdout(out));
            }
        }
        Command::Oracle { input, budget, edges, prune } => {
            let g = load(&input)?;
            let r = maxleaf_core::oracle::max_leaf_exact_with(&g, OracleOptions { budget, prune })?;
            let _ = writeln!(out, "opt={}\ntrees_examined={}", r.opt_leaves, r.trees_examined);
            if edges {
                write_tree_edges(&mut out, &r.witness);
            }
        }
        Command::Compare { input, policy, budget } => {
            let g = load(&input)?;
            let c = compare(&g, policy.start_policy, budget)?;
            let _ =
                writeln!(out, "alg={} opt={} ratio={:.4} bound_ok={}", c.alg_leaves, c.opt_leaves, c.ratio, c.bound_ok);
            if !c.bound_ok {
                return Err(CliError::new(EXIT_VIOLATION, "optimum exceeds 2 * alg - 1").with_stdout(out));
            }
            if !c.certificate_ok {
                return Err(CliError::new(EXIT_VIOLATION, "certificate check failed").with_stdout(out));
            }
        }
        Command::Gen { spec, seed, format } => {
            let g = generate_from(&spec, seed)?;
            out.push_str(&serialize(&g, format));
        }
        Command::Bench { ladder: (exp_start, exp_stop), seed, reps } => {
            if reps == 0 {
                return Err(CliError::new(EXIT_USAGE, "--reps must be positive"));
            }
            let rows = run_ladder(&LadderConfig { exp_start, exp_stop, seed, reps })
                .map_err(|e| CliError::new(EXIT_OTHER, e.to_string()))?;
            out.push_str(&ladder_csv(&rows));
        }
        Command::TightSearch { n_max, trials, seed, max_extra_edges, out: path, budget } => {
            if !(4..=64).contains(&n_max) {
                return Err(CliError::new(EXIT_USAGE, "--n-max must be between 4 and 64"));
            }
            if trials == 0 {
                return Err(CliError::new(EXIT_USAGE, "--trials must be positive"));
            }
            let best = tight_search(&TightSearchConfig { n_max, trials, seed, max_extra_edges });
            // independent confirmation of the optimum by enumeration
            let exact = max_leaf_exact(&best.graph, budget)?;
            if exact.opt_leaves != best.opt_leaves {
                return Err(CliError::new(
                    EXIT_VIOLATION,
                    format!("search reported opt={} but enumeration found {}", best.opt_leaves, exact.opt_leaves),
                ));
            }
            let text = serialize(&best.graph, Format::EdgeList);
            std::fs::write(&path, &text).map_err(|e| CliError::new(EXIT_OTHER, format!("{}: {e}", path.display())))?;
            let _ = writeln!(
                out,
                "alg={}\nopt={}\nratio={:.4}\ntrial={}",
                best.alg_leaves,
                best.opt_leaves,
                best.ratio(),
                best.trial
            );
            out.push_str(&text);
        }
    }
    Ok(out)
}
