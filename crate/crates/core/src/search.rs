//! Randomized search for instances where the greedy tree is far from optimal.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certificate::analyze;
use crate::generate::random_connected_with;
use crate::graph::Graph;
use crate::oracle::{has_tree_with_leaves, CDS_MAX_VERTICES};
use crate::solver::{solve, StartPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TightSearchConfig {
    /// Largest vertex count tried; trials draw `n` from `4..=n_max`.
    pub n_max: usize,
    pub trials: u64,
    pub seed: u64,
    /// Cap on edges beyond a spanning tree. `None` allows up to `n`.
    pub max_extra_edges: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TightInstance {
    pub graph: Graph,
    pub alg_leaves: usize,
    pub opt_leaves: usize,
    /// Trial index that produced the graph.
    pub trial: u64,
}

impl TightInstance {
    pub fn ratio(&self) -> f64 {
        self.opt_leaves as f64 / self.alg_leaves as f64
    }

    /// Higher ratio first, then more algorithm leaves, then earlier trial.
    fn better_than(&self, other: &TightInstance) -> bool {
        let lhs = self.opt_leaves * other.alg_leaves;
        let rhs = other.opt_leaves * self.alg_leaves;
        match lhs.cmp(&rhs) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => {
                (self.alg_leaves, std::cmp::Reverse(self.trial)) > (other.alg_leaves, std::cmp::Reverse(other.trial))
            }
        }
    }
}

const CHUNK: u64 = 1024;

/// Smallest optimum that would let a graph with `alg` algorithm leaves beat
/// `best`.
fn required_opt(alg: usize, best: Option<&TightInstance>) -> usize {
    match best {
        None => 0,
        Some(b) => {
            // opt * b.alg > b.opt * alg, or equality with alg > b.alg
            let floor = b.opt_leaves * alg / b.alg_leaves;
            if floor * b.alg_leaves == b.opt_leaves * alg && alg > b.alg_leaves {
                floor
            } else {
                floor + 1
            }
        }
    }
}

fn run_trial(config: &TightSearchConfig, trial: u64, best: Option<&TightInstance>) -> Option<TightInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let lo = config.n_max.min(4);
    let n = rng.gen_range(lo..=config.n_max);
    let max_extra = config.max_extra_edges.unwrap_or(n).min(n * (n - 1) / 2 - (n - 1));
    let m = n - 1 + rng.gen_range(0..=max_extra);
    let graph = random_connected_with(n, m, &mut rng);

    let solution = solve(&graph, StartPolicy::FirstEligible).expect("generated graphs are connected");
    let alg = solution.tree.leaf_count();
    let need = required_opt(alg, best);
    let upper = analyze(&graph, &solution.tree, &solution.trace)
        .expect("certificate invariants hold for solver output")
        .certificate
        .upper_bound;
    if upper < need {
        return None;
    }
    // the optimum is the largest count still achievable, at least `alg`
    let opt = (need.max(alg)..=upper).rev().find(|&t| has_tree_with_leaves(&graph, t).expect("small graph"))?;
    Some(TightInstance { graph, alg_leaves: alg, opt_leaves: opt, trial })
}

/// Samples `trials` random connected graphs and returns the one maximizing
/// `opt / alg`. Deterministic for a fixed config regardless of thread count.
///
/// Panics if `n_max` is outside `3..=64` or `trials` is zero.
pub fn tight_search(config: &TightSearchConfig) -> TightInstance {
    assert!((3..=CDS_MAX_VERTICES).contains(&config.n_max), "n_max out of range");
    assert!(config.trials > 0, "need at least one trial");
    let mut best: Option<TightInstance> = None;
    let mut begin = 0;
    while begin < config.trials {
        let end = (begin + CHUNK).min(config.trials);
        let found: Vec<TightInstance> =
            (begin..end).into_par_iter().filter_map(|t| run_trial(config, t, best.as_ref())).collect();
        for candidate in found {
            if best.as_ref().is_none_or(|b| candidate.better_than(b)) {
                best = Some(candidate);
            }
        }
        begin = end;
    }
    best.expect("the first trial always qualifies")
}
