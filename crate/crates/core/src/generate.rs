//! Deterministic instance families. Every generator emits neighbor lists in
//! ascending id order.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::search::{tight_search, TightSearchConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("infeasible parameters for {family}: {reason}")]
    Infeasible { family: &'static str, reason: String },
    #[error("cannot parse instance spec `{0}`")]
    BadSpec(String),
}

fn infeasible(family: &'static str, reason: impl Into<String>) -> GenerateError {
    GenerateError::Infeasible { family, reason: reason.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Cycle { n: usize },
    Star { n: usize },
    Complete { n: usize },
    Grid { rows: usize, cols: usize },
    RandomConnected { n: usize, m: usize },
    TightSearch { n_max: usize, trials: u64 },
}

/// A family plus the seed for the randomized ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceSpec {
    pub family: Family,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family, seed: u64) -> Self {
        InstanceSpec { family, seed }
    }
}

impl FromStr for Family {
    type Err = GenerateError;

    /// `cycle:N`, `star:N`, `complete:N`, `grid:R,C`, `random:N,M`, `tight:NMAX,TRIALS`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GenerateError::BadSpec(s.to_string());
        let (name, args) = s.split_once(':').ok_or_else(bad)?;
        let args: Vec<u64> =
            args.split(',').map(|a| a.trim().parse::<u64>()).collect::<Result<_, _>>().map_err(|_| bad())?;
        let us = |i: usize| args[i] as usize;
        Ok(match (name, args.len()) {
            ("cycle", 1) => Family::Cycle { n: us(0) },
            ("star", 1) => Family::Star { n: us(0) },
            ("complete", 1) => Family::Complete { n: us(0) },
            ("grid", 2) => Family::Grid { rows: us(0), cols: us(1) },
            ("random", 2) => Family::RandomConnected { n: us(0), m: us(1) },
            ("tight", 2) => Family::TightSearch { n_max: us(0), trials: args[1] },
            _ => return Err(bad()),
        })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Cycle { n } => write!(f, "cycle:{n}"),
            Family::Star { n } => write!(f, "star:{n}"),
            Family::Complete { n } => write!(f, "complete:{n}"),
            Family::Grid { rows, cols } => write!(f, "grid:{rows},{cols}"),
            Family::RandomConnected { n, m } => write!(f, "random:{n},{m}"),
            Family::TightSearch { n_max, trials } => write!(f, "tight:{n_max},{trials}"),
        }
    }
}

pub fn generate(spec: &InstanceSpec) -> Result<Graph, GenerateError> {
    match spec.family {
        Family::Cycle { n } if n < 3 => Err(infeasible("cycle", "needs n >= 3")),
        Family::Cycle { n } => Ok(cycle(n)),
        Family::Star { n } | Family::Complete { n } if n == 0 => Err(infeasible("star/complete", "needs n >= 1")),
        Family::Star { n } => Ok(star(n)),
        Family::Complete { n } => Ok(complete(n)),
        Family::Grid { rows, cols } if rows == 0 || cols == 0 => Err(infeasible("grid", "empty grid")),
        Family::Grid { rows, cols } => Ok(grid(rows, cols)),
        Family::RandomConnected { n, m } => random_connected(n, m, spec.seed),
        Family::TightSearch { n_max, trials } => {
            if !(4..=crate::oracle::CDS_MAX_VERTICES).contains(&n_max) {
                return Err(infeasible("tight", format!("n_max must be in 4..={}", crate::oracle::CDS_MAX_VERTICES)));
            }
            let config = TightSearchConfig { n_max, trials, seed: spec.seed, max_extra_edges: None };
            Ok(tight_search(&config).graph)
        }
    }
}

/// Sorted `(u, v)` pairs with `u < v` give ascending neighbor lists.
fn from_sorted(n: usize, mut edges: Vec<(VertexId, VertexId)>) -> Graph {
    for e in edges.iter_mut() {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    Graph::from_edges_unchecked(n, &edges)
}

/// Ring `0 - 1 - ... - (n-1) - 0`. Panics for `n < 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    from_sorted(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

/// Center 0 joined to `1..n`.
pub fn star(n: usize) -> Graph {
    from_sorted(n, (1..n).map(|i| (0, i)).collect())
}

pub fn complete(n: usize) -> Graph {
    from_sorted(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect())
}

/// `rows x cols` lattice, vertex `(r, c)` has id `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    from_sorted(rows * cols, edges)
}

/// Uniform random labeled tree on `n` vertices, decoded from a random Prüfer
/// sequence in linear time.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Vec<(VertexId, VertexId)> {
    match n {
        0 | 1 => return Vec::new(),
        2 => return vec![(0, 1)],
        _ => {}
    }
    let code: Vec<VertexId> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = degree.iter().position(|&d| d == 1).unwrap();
    let mut leaf = ptr;
    for &c in &code {
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 && c < ptr {
            leaf = c;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Uniform random spanning tree of `K_n` plus `m - n + 1` distinct extra edges
/// chosen uniformly among the remaining pairs.
pub fn random_connected(n: usize, m: usize, seed: u64) -> Result<Graph, GenerateError> {
    if n == 0 {
        return Err(infeasible("random", "needs n >= 1"));
    }
    let max_edges = n * (n - 1) / 2;
    if m + 1 < n || m > max_edges {
        return Err(infeasible("random", format!("m = {m} outside [{}, {max_edges}]", n - 1)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_connected_with(n, m, &mut rng))
}

pub(crate) fn random_connected_with<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    let tree = random_tree(n, rng);
    let key = |u: VertexId, v: VertexId| if u < v { (u, v) } else { (v, u) };
    let mut present: HashSet<(VertexId, VertexId)> = tree.iter().map(|&(u, v)| key(u, v)).collect();
    let extra = m - tree.len();
    let available = n * (n - 1) / 2 - tree.len();
    let mut edges = tree;
    if extra * 2 > available {
        // dense: shuffle the complement and take a prefix
        let mut rest: Vec<_> =
            (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|e| !present.contains(e)).collect();
        rest.shuffle(rng);
        edges.extend_from_slice(&rest[..extra]);
    } else {
        while edges.len() < m {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v && present.insert(key(u, v)) {
                edges.push(key(u, v));
            }
        }
    }
    from_sorted(n, edges)
}
