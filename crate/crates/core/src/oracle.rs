//! Exact maximum-leaf spanning trees for small graphs.
//!
//! [`max_leaf_exact`] enumerates every spanning tree by branching on edges
//! (include / exclude) in lexicographic edge order, rejecting cycles on
//! include and disconnecting exclusions. Every leaf of the recursion is a
//! spanning tree, so `trees_examined` is the spanning-tree count when leaf
//! pruning is off.
//!
//! [`max_leaf_via_cds`] is an independent route for graphs with at most 64
//! vertices: for `n >= 3` the internal vertices of a spanning tree form a
//! connected dominating set and vice versa, so the optimum is `n` minus the
//! smallest connected dominating set.

use thiserror::Error;

use crate::certificate::{analyze, Certificate, CertificateError};
use crate::graph::{Graph, VertexId};
use crate::solver::{solve, SolveError, StartPolicy};
use crate::tree::SpanningTree;

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest graph the bitmask route accepts.
pub const CDS_MAX_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub opt_leaves: usize,
    pub witness: SpanningTree,
    pub trees_examined: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("budget of {budget} trees exhausted")]
    BudgetExceeded {
        budget: u64,
        /// Best tree seen before giving up; `None` when the budget is zero.
        partial: Option<Box<OracleResult>>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    /// Maximum number of complete spanning trees to visit.
    pub budget: u64,
    /// Skip subtrees whose leaf upper bound cannot beat the incumbent.
    pub prune: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { budget: DEFAULT_BUDGET, prune: false }
    }
}

/// Unpruned exhaustive search with the given tree budget.
pub fn max_leaf_exact(g: &Graph, budget: u64) -> Result<OracleResult, OracleError> {
    max_leaf_exact_with(g, OracleOptions { budget, prune: false })
}

pub fn max_leaf_exact_with(g: &Graph, options: OracleOptions) -> Result<OracleResult, OracleError> {
    let n = g.n();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let mut e = Enumerator::new(g, options);
    e.recurse(0);
    let result = e.best.as_ref().map(|(opt_leaves, best)| {
        let tree_edges: Vec<_> = best.iter().map(|&i| e.edges[i]).collect();
        OracleResult {
            opt_leaves: *opt_leaves,
            witness: SpanningTree::from_edges(n, 0, &tree_edges),
            trees_examined: e.count.min(options.budget),
        }
    });
    match result {
        Some(result) if !e.aborted => Ok(result),
        partial => Err(OracleError::BudgetExceeded { budget: options.budget, partial: partial.map(Box::new) }),
    }
}

struct Enumerator {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    options: OracleOptions,
    uf_parent: Vec<usize>,
    uf_size: Vec<usize>,
    /// Roots merged by each union, for rollback.
    history: Vec<(usize, usize)>,
    degree: Vec<usize>,
    internal: usize,
    chosen: Vec<usize>,
    best: Option<(usize, Vec<usize>)>,
    count: u64,
    aborted: bool,
    scratch: Vec<usize>,
}

impl Enumerator {
    fn new(g: &Graph, options: OracleOptions) -> Self {
        let n = g.n();
        Enumerator {
            n,
            edges: g.sorted_edges(),
            options,
            uf_parent: (0..n).collect(),
            uf_size: vec![1; n],
            history: Vec::new(),
            degree: vec![0; n],
            internal: 0,
            chosen: Vec::with_capacity(n),
            best: None,
            count: 0,
            aborted: false,
            scratch: vec![0; n],
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.uf_parent[x] != x {
            x = self.uf_parent[x];
        }
        x
    }

    fn include(&mut self, i: usize, ra: usize, rb: usize) {
        let (big, small) = if self.uf_size[ra] >= self.uf_size[rb] { (ra, rb) } else { (rb, ra) };
        self.uf_parent[small] = big;
        self.uf_size[big] += self.uf_size[small];
        self.history.push((big, small));
        let (u, v) = self.edges[i];
        for x in [u, v] {
            self.degree[x] += 1;
            if self.degree[x] == 2 {
                self.internal += 1;
            }
        }
        self.chosen.push(i);
    }

    fn undo(&mut self) {
        let (big, small) = self.history.pop().unwrap();
        self.uf_parent[small] = small;
        self.uf_size[big] -= self.uf_size[small];
        let i = self.chosen.pop().unwrap();
        let (u, v) = self.edges[i];
        for x in [u, v] {
            if self.degree[x] == 2 {
                self.internal -= 1;
            }
            self.degree[x] -= 1;
        }
    }

    /// Whether the chosen edges plus `edges[from..]` still span the graph.
    fn still_connectable(&mut self, from: usize) -> bool {
        let mut uf = std::mem::take(&mut self.scratch);
        for (v, slot) in uf.iter_mut().enumerate() {
            *slot = self.find(v);
        }
        fn root(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let mut components = (0..self.n).filter(|&v| uf[v] == v).count();
        for &(u, v) in &self.edges[from..] {
            let (a, b) = (root(&mut uf, u), root(&mut uf, v));
            if a != b {
                uf[a] = b;
                components -= 1;
                if components == 1 {
                    break;
                }
            }
        }
        self.scratch = uf;
        components == 1
    }

    fn record_tree(&mut self) {
        self.count += 1;
        if self.count > self.options.budget {
            self.aborted = true;
            return;
        }
        let leaves = if self.n == 1 { 0 } else { self.degree.iter().filter(|&&d| d == 1).count() };
        if self.best.as_ref().is_none_or(|(b, _)| leaves > *b) {
            self.best = Some((leaves, self.chosen.clone()));
        }
    }

    fn recurse(&mut self, i: usize) {
        if self.aborted {
            return;
        }
        if self.chosen.len() + 1 == self.n {
            self.record_tree();
            return;
        }
        if i == self.edges.len() {
            return;
        }
        if self.options.prune {
            if let Some((best, _)) = &self.best {
                // vertices already of degree two can never become leaves
                if self.n - self.internal <= *best {
                    return;
                }
            }
        }
        let (u, v) = self.edges[i];
        let (ra, rb) = (self.find(u), self.find(v));
        if ra == rb {
            self.recurse(i + 1);
            return;
        }
        self.include(i, ra, rb);
        self.recurse(i + 1);
        self.undo();
        if self.still_connectable(i + 1) {
            self.recurse(i + 1);
        }
    }
}

/// Bitmask view of a graph with at most 64 vertices.
struct Masks {
    n: usize,
    closed: Vec<u64>,
    open: Vec<u64>,
}

impl Masks {
    fn new(g: &Graph) -> Self {
        let open: Vec<u64> = g.vertices().map(|v| g.neighbors(v).fold(0u64, |m, w| m | 1 << w)).collect();
        let closed = open.iter().enumerate().map(|(v, &m)| m | 1 << v).collect();
        Masks { n: g.n(), closed, open }
    }

    fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    fn is_cds(&self, set: u64) -> bool {
        let mut dominated = 0u64;
        let mut rest = set;
        while rest != 0 {
            dominated |= self.closed[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        if dominated != self.full() {
            return false;
        }
        let mut reached = set & set.wrapping_neg();
        loop {
            let mut next = reached;
            let mut rest = reached;
            while rest != 0 {
                next |= self.open[rest.trailing_zeros() as usize] & set;
                rest &= rest - 1;
            }
            if next == reached {
                return reached == set;
            }
            reached = next;
        }
    }

    /// Some connected dominating set of exactly `size` vertices exists.
    fn has_cds_of_size(&self, size: usize) -> bool {
        if size == 0 || size > self.n {
            return false;
        }
        let limit = if self.n == 64 { None } else { Some(1u64 << self.n) };
        let mut set: u64 = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        loop {
            if self.is_cds(set) {
                return true;
            }
            // next subset with the same popcount (Gosper)
            let c = set & set.wrapping_neg();
            let r = set.wrapping_add(c);
            if r == 0 {
                return false;
            }
            set = (((r ^ set) >> 2) / c) | r;
            if limit.is_some_and(|l| set >= l) {
                return false;
            }
        }
    }
}

/// Whether some spanning tree of a connected `g` has at least `target` leaves.
/// `None` when `g` has more than [`CDS_MAX_VERTICES`] vertices.
pub fn has_tree_with_leaves(g: &Graph, target: usize) -> Option<bool> {
    let n = g.n();
    if n > CDS_MAX_VERTICES {
        return None;
    }
    Some(match n {
        0 => false,
        1 => target == 0,
        2 => target <= 2,
        _ => target == 0 || (target < n && Masks::new(g).has_cds_of_size(n - target)),
    })
}

/// Maximum leaf count of a connected `g` through minimum connected
/// dominating sets. `None` when `g` is too large.
pub fn max_leaf_via_cds(g: &Graph) -> Option<usize> {
    let n = g.n();
    if n > CDS_MAX_VERTICES {
        return None;
    }
    Some(match n {
        0 | 1 => 0,
        2 => 2,
        _ => {
            let masks = Masks::new(g);
            let size = (1..=n).find(|&s| masks.has_cds_of_size(s)).expect("connected graph");
            n - size
        }
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompareError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Algorithm versus exact optimum on one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub alg_leaves: usize,
    pub opt_leaves: usize,
    /// `opt / alg`; 1 when both are zero.
    pub ratio: f64,
    /// `None` for graphs with fewer than three vertices.
    pub certificate: Option<Certificate>,
    /// Lemmas pass and the optimum respects the certificate bound.
    pub certificate_ok: bool,
    /// `opt <= 2 * alg - 1` (or the instance is the single vertex).
    pub bound_ok: bool,
}

pub fn compare(g: &Graph, policy: StartPolicy, budget: u64) -> Result<Comparison, CompareError> {
    let solution = solve(g, policy)?;
    let opt = max_leaf_exact_with(g, OracleOptions { budget, prune: true })?;
    let alg_leaves = solution.tree.leaf_count();
    let opt_leaves = opt.opt_leaves;
    let (certificate, certificate_ok) = if g.n() >= 3 {
        let analysis = analyze(g, &solution.tree, &solution.trace)?;
        let ok = analysis.lemmas.passed() && opt_leaves <= analysis.certificate.upper_bound;
        (Some(analysis.certificate), ok)
    } else {
        (None, true)
    };
    let ratio = if alg_leaves == 0 { 1.0 } else { opt_leaves as f64 / alg_leaves as f64 };
    let bound_ok = opt_leaves < 2 * alg_leaves || opt_leaves == alg_leaves;
    Ok(Comparison { alg_leaves, opt_leaves, ratio, certificate, certificate_ok, bound_ok })
}
