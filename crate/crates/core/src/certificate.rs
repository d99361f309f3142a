//! Optimality certificates for trees produced by [`crate::solver`].
//!
//! Each vertex gets a rank from the expansion trace: the start vertex has
//! rank 1, children added by a `W2` expansion inherit their parent's rank,
//! and the single child added by a `W1`/`W0` expansion gets a fresh rank one
//! above every rank seen so far. Deleting the tree edges whose endpoints have
//! different ranks leaves the rank forest `F`, whose components are exactly
//! the rank classes. With `U` the vertices of unique rank and `k` the number
//! of components with at least three vertices, no spanning tree of the graph
//! has more than `n - |U| - k + 1` leaves, and that bound is at most
//! `2 * leaves(T) - 1`.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::solver::{Case, ExpansionTrace};
use crate::tree::SpanningTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("trace does not match the graph: {0}")]
    InconsistentTrace(String),
    #[error("certificates need at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("rank forest invariant violated: {0}")]
    Forest(String),
    #[error("certificate invariant violated: {0}")]
    Bound(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankAssignment {
    rank: Vec<u32>,
}

impl RankAssignment {
    pub fn rank(&self, v: VertexId) -> u32 {
        self.rank[v]
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.rank
    }

    pub fn max_rank(&self) -> u32 {
        self.rank.iter().copied().max().unwrap_or(0)
    }
}

/// Replays `trace` on `g` and assigns ranks.
pub fn assign_ranks(g: &Graph, trace: &ExpansionTrace) -> Result<RankAssignment, CertificateError> {
    let bad = |msg: String| Err(CertificateError::InconsistentTrace(msg));
    let n = g.n();
    let start = trace.start();
    if start >= n {
        return bad(format!("start {start} out of range"));
    }
    let mut rank = vec![0u32; n];
    rank[start] = 1;
    let mut max_rank = 1;
    let mut assigned = 1;
    for step in trace.steps() {
        let u = step.center;
        if u >= n || rank[u] == 0 {
            return bad(format!("step {} expands {u}, which is not in the tree", step.index));
        }
        let expected = match step.case {
            Case::W2 => step.added.len() >= 2,
            Case::W1 | Case::W0 => step.added.len() == 1,
        };
        if !expected {
            return bad(format!("step {} is {} but adds {} vertices", step.index, step.case, step.added.len()));
        }
        let r = match step.case {
            Case::W2 => rank[u],
            Case::W1 | Case::W0 => {
                max_rank += 1;
                max_rank
            }
        };
        for &v in step.added {
            if v >= n || rank[v] != 0 {
                return bad(format!("step {} re-adds vertex {v}", step.index));
            }
            if !g.has_edge(u, v) {
                return bad(format!("step {} adds {v} via non-edge {u} -- {v}", step.index));
            }
            rank[v] = r;
            assigned += 1;
        }
    }
    if assigned != n {
        return bad(format!("trace spans {assigned} of {n} vertices"));
    }
    Ok(RankAssignment { rank })
}

/// One rank class of the forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub rank: u32,
    pub vertices: Vec<VertexId>,
    /// Vertices of forest-degree one.
    pub leaves: Vec<VertexId>,
}

impl Component {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }
}

/// The spanning tree with all rank-changing edges deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankForest {
    components: Vec<Component>,
    component_of: Vec<usize>,
    degree: Vec<usize>,
}

impl RankForest {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, v: VertexId) -> &Component {
        &self.components[self.component_of[v]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    /// `v` is alone in its component, i.e. its rank is unique.
    pub fn is_singleton(&self, v: VertexId) -> bool {
        self.component_of(v).size() == 1
    }

    pub fn leaf_count(&self) -> usize {
        self.degree.iter().filter(|&&d| d == 1).count()
    }

    /// Number of vertices with a unique rank.
    pub fn u_size(&self) -> usize {
        self.components.iter().filter(|c| c.size() == 1).count()
    }

    /// Number of components with at least three vertices.
    pub fn k(&self) -> usize {
        self.components.iter().filter(|c| c.size() >= 3).count()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Builds `F` and checks its structural invariants.
pub fn build_forest(g: &Graph, t: &SpanningTree, r: &RankAssignment) -> Result<RankForest, CertificateError> {
    let n = g.n();
    if t.n() != n || r.rank.len() != n {
        return Err(CertificateError::InconsistentTrace("graph, tree and ranks disagree on n".into()));
    }
    let mut degree = vec![0usize; n];
    let mut uf: Vec<usize> = (0..n).collect();
    for (p, c) in t.edges() {
        if r.rank(p) == r.rank(c) {
            degree[p] += 1;
            degree[c] += 1;
            let (a, b) = (find(&mut uf, p), find(&mut uf, c));
            uf[a] = b;
        }
    }

    // components in order of their first vertex
    let mut component_of = vec![usize::MAX; n];
    let mut root_to_comp = vec![usize::MAX; n];
    let mut components: Vec<Component> = Vec::new();
    for v in 0..n {
        let root = find(&mut uf, v);
        if root_to_comp[root] == usize::MAX {
            root_to_comp[root] = components.len();
            components.push(Component { rank: r.rank(v), vertices: Vec::new(), leaves: Vec::new() });
        }
        let ci = root_to_comp[root];
        component_of[v] = ci;
        let comp = &mut components[ci];
        if comp.rank != r.rank(v) {
            return Err(CertificateError::Forest(format!(
                "vertices {} and {v} are joined in F but have ranks {} and {}",
                comp.vertices[0],
                comp.rank,
                r.rank(v)
            )));
        }
        comp.vertices.push(v);
        if degree[v] == 1 {
            comp.leaves.push(v);
        }
    }

    let mut comp_of_rank = vec![usize::MAX; r.max_rank() as usize + 1];
    for (ci, comp) in components.iter().enumerate() {
        let slot = &mut comp_of_rank[comp.rank as usize];
        if *slot != usize::MAX {
            return Err(CertificateError::Forest(format!(
                "rank {} is split across components containing {} and {}",
                comp.rank, components[*slot].vertices[0], comp.vertices[0]
            )));
        }
        *slot = ci;
    }

    for comp in &components {
        let size = comp.size();
        if size == 2 {
            return Err(CertificateError::Forest(format!("component {:?} has exactly two vertices", comp.vertices)));
        }
        if size >= 3 {
            let deg_two: Vec<_> = comp.vertices.iter().filter(|&&v| degree[v] == 2).collect();
            if deg_two.len() > 1 {
                return Err(CertificateError::Forest(format!(
                    "component of rank {} has several forest-degree-2 vertices {deg_two:?}",
                    comp.rank
                )));
            }
            if size + 1 > 2 * comp.leaves.len() {
                return Err(CertificateError::Forest(format!(
                    "component of rank {} has {size} vertices but only {} leaves",
                    comp.rank,
                    comp.leaves.len()
                )));
            }
        }
    }

    Ok(RankForest { components, component_of, degree })
}

/// Upper bound on the leaf count of every spanning tree, next to the leaf
/// count actually achieved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub m: usize,
    pub u_size: usize,
    pub k: usize,
    pub upper_bound: usize,
    pub leaf_count: usize,
}

impl Certificate {
    /// `upper_bound / leaf_count`, an a-posteriori approximation ratio.
    pub fn ratio_bound(&self) -> f64 {
        self.upper_bound as f64 / self.leaf_count as f64
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        writeln!(f, "m={}", self.m)?;
        writeln!(f, "leaves={}", self.leaf_count)?;
        writeln!(f, "u_size={}", self.u_size)?;
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "upper_bound={}", self.upper_bound)?;
        write!(f, "ratio_bound={:.4}", self.ratio_bound())
    }
}

pub fn compute_certificate(g: &Graph, t: &SpanningTree, f: &RankForest) -> Result<Certificate, CertificateError> {
    let n = g.n();
    if n < 3 {
        return Err(CertificateError::TooSmall(n));
    }
    let u_size = f.u_size();
    let k = f.k();
    let leaf_count = t.leaf_count();
    let bad = |msg: String| Err(CertificateError::Bound(msg));
    if k < 1 {
        return bad("no forest component has three or more vertices".into());
    }
    // n - |U| + k - 1 >= n >= 3, so the subtraction below cannot underflow
    let upper_bound = n - u_size + 1 - k;
    let big: usize = f.components().iter().filter(|c| c.size() >= 3).map(Component::size).sum();
    if n - u_size != big {
        return bad(format!("n - |U| = {} but big components hold {big} vertices", n - u_size));
    }
    if f.leaf_count() + 1 > leaf_count + k {
        return bad(format!("|L(F)| = {} exceeds |L(T)| + k - 1 = {}", f.leaf_count(), leaf_count + k - 1));
    }
    if n - u_size + 2 > 2 * leaf_count + k {
        return bad(format!("n - |U| = {} exceeds 2|L(T)| + k - 2 = {}", n - u_size, 2 * leaf_count + k - 2));
    }
    if upper_bound < leaf_count {
        return bad(format!("upper bound {upper_bound} is below the tree's own {leaf_count} leaves"));
    }
    if upper_bound + 1 > 2 * leaf_count {
        return bad(format!("upper bound {upper_bound} exceeds 2|L(T)| - 1 = {}", 2 * leaf_count - 1));
    }
    Ok(Certificate { n, m: g.m(), u_size, k, upper_bound, leaf_count })
}

/// Outcome of one structural check, with a bounded list of witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaCheck {
    pub violations: usize,
    pub witnesses: Vec<Vec<VertexId>>,
}

impl LemmaCheck {
    const MAX_WITNESSES: usize = 16;

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    fn record(&mut self, witness: Vec<VertexId>) {
        self.violations += 1;
        if self.witnesses.len() < Self::MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }
}

/// Exhaustive checks of the four rank lemmas.
///
/// 1. A path `u v w` with `u, v` of unique rank and `r(u) < r(v) < r(w)`
///    forces `deg(v) = 2`. Witness: `[u, v, w]`.
/// 2. No vertex has two neighbors of higher rank. Witness: `[u, v, w]`.
/// 3. A vertex of forest-degree at least two has no neighbor of higher rank.
///    Witness: `[u, v]`.
/// 4. A unique-rank vertex outranks each neighbor that is a forest leaf.
///    Witness: `[u, v]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LemmaReport {
    pub lemma1: LemmaCheck,
    pub lemma2: LemmaCheck,
    pub lemma3: LemmaCheck,
    pub lemma4: LemmaCheck,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed())
    }

    pub fn checks(&self) -> [&LemmaCheck; 4] {
        [&self.lemma1, &self.lemma2, &self.lemma3, &self.lemma4]
    }
}

pub fn check_lemmas(g: &Graph, r: &RankAssignment, f: &RankForest) -> LemmaReport {
    let mut report = LemmaReport::default();
    for v in g.vertices() {
        let rv = r.rank(v);
        let nbrs = g.neighbors(v);

        // Only deg(v) >= 3 can violate lemma 1. A violating path exists iff
        // some unique-rank neighbor is below v and some neighbor is above.
        if f.is_singleton(v) && nbrs.len() >= 3 {
            let lows: Vec<_> = nbrs.clone().filter(|&u| f.is_singleton(u) && r.rank(u) < rv).collect();
            let highs: Vec<_> = nbrs.clone().filter(|&w| r.rank(w) > rv).collect();
            for &u in &lows {
                for &w in &highs {
                    report.lemma1.record(vec![u, v, w]);
                }
            }
        }

        let higher: Vec<_> = nbrs.clone().filter(|&w| r.rank(w) > rv).collect();
        for (i, &a) in higher.iter().enumerate() {
            for &b in &higher[i + 1..] {
                report.lemma2.record(vec![v, a, b]);
            }
        }

        if f.degree(v) >= 2 {
            for &w in &higher {
                report.lemma3.record(vec![v, w]);
            }
        }

        if f.is_singleton(v) {
            for w in nbrs {
                if f.degree(w) == 1 && rv <= r.rank(w) {
                    report.lemma4.record(vec![v, w]);
                }
            }
        }
    }
    report
}

/// Everything derived from one solver run.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub ranks: RankAssignment,
    pub forest: RankForest,
    pub certificate: Certificate,
    pub lemmas: LemmaReport,
}

/// Ranks, forest, certificate and lemma report in one pass.
pub fn analyze(g: &Graph, t: &SpanningTree, trace: &ExpansionTrace) -> Result<Analysis, CertificateError> {
    if g.n() < 3 {
        return Err(CertificateError::TooSmall(g.n()));
    }
    let ranks = assign_ranks(g, trace)?;
    let forest = build_forest(g, t, &ranks)?;
    let certificate = compute_certificate(g, t, &forest)?;
    let lemmas = check_lemmas(g, &ranks, &forest);
    Ok(Analysis { ranks, forest, certificate, lemmas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete, cycle, star};
    use crate::solver::{tree, StartPolicy};

    fn run(g: &Graph) -> (SpanningTree, ExpansionTrace, Analysis) {
        let (t, trace) = tree(g, StartPolicy::FirstEligible).unwrap();
        let a = analyze(g, &t, &trace).unwrap();
        (t, trace, a)
    }

    #[test]
    fn star_single_rank() {
        let (_, _, a) = run(&star(5));
        assert!(a.ranks.as_slice().iter().all(|&r| r == 1));
        assert_eq!(a.forest.components().len(), 1);
        assert_eq!(a.certificate, Certificate { n: 5, m: 4, u_size: 0, k: 1, upper_bound: 5, leaf_count: 4 });
        assert!(a.lemmas.passed());
    }

    #[test]
    fn cycle_ranks_and_forest() {
        let g = cycle(5);
        let (_, _, a) = run(&g);
        assert_eq!(a.ranks.as_slice(), &[1, 1, 3, 2, 1]);
        let comps: Vec<_> = a.forest.components().iter().map(|c| c.vertices.clone()).collect();
        assert_eq!(comps, vec![vec![0, 1, 4], vec![2], vec![3]]);
        assert_eq!((a.forest.u_size(), a.forest.k()), (2, 1));
        assert_eq!(a.certificate, Certificate { n: 5, m: 5, u_size: 2, k: 1, upper_bound: 3, leaf_count: 2 });
        // v4 has neighbors v0 (rank 1) and v3 (rank 2): exactly one higher
        assert_eq!(g.neighbors(4).filter(|&w| a.ranks.rank(w) > a.ranks.rank(4)).count(), 1);
        assert!(a.lemmas.passed());
    }

    #[test]
    fn complete_certificate() {
        let (_, _, a) = run(&complete(4));
        assert_eq!(a.certificate, Certificate { n: 4, m: 6, u_size: 0, k: 1, upper_bound: 4, leaf_count: 3 });
    }

    #[test]
    fn certificate_block_format() {
        let (_, _, a) = run(&cycle(5));
        assert_eq!(a.certificate.to_string(), "n=5\nm=5\nleaves=2\nu_size=2\nk=1\nupper_bound=3\nratio_bound=1.5000");
    }

    #[test]
    fn refuses_small_graphs() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let (t, trace) = tree(&g, StartPolicy::FirstEligible).unwrap();
        assert_eq!(analyze(&g, &t, &trace).unwrap_err(), CertificateError::TooSmall(2));
        let single = Graph::from_edges(1, &[]).unwrap();
        let (t, trace) = tree(&single, StartPolicy::FirstEligible).unwrap();
        let ranks = assign_ranks(&single, &trace).unwrap();
        let f = build_forest(&single, &t, &ranks).unwrap();
        assert_eq!((f.u_size(), f.k()), (1, 0));
        assert_eq!(compute_certificate(&single, &t, &f).unwrap_err(), CertificateError::TooSmall(1));
    }

    #[test]
    fn rejects_inconsistent_traces() {
        let g = cycle(5);
        let mut bogus = ExpansionTrace::new(0);
        bogus.push(0, Case::W2, &[1, 4]);
        bogus.push(4, Case::W0, &[2]);
        assert!(matches!(assign_ranks(&g, &bogus), Err(CertificateError::InconsistentTrace(_))));

        let mut short = ExpansionTrace::new(0);
        short.push(0, Case::W2, &[1, 4]);
        assert!(matches!(assign_ranks(&g, &short), Err(CertificateError::InconsistentTrace(_))));

        let mut mislabeled = ExpansionTrace::new(0);
        mislabeled.push(0, Case::W1, &[1, 4]);
        assert!(matches!(assign_ranks(&g, &mislabeled), Err(CertificateError::InconsistentTrace(_))));
    }

    #[test]
    fn forest_rejects_two_vertex_component() {
        // path 0-1-2-3 with ranks forcing a {2,3} class
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = SpanningTree::from_parents(0, vec![None, Some(0), Some(1), Some(2)]);
        let ranks = RankAssignment { rank: vec![1, 2, 3, 3] };
        assert!(matches!(build_forest(&g, &t, &ranks), Err(CertificateError::Forest(_))));
    }

    #[test]
    fn forest_rejects_split_rank_class() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let t = SpanningTree::from_parents(0, vec![None, Some(0), Some(1)]);
        let ranks = RankAssignment { rank: vec![1, 2, 1] };
        let err = build_forest(&g, &t, &ranks).unwrap_err();
        assert!(err.to_string().contains("split"), "{err}");
    }

    #[test]
    fn lemma_checks_flag_fabricated_ranks() {
        // star with center rank 1 and two leaves of higher rank violates lemma 2
        let g = star(4);
        let ranks = RankAssignment { rank: vec![1, 1, 2, 3] };
        let comps = vec![
            Component { rank: 1, vertices: vec![0, 1], leaves: vec![1] },
            Component { rank: 2, vertices: vec![2], leaves: vec![] },
            Component { rank: 3, vertices: vec![3], leaves: vec![] },
        ];
        let forest = RankForest { components: comps, component_of: vec![0, 0, 1, 2], degree: vec![1, 1, 0, 0] };
        let report = check_lemmas(&g, &ranks, &forest);
        assert_eq!(report.lemma2.witnesses, vec![vec![0, 2, 3]]);
        assert!(report.lemma1.passed() && report.lemma3.passed() && report.lemma4.passed());
        assert!(!report.passed());
    }
}
