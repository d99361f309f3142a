//! Greedy tree expansion for maximum-leaf spanning trees.
//!
//! Starting from a single vertex, the tree is repeatedly expanded at one of
//! its vertices `u` by attaching every neighbor of `u` that is still outside
//! the tree. The expansion vertex is chosen by priority class:
//!
//! * `W2`: `u` has at least two outside neighbors;
//! * `W1`: `u` has exactly one outside neighbor `v`, and `v` in turn has a
//!   number of outside neighbors other than one;
//! * `W0`: `u` has exactly one outside neighbor `v`, and `v` has exactly one
//!   outside neighbor. Among these the most recently joined vertex wins,
//!   which grows a path depth-first.
//!
//! The classes are kept as three waiting lists (FIFO, FIFO, LIFO) and every
//! vertex is re-classified lazily when it is popped, so the whole run touches
//! each adjacency list a constant number of times.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{Graph, VertexId};
use crate::tree::SpanningTree;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not connected")]
    Disconnected,
    #[error("start vertex {vertex} out of range (n = {n})")]
    StartOutOfRange { vertex: VertexId, n: usize },
    #[error("start vertex {vertex} has degree {degree}; at least 2 is required")]
    StartDegreeTooLow { vertex: VertexId, degree: usize },
}

/// How the initial vertex of the tree is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StartPolicy {
    /// Lowest id with degree at least two.
    #[default]
    FirstEligible,
    /// Lowest id among the vertices of maximum degree.
    MaxDegree,
    Explicit(VertexId),
}

impl FromStr for StartPolicy {
    type Err = String;

    /// Accepts `first`, `maxdeg` (or `max-degree`) and `vertex:<id>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(StartPolicy::FirstEligible),
            "maxdeg" | "max-degree" => Ok(StartPolicy::MaxDegree),
            _ => s
                .strip_prefix("vertex:")
                .and_then(|id| id.parse().ok())
                .map(StartPolicy::Explicit)
                .ok_or_else(|| format!("unknown start policy `{s}` (expected first, maxdeg or vertex:<id>)")),
        }
    }
}

pub fn pick_start(g: &Graph, policy: StartPolicy) -> Result<VertexId, SolveError> {
    let n = g.n();
    if n == 0 {
        return Err(SolveError::Empty);
    }
    match policy {
        StartPolicy::Explicit(v) => {
            if v >= n {
                return Err(SolveError::StartOutOfRange { vertex: v, n });
            }
            if n >= 3 && g.degree(v) < 2 {
                return Err(SolveError::StartDegreeTooLow { vertex: v, degree: g.degree(v) });
            }
            Ok(v)
        }
        _ if n <= 2 => Ok(0),
        StartPolicy::FirstEligible => Ok(g.vertices().find(|&v| g.degree(v) >= 2).unwrap_or(0)),
        StartPolicy::MaxDegree => {
            let max = g.max_degree();
            Ok(g.vertices().find(|&v| g.degree(v) == max).unwrap_or(0))
        }
    }
}

/// Which waiting list the expanded vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    W2,
    W1,
    W0,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::W2 => "W2",
            Case::W1 => "W1",
            Case::W0 => "W0",
        })
    }
}

/// One expansion: `center` gained the children in `added`, in adjacency order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionStep<'a> {
    /// 1-based position in the trace.
    pub index: usize,
    pub center: VertexId,
    pub case: Case,
    pub added: &'a [VertexId],
}

impl fmt::Display for ExpansionStep<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step={} case={} center={} added=", self.index, self.case, self.center)?;
        for (i, v) in self.added.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct StepRecord {
    center: VertexId,
    case: Case,
    end: usize,
}

/// Ordered record of every expansion of a run; enough to replay it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTrace {
    start: VertexId,
    records: Vec<StepRecord>,
    added: Vec<VertexId>,
}

impl ExpansionTrace {
    pub fn new(start: VertexId) -> Self {
        ExpansionTrace { start, records: Vec::new(), added: Vec::new() }
    }

    pub fn push(&mut self, center: VertexId, case: Case, added: &[VertexId]) {
        self.added.extend_from_slice(added);
        self.records.push(StepRecord { center, case, end: self.added.len() });
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn step(&self, i: usize) -> ExpansionStep<'_> {
        let rec = self.records[i];
        let begin = if i == 0 { 0 } else { self.records[i - 1].end };
        ExpansionStep { index: i + 1, center: rec.center, case: rec.case, added: &self.added[begin..rec.end] }
    }

    pub fn steps(&self) -> impl ExactSizeIterator<Item = ExpansionStep<'_>> + '_ {
        (0..self.len()).map(move |i| self.step(i))
    }

    /// Vertices in the order they joined the tree, starting with `start`.
    pub fn join_order(&self) -> impl Iterator<Item = VertexId> + '_ {
        std::iter::once(self.start).chain(self.added.iter().copied())
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub tree: SpanningTree,
    pub trace: ExpansionTrace,
    /// Adjacency entries read during the run.
    pub touches: u64,
}

/// Runs the expansion algorithm and returns the tree and its trace.
pub fn tree(g: &Graph, policy: StartPolicy) -> Result<(SpanningTree, ExpansionTrace), SolveError> {
    solve(g, policy).map(|s| (s.tree, s.trace))
}

/// Like [`tree`], also reporting the work counter.
pub fn solve(g: &Graph, policy: StartPolicy) -> Result<Solution, SolveError> {
    let start = pick_start(g, policy)?;
    let mut scheduler = Scheduler::new(g, start);
    // the lists run dry before every vertex joins exactly when G is disconnected
    scheduler.run()?;
    Ok(scheduler.finish())
}

/// Per-vertex state word: the tree-membership flag plus the count of
/// neighbors outside the tree, packed so a neighbor visit touches one slot.
/// Graph storage caps `2m` at `u32::MAX`, so every degree fits below the flag.
const IN_TREE: u32 = 1 << 31;
const COUNT: u32 = IN_TREE - 1;
const NO_PARENT: u32 = u32::MAX;

struct Scheduler<'g> {
    g: &'g Graph,
    state: Vec<u32>,
    /// `NO_PARENT` until the vertex joins.
    parent: Vec<u32>,
    joined: usize,
    w2: VecDeque<VertexId>,
    w1: VecDeque<VertexId>,
    w0: Vec<VertexId>,
    trace: ExpansionTrace,
    scratch: Vec<VertexId>,
    touches: u64,
}

impl<'g> Scheduler<'g> {
    fn new(g: &'g Graph, start: VertexId) -> Self {
        let n = g.n();
        let mut s = Scheduler {
            g,
            state: g.vertices().map(|v| g.degree(v) as u32).collect(),
            parent: vec![NO_PARENT; n],
            joined: 0,
            w2: VecDeque::new(),
            w1: VecDeque::new(),
            w0: Vec::new(),
            trace: ExpansionTrace::new(start),
            scratch: Vec::new(),
            touches: 0,
        };
        s.join(start);
        s
    }

    fn unspanned(&self, v: VertexId) -> u32 {
        self.state[v] & COUNT
    }

    fn in_tree(&self, v: VertexId) -> bool {
        self.state[v] & IN_TREE != 0
    }

    fn join(&mut self, v: VertexId) {
        self.state[v] |= IN_TREE;
        self.joined += 1;
        let nbrs = self.g.neighbors(v);
        self.touches += nbrs.len() as u64;
        for w in nbrs {
            self.state[w] -= 1;
        }
        self.w2.push_back(v);
    }

    fn expand(&mut self, u: VertexId, case: Case) {
        let mut added = std::mem::take(&mut self.scratch);
        added.clear();
        let nbrs = self.g.neighbors(u);
        self.touches += nbrs.len() as u64;
        added.extend(nbrs.filter(|&v| !self.in_tree(v)));
        for &v in &added {
            self.parent[v] = u as u32;
            self.join(v);
        }
        debug_assert_eq!(self.unspanned(u), 0);
        debug_assert!(if case == Case::W2 { added.len() >= 2 } else { added.len() == 1 });
        self.trace.push(u, case, &added);
        self.scratch = added;
    }

    fn first_unspanned(&mut self, u: VertexId) -> VertexId {
        for (i, v) in self.g.neighbors(u).enumerate() {
            if !self.in_tree(v) {
                self.touches += i as u64 + 1;
                return v;
            }
        }
        unreachable!("vertex {u} has an unspanned neighbor");
    }

    fn run(&mut self) -> Result<(), SolveError> {
        let n = self.g.n();
        while self.joined < n {
            if let Some(u) = self.w2.pop_front() {
                match self.unspanned(u) {
                    0 => {}
                    1 => self.w1.push_back(u),
                    _ => self.expand(u, Case::W2),
                }
            } else if let Some(u) = self.w1.pop_front() {
                // counts only decrease, so anything here has at most one
                debug_assert!(self.unspanned(u) <= 1);
                if self.unspanned(u) == 1 {
                    let v = self.first_unspanned(u);
                    if self.unspanned(v) == 1 {
                        self.w0.push(u);
                    } else {
                        self.expand(u, Case::W1);
                    }
                }
            } else if let Some(u) = self.w0.pop() {
                if self.unspanned(u) > 0 {
                    self.expand(u, Case::W0);
                }
            } else {
                return Err(SolveError::Disconnected);
            }
        }
        Ok(())
    }

    fn finish(self) -> Solution {
        let root = self.trace.start();
        let parent = self.parent.iter().map(|&p| (p != NO_PARENT).then_some(p as VertexId)).collect();
        Solution { tree: SpanningTree::from_parents(root, parent), trace: self.trace, touches: self.touches }
    }
}
