//! Simple undirected graphs stored in compressed adjacency form.
//!
//! Vertex ids are dense `0..n`. Each vertex's neighbor list keeps the order in
//! which its edges were inserted, which is what makes every downstream
//! algorithm reproducible. Storage is 32-bit, so `n` and `2m` must fit in a
//! `u32`.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

/// Dense vertex index in `0..n`.
pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0} -- {1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("graph with {n} vertices and {m} edges exceeds 32-bit storage")]
    TooLarge { n: usize, m: usize },
}

fn fits(n: usize, m: usize) -> bool {
    n < u32::MAX as usize && m.checked_mul(2).is_some_and(|arcs| arcs <= u32::MAX as usize)
}

/// Immutable simple undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
}

/// Neighbors of one vertex, in insertion order.
#[derive(Debug, Clone)]
pub struct Neighbors<'a>(std::slice::Iter<'a, u32>);

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    #[inline]
    fn next(&mut self) -> Option<VertexId> {
        self.0.next().map(|&v| v as VertexId)
    }

    #[inline]
    fn size_hint(&self) -> (usize, Option<usize>) {
        self.0.size_hint()
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

impl DoubleEndedIterator for Neighbors<'_> {
    #[inline]
    fn next_back(&mut self) -> Option<VertexId> {
        self.0.next_back().map(|&v| v as VertexId)
    }
}

impl Graph {
    /// Builds a graph from an edge list. Neighbor lists follow edge order:
    /// edge `(u, v)` appends `v` to `u`'s list and `u` to `v`'s list.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        if !fits(n, edges.len()) {
            return Err(GraphError::TooLarge { n, m: edges.len() });
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self::from_edges_unchecked(n, edges))
    }

    /// Like [`Graph::from_edges`] for edge lists already known to be simple
    /// and in range.
    ///
    /// # Panics
    ///
    /// If `n` or `2m` does not fit in 32 bits.
    pub(crate) fn from_edges_unchecked(n: usize, edges: &[(VertexId, VertexId)]) -> Self {
        assert!(fits(n, edges.len()), "graph exceeds 32-bit storage");
        let mut offsets = vec![0u32; n + 1];
        for &(u, v) in edges {
            offsets[u + 1] += 1;
            offsets[v + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * edges.len()];
        for &(u, v) in edges {
            targets[fill[u] as usize] = v as u32;
            fill[u] += 1;
            targets[fill[v] as usize] = u as u32;
            fill[v] += 1;
        }
        Graph { offsets, targets }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        (self.offsets[v + 1] - self.offsets[v]) as usize
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> Neighbors<'_> {
        Neighbors(self.targets[self.offsets[v] as usize..self.offsets[v + 1] as usize].iter())
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.neighbors(a).any(|w| w == b)
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Each edge once as `(u, v)` with `u < v`, in adjacency order of `u`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| self.neighbors(u).filter(move |&v| u < v).map(move |v| (u, v)))
    }

    /// All edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn sorted_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut edges: Vec<_> = self.edges().collect();
        edges.sort_unstable();
        edges
    }

    /// Breadth-first reachability from vertex 0. The empty graph counts as
    /// disconnected, the single vertex as connected.
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == n
    }

    /// Checks symmetry, simplicity and edge-count consistency by direct scan.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.n();
        let mut total = 0;
        for u in self.vertices() {
            let nbrs = self.neighbors(u);
            total += nbrs.len();
            let mut seen = HashSet::with_capacity(nbrs.len());
            for v in nbrs {
                if v >= n {
                    return Err(format!("neighbor {v} of {u} out of range"));
                }
                if v == u {
                    return Err(format!("self-loop at {u}"));
                }
                if !seen.insert(v) {
                    return Err(format!("duplicate neighbor {v} of {u}"));
                }
                if !self.has_edge(v, u) {
                    return Err(format!("asymmetric edge {u} -> {v}"));
                }
            }
        }
        if total != 2 * self.m() {
            return Err(format!("edge count {} inconsistent with adjacency total {total}", self.m()));
        }
        Ok(())
    }
}
