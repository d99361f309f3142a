use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, VertexId};

/// Rooted spanning tree stored as a parent array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    root: VertexId,
    parent: Vec<Option<VertexId>>,
    degree: Vec<usize>,
    leaves: Vec<VertexId>,
}

impl SpanningTree {
    /// Wraps a parent array. No validation beyond index bounds; use
    /// [`verify_spanning_tree`] to check it against a graph.
    pub fn from_parents(root: VertexId, parent: Vec<Option<VertexId>>) -> Self {
        let mut degree = vec![0usize; parent.len()];
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                degree[v] += 1;
                if p < degree.len() {
                    degree[p] += 1;
                }
            }
        }
        let leaves = (0..parent.len()).filter(|&v| degree[v] == 1).collect();
        SpanningTree { root, parent, degree, leaves }
    }

    /// Roots an undirected edge set at `root` by breadth-first search.
    /// Vertices the edges do not reach keep no parent.
    pub fn from_edges(n: usize, root: VertexId, edges: &[(VertexId, VertexId)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        if root < n {
            seen[root] = true;
            queue.push_back(root);
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }
        Self::from_parents(root, parent)
    }

    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn parent(&self, v: VertexId) -> Option<VertexId> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<VertexId>] {
        &self.parent
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.degree[v]
    }

    /// Vertices of tree-degree exactly one, ascending.
    pub fn leaves(&self) -> &[VertexId] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_leaf(&self, v: VertexId) -> bool {
        self.degree[v] == 1
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.parent[u] == Some(v) || self.parent[v] == Some(u)
    }

    /// Tree edges as `(parent, child)`, ordered by child.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.parent.iter().enumerate().filter_map(|(v, p)| p.map(|p| (p, v)))
    }
}

/// Why a candidate is not a spanning tree of the graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeDefect {
    #[error("tree has {tree} vertices, graph has {graph}")]
    VertexCountMismatch { tree: usize, graph: usize },
    #[error("root {0} out of range or has a parent")]
    BadRoot(VertexId),
    #[error("vertex {0} has no parent")]
    MissingParent(VertexId),
    #[error("parent link {parent} -> {child} is not an edge of the graph")]
    NonEdge { parent: VertexId, child: VertexId },
    #[error("vertex {0} does not reach the root")]
    Cycle(VertexId),
}

/// Checks that `t` has n-1 parent links, all graph edges, acyclic and
/// connected to the root.
pub fn verify_spanning_tree(g: &Graph, t: &SpanningTree) -> Result<(), TreeDefect> {
    let n = g.n();
    if t.n() != n {
        return Err(TreeDefect::VertexCountMismatch { tree: t.n(), graph: n });
    }
    if t.root >= n || t.parent[t.root].is_some() {
        return Err(TreeDefect::BadRoot(t.root));
    }
    for v in 0..n {
        if v == t.root {
            continue;
        }
        let p = t.parent[v].ok_or(TreeDefect::MissingParent(v))?;
        if p >= n || !g.has_edge(p, v) {
            return Err(TreeDefect::NonEdge { parent: p, child: v });
        }
    }
    // 0 = unvisited, 1 = on the current walk, 2 = known to reach the root
    let mut state = vec![0u8; n];
    state[t.root] = 2;
    let mut walk = Vec::new();
    for start in 0..n {
        let mut v = start;
        while state[v] == 0 {
            state[v] = 1;
            walk.push(v);
            v = t.parent[v].expect("checked above");
        }
        if state[v] == 1 {
            return Err(TreeDefect::Cycle(v));
        }
        for w in walk.drain(..) {
            state[w] = 2;
        }
    }
    Ok(())
}

pub fn is_spanning_tree(g: &Graph, t: &SpanningTree) -> bool {
    verify_spanning_tree(g, t).is_ok()
}
