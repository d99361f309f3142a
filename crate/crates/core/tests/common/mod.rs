#![allow(dead_code)]

use maxleaf_core::generate::random_connected;
use maxleaf_core::solver::Case;
use maxleaf_core::{ExpansionTrace, Graph, VertexId};
use proptest::prelude::*;

/// Connected graphs with up to `max_n` vertices and up to `max_extra` edges
/// beyond a spanning tree.
pub fn connected_graph(max_n: usize, max_extra: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0..=max_extra, any::<u64>()).prop_map(|(n, extra, seed)| {
        let m = (n - 1 + extra).min(n * (n - 1) / 2);
        random_connected(n, m, seed).unwrap()
    })
}

/// Every connected labeled graph on `n` vertices.
pub fn connected_labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    (0u64..1 << pairs.len()).filter_map(move |mask| {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        g.is_connected().then_some(g)
    })
}

/// Replays a trace from scratch and checks each step against the selection
/// rules, recomputing every class by brute force. Returns the first problem.
pub fn check_against_reference(g: &Graph, trace: &ExpansionTrace) -> Result<(), String> {
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut joined_at = vec![usize::MAX; n];
    let mut clock = 0;
    let mut join = |v: VertexId, in_tree: &mut Vec<bool>, joined_at: &mut Vec<usize>| {
        in_tree[v] = true;
        joined_at[v] = clock;
        clock += 1;
    };
    join(trace.start(), &mut in_tree, &mut joined_at);

    let outside =
        |u: VertexId, in_tree: &[bool]| -> Vec<VertexId> { g.neighbors(u).filter(|&v| !in_tree[v]).collect() };
    // outside-neighbor count of v_T(u) once u's single outside edge is taken
    let onward = |u: VertexId, in_tree: &[bool]| -> usize {
        let v = outside(u, in_tree)[0];
        outside(v, in_tree).len()
    };

    for step in trace.steps() {
        let u = step.center;
        if !in_tree[u] {
            return Err(format!("step {}: center {u} not in tree", step.index));
        }
        let out_u = outside(u, &in_tree);
        if out_u != step.added {
            return Err(format!("step {}: added {:?} but outside neighbors are {out_u:?}", step.index, step.added));
        }
        let tree_vertices: Vec<_> = (0..n).filter(|&v| in_tree[v]).collect();
        let w2_exists = tree_vertices.iter().any(|&v| outside(v, &in_tree).len() >= 2);
        match step.case {
            Case::W2 => {
                if out_u.len() < 2 {
                    return Err(format!("step {}: W2 center has {} outside neighbors", step.index, out_u.len()));
                }
            }
            Case::W1 => {
                if w2_exists {
                    return Err(format!("step {}: W1 chosen while W2 is non-empty", step.index));
                }
                if out_u.len() != 1 || onward(u, &in_tree) == 1 {
                    return Err(format!("step {}: center {u} is not a W1 vertex", step.index));
                }
            }
            Case::W0 => {
                if w2_exists {
                    return Err(format!("step {}: W0 chosen while W2 is non-empty", step.index));
                }
                let w1_exists =
                    tree_vertices.iter().any(|&v| outside(v, &in_tree).len() == 1 && onward(v, &in_tree) >= 2);
                if w1_exists {
                    return Err(format!("step {}: W0 chosen while W1 is non-empty", step.index));
                }
                if out_u.len() != 1 {
                    return Err(format!("step {}: W0 center has {} outside neighbors", step.index, out_u.len()));
                }
                let latest = tree_vertices
                    .iter()
                    .copied()
                    .filter(|&v| !outside(v, &in_tree).is_empty())
                    .max_by_key(|&v| joined_at[v])
                    .unwrap();
                if latest != u {
                    return Err(format!("step {}: W0 picked {u}, most recent candidate is {latest}", step.index));
                }
            }
        }
        for &v in step.added {
            join(v, &mut in_tree, &mut joined_at);
        }
    }
    if in_tree.iter().any(|&b| !b) {
        return Err("trace does not span the graph".into());
    }
    Ok(())
}
