//! Canonical codes of unlabeled trees.
//!
//! The tree is rooted at its center (a vertex, or the midpoint of an edge),
//! and each rooted subtree is encoded as `(` + sorted child codes + `)`.
//! Two trees get the same code iff they are isomorphic.

use super::tree::XTree;
use super::Stratum;

enum Center {
    Vertex(usize),
    Edge(usize, usize),
}

fn center(adj: &[Vec<usize>]) -> Center {
    let nv = adj.len();
    if nv == 1 {
        return Center::Vertex(0);
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..nv).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = nv;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &u in &adj[v] {
                if deg[u] > 1 {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
            deg[v] = 0;
        }
        layer = next;
    }
    match layer.as_slice() {
        [v] => Center::Vertex(*v),
        [u, v] => Center::Edge(*u, *v),
        _ => unreachable!("a tree has one or two centers"),
    }
}

fn rooted_code(adj: &[Vec<usize>], v: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&u| Some(u) != parent).map(|&u| rooted_code(adj, u, Some(v))).collect();
    kids.sort();
    let mut s = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
    s.push('(');
    for k in kids {
        s.push_str(&k);
    }
    s.push(')');
    s
}

pub(crate) fn tree_code(adj: &[Vec<usize>]) -> String {
    match center(adj) {
        Center::Vertex(v) => rooted_code(adj, v, None),
        Center::Edge(u, v) => {
            let mut pair = [rooted_code(adj, u, Some(v)), rooted_code(adj, v, Some(u))];
            pair.sort();
            format!("[{}{}]", pair[0], pair[1])
        }
    }
}

/// Leaves of `adj` listed in the canonical traversal order: depth first from
/// the center, children visited in ascending code order.
pub(crate) fn canonical_leaf_order(adj: &[Vec<usize>]) -> Vec<usize> {
    fn walk(adj: &[Vec<usize>], v: usize, parent: Option<usize>, out: &mut Vec<usize>) {
        let mut kids: Vec<(String, usize)> =
            adj[v].iter().filter(|&&u| Some(u) != parent).map(|&u| (rooted_code(adj, u, Some(v)), u)).collect();
        if kids.is_empty() {
            out.push(v);
            return;
        }
        kids.sort();
        for (_, u) in kids {
            walk(adj, u, Some(v), out);
        }
    }
    let mut out = Vec::new();
    match center(adj) {
        Center::Vertex(v) => walk(adj, v, None, &mut out),
        Center::Edge(u, v) => {
            let (cu, cv) = (rooted_code(adj, u, Some(v)), rooted_code(adj, v, Some(u)));
            let (first, second) = if cu <= cv { (u, v) } else { (v, u) };
            walk(adj, first, Some(second), &mut out);
            walk(adj, second, Some(first), &mut out);
        }
    }
    out
}

/// Canonical code of the unlabeled tree underlying a stratum. Equal codes
/// mean the two strata lie in the same `S_n` orbit.
pub fn canonical_code(s: &Stratum) -> String {
    tree_code(&XTree::from_stratum(s).adj)
}
