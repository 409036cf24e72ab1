use super::{full_set, normalize, LeafSet, Stratum};
use crate::{Error, Result};

/// Unrooted tree whose first `n` vertices are the leaves `1..=n`.
/// Internal vertices have degree at least three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct XTree {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
}

impl XTree {
    /// Builds the tree whose internal edges realize the splits of `s`.
    pub fn from_stratum(s: &Stratum) -> XTree {
        let n = s.n();
        let full = full_set(n);
        // Clusters: the side of each split avoiding leaf 1.
        let mut clusters: Vec<LeafSet> = s.members().iter().map(|&m| if m & 1 == 1 { full ^ m } else { m }).collect();
        clusters.sort_by_key(|c| (c.count_ones(), *c));
        // Vertex ids: leaves 0..n, top = n, clusters n+1...
        let mut adj = vec![Vec::new(); n + 1 + clusters.len()];
        let link = |adj: &mut Vec<Vec<usize>>, u: usize, v: usize| {
            adj[u].push(v);
            adj[v].push(u);
        };
        link(&mut adj, 0, n);
        let parent_of = |set: LeafSet, skip: Option<usize>| -> usize {
            clusters
                .iter()
                .enumerate()
                .filter(|&(k, &c)| Some(k) != skip && c & set == set && c != set)
                .min_by_key(|&(_, &c)| c.count_ones())
                .map_or(n, |(k, _)| n + 1 + k)
        };
        for leaf in 1..n {
            let p = parent_of(1 << leaf, None);
            link(&mut adj, leaf, p);
        }
        for (k, &c) in clusters.iter().enumerate() {
            let p = parent_of(c, Some(k));
            link(&mut adj, n + 1 + k, p);
        }
        XTree { n, adj }
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        v < self.n
    }

    /// Leaves on the `v` side of the edge `(u, v)`.
    pub fn side(&self, u: usize, v: usize) -> LeafSet {
        let mut set = 0;
        let mut stack = vec![(v, u)];
        while let Some((x, from)) = stack.pop() {
            if self.is_leaf(x) {
                set |= 1 << x;
            }
            for &y in &self.adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        set
    }

    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in self.n..self.adj.len() {
            for &v in &self.adj[u] {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn splits(&self) -> Vec<LeafSet> {
        self.internal_edges().into_iter().map(|(u, v)| normalize(self.n, self.side(u, v))).collect()
    }
}

/// Trivalent tree with `n` labeled leaves; encodes an F-point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StableTree {
    tree: XTree,
}

impl StableTree {
    /// Vertices `0..n` are the leaves `1..=n`; the remaining `n - 2` vertices
    /// are internal. Every internal vertex must have degree exactly three.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if !(4..=crate::divisor::MAX_N).contains(&n) {
            return Err(Error::InvalidTree(format!("n must lie in 4..={}, got {n}", crate::divisor::MAX_N)));
        }
        let total = 2 * n - 2;
        if edges.len() != total - 1 {
            return Err(Error::InvalidTree(format!("a trivalent tree with {n} leaves has {} edges, got {}", total - 1, edges.len())));
        }
        let mut adj = vec![Vec::new(); total];
        for &(u, v) in edges {
            if u >= total || v >= total || u == v {
                return Err(Error::InvalidTree(format!("bad edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (v, nb) in adj.iter().enumerate() {
            let want = if v < n { 1 } else { 3 };
            if nb.len() != want {
                return Err(Error::InvalidTree(format!("vertex {v} has degree {}, expected {want}", nb.len())));
            }
        }
        let tree = XTree { n, adj };
        // Connected with |E| = |V| - 1 means it is a tree.
        let mut seen = vec![false; total];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &tree.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        Ok(Self { tree })
    }

    /// Caterpillar with leaf order `1, 2, ..., n`.
    pub fn caterpillar(n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidTree(format!("need n >= 4, got {n}")));
        }
        // Spine n..n+(n-2); leaves 0 and 1 hang off the first spine vertex,
        // leaves n-2 and n-1 off the last.
        let spine: Vec<usize> = (n..2 * n - 2).collect();
        let mut edges: Vec<(usize, usize)> = spine.windows(2).map(|w| (w[0], w[1])).collect();
        edges.push((0, spine[0]));
        edges.push((1, spine[0]));
        for leaf in 2..n - 2 {
            edges.push((leaf, spine[leaf - 1]));
        }
        edges.push((n - 2, spine[n - 3]));
        edges.push((n - 1, spine[n - 3]));
        Self::new(n, &edges)
    }

    /// The trivalent tree of an F-point stratum.
    pub fn from_stratum(s: &Stratum) -> Result<Self> {
        if !s.is_fpoint() {
            return Err(Error::InvalidTree(format!("stratum has {} members, an F-point needs {}", s.len(), s.n() - 3)));
        }
        let tree = XTree::from_stratum(s);
        let edges: Vec<(usize, usize)> = tree
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect();
        Self::new(s.n(), &edges)
    }

    pub fn n(&self) -> usize {
        self.tree.n
    }

    pub fn internal_vertex_count(&self) -> usize {
        self.tree.adj.len() - self.tree.n
    }

    pub fn internal_edge_count(&self) -> usize {
        self.tree.internal_edges().len()
    }

    pub(crate) fn xtree(&self) -> &XTree {
        &self.tree
    }
}

/// The F-point of a trivalent tree: one normalized member per internal edge.
pub fn tree_to_stratum(t: &StableTree) -> Stratum {
    Stratum::new(t.n(), t.tree.splits()).expect("splits of a tree are pairwise compatible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strata::{compatible, set_of};

    #[test]
    fn caterpillar_six() {
        let t = StableTree::caterpillar(6).unwrap();
        assert_eq!(t.internal_vertex_count(), 4);
        assert_eq!(t.internal_edge_count(), 3);
        let s = tree_to_stratum(&t);
        assert_eq!(s.subsets(), vec![vec![1, 2], vec![5, 6], vec![1, 2, 3]]);
    }

    #[test]
    fn unique_four_leaf_tree() {
        let t = StableTree::new(4, &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]).unwrap();
        assert_eq!(tree_to_stratum(&t).subsets(), vec![vec![1, 2]]);
    }

    #[test]
    fn example_tree() {
        let ex = crate::strata::tests::example_fpoint();
        let t = StableTree::from_stratum(&ex).unwrap();
        assert_eq!(t.internal_vertex_count(), 10);
        assert_eq!(tree_to_stratum(&t), ex);
    }

    #[test]
    fn rejects_non_trivalent() {
        // Star with four leaves.
        assert!(StableTree::new(4, &[(0, 4), (1, 4), (2, 4), (3, 4), (4, 5)]).is_err());
        assert!(StableTree::new(4, &[(0, 4), (1, 4), (4, 5), (2, 5)]).is_err());
        let partial = Stratum::new(6, [set_of(&[1, 2])]).unwrap();
        assert!(StableTree::from_stratum(&partial).is_err());
    }

    #[test]
    fn every_caterpillar_stratum_is_compatible() {
        for n in 4..=20 {
            let s = tree_to_stratum(&StableTree::caterpillar(n).unwrap());
            assert_eq!(s.len(), n - 3);
            for &a in s.members() {
                for &b in s.members() {
                    assert!(compatible(n, a, b));
                }
            }
        }
    }
}
