//! F-point orbits under `S_n` and orbit sizes of strata.

use std::collections::BTreeMap;

use super::canon::{canonical_leaf_order, tree_code};
use super::tree::{tree_to_stratum, StableTree, XTree};
use super::{LeafSet, Stratum};
use crate::{Error, Result};

/// One `S_n` orbit of F-points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FPointOrbit {
    pub representative: Stratum,
    pub orbit_size: u128,
    pub shape: String,
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Order of the subgroup of `S_n` mapping the family `T` onto itself.
///
/// Found by backtracking: a permutation preserves `T` iff it preserves the
/// leaf metric `d(i, j) = #{I in T separating i and j}` (a tree metric
/// determines its compatible split system). The order is accumulated along
/// the point-stabilizer chain, `|G| = prod_k |orbit of k under G_(0..k-1)|`.
pub fn stabilizer_order(s: &Stratum) -> u128 {
    let n = s.n();
    let dist: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| s.separation(i, j)).collect()).collect();
    let profile: Vec<Vec<usize>> = dist
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_unstable();
            r
        })
        .collect();
    let search = Search { s, n, dist: &dist, profile: &profile };
    let mut order: u128 = 1;
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for k in 0..n {
        let mut count = 0u128;
        for y in k..n {
            if search.fits(&img, k, y) {
                img[k] = y;
                used[y] = true;
                if search.extend(&mut img, &mut used, k + 1) {
                    count += 1;
                }
                for slot in img.iter_mut().skip(k + 1) {
                    *slot = usize::MAX;
                }
                used.iter_mut().enumerate().for_each(|(v, u)| *u = v < k || v == y);
                used[y] = false;
                img[k] = usize::MAX;
            }
        }
        debug_assert!(count >= 1, "the identity always extends");
        order *= count;
        img[k] = k;
        used[k] = true;
    }
    order
}

struct Search<'a> {
    s: &'a Stratum,
    n: usize,
    dist: &'a [Vec<usize>],
    profile: &'a [Vec<usize>],
}

impl Search<'_> {
    fn fits(&self, img: &[usize], k: usize, y: usize) -> bool {
        if self.profile[k] != self.profile[y] {
            return false;
        }
        (0..k).all(|x| self.dist[x][k] == self.dist[img[x]][y])
    }

    /// Tries to complete the partial map `img[0..k]` to a permutation preserving `T`.
    fn extend(&self, img: &mut [usize], used: &mut [bool], k: usize) -> bool {
        if k == self.n {
            return self.s.permute(img) == *self.s;
        }
        for y in 0..self.n {
            if used[y] || !self.fits(img, k, y) {
                continue;
            }
            img[k] = y;
            used[y] = true;
            if self.extend(img, used, k + 1) {
                return true;
            }
            used[y] = false;
            img[k] = usize::MAX;
        }
        false
    }
}

/// A permutation mapping `T` onto itself with `perm[i]` in the mask
/// `allowed[i]` for every leaf, if one exists. Leaves with the fewest
/// choices are placed first.
pub fn find_automorphism(s: &Stratum, allowed: &[LeafSet]) -> Option<Vec<usize>> {
    let n = s.n();
    assert_eq!(allowed.len(), n);
    let dist: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| s.separation(i, j)).collect()).collect();
    let profile: Vec<Vec<usize>> = dist
        .iter()
        .map(|row| {
            let mut r = row.clone();
            r.sort_unstable();
            r
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (allowed[i].count_ones(), i));
    let mut img = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        s: &Stratum,
        k: usize,
        order: &[usize],
        allowed: &[LeafSet],
        dist: &[Vec<usize>],
        profile: &[Vec<usize>],
        img: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return s.permute(img) == *s;
        }
        let x = order[k];
        for y in 0..order.len() {
            if used[y] || allowed[x] >> y & 1 == 0 || profile[x] != profile[y] {
                continue;
            }
            if order[..k].iter().any(|&u| dist[u][x] != dist[img[u]][y]) {
                continue;
            }
            img[x] = y;
            used[y] = true;
            if go(s, k + 1, order, allowed, dist, profile, img, used) {
                return true;
            }
            used[y] = false;
            img[x] = usize::MAX;
        }
        false
    }
    go(s, 0, &order, allowed, &dist, &profile, &mut img, &mut used).then_some(img)
}

/// Number of distinct images of `T` under `S_n`, by orbit-stabilizer.
pub fn orbit_size(s: &Stratum) -> u128 {
    factorial(s.n()) / stabilizer_order(s)
}

/// Subdivides every edge of every shape with a new pendant leaf.
fn grow(shapes: &[Vec<Vec<usize>>]) -> BTreeMap<String, Vec<Vec<usize>>> {
    let mut out = BTreeMap::new();
    for adj in shapes {
        for u in 0..adj.len() {
            for &v in &adj[u] {
                if v < u {
                    continue;
                }
                let mut next = adj.clone();
                let mid = next.len();
                let leaf = mid + 1;
                next.push(vec![u, v, leaf]);
                next.push(vec![mid]);
                for (a, b) in [(u, v), (v, u)] {
                    let slot = next[a].iter().position(|&x| x == b).expect("edge endpoint");
                    next[a][slot] = mid;
                }
                out.entry(tree_code(&next)).or_insert(next);
            }
        }
    }
    out
}

/// Relabels a shape so its leaves are `0..n` in canonical traversal order.
fn labeled_representative(adj: &[Vec<usize>]) -> XTree {
    let leaves = canonical_leaf_order(adj);
    let n = leaves.len();
    let mut id = vec![usize::MAX; adj.len()];
    for (k, &v) in leaves.iter().enumerate() {
        id[v] = k;
    }
    let mut next = n;
    for v in 0..adj.len() {
        if id[v] == usize::MAX {
            id[v] = next;
            next += 1;
        }
    }
    let mut out = vec![Vec::new(); adj.len()];
    for (v, nb) in adj.iter().enumerate() {
        out[id[v]] = nb.iter().map(|&u| id[u]).collect();
    }
    XTree { n, adj: out }
}

/// One representative per isomorphism class of trivalent trees with `n`
/// leaves, sorted by shape code. Shapes are grown from the three-leaf star
/// by leaf insertion and deduplicated by canonical code.
pub fn enumerate_fpoint_orbits(n: usize) -> Result<Vec<FPointOrbit>> {
    if !(4..=crate::divisor::MAX_N).contains(&n) {
        return Err(Error::Domain(format!("F-points need 4 <= n <= {}, got {n}", crate::divisor::MAX_N)));
    }
    let star = vec![vec![3], vec![3], vec![3], vec![0, 1, 2]];
    let mut shapes = vec![star];
    for _ in 3..n {
        shapes = grow(&shapes).into_values().collect();
    }
    let mut out = Vec::with_capacity(shapes.len());
    for adj in &shapes {
        let x = labeled_representative(adj);
        let edges: Vec<(usize, usize)> =
            x.adj.iter().enumerate().flat_map(|(u, nb)| nb.iter().filter(move |&&v| v > u).map(move |&v| (u, v))).collect();
        let tree = StableTree::new(n, &edges)?;
        let representative = tree_to_stratum(&tree);
        let shape = tree_code(&tree.xtree().adj);
        let orbit_size = orbit_size(&representative);
        out.push(FPointOrbit { representative, orbit_size, shape });
    }
    out.sort_by(|a, b| a.shape.cmp(&b.shape));
    Ok(out)
}
