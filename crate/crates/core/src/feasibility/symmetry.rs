//! Symmetry breaking and branching hints for stratum slices.
//!
//! The leaf permutations fixing `T` permute the integral points of a slice
//! (half-size subset rows are interchangeable with their complements once
//! all degrees agree). Order the pair variables lexicographically; the
//! lexicographically largest point of each orbit satisfies
//! `x_p >= x_{g^-1 p}` for every group element `g` whose first moved
//! position is `p`, so adding those comparisons keeps integral feasibility.
//! Only positions `(0, j)` can be a first moved position: fixing every pair
//! through leaf 0 fixes every leaf.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use super::pair_index;
use super::system::{Provenance, Row, RowKind};
use crate::rational::Q;
use crate::strata::{find_automorphism, LeafSet, Stratum};

/// Pairs `(p, q)` of variable indices with `x_p >= x_q` valid for the
/// lexicographic leader of every orbit.
pub(crate) fn symmetry_pairs(s: &Stratum) -> BTreeSet<(usize, usize)> {
    let n = s.n();
    let all: LeafSet = if n == 32 { LeafSet::MAX } else { (1 << n) - 1 };
    let mut out = BTreeSet::new();
    let pair_orbit = |out: &mut BTreeSet<(usize, usize)>, target: (usize, usize), base: &[LeafSet]| {
        let p = pair_index(n, target.0, target.1);
        let mask: LeafSet = 1 << target.0 | 1 << target.1;
        for a in 0..n {
            for b in a + 1..n {
                let q = pair_index(n, a, b);
                if q == p {
                    continue;
                }
                let mut allowed = base.to_vec();
                allowed[a] &= mask;
                allowed[b] &= mask;
                if find_automorphism(s, &allowed).is_some() {
                    out.insert((p, q));
                }
            }
        }
    };
    pair_orbit(&mut out, (0, 1), &vec![all; n]);
    if n > 2 {
        let mut base = vec![all; n];
        base[0] = 0b11;
        base[1] = 0b11;
        pair_orbit(&mut out, (0, 2), &base);
    }
    for j in 3..n {
        for k in j + 1..n {
            let mut allowed = vec![all; n];
            for (i, a) in allowed.iter_mut().enumerate().take(j) {
                *a = 1 << i;
            }
            allowed[k] = 1 << j;
            if find_automorphism(s, &allowed).is_some() {
                out.insert((pair_index(n, 0, j), pair_index(n, 0, k)));
            }
        }
    }
    out
}

/// Symmetry-breaking rows `x_p - x_q >= 0` for the stabilizer of `T`.
pub fn symmetry_rows(s: &Stratum) -> Vec<Row> {
    symmetry_pairs(s)
        .into_iter()
        .enumerate()
        .map(|(k, (p, q))| Row::new(vec![(p, Q::one()), (q, -Q::one())], RowKind::Ge, Q::zero(), Provenance::Symmetry(k)))
        .collect()
}

/// Weight from a leaf into a member of `T` it lies outside of; integral at
/// every integral weighting.
pub fn member_forms(s: &Stratum) -> Vec<Vec<(usize, i64)>> {
    let n = s.n();
    let mut out = Vec::new();
    for &j in s.members() {
        for v in (0..n).filter(|&v| j >> v & 1 == 0) {
            out.push((0..n).filter(|&u| j >> u & 1 == 1).map(|u| (pair_index(n, u, v), 1)).collect());
        }
    }
    out
}
