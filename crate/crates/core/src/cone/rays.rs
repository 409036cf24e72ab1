//! Extremal rays by facet-subset enumeration.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{dot_int, linalg, to_i64_vec, RationalCone};
use crate::rational::{primitive_integer_vector, Q};
use crate::Result;

/// Above this many row subsets the double description method is used instead.
pub(crate) const SUBSET_LIMIT: u128 = 400_000;

pub(crate) fn binomial(m: usize, k: usize) -> u128 {
    if k > m {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i as u128 + 1))
}

pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Primitive integer generators of the extremal rays, sorted.
///
/// Every (d-1)-subset of facet rows with a one-dimensional kernel gives a
/// candidate direction; the ones satisfying all rows (up to sign) are rays.
/// Large instances are delegated to [`super::extremal_rays_dd`].
pub fn extremal_rays(cone: &RationalCone) -> Result<Vec<Vec<i64>>> {
    let d = cone.dim();
    let rows = cone.normals_q();
    if binomial(rows.len(), d - 1) > SUBSET_LIMIT {
        return super::extremal_rays_dd(cone);
    }
    let normals = cone.normals();
    let mut found: Vec<Vec<BigInt>> = combinations(rows.len(), d - 1)
        .into_par_iter()
        .filter_map(|subset| {
            let sub: Vec<Vec<Q>> = subset.iter().map(|&i| rows[i].clone()).collect();
            let ns = linalg::nullspace(&sub, d);
            if ns.len() != 1 {
                return None;
            }
            let v = primitive_integer_vector(&ns[0]);
            let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
            [v, neg].into_iter().find(|cand| normals.iter().all(|h| !dot_int(h, cand).is_negative()))
        })
        .collect();
    found.sort();
    found.dedup();
    debug_assert!(found.iter().all(|v| v.iter().any(|x| !x.is_zero())));
    found.iter().map(|v| to_i64_vec(v)).collect()
}
