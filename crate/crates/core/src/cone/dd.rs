//! Double description method for the extremal rays of a pointed cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{dot_int, linalg, to_i64_vec, RationalCone};
use crate::rational::{primitive, primitive_integer_vector, Q};
use crate::{Error, Result};

#[derive(Clone)]
struct Ray {
    v: Vec<BigInt>,
    zeros: Vec<u64>,
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn meet(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn contains(sup: &[u64], sub: &[u64]) -> bool {
    sup.iter().zip(sub).all(|(x, y)| x & y == *y)
}

fn popcount(a: &[u64]) -> usize {
    a.iter().map(|x| x.count_ones() as usize).sum()
}

/// Extremal rays by incremental double description with the combinatorial
/// adjacency test. Agrees with [`super::extremal_rays`] on every cone.
pub fn extremal_rays_dd(cone: &RationalCone) -> Result<Vec<Vec<i64>>> {
    let d = cone.dim();
    let normals = cone.normals();
    let m = normals.len();
    let words = m.div_ceil(64);
    let as_q = |r: &[BigInt]| -> Vec<Q> { r.iter().map(|x| Q::from_integer(x.clone())).collect() };

    // Greedy choice of d independent rows.
    let mut basis: Vec<usize> = Vec::new();
    let mut chosen: Vec<Vec<Q>> = Vec::new();
    for (i, r) in normals.iter().enumerate() {
        chosen.push(as_q(r));
        if linalg::rank(&chosen, d) == chosen.len() {
            basis.push(i);
            if basis.len() == d {
                break;
            }
        } else {
            chosen.pop();
        }
    }
    if basis.len() < d {
        return Err(Error::Cone("cone has a nontrivial lineality space".into()));
    }
    let inv = linalg::inverse(&chosen).ok_or_else(|| Error::Cone("singular initial rows".into()))?;
    let cols = linalg::transpose(&inv);
    let mut rays: Vec<Ray> = cols
        .iter()
        .enumerate()
        .map(|(j, col)| {
            let mut zeros = vec![0u64; words];
            for (k, &row) in basis.iter().enumerate() {
                if k != j {
                    set_bit(&mut zeros, row);
                }
            }
            Ray { v: primitive_integer_vector(col), zeros }
        })
        .collect();

    for (i, h) in normals.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(h, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| vals[k].is_negative()).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = meet(&rays[p].zeros, &rays[q].zeros);
                if popcount(&common) + 2 < d {
                    continue;
                }
                let adjacent = (0..rays.len()).all(|k| k == p || k == q || !contains(&rays[k].zeros, &common));
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> =
                    rays[q].v.iter().zip(&rays[p].v).map(|(a, b)| &vals[p] * a - &vals[q] * b).collect();
                let mut zeros = common;
                set_bit(&mut zeros, i);
                next.push(Ray { v: primitive(&v), zeros });
            }
        }
        for (k, r) in rays.iter().enumerate() {
            if vals[k].is_positive() {
                next.push(r.clone());
            } else if vals[k].is_zero() {
                let mut r = r.clone();
                set_bit(&mut r.zeros, i);
                next.push(r);
            }
        }
        if next.is_empty() {
            return Err(Error::Cone("cone is {0}".into()));
        }
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    out.iter().map(|v| to_i64_vec(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{build_fnef_cone, extremal_rays};

    #[test]
    fn agrees_with_subset_enumeration() {
        for n in 5..=13 {
            let cone = build_fnef_cone(n).unwrap();
            assert_eq!(extremal_rays_dd(&cone).unwrap(), extremal_rays(&cone).unwrap(), "n={n}");
        }
    }

    #[test]
    fn square_cone() {
        // Orthant cut by z <= x + y.
        let rows = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, -1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let cone = RationalCone::from_rows(0, rows).unwrap();
        let rays = extremal_rays_dd(&cone).unwrap();
        assert_eq!(rays, vec![vec![0, 1, 0], vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 1]]);
        assert_eq!(extremal_rays(&cone).unwrap(), rays);
    }
}
