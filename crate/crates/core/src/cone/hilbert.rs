//! Hilbert basis of the cone's lattice points.
//!
//! The cone is split by a placing triangulation into simplicial cones. Every
//! lattice point of a simplicial cone is a nonnegative integer combination of
//! its generators plus a point of the half-open fundamental parallelepiped,
//! so the rays and the parallelepiped points together contain the Hilbert
//! basis. Candidates are then reduced in order of a positive grading.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{dot_int, extremal_rays, linalg, to_i64_vec, LatticeMap, RationalCone};
use crate::divisor::SymDivisorCA;
use crate::rational::{fractional_part, primitive_integer_vector, Q};
use crate::{Error, Result};

/// Refuse to enumerate more parallelepiped points than this.
const POINT_LIMIT: usize = 5_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertBasis {
    pub n: usize,
    pub epsilon: i64,
    pub d: usize,
    /// Irreducible lattice points, in normalized coordinates, sorted by
    /// grading and then lexicographically.
    pub elements: Vec<Vec<i64>>,
    pub simplices: usize,
}

impl HilbertBasis {
    pub fn divisors(&self, lat: &LatticeMap) -> Vec<SymDivisorCA> {
        self.elements.iter().map(|v| lat.divisor_of(v)).collect()
    }
}

fn to_q(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(|x| Q::from_integer(x.clone())).collect()
}

/// Primitive normal of the hyperplane through `facet`, positive on `opposite`.
fn facet_normal(facet: &[Vec<BigInt>], opposite: &[BigInt], d: usize) -> Vec<BigInt> {
    let rows: Vec<Vec<Q>> = facet.iter().map(|v| to_q(v)).collect();
    let ns = linalg::nullspace(&rows, d);
    debug_assert_eq!(ns.len(), 1);
    let h = primitive_integer_vector(&ns[0]);
    if dot_int(&h, opposite).is_negative() {
        h.into_iter().map(|x| -x).collect()
    } else {
        h
    }
}

/// Placing triangulation; each simplex is a sorted list of ray indices.
pub(crate) fn placing_triangulation(rays: &[Vec<BigInt>], d: usize) -> Result<Vec<Vec<usize>>> {
    let mut first: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        rows.push(to_q(r));
        if linalg::rank(&rows, d) == rows.len() {
            first.push(i);
            if first.len() == d {
                break;
            }
        } else {
            rows.pop();
        }
    }
    if first.len() < d {
        return Err(Error::Cone("rays do not span the ambient space".into()));
    }
    let mut simplices = vec![first.clone()];
    for r in 0..rays.len() {
        if first.contains(&r) {
            continue;
        }
        // Boundary facets are the ones lying in exactly one simplex.
        let mut count: std::collections::BTreeMap<Vec<usize>, (usize, usize)> = Default::default();
        for s in &simplices {
            for k in 0..d {
                let facet: Vec<usize> = s.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &x)| x).collect();
                let e = count.entry(facet).or_insert((0, s[k]));
                e.0 += 1;
            }
        }
        let mut added = Vec::new();
        for (facet, (c, opposite)) in count {
            if c != 1 {
                continue;
            }
            let pts: Vec<Vec<BigInt>> = facet.iter().map(|&i| rays[i].clone()).collect();
            let h = facet_normal(&pts, &rays[opposite], d);
            if dot_int(&h, &rays[r]).is_negative() {
                let mut s = facet.clone();
                s.push(r);
                s.sort_unstable();
                added.push(s);
            }
        }
        simplices.extend(added);
    }
    Ok(simplices)
}

/// Lattice points `V * lambda` with `lambda` in `[0, 1)^d`, as the group
/// generated by the fractional coordinates of the unit vectors.
fn parallelepiped_points(gens: &[Vec<BigInt>], d: usize, budget: &mut usize) -> Result<Vec<Vec<BigInt>>> {
    // V has the generators as columns.
    let v: Vec<Vec<Q>> = (0..d).map(|i| gens.iter().map(|g| Q::from_integer(g[i].clone())).collect()).collect();
    let inv = linalg::inverse(&v).ok_or_else(|| Error::Cone("degenerate simplex".into()))?;
    let steps: Vec<Vec<Q>> = linalg::transpose(&inv).into_iter().map(|c| c.iter().map(fractional_part).collect()).collect();
    let zero = vec![Q::zero(); d];
    let mut seen: HashSet<Vec<Q>> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    let mut out = Vec::new();
    while let Some(lam) = queue.pop_front() {
        for s in &steps {
            let next: Vec<Q> = lam.iter().zip(s).map(|(a, b)| fractional_part(&(a + b))).collect();
            if seen.insert(next.clone()) {
                if *budget == 0 {
                    return Err(Error::Cone(format!("more than {POINT_LIMIT} parallelepiped points")));
                }
                *budget -= 1;
                queue.push_back(next);
            }
        }
        if lam.iter().any(|x| !x.is_zero()) {
            let p = linalg::mat_vec(&v, &lam);
            out.push(p.iter().map(|x| x.to_integer()).collect());
        }
    }
    Ok(out)
}

/// Minimal generating set of the monoid of lattice points in `cone`.
pub fn hilbert_basis(cone: &RationalCone, lat: &LatticeMap) -> Result<HilbertBasis> {
    let d = cone.dim();
    if lat.dim() != d || lat.n() != cone.n() {
        return Err(Error::Cone("lattice map does not match the cone".into()));
    }
    let rays: Vec<Vec<BigInt>> = extremal_rays(cone)?.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
    let simplices = placing_triangulation(&rays, d)?;
    let mut candidates: BTreeSet<Vec<BigInt>> = rays.iter().cloned().collect();
    let mut budget = POINT_LIMIT;
    for s in &simplices {
        let gens: Vec<Vec<BigInt>> = s.iter().map(|&i| rays[i].clone()).collect();
        candidates.extend(parallelepiped_points(&gens, d, &mut budget)?);
    }
    let g = cone.grading();
    let mut ordered: Vec<(BigInt, Vec<BigInt>)> = candidates.into_iter().map(|x| (dot_int(&g, &x), x)).collect();
    if ordered.iter().any(|(deg, _)| !deg.is_positive()) {
        return Err(Error::Cone("grading is not positive on the cone".into()));
    }
    ordered.sort();
    let mut accepted: Vec<Vec<BigInt>> = Vec::new();
    for (_, x) in ordered {
        let reducible = accepted.iter().any(|y| {
            let diff: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            cone.contains(&diff)
        });
        if !reducible {
            accepted.push(x);
        }
    }
    let elements = accepted.iter().map(|v| to_i64_vec(v)).collect::<Result<_>>()?;
    Ok(HilbertBasis { n: cone.n(), epsilon: lat.epsilon(), d, elements, simplices: simplices.len() })
}
