//! The symmetric F-nef cone in normalized lattice coordinates.
//!
//! Coordinates are `(c_hat, a_3, ..., a_{n/2})` with `c_hat = (n-1) c / epsilon`,
//! so a divisor is integral exactly when its coordinate vector is integral.
//! The cone has dimension `d = n/2 - 1` and one facet inequality per F-curve.

mod dd;
mod hilbert;
pub mod linalg;
mod rays;

pub use dd::extremal_rays_dd;
pub use hilbert::{hilbert_basis, HilbertBasis};
pub use rays::extremal_rays;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::divisor::{enumerate_fcurve_partitions, epsilon, f_curve_intersection, to_b_basis, FCurvePartition, SymDivisorCA};
use crate::rational::{format_rational, int, primitive_integer_vector, Q};
use crate::{Error, Result};

/// Change of coordinates between the contraction basis `(c, a_3, ...)` and
/// normalized lattice coordinates `(c_hat, a_3, ...)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMap {
    n: usize,
    epsilon: i64,
    forward: linalg::Matrix,
    inverse: linalg::Matrix,
}

pub fn normalize_lattice(n: usize) -> Result<LatticeMap> {
    if !(5..=crate::divisor::MAX_N).contains(&n) {
        return Err(Error::Domain(format!("lattice map needs 5 <= n <= {}, got {n}", crate::divisor::MAX_N)));
    }
    let d = n / 2 - 1;
    let eps = epsilon(n);
    let scale = Q::new(BigInt::from(n - 1), BigInt::from(eps));
    let diag = |s: &Q| -> linalg::Matrix {
        (0..d).map(|i| (0..d).map(|j| if i != j { Q::zero() } else if i == 0 { s.clone() } else { int(1) }).collect()).collect()
    };
    Ok(LatticeMap { n, epsilon: eps, forward: diag(&scale), inverse: diag(&(int(1) / scale.clone())) })
}

impl LatticeMap {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> i64 {
        self.epsilon
    }

    pub fn dim(&self) -> usize {
        self.forward.len()
    }

    pub fn forward(&self) -> &linalg::Matrix {
        &self.forward
    }

    pub fn inverse(&self) -> &linalg::Matrix {
        &self.inverse
    }

    pub fn to_normalized(&self, d: &SymDivisorCA) -> Vec<Q> {
        assert_eq!(d.n(), self.n);
        let mut v = vec![d.c().clone()];
        v.extend(d.a().iter().cloned());
        linalg::mat_vec(&self.forward, &v)
    }

    pub fn from_normalized(&self, v: &[Q]) -> SymDivisorCA {
        let x = linalg::mat_vec(&self.inverse, v);
        SymDivisorCA::new(self.n, x[0].clone(), x[1..].to_vec()).expect("dimension matches n")
    }

    pub fn divisor_of(&self, v: &[i64]) -> SymDivisorCA {
        let q: Vec<Q> = v.iter().map(|&x| int(x)).collect();
        self.from_normalized(&q)
    }

    pub fn to_json_value(&self) -> LatticeMapJson {
        let enc = |m: &linalg::Matrix| m.iter().map(|r| r.iter().map(format_rational).collect()).collect();
        LatticeMapJson { forward: enc(&self.forward), inverse: enc(&self.inverse) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeMapJson {
    pub forward: Vec<Vec<String>>,
    pub inverse: Vec<Vec<String>>,
}

/// One facet inequality `normal . x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    /// First F-curve producing this inequality.
    pub partition: FCurvePartition,
    /// Row in contraction-basis coordinates.
    pub ca_row: Vec<Q>,
    /// Primitive integer row in normalized coordinates.
    pub normal: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalCone {
    n: usize,
    dim: usize,
    facets: Vec<Facet>,
    raw_rows: usize,
}

/// One inequality per F-curve partition, deduplicated up to positive scaling.
pub fn build_fnef_cone(n: usize) -> Result<RationalCone> {
    if !(5..=crate::divisor::MAX_N).contains(&n) {
        return Err(Error::Domain(format!("the F-nef cone needs 5 <= n <= {}, got {n}", crate::divisor::MAX_N)));
    }
    let dim = n / 2 - 1;
    let lat = normalize_lattice(n)?;
    let units: Vec<_> = (0..dim)
        .map(|k| {
            let mut v = vec![Q::zero(); dim];
            v[k] = int(1);
            to_b_basis(&SymDivisorCA::new(n, v[0].clone(), v[1..].to_vec()).expect("dimension matches"))
        })
        .collect();
    let partitions = enumerate_fcurve_partitions(n)?;
    let raw_rows = partitions.len();
    let mut facets: Vec<Facet> = Vec::new();
    for p in partitions {
        let ca_row: Vec<Q> = units.iter().map(|u| f_curve_intersection(u, &p)).collect();
        if ca_row.iter().all(Zero::is_zero) {
            continue;
        }
        // normal . x_hat = ca_row . x with x = inverse * x_hat.
        let norm_row = linalg::mat_vec(&linalg::transpose(lat.inverse()), &ca_row);
        let normal = primitive_integer_vector(&norm_row);
        if facets.iter().any(|f| f.normal == normal) {
            continue;
        }
        facets.push(Facet { partition: p, ca_row, normal });
    }
    let cone = RationalCone { n, dim, facets, raw_rows };
    if !cone.is_pointed() {
        return Err(Error::Cone(format!("F-nef cone at n={n} is not pointed")));
    }
    Ok(cone)
}

impl RationalCone {
    /// Builds a cone `{x : row . x >= 0}` from arbitrary integer rows.
    pub fn from_rows(n: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dim) || dim == 0 {
            return Err(Error::Cone("inconsistent row dimensions".into()));
        }
        let raw_rows = rows.len();
        let partition = FCurvePartition::new([1, 1, 1, 1]).expect("positive parts");
        let facets = rows
            .into_iter()
            .map(|r| Facet { partition, ca_row: r.iter().map(|x| Q::from_integer(x.clone())).collect(), normal: crate::rational::primitive(&r) })
            .collect();
        Ok(Self { n, dim, facets, raw_rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Number of F-curve rows before removing duplicates.
    pub fn raw_row_count(&self) -> usize {
        self.raw_rows
    }

    pub fn normals(&self) -> Vec<Vec<BigInt>> {
        self.facets.iter().map(|f| f.normal.clone()).collect()
    }

    pub(crate) fn normals_q(&self) -> Vec<Vec<Q>> {
        self.facets.iter().map(|f| f.normal.iter().map(|x| Q::from_integer(x.clone())).collect()).collect()
    }

    /// Lineality space is zero iff the normals have full rank.
    pub fn is_pointed(&self) -> bool {
        linalg::rank(&self.normals_q(), self.dim) == self.dim
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        self.facets.iter().all(|f| !dot_int(&f.normal, x).is_negative())
    }

    pub fn contains_q(&self, x: &[Q]) -> bool {
        self.facets.iter().all(|f| {
            let s = f.normal.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + Q::from_integer(a.clone()) * b);
            !s.is_negative()
        })
    }

    /// Sum of all facet normals; strictly positive on nonzero cone points.
    pub(crate) fn grading(&self) -> Vec<BigInt> {
        let mut g = vec![BigInt::zero(); self.dim];
        for f in &self.facets {
            for (x, y) in g.iter_mut().zip(&f.normal) {
                *x += y;
            }
        }
        g
    }
}

pub(crate) fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub(crate) fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Cone(format!("coordinate {x} exceeds 64 bits")))).collect()
}

/// JSON emitted for ray and Hilbert-basis listings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeListing {
    pub n: usize,
    pub epsilon: i64,
    pub d: usize,
    pub lattice_map: LatticeMapJson,
    pub kind: String,
    pub vectors: Vec<Vec<i64>>,
}

impl ConeListing {
    pub fn new(lat: &LatticeMap, kind: &str, vectors: Vec<Vec<i64>>) -> Self {
        Self { n: lat.n, epsilon: lat.epsilon, d: lat.dim(), lattice_map: lat.to_json_value(), kind: kind.into(), vectors }
    }
}
