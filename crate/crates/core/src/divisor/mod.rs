//! Symmetric divisor classes on the moduli space of n-pointed stable
//! rational curves.
//!
//! Two coordinate systems are used. The boundary basis stores `b_i`, the
//! coefficient of the symmetrized boundary divisor `B_i`, for
//! `2 <= i <= n/2`. The contraction basis writes the same class as
//! `c * pullback(D_2) - sum_{i >= 3} a_i B_i`, where the pullback of `D_2`
//! has `b_i = C(i, 2)`. Both are exact.

mod io;

pub use io::{DivisorJson, SymDivisor};

use num_traits::{Signed, Zero};

use crate::rational::{choose2, int, is_integer, Q};
use crate::{Error, Result};

/// Largest number of marked points supported anywhere in the crate
/// (leaf subsets are stored as `u32` bitmasks).
pub const MAX_N: usize = 32;

/// Divisibility factor of the integral lattice: `c` runs over
/// `epsilon/(n-1) * Z`, with `epsilon = 1` for even `n` and `2` for odd `n`.
pub fn epsilon(n: usize) -> i64 {
    if n % 2 == 0 {
        1
    } else {
        2
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(4..=MAX_N).contains(&n) {
        return Err(Error::Domain(format!("n must lie in 4..={MAX_N}, got {n}")));
    }
    Ok(())
}

/// Symmetric divisor in the boundary basis, `b[k]` is the coefficient of `B_{k+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymDivisorB {
    n: usize,
    b: Vec<Q>,
}

impl SymDivisorB {
    pub fn new(n: usize, b: Vec<Q>) -> Result<Self> {
        check_n(n)?;
        if b.len() != n / 2 - 1 {
            return Err(Error::Domain(format!(
                "boundary basis at n={n} needs {} coefficients, got {}",
                n / 2 - 1,
                b.len()
            )));
        }
        Ok(Self { n, b })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficients `b_2, ..., b_{n/2}`.
    pub fn coeffs(&self) -> &[Q] {
        &self.b
    }

    /// `b(k)` for any `0 <= k <= n`, with `b(k) = b(n - k)` and `b(0) = b(1) = 0`.
    pub fn coeff(&self, k: usize) -> Q {
        assert!(k <= self.n, "index {k} out of range for n={}", self.n);
        let k = k.min(self.n - k);
        if k < 2 {
            Q::zero()
        } else {
            self.b[k - 2].clone()
        }
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self { n: self.n, b: self.b.iter().map(|x| x * t).collect() }
    }

    /// The pullback of `D_2`, i.e. `b_i = C(i, 2)`.
    pub fn pullback_d2(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, b: (2..=n / 2).map(choose2).collect() })
    }
}

/// Symmetric divisor `c * pullback(D_2) - sum a_i B_i`; `a[k]` holds `a_{k+3}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymDivisorCA {
    n: usize,
    c: Q,
    a: Vec<Q>,
}

impl SymDivisorCA {
    pub fn new(n: usize, c: Q, a: Vec<Q>) -> Result<Self> {
        check_n(n)?;
        let want = (n / 2).saturating_sub(2);
        if a.len() != want {
            return Err(Error::Domain(format!(
                "contraction basis at n={n} needs {want} values a_3..a_{}, got {}",
                n / 2,
                a.len()
            )));
        }
        Ok(Self { n, c, a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> &Q {
        &self.c
    }

    /// `a_3, ..., a_{n/2}`.
    pub fn a(&self) -> &[Q] {
        &self.a
    }

    /// `a_i` for `1 <= i <= n/2`, with `a_1 = a_2 = 0`.
    pub fn a_at(&self, i: usize) -> Q {
        assert!(i >= 1 && i <= self.n / 2, "a_{i} undefined for n={}", self.n);
        if i <= 2 {
            Q::zero()
        } else {
            self.a[i - 3].clone()
        }
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self { n: self.n, c: &self.c * t, a: self.a.iter().map(|x| x * t).collect() }
    }

    /// The vertex degree `c(n-1)` every graph in the linear system must have.
    pub fn degree(&self) -> Q {
        &self.c * int(self.n as i64 - 1)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.a.iter().all(Zero::is_zero)
    }
}

/// An F-curve class, indexed by a partition of `n` into four positive parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FCurvePartition {
    parts: [usize; 4],
}

impl FCurvePartition {
    /// Sorts the parts; rejects zero parts.
    pub fn new(mut parts: [usize; 4]) -> Result<Self> {
        if parts.iter().any(|&p| p == 0) {
            return Err(Error::Domain(format!("F-curve parts must be positive: {parts:?}")));
        }
        parts.sort_unstable();
        Ok(Self { parts })
    }

    pub fn parts(&self) -> [usize; 4] {
        self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }
}

pub fn to_ca_basis(d: &SymDivisorB) -> SymDivisorCA {
    let n = d.n;
    let c = d.coeff(2);
    let a = (3..=n / 2).map(|i| &c * choose2(i) - d.coeff(i)).collect();
    SymDivisorCA { n, c, a }
}

pub fn to_b_basis(d: &SymDivisorCA) -> SymDivisorB {
    let n = d.n;
    let b = (2..=n / 2).map(|i| &d.c * choose2(i) - d.a_at(i)).collect();
    SymDivisorB { n, b }
}

/// All multisets of four positive integers summing to `n`, ascending, each once.
pub fn enumerate_fcurve_partitions(n: usize) -> Result<Vec<FCurvePartition>> {
    if n < 4 {
        return Err(Error::Domain(format!("F-curves need n >= 4, got {n}")));
    }
    let mut out = Vec::new();
    for p1 in 1..=n / 4 {
        for p2 in p1..=(n - p1) / 3 {
            for p3 in p2..=(n - p1 - p2) / 2 {
                let p4 = n - p1 - p2 - p3;
                out.push(FCurvePartition { parts: [p1, p2, p3, p4] });
            }
        }
    }
    Ok(out)
}

/// Intersection number of a symmetric divisor with the F-curve of partition `p`:
/// `b(p1+p2) + b(p1+p3) + b(p1+p4) - b(p1) - b(p2) - b(p3) - b(p4)`.
pub fn f_curve_intersection(d: &SymDivisorB, p: &FCurvePartition) -> Q {
    assert_eq!(p.n(), d.n, "partition does not sum to n");
    let [p1, p2, p3, p4] = p.parts;
    d.coeff(p1 + p2) + d.coeff(p1 + p3) + d.coeff(p1 + p4)
        - d.coeff(p1)
        - d.coeff(p2)
        - d.coeff(p3)
        - d.coeff(p4)
}

pub fn is_f_nef(d: &SymDivisorB) -> bool {
    enumerate_fcurve_partitions(d.n)
        .expect("n >= 4 by construction")
        .iter()
        .all(|p| !f_curve_intersection(d, p).is_negative())
}

/// Integral iff every `a_i` is an integer and `(n-1)c/epsilon` is an integer.
pub fn is_integral(d: &SymDivisorCA) -> bool {
    let scaled = d.degree() / int(epsilon(d.n));
    is_integer(&scaled) && d.a.iter().all(is_integer)
}

/// Coefficient vector `f(1), ..., f(n/2)` with `f(i) = (-c i (n-1) + a_i) / 2`.
pub fn to_fedorchuk_form(d: &SymDivisorCA) -> Vec<Q> {
    let deg = d.degree();
    let half = crate::rational::frac(1, 2);
    (1..=d.n / 2).map(|i| (d.a_at(i) - &deg * int(i as i64)) * &half).collect()
}

/// Inverse of [`to_fedorchuk_form`]: `c(n-1) = -2 f(1)`, `a_i = 2 f(i) + i c (n-1)`.
pub fn from_fedorchuk_form(n: usize, f: &[Q]) -> Result<SymDivisorCA> {
    check_n(n)?;
    if f.len() != n / 2 {
        return Err(Error::Domain(format!("need f(1..={}), got {} values", n / 2, f.len())));
    }
    let deg = -(&f[0] * int(2));
    let two = int(2);
    let recovered: Vec<Q> = (1..=n / 2).map(|i| &f[i - 1] * &two + &deg * int(i as i64)).collect();
    if !recovered[0].is_zero() || (n / 2 >= 2 && !recovered[1].is_zero()) {
        return Err(Error::Domain("f is not of the form f(i) = (-c i (n-1) + a_i)/2 with a_1 = a_2 = 0".into()));
    }
    let c = deg / int(n as i64 - 1);
    SymDivisorCA::new(n, c, recovered.into_iter().skip(2).collect())
}

/// Weight `m(ij) = -w(ij)/2` of the boundary-weighting form.
pub fn weighting_to_fedorchuk(w: &Q) -> Q {
    -(w / int(2))
}

/// Inverse of [`weighting_to_fedorchuk`]: `w(ij) = -2 m(ij)`.
pub fn weighting_from_fedorchuk(m: &Q) -> Q {
    -(m * int(2))
}

/// Checks the intersection formula against the convexity identity
/// `F_{1,1,j,n-2-j} . D = a_j + a_{j+2} - 2 a_{j+1}` on the unit vectors of
/// the contraction basis, for every `5 <= n <= n_max`. Returns the first
/// mismatch as an error.
pub fn intersection_self_test(n_max: usize) -> Result<()> {
    for n in 5..=n_max.min(MAX_N) {
        let dim = n / 2 - 1;
        for k in 0..dim {
            let mut c = Q::zero();
            let mut a = vec![Q::zero(); dim - 1];
            if k == 0 {
                c = int(1);
            } else {
                a[k - 1] = int(1);
            }
            let ca = SymDivisorCA::new(n, c, a)?;
            let b = to_b_basis(&ca);
            for j in 1..=(n / 2).saturating_sub(2) {
                let p = FCurvePartition::new([1, 1, j, n - 2 - j])?;
                let lhs = f_curve_intersection(&b, &p);
                let rhs = ca.a_at(j) + ca.a_at(j + 2) - ca.a_at(j + 1) * int(2);
                if lhs != rhs {
                    return Err(Error::Domain(format!(
                        "intersection self-test failed at n={n}, basis vector {k}, j={j}: {lhs} != {rhs}"
                    )));
                }
            }
        }
    }
    Ok(())
}
