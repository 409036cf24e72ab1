//! Weighting systems on the complete graph and their feasibility.
//!
//! A divisor `m * D` with data `(c, a)` admits a graph weighting `w` on the
//! pairs of `[n]` avoiding a stratum `T` when every leaf has weighted degree
//! `m c (n-1)`, every subset `I` with `3 <= |I| <= n/2` carries at least
//! `m a_|I|` of internal weight, and every `J` in `T` carries exactly
//! `m a_|J|`.

mod certificate;
mod ilp;
mod lp;
mod simplex;
mod symmetry;
mod system;

pub use certificate::{certificate_violations, verify_certificate, verify_proof_json, Certificate, CertificateKind, ProofCheck, WitnessRecord};
pub use ilp::{ilp_feasible, ilp_solve, IlpOptions, IlpOutcome};
pub use lp::{lp_feasible, lp_feasible_with_stats, LpOutcome, SolveStats};
pub use symmetry::{member_forms, symmetry_rows};
pub use system::{FarkasWitness, LinearSystemSpec, Provenance, Row, RowKind};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::divisor::{is_f_nef, is_integral, to_b_basis, SymDivisorCA};
use crate::rational::{is_integer, Q};
use crate::strata::{LeafSet, Stratum};
use crate::{Error, Result};

/// Index of the pair `{i, j}` (0-based, `i != j`) among the `C(n, 2)` pairs
/// listed lexicographically.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(j < n && i != j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Nonnegative weights on the edges of the complete graph on `n` leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphWeighting {
    n: usize,
    w: Vec<Q>,
}

impl GraphWeighting {
    pub fn new(n: usize, w: Vec<Q>) -> Result<Self> {
        if w.len() != n * (n - 1) / 2 {
            return Err(Error::Certificate(format!("expected {} pair weights, got {}", n * (n - 1) / 2, w.len())));
        }
        if w.iter().any(Signed::is_negative) {
            return Err(Error::Certificate("negative edge weight".into()));
        }
        Ok(Self { n, w })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, w: vec![Q::zero(); n * (n - 1) / 2] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[Q] {
        &self.w
    }

    /// Weight of the edge between leaves `i` and `j` (0-based).
    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.w[pair_index(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) -> Result<()> {
        if i == j || i >= self.n || j >= self.n {
            return Err(Error::Certificate(format!("no edge ({}, {})", i + 1, j + 1)));
        }
        if v.is_negative() {
            return Err(Error::Certificate("negative edge weight".into()));
        }
        self.w[pair_index(self.n, i, j)] = v;
        Ok(())
    }

    pub fn degree(&self, i: usize) -> Q {
        (0..self.n).filter(|&j| j != i).fold(Q::zero(), |acc, j| acc + self.get(i, j))
    }

    /// Total weight of the edges inside `set`.
    pub fn subset_weight(&self, set: LeafSet) -> Q {
        let leaves: Vec<usize> = (0..self.n).filter(|&i| set >> i & 1 == 1).collect();
        let mut s = Q::zero();
        for (k, &i) in leaves.iter().enumerate() {
            for &j in &leaves[k + 1..] {
                s += self.get(i, j);
            }
        }
        s
    }

    pub fn is_integral(&self) -> bool {
        self.w.iter().all(is_integer)
    }

    pub fn scale(&self, t: &Q) -> Self {
        Self { n: self.n, w: self.w.iter().map(|x| x * t).collect() }
    }

    /// Weighting with leaf `i` renamed to `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.n);
        for (i, j) in pairs(self.n) {
            out.w[pair_index(self.n, perm[i], perm[j])] = self.get(i, j).clone();
        }
        out
    }
}

fn var_name(i: usize, j: usize) -> String {
    format!("w_{}_{}", i + 1, j + 1)
}

fn subset_row(n: usize, set: LeafSet, kind: RowKind, rhs: Q, provenance: Provenance) -> Row {
    let leaves: Vec<usize> = (0..n).filter(|&i| set >> i & 1 == 1).collect();
    let mut coeffs = Vec::new();
    for (k, &i) in leaves.iter().enumerate() {
        for &j in &leaves[k + 1..] {
            coeffs.push((pair_index(n, i, j), Q::one()));
        }
    }
    Row::new(coeffs, kind, rhs, provenance)
}

/// Subsets `I` with `3 <= |I| <= n/2`, by size then lexicographically; for
/// `|I| = n/2` only the side containing leaf 1.
pub fn subset_family(n: usize) -> Vec<LeafSet> {
    let mut out = Vec::new();
    for size in 3..=n / 2 {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            if !(2 * size == n && idx[0] != 0) {
                sets.push(idx.clone());
            }
            let Some(i) = (0..size).rev().find(|&i| idx[i] != i + n - size) else {
                break;
            };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
        out.extend(sets.into_iter().map(|v| v.iter().fold(0, |acc, &l| acc | 1 << l)));
    }
    out
}

fn check_inputs(n: usize, d: &SymDivisorCA, m: u64) -> Result<()> {
    if d.n() != n {
        return Err(Error::DivisorRejected(format!("divisor is on {} points, expected {n}", d.n())));
    }
    if m == 0 {
        return Err(Error::DivisorRejected("multiplier must be positive".into()));
    }
    if !is_f_nef(&to_b_basis(d)) {
        return Err(Error::DivisorRejected("divisor is not F-nef".into()));
    }
    if !is_integral(d) {
        return Err(Error::DivisorRejected("divisor is not integral".into()));
    }
    Ok(())
}

/// The system for `m * d` avoiding every stratum in `strata` simultaneously.
pub fn build_slice_multi(n: usize, d: &SymDivisorCA, m: u64, strata: &[&Stratum]) -> Result<LinearSystemSpec> {
    check_inputs(n, d, m)?;
    if strata.is_empty() {
        return Err(Error::InvalidStratum("no stratum given".into()));
    }
    for s in strata {
        if s.n() != n {
            return Err(Error::InvalidStratum(format!("stratum is on {} points, expected {n}", s.n())));
        }
        if s.is_empty() {
            return Err(Error::InvalidStratum("stratum must have a nonempty family T".into()));
        }
    }
    let mq = Q::from_integer(BigInt::from(m));
    let a_of = |k: usize| d.a_at(k) * &mq;
    let degree = d.degree() * &mq;
    let vars: Vec<String> = pairs(n).into_iter().map(|(i, j)| var_name(i, j)).collect();
    let mut rows = Vec::new();
    for i in 0..n {
        let coeffs = (0..n).filter(|&j| j != i).map(|j| (pair_index(n, i, j), Q::one())).collect();
        rows.push(Row::new(coeffs, RowKind::Eq, degree.clone(), Provenance::Degree(i)));
    }
    for set in subset_family(n) {
        rows.push(subset_row(n, set, RowKind::Ge, a_of(set.count_ones() as usize), Provenance::Subset(set)));
    }
    let mut seen = std::collections::BTreeSet::new();
    for s in strata {
        for &j in s.members() {
            if seen.insert(j) {
                rows.push(subset_row(n, j, RowKind::Eq, a_of(j.count_ones() as usize), Provenance::Stratum(j)));
            }
        }
    }
    for (k, _) in vars.iter().enumerate() {
        rows.push(Row::new(vec![(k, Q::one())], RowKind::Ge, Q::zero(), Provenance::Nonneg(k)));
    }
    LinearSystemSpec::new(vars, rows)
}

/// The system `rho^-1(m d)` intersected with the conditions of stratum `s`.
pub fn build_slice(n: usize, d: &SymDivisorCA, m: u64, s: &Stratum) -> Result<LinearSystemSpec> {
    build_slice_multi(n, d, m, &[s])
}

/// Integer feasibility of `build_slice(n, d, m, s)`. The search adds the
/// symmetry-breaking rows of `s` and branches on leaf-to-member weights
/// first; a returned point satisfies the plain slice.
pub fn solve_slice_integral(n: usize, d: &SymDivisorCA, m: u64, s: &Stratum, node_limit: Option<u64>) -> Result<(IlpOutcome, SolveStats)> {
    let sys = build_slice(n, d, m, s)?;
    let full = sys.with_rows(symmetry_rows(s));
    let opts = IlpOptions { node_limit, branch_forms: member_forms(s) };
    let (out, stats) = ilp_solve(&full, &opts)?;
    if let IlpOutcome::Feasible(x) = &out {
        let q: Vec<Q> = x.iter().map(|v| Q::from_integer(v.clone())).collect();
        if !sys.violations(&q).is_empty() {
            return Err(Error::Solver("integral point fails the slice".into()));
        }
    }
    Ok((out, stats))
}

/// True iff no integral weighting for `m d` avoids the stratum `s`.
pub fn stratum_in_base_locus(n: usize, d: &SymDivisorCA, m: u64, s: &Stratum) -> Result<bool> {
    match solve_slice_integral(n, d, m, s, None)?.0 {
        IlpOutcome::Feasible(_) => Ok(false),
        IlpOutcome::Infeasible => Ok(true),
        IlpOutcome::Budget => unreachable!("no node limit was set"),
    }
}

/// Convenience: weighting from a solver point over the pair variables.
pub fn weighting_from_point(n: usize, x: &[Q]) -> Result<GraphWeighting> {
    GraphWeighting::new(n, x.to_vec())
}
