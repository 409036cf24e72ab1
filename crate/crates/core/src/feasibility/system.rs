//! Linear systems over exact rationals with per-row provenance.

use std::collections::HashSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{format_rational, Q};
use crate::strata::{leaves_of, LeafSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RowKind {
    /// `a . x = b`
    Eq,
    /// `a . x >= b`
    Ge,
}

/// Where a row came from; used to name violated constraints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    /// Degree of the leaf (0-based).
    Degree(usize),
    /// Lower bound on `w_I`.
    Subset(LeafSet),
    /// Equality `w_J = a_|J|` for a member of the stratum.
    Stratum(LeafSet),
    /// `x_j >= 0`.
    Nonneg(usize),
    /// Variable bound added by branch and bound.
    Bound(usize),
    /// Symmetry-breaking comparison between two variables.
    Symmetry(usize),
    /// Anything else, by position.
    Other(usize),
}

fn fmt_set(set: LeafSet) -> String {
    let parts: Vec<String> = leaves_of(set).iter().map(|l| l.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Provenance::Degree(i) => write!(f, "degree[{}]", i + 1),
            Provenance::Subset(s) => write!(f, "subset{}", fmt_set(s)),
            Provenance::Stratum(s) => write!(f, "stratum{}", fmt_set(s)),
            Provenance::Nonneg(j) => write!(f, "nonneg[{j}]"),
            Provenance::Bound(j) => write!(f, "bound[{j}]"),
            Provenance::Symmetry(k) => write!(f, "symmetry[{k}]"),
            Provenance::Other(k) => write!(f, "row[{k}]"),
        }
    }
}

/// Sparse row; coefficient indices are strictly increasing and nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub coeffs: Vec<(usize, Q)>,
    pub kind: RowKind,
    pub rhs: Q,
    pub provenance: Provenance,
}

impl Row {
    pub fn new(mut coeffs: Vec<(usize, Q)>, kind: RowKind, rhs: Q, provenance: Provenance) -> Self {
        coeffs.sort_by_key(|(j, _)| *j);
        let mut merged: Vec<(usize, Q)> = Vec::with_capacity(coeffs.len());
        for (j, c) in coeffs {
            match merged.last_mut() {
                Some((k, acc)) if *k == j => *acc += c,
                _ => merged.push((j, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        Self { coeffs: merged, kind, rhs, provenance }
    }

    pub fn dense(coeffs: &[Q], kind: RowKind, rhs: Q, provenance: Provenance) -> Self {
        Self::new(coeffs.iter().cloned().enumerate().collect(), kind, rhs, provenance)
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        self.coeffs.iter().fold(Q::zero(), |acc, (j, c)| acc + c * &x[*j])
    }

    pub fn is_satisfied(&self, x: &[Q]) -> bool {
        let v = self.eval(x);
        match self.kind {
            RowKind::Eq => v == self.rhs,
            RowKind::Ge => v >= self.rhs,
        }
    }

    /// Amount by which `x` misses the row; zero when satisfied.
    pub fn violation(&self, x: &[Q]) -> Q {
        let d = self.eval(x) - &self.rhs;
        match self.kind {
            RowKind::Eq => d.abs(),
            RowKind::Ge if d.is_negative() => -d,
            RowKind::Ge => Q::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystemSpec {
    vars: Vec<String>,
    rows: Vec<Row>,
}

impl LinearSystemSpec {
    pub fn new(vars: Vec<String>, rows: Vec<Row>) -> Result<Self> {
        let nv = vars.len();
        let mut seen = HashSet::new();
        for (k, r) in rows.iter().enumerate() {
            if r.coeffs.iter().any(|(j, _)| *j >= nv) {
                return Err(Error::Solver(format!("row {k} references a variable beyond {nv}")));
            }
            if r.coeffs.windows(2).any(|w| w[0].0 >= w[1].0) || r.coeffs.iter().any(|(_, c)| c.is_zero()) {
                return Err(Error::Solver(format!("row {k} is not in sparse normal form")));
            }
            if !seen.insert((r.coeffs.clone(), r.kind, r.rhs.clone())) {
                return Err(Error::Solver(format!("row {k} ({}) duplicates an earlier row", r.provenance)));
            }
        }
        Ok(Self { vars, rows })
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn count(&self, kind: RowKind) -> usize {
        self.rows.iter().filter(|r| r.kind == kind).count()
    }

    pub fn count_where(&self, pred: impl Fn(&Provenance) -> bool) -> usize {
        self.rows.iter().filter(|r| pred(&r.provenance)).count()
    }

    /// Provenance of every row `x` fails.
    pub fn violations(&self, x: &[Q]) -> Vec<Provenance> {
        assert_eq!(x.len(), self.vars.len());
        self.rows.iter().filter(|r| !r.is_satisfied(x)).map(|r| r.provenance).collect()
    }

    /// Variables carrying an explicit `x_j >= 0` row.
    pub fn nonneg_vars(&self) -> Vec<bool> {
        let mut out = vec![false; self.vars.len()];
        for r in &self.rows {
            if let Provenance::Nonneg(j) = r.provenance {
                if is_nonneg_row(r, j) {
                    out[j] = true;
                }
            }
        }
        out
    }

    pub(crate) fn with_rows(&self, extra: Vec<Row>) -> Self {
        let mut rows = self.rows.clone();
        rows.extend(extra);
        Self { vars: self.vars.clone(), rows }
    }

    pub fn describe(&self) -> String {
        let mut s = String::new();
        for r in &self.rows {
            let terms: Vec<String> = r.coeffs.iter().map(|(j, c)| format!("{}*{}", format_rational(c), self.vars[*j])).collect();
            let op = if r.kind == RowKind::Eq { "=" } else { ">=" };
            s.push_str(&format!("{}: {} {op} {}\n", r.provenance, terms.join(" + "), format_rational(&r.rhs)));
        }
        s
    }
}

pub(crate) fn is_nonneg_row(r: &Row, j: usize) -> bool {
    r.kind == RowKind::Ge && r.rhs.is_zero() && r.coeffs.len() == 1 && r.coeffs[0].0 == j && r.coeffs[0].1.is_positive()
}

/// Multipliers, one per row, proving infeasibility: the combination of the
/// rows has zero left side and positive right side, with nonnegative
/// weights on inequality rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasWitness {
    pub multipliers: Vec<Q>,
}

impl FarkasWitness {
    /// Exact recombination check against `sys`.
    pub fn verify(&self, sys: &LinearSystemSpec) -> bool {
        if self.multipliers.len() != sys.rows.len() {
            return false;
        }
        let mut lhs = vec![Q::zero(); sys.vars.len()];
        let mut rhs = Q::zero();
        for (r, y) in sys.rows.iter().zip(&self.multipliers) {
            if y.is_zero() {
                continue;
            }
            if r.kind == RowKind::Ge && y.is_negative() {
                return false;
            }
            for (j, c) in &r.coeffs {
                lhs[*j] += c * y;
            }
            rhs += &r.rhs * y;
        }
        lhs.iter().all(Zero::is_zero) && rhs.is_positive()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.multipliers.iter().map(format_rational).collect()
    }
}
