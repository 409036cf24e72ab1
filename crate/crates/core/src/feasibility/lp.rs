//! Rational feasibility with lazily generated inequality rows.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::simplex::{Overflow, Phase1, Tableau};
use super::system::{is_nonneg_row, FarkasWitness, LinearSystemSpec, Provenance, Row, RowKind};
use crate::rational::Q;
use crate::{Error, Result};

/// Inequality rows added per round of row generation.
const ROWS_PER_ROUND: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Feasible(Vec<Q>),
    Infeasible(FarkasWitness),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub lp_solves: u64,
    pub rounds: u64,
    pub pivots: u64,
    pub nodes: u64,
    /// Some solve needed arbitrary-precision arithmetic.
    pub wide_arithmetic: bool,
}

impl SolveStats {
    pub fn absorb(&mut self, o: &SolveStats) {
        self.lp_solves += o.lp_solves;
        self.rounds += o.rounds;
        self.pivots += o.pivots;
        self.nodes += o.nodes;
        self.wide_arithmetic |= o.wide_arithmetic;
    }
}

/// Exact rational feasibility: a point satisfying every row, or a verified
/// Farkas witness.
pub fn lp_feasible(sys: &LinearSystemSpec) -> Result<LpOutcome> {
    lp_solve(sys, &mut SolveStats::default())
}

pub fn lp_feasible_with_stats(sys: &LinearSystemSpec) -> Result<(LpOutcome, SolveStats)> {
    let mut stats = SolveStats::default();
    let out = lp_solve(sys, &mut stats)?;
    Ok((out, stats))
}

/// Presolved view of a system.
struct Reduced {
    nonneg: Vec<bool>,
    elim: Vec<bool>,
    /// Equalities `rhs = 0` with same-sign coefficients on nonnegative
    /// variables; they force every variable they touch to zero.
    forcing: Vec<usize>,
    eqs: Vec<usize>,
    candidates: Vec<usize>,
    /// A row reading `0 = b` or `0 >= b` with `b` nonzero or positive.
    contradiction: Option<usize>,
    /// Machine-word copies of the candidate rows, when they fit.
    int_rows: Option<Vec<(Vec<(usize, i64)>, i64)>>,
}

fn presolve(sys: &LinearSystemSpec) -> Reduced {
    let nv = sys.var_count();
    let nonneg = sys.nonneg_vars();
    let mut elim = vec![false; nv];
    let mut forcing = Vec::new();
    for (k, r) in sys.rows().iter().enumerate() {
        if r.kind != RowKind::Eq || !r.rhs.is_zero() || r.coeffs.is_empty() {
            continue;
        }
        let all_pos = r.coeffs.iter().all(|(_, c)| c.is_positive());
        let all_neg = r.coeffs.iter().all(|(_, c)| c.is_negative());
        if (all_pos || all_neg) && r.coeffs.iter().all(|(j, _)| nonneg[*j]) {
            forcing.push(k);
            for (j, _) in &r.coeffs {
                elim[*j] = true;
            }
        }
    }
    let mut eqs = Vec::new();
    let mut candidates = Vec::new();
    let mut contradiction = None;
    for (k, r) in sys.rows().iter().enumerate() {
        if forcing.contains(&k) {
            continue;
        }
        if let Provenance::Nonneg(j) = r.provenance {
            if is_nonneg_row(r, j) {
                continue;
            }
        }
        let live: Vec<&(usize, Q)> = r.coeffs.iter().filter(|(j, _)| !elim[*j]).collect();
        if live.is_empty() {
            let bad = match r.kind {
                RowKind::Eq => !r.rhs.is_zero(),
                RowKind::Ge => r.rhs.is_positive(),
            };
            if bad && contradiction.is_none() {
                contradiction = Some(k);
            }
            continue;
        }
        match r.kind {
            RowKind::Eq => eqs.push(k),
            RowKind::Ge => {
                let implied = !r.rhs.is_positive() && live.iter().all(|(j, c)| c.is_positive() && nonneg[*j]);
                if !implied {
                    candidates.push(k);
                }
            }
        }
    }
    let int_rows = candidates
        .iter()
        .map(|&k| {
            let r = &sys.rows()[k];
            let small = |q: &Q| q.is_integer().then(|| q.numer().to_i64()).flatten().filter(|v| v.abs() < 1 << 40);
            let coeffs = r.coeffs.iter().map(|(j, c)| Some((*j, small(c)?))).collect::<Option<Vec<_>>>()?;
            Some((coeffs, small(&r.rhs)?))
        })
        .collect();
    Reduced { nonneg, elim, forcing, eqs, candidates, contradiction, int_rows }
}

/// `x` over a common denominator, if every scaled entry fits comfortably.
fn scaled_point(x: &[Q]) -> Option<(Vec<i128>, i128)> {
    let lcm = x.iter().fold(BigInt::from(1), |l, q| num_integer::Integer::lcm(&l, q.denom()));
    let den = lcm.to_i64()?;
    let limit = 1i128 << 60;
    let xs = x
        .iter()
        .map(|q| (q.numer() * (&lcm / q.denom())).to_i64().map(i128::from).filter(|v| v.abs() < limit))
        .collect::<Option<Vec<_>>>()?;
    Some((xs, den as i128))
}

enum Engine {
    Small(Tableau<i64>),
    Wide(Tableau<BigInt>),
}

impl Clone for Engine {
    fn clone(&self) -> Self {
        match self {
            Engine::Small(t) => Engine::Small(t.clone()),
            Engine::Wide(t) => Engine::Wide(t.clone()),
        }
    }
}

/// A row as the tableau sees it: restricted to live variables.
#[derive(Clone)]
struct Internal {
    /// Index into the base system, if the row came from it.
    origin: Option<usize>,
    coeffs: Vec<(usize, Q)>,
    kind: RowKind,
    rhs: Q,
}

/// Incremental solver state for one system; rows can be appended and the
/// previous basis is reused. Cloning gives an independent copy.
#[derive(Clone)]
pub(crate) struct Session {
    red: std::sync::Arc<Reduced>,
    col_of: Vec<Option<(usize, Option<usize>)>>,
    ncols: usize,
    rows: Vec<Internal>,
    slacks: usize,
    active: BTreeSet<usize>,
    engine: Engine,
    /// Set when an appended row reads `0 >= b` with `b > 0`.
    dead: bool,
    track: bool,
}

pub(crate) enum SessionOutcome {
    Feasible(Vec<Q>),
    /// Multipliers over the base system rows, when every internal row has one.
    Infeasible(Option<Vec<Q>>),
}

impl Session {
    /// Presolves `sys`; returns the contradiction witness if presolve alone
    /// decides it. `track` keeps what is needed for Farkas multipliers.
    pub fn new(sys: &LinearSystemSpec, track: bool) -> Result<std::result::Result<Self, FarkasWitness>> {
        let nv = sys.var_count();
        let red = presolve(sys);
        if let Some(k) = red.contradiction {
            let mut lam = vec![Q::zero(); sys.rows().len()];
            let r = &sys.rows()[k];
            lam[k] = if r.rhs.is_negative() { -Q::one() } else { Q::one() };
            return finish_witness(sys, &red, lam).map(Err);
        }
        let mut col_of = vec![None; nv];
        let mut ncols = 0;
        for j in 0..nv {
            if red.elim[j] {
                continue;
            }
            if red.nonneg[j] {
                col_of[j] = Some((ncols, None));
                ncols += 1;
            } else {
                col_of[j] = Some((ncols, Some(ncols + 1)));
                ncols += 2;
            }
        }
        let eqs = red.eqs.clone();
        let mut session = Session {
            red: std::sync::Arc::new(red),
            col_of,
            ncols,
            rows: Vec::new(),
            slacks: 0,
            active: BTreeSet::new(),
            engine: Engine::Small(Tableau::new(ncols, track)),
            dead: false,
            track,
        };
        for k in eqs {
            let r = &sys.rows()[k];
            session.push(Some(k), &r.coeffs, r.kind, r.rhs.clone());
        }
        Ok(Ok(session))
    }

    fn dense(&self, row: &Internal, slack: Option<usize>, width: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); width];
        for (j, c) in &row.coeffs {
            if let Some((p, neg)) = self.col_of[*j] {
                out[p] += c;
                if let Some(q) = neg {
                    out[q] -= c;
                }
            }
        }
        if let Some(s) = slack {
            out[self.ncols + s] = -Q::one();
        }
        out
    }

    fn push(&mut self, origin: Option<usize>, coeffs: &[(usize, Q)], kind: RowKind, rhs: Q) {
        let live: Vec<(usize, Q)> = coeffs.iter().filter(|(j, _)| !self.red.elim[*j]).cloned().collect();
        if live.is_empty() {
            let bad = match kind {
                RowKind::Eq => !rhs.is_zero(),
                RowKind::Ge => rhs.is_positive(),
            };
            self.dead |= bad;
            return;
        }
        let row = Internal { origin, coeffs: live, kind, rhs };
        let slack = (kind == RowKind::Ge).then_some(self.slacks);
        if slack.is_some() {
            self.slacks += 1;
        }
        let width = self.ncols + self.slacks;
        let dense = self.dense(&row, slack, width);
        let ok = match &mut self.engine {
            Engine::Small(t) => {
                if slack.is_some() {
                    t.add_column();
                }
                t.add_row(&dense, &row.rhs).is_ok()
            }
            Engine::Wide(t) => {
                if slack.is_some() {
                    t.add_column();
                }
                t.add_row(&dense, &row.rhs).is_ok()
            }
        };
        self.rows.push(row);
        if !ok {
            self.widen();
        }
    }

    /// Rebuilds the tableau over big rationals from the row list.
    fn widen(&mut self) {
        let pivots = match &self.engine {
            Engine::Small(t) => t.pivots,
            Engine::Wide(t) => t.pivots,
        };
        let mut t = Tableau::<BigInt>::new(self.ncols, self.track);
        t.pivots = pivots;
        let mut slack = 0;
        for row in &self.rows {
            let s = (row.kind == RowKind::Ge).then(|| {
                slack += 1;
                slack - 1
            });
            if s.is_some() {
                t.add_column();
            }
            let dense = self.dense(row, s, self.ncols + slack);
            t.add_row(&dense, &row.rhs).unwrap_or_else(|_| unreachable!("big integers do not overflow"));
        }
        self.engine = Engine::Wide(t);
    }

    pub fn add_row(&mut self, r: &Row) {
        self.push(None, &r.coeffs, r.kind, r.rhs.clone());
    }

    /// Drops generated rows that are strictly slack at the current point;
    /// row generation brings them back if they are violated later.
    pub fn purge(&mut self) {
        if self.track {
            return;
        }
        let positive = match &self.engine {
            Engine::Small(t) => t.positive_basics(),
            Engine::Wide(t) => t.positive_basics(),
        };
        let mut slack_col = Vec::with_capacity(self.rows.len());
        let mut next = self.ncols;
        for r in &self.rows {
            slack_col.push((r.kind == RowKind::Ge).then(|| {
                next += 1;
                next - 1
            }));
        }
        let mut drop: Vec<(usize, usize)> = positive
            .into_iter()
            .filter(|&(i, col)| {
                slack_col[i] == Some(col) && self.rows[i].origin.is_some_and(|k| self.active.contains(&k))
            })
            .collect();
        drop.sort_unstable_by(|a, b| b.cmp(a));
        for (i, col) in drop {
            match &mut self.engine {
                Engine::Small(t) => t.remove(i, col),
                Engine::Wide(t) => t.remove(i, col),
            }
            let row = self.rows.remove(i);
            self.active.remove(&row.origin.expect("only generated rows are dropped"));
            self.slacks -= 1;
        }
    }

    fn pivots(&self) -> u64 {
        match &self.engine {
            Engine::Small(t) => t.pivots,
            Engine::Wide(t) => t.pivots,
        }
    }

    fn run(&mut self, stats: &mut SolveStats) -> Phase1 {
        stats.lp_solves += 1;
        let before = self.pivots();
        let out = loop {
            match &mut self.engine {
                Engine::Small(t) => match t.run() {
                    Ok(r) => break r,
                    Err(Overflow) => self.widen(),
                },
                Engine::Wide(t) => break t.run().unwrap_or_else(|_| unreachable!("big integers do not overflow")),
            }
        };
        if matches!(self.engine, Engine::Wide(_)) {
            stats.wide_arithmetic = true;
        }
        stats.pivots += self.pivots() - before;
        out
    }

    /// Solves with row generation over the base system `sys`.
    pub fn solve(&mut self, sys: &LinearSystemSpec, stats: &mut SolveStats) -> Result<SessionOutcome> {
        let nv = sys.var_count();
        loop {
            if self.dead {
                return Ok(SessionOutcome::Infeasible(None));
            }
            match self.run(stats) {
                Phase1::Infeasible(None) => return Ok(SessionOutcome::Infeasible(None)),
                Phase1::Infeasible(Some(y)) => {
                    let mut lam = vec![Q::zero(); sys.rows().len()];
                    for (row, yi) in self.rows.iter().zip(&y) {
                        match row.origin {
                            Some(k) => lam[k] = yi.clone(),
                            None if yi.is_zero() => {}
                            None => return Ok(SessionOutcome::Infeasible(None)),
                        }
                    }
                    return Ok(SessionOutcome::Infeasible(Some(lam)));
                }
                Phase1::Feasible(cols) => {
                    let mut x = vec![Q::zero(); nv];
                    for j in 0..nv {
                        if let Some((p, neg)) = self.col_of[j] {
                            x[j] = cols[p].clone();
                            if let Some(q) = neg {
                                x[j] -= &cols[q];
                            }
                        }
                    }
                    let violated = self.violated(sys, &x);
                    if violated.is_empty() {
                        return Ok(SessionOutcome::Feasible(x));
                    }
                    stats.rounds += 1;
                    for k in violated.into_iter().take(ROWS_PER_ROUND) {
                        self.active.insert(k);
                        let r = &sys.rows()[k];
                        self.push(Some(k), &r.coeffs, r.kind, r.rhs.clone());
                    }
                }
            }
        }
    }

    /// Inactive candidate rows violated by `x`, most violated first.
    fn violated(&self, sys: &LinearSystemSpec, x: &[Q]) -> Vec<usize> {
        let red = &self.red;
        if let (Some(rows), Some((xs, den))) = (&red.int_rows, scaled_point(x)) {
            let mut out: Vec<(i128, usize)> = Vec::new();
            for (&k, (coeffs, rhs)) in red.candidates.iter().zip(rows) {
                if self.active.contains(&k) {
                    continue;
                }
                let lhs: i128 = coeffs.iter().map(|(j, c)| *c as i128 * xs[*j]).sum();
                let v = *rhs as i128 * den - lhs;
                let bad = match sys.rows()[k].kind {
                    RowKind::Ge => v > 0,
                    RowKind::Eq => v != 0,
                };
                if bad {
                    out.push((v.abs(), k));
                }
            }
            out.sort_by(|p, q| q.0.cmp(&p.0).then(p.1.cmp(&q.1)));
            return out.into_iter().map(|(_, k)| k).collect();
        }
        let mut out: Vec<(Q, usize)> = red
            .candidates
            .iter()
            .filter(|k| !self.active.contains(k))
            .filter_map(|&k| {
                let v = sys.rows()[k].violation(x);
                (!v.is_zero()).then_some((v, k))
            })
            .collect();
        out.sort_by(|p, q| q.0.cmp(&p.0).then(p.1.cmp(&q.1)));
        out.into_iter().map(|(_, k)| k).collect()
    }

    pub fn witness(&self, sys: &LinearSystemSpec, lam: Vec<Q>) -> Result<FarkasWitness> {
        finish_witness(sys, &self.red, lam)
    }
}

/// Solves with row generation and turns the result into a point or witness.
pub(crate) fn lp_solve(sys: &LinearSystemSpec, stats: &mut SolveStats) -> Result<LpOutcome> {
    let mut session = match Session::new(sys, true)? {
        Ok(s) => s,
        Err(w) => return Ok(LpOutcome::Infeasible(w)),
    };
    match session.solve(sys, stats)? {
        SessionOutcome::Feasible(x) => {
            if !sys.violations(&x).is_empty() {
                return Err(Error::Solver("solver point fails its own system".into()));
            }
            Ok(LpOutcome::Feasible(x))
        }
        SessionOutcome::Infeasible(Some(lam)) => session.witness(sys, lam).map(LpOutcome::Infeasible),
        SessionOutcome::Infeasible(None) => Err(Error::Solver("infeasibility without base multipliers".into())),
    }
}

/// Completes row multipliers `lam` whose combination has nonpositive
/// coefficients on nonnegative variables (and zero on free ones) into a
/// witness, using the nonnegativity and forcing rows.
fn finish_witness(sys: &LinearSystemSpec, red: &Reduced, mut lam: Vec<Q>) -> Result<FarkasWitness> {
    let nv = sys.var_count();
    let combo = |lam: &[Q]| {
        let mut t = vec![Q::zero(); nv];
        for (r, y) in sys.rows().iter().zip(lam) {
            if !y.is_zero() {
                for (j, c) in &r.coeffs {
                    t[*j] += c * y;
                }
            }
        }
        t
    };
    let mut t = combo(&lam);
    for &f in &red.forcing {
        let r = &sys.rows()[f];
        let s = if r.coeffs[0].1.is_positive() { Q::one() } else { -Q::one() };
        let worst = r.coeffs.iter().map(|(j, c)| &t[*j] / (c * &s)).max().expect("forcing rows are nonempty");
        if worst.is_positive() {
            let mu = -(worst * &s);
            for (j, c) in &r.coeffs {
                t[*j] += c * &mu;
            }
            lam[f] += mu;
        }
    }
    let mut nonneg_row = vec![None; nv];
    for (k, r) in sys.rows().iter().enumerate() {
        if let Provenance::Nonneg(j) = r.provenance {
            if is_nonneg_row(r, j) && nonneg_row[j].is_none() {
                nonneg_row[j] = Some(k);
            }
        }
    }
    for j in 0..nv {
        if t[j].is_zero() {
            continue;
        }
        let Some(k) = nonneg_row[j] else {
            return Err(Error::Solver(format!("witness leaves free variable {} unbalanced", sys.vars()[j])));
        };
        if t[j].is_positive() {
            return Err(Error::Solver(format!("witness has positive weight on {}", sys.vars()[j])));
        }
        lam[k] += -&t[j] / &sys.rows()[k].coeffs[0].1;
    }
    let w = FarkasWitness { multipliers: lam };
    if !w.verify(sys) {
        return Err(Error::Solver("Farkas witness failed recombination".into()));
    }
    Ok(w)
}
