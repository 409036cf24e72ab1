//! Integer feasibility by depth-first branch and bound.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lp::{Session, SessionOutcome, SolveStats};
use super::system::{LinearSystemSpec, Provenance, Row, RowKind};
use crate::rational::{is_integer, Q};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IlpOutcome {
    Feasible(Vec<BigInt>),
    /// The search tree was exhausted.
    Infeasible,
    /// The node limit was hit first.
    Budget,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IlpOptions {
    pub node_limit: Option<u64>,
    /// Integer linear forms `sum c_j x_j`, integral at every integral point,
    /// branched on before single variables when fractional.
    pub branch_forms: Vec<Vec<(usize, i64)>>,
}

pub fn ilp_feasible(sys: &LinearSystemSpec) -> Result<IlpOutcome> {
    ilp_solve(sys, &IlpOptions::default()).map(|(o, _)| o)
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Finite integer bounds for every variable, read off single-variable rows
/// and same-sign equalities. `None` when some variable stays unbounded.
pub(crate) fn derive_bounds(sys: &LinearSystemSpec) -> Option<Vec<(BigInt, BigInt)>> {
    let nv = sys.var_count();
    let mut lo: Vec<Option<BigInt>> = vec![None; nv];
    let mut hi: Vec<Option<BigInt>> = vec![None; nv];
    let tighten_lo = |lo: &mut Option<BigInt>, v: BigInt| {
        if lo.as_ref().is_none_or(|x| v > *x) {
            *lo = Some(v);
        }
    };
    let tighten_hi = |hi: &mut Option<BigInt>, v: BigInt| {
        if hi.as_ref().is_none_or(|x| v < *x) {
            *hi = Some(v);
        }
    };
    for r in sys.rows() {
        if let [(j, c)] = r.coeffs.as_slice() {
            let (c, rhs) = (c.to_integer(), r.rhs.to_integer());
            let (up, down) = (ceil_div(&rhs, &c), floor_div(&rhs, &c));
            match (r.kind, c.is_positive()) {
                (RowKind::Ge, true) => tighten_lo(&mut lo[*j], up),
                (RowKind::Ge, false) => tighten_hi(&mut hi[*j], down),
                (RowKind::Eq, _) => {
                    tighten_lo(&mut lo[*j], up);
                    tighten_hi(&mut hi[*j], down);
                }
            }
        }
    }
    for r in sys.rows() {
        if r.coeffs.len() < 2 {
            continue;
        }
        // Normalize to sum c_k x_k <= rhs with every c_k > 0.
        let sign = if r.coeffs.iter().all(|(_, c)| c.is_positive()) {
            if r.kind != RowKind::Eq {
                continue;
            }
            BigInt::one()
        } else if r.coeffs.iter().all(|(_, c)| c.is_negative()) {
            -BigInt::one()
        } else {
            continue;
        };
        if r.coeffs.iter().any(|(j, _)| lo[*j].is_none()) {
            continue;
        }
        let rhs = r.rhs.to_integer() * &sign;
        let floor: BigInt = r.coeffs.iter().map(|(j, c)| c.to_integer() * &sign * lo[*j].as_ref().unwrap()).sum();
        for (j, c) in &r.coeffs {
            let c = c.to_integer() * &sign;
            let own = &c * lo[*j].as_ref().unwrap();
            tighten_hi(&mut hi[*j], floor_div(&(&rhs - (&floor - own)), &c));
        }
    }
    lo.into_iter().zip(hi).map(|(l, h)| Some((l?, h?))).collect()
}

/// The branching form whose value has fractional part nearest one half.
fn pick_branch(x: &[Q], forms: &[Vec<(usize, i64)>]) -> Option<(Vec<(usize, Q)>, Q)> {
    let half = Q::new(1.into(), 2.into());
    let dist = |v: &Q| (v - v.floor() - &half).abs();
    let mut best: Option<(Q, usize, Q)> = None;
    for (i, f) in forms.iter().enumerate() {
        let v: Q = f.iter().map(|(j, c)| &x[*j] * Q::from_integer((*c).into())).sum();
        if !is_integer(&v) && best.as_ref().is_none_or(|(d, _, _)| dist(&v) < *d) {
            best = Some((dist(&v), i, v));
        }
    }
    if let Some((_, i, v)) = best {
        return Some((forms[i].iter().map(|(j, c)| (*j, Q::from_integer((*c).into()))).collect(), v));
    }
    x.iter()
        .enumerate()
        .filter(|(_, v)| !is_integer(v))
        .min_by(|(i, a), (j, b)| dist(a).cmp(&dist(b)).then(i.cmp(j)))
        .map(|(j, v)| (vec![(j, Q::one())], v.clone()))
}

/// Branch and bound on the exact relaxation. Branches on the caller's forms
/// first, then on the variable whose fractional part is nearest one half,
/// exploring the nearer side first. Children start from a copy of the
/// parent's solver state.
pub fn ilp_solve(sys: &LinearSystemSpec, opts: &IlpOptions) -> Result<(IlpOutcome, SolveStats)> {
    for r in sys.rows() {
        if !is_integer(&r.rhs) || r.coeffs.iter().any(|(_, c)| !is_integer(c)) {
            return Err(Error::Solver(format!("row {} has non-integral data", r.provenance)));
        }
    }
    let bounds = derive_bounds(sys).ok_or_else(|| Error::Solver("some variable has no finite bound".into()))?;
    let nonneg = sys.nonneg_vars();
    // Rounded bounds are stronger than what the relaxation sees, so they
    // become explicit rows.
    let mut extra = Vec::new();
    for (j, (l, h)) in bounds.iter().enumerate() {
        if !(nonneg[j] && l.is_zero()) {
            extra.push(Row::new(vec![(j, Q::one())], RowKind::Ge, Q::from_integer(l.clone()), Provenance::Bound(j)));
        }
        extra.push(Row::new(vec![(j, -Q::one())], RowKind::Ge, Q::from_integer(-h.clone()), Provenance::Bound(j)));
    }
    let full = sys.with_rows(extra);
    let mut stats = SolveStats::default();
    let root = match Session::new(&full, false)? {
        Ok(s) => s,
        Err(_) => return Ok((IlpOutcome::Infeasible, stats)),
    };
    let mut stack: Vec<(Arc<Session>, Option<Row>)> = vec![(Arc::new(root), None)];
    let half = Q::new(1.into(), 2.into());
    while let Some((parent, branch)) = stack.pop() {
        if opts.node_limit.is_some_and(|lim| stats.nodes >= lim) {
            return Ok((IlpOutcome::Budget, stats));
        }
        stats.nodes += 1;
        let mut session = Arc::unwrap_or_clone(parent);
        session.purge();
        if let Some(r) = &branch {
            session.add_row(r);
        }
        let SessionOutcome::Feasible(x) = session.solve(&full, &mut stats)? else {
            continue;
        };
        let Some((form, v)) = pick_branch(&x, &opts.branch_forms) else {
            if !sys.violations(&x).is_empty() {
                return Err(Error::Solver("integral point fails the system".into()));
            }
            return Ok((IlpOutcome::Feasible(x.iter().map(|v| v.to_integer()).collect()), stats));
        };
        let f = v.floor();
        let tag = Provenance::Bound(form[0].0);
        let neg: Vec<(usize, Q)> = form.iter().map(|(j, c)| (*j, -c)).collect();
        let down = Row::new(neg, RowKind::Ge, -f.clone(), tag.clone());
        let up = Row::new(form, RowKind::Ge, f.clone() + Q::one(), tag);
        let parent = Arc::new(session);
        if v - f < half {
            stack.push((parent.clone(), Some(up)));
            stack.push((parent, Some(down)));
        } else {
            stack.push((parent.clone(), Some(down)));
            stack.push((parent, Some(up)));
        }
    }
    Ok((IlpOutcome::Infeasible, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn row(c: &[i64], kind: RowKind, rhs: i64, p: Provenance) -> Row {
        Row::dense(&c.iter().map(|&x| int(x)).collect::<Vec<_>>(), kind, int(rhs), p)
    }

    fn nonneg(nv: usize) -> Vec<Row> {
        (0..nv)
            .map(|j| {
                let mut c = vec![0; nv];
                c[j] = 1;
                row(&c, RowKind::Ge, 0, Provenance::Nonneg(j))
            })
            .collect()
    }

    #[test]
    fn parity_gap() {
        // 2x + 2y = 3 has rational but no integral solutions.
        let mut rows = nonneg(2);
        rows.push(row(&[2, 2], RowKind::Eq, 3, Provenance::Other(0)));
        let sys = LinearSystemSpec::new(vec!["x".into(), "y".into()], rows).unwrap();
        assert_eq!(ilp_feasible(&sys).unwrap(), IlpOutcome::Infeasible);
        assert!(matches!(crate::feasibility::lp_feasible(&sys).unwrap(), crate::feasibility::LpOutcome::Feasible(_)));
    }

    #[test]
    fn finds_integral_point() {
        let mut rows = nonneg(3);
        rows.push(row(&[2, 3, 5], RowKind::Eq, 11, Provenance::Other(0)));
        rows.push(row(&[1, -1, 0], RowKind::Ge, 1, Provenance::Other(1)));
        let sys = LinearSystemSpec::new(vec!["x".into(), "y".into(), "z".into()], rows).unwrap();
        let IlpOutcome::Feasible(p) = ilp_feasible(&sys).unwrap() else { panic!() };
        let q: Vec<Q> = p.iter().map(|v| Q::from_integer(v.clone())).collect();
        assert!(sys.violations(&q).is_empty());
    }

    #[test]
    fn unbounded_rejected() {
        let mut rows = nonneg(2);
        rows.push(row(&[1, -1], RowKind::Eq, 0, Provenance::Other(0)));
        let sys = LinearSystemSpec::new(vec!["x".into(), "y".into()], rows).unwrap();
        assert!(ilp_feasible(&sys).is_err());
    }

    #[test]
    fn budget_reported() {
        let mut rows = nonneg(2);
        rows.push(row(&[2, 2], RowKind::Eq, 3, Provenance::Other(0)));
        let sys = LinearSystemSpec::new(vec!["x".into(), "y".into()], rows).unwrap();
        let (o, _) = ilp_solve(&sys, &IlpOptions { node_limit: Some(1), ..Default::default() }).unwrap();
        assert_eq!(o, IlpOutcome::Budget);
    }
}
