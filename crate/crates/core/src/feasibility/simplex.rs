//! Phase-one tableau simplex over integer rows.
//!
//! Solves `A x = b, x >= 0` for feasibility. Every row gets an artificial
//! variable forming the initial basis; artificials never re-enter. Each
//! tableau row is an integer vector over one positive row denominator, so a
//! pivot costs two multiplications per entry plus one gcd sweep. Pricing is
//! by most negative reduced cost until a run of degenerate pivots, then
//! Bland's rule for the rest of the solve. When the inverse is tracked, an
//! infeasible run yields `y = c_B^T B^-1` with `y^T A <= 0` and `y^T b > 0`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Q;

#[derive(Debug)]
pub(crate) struct Overflow;

/// Integer scalar of a tableau.
pub(crate) trait Int: Clone + Ord + std::fmt::Debug + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero_int() -> Self;
    fn sgn(&self) -> Ordering;
    /// `t := (a t - c s) / gcd` where `a = s[col] != 0`, `c = t[col]`.
    fn eliminate(t: &mut Line<Self>, s: &Line<Self>, col: usize, scratch: &mut Vec<i128>) -> Result<(), Overflow>;
    /// Compares `r1 / a1` with `r2 / a2` for positive `a1, a2`.
    fn cmp_ratio(r1: &Self, a1: &Self, r2: &Self, a2: &Self) -> Ordering;
    fn negate(&self) -> Self;
}

/// One row `(v, a, rhs) / den` with `den > 0`; `a` holds the inverse columns.
#[derive(Clone, Debug)]
pub(crate) struct Line<I> {
    v: Vec<I>,
    a: Vec<I>,
    rhs: I,
    den: I,
}

impl<I: Int> Line<I> {
    fn value(&self, x: &I) -> Q {
        Q::new(x.to_big(), self.den.to_big())
    }
}

impl Int for i64 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i64().filter(|v| *v != i64::MIN)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero_int() -> Self {
        0
    }
    fn sgn(&self) -> Ordering {
        self.cmp(&0)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn cmp_ratio(r1: &Self, a1: &Self, r2: &Self, a2: &Self) -> Ordering {
        (*r1 as i128 * *a2 as i128).cmp(&(*r2 as i128 * *a1 as i128))
    }
    fn eliminate(t: &mut Line<i64>, s: &Line<i64>, col: usize, scratch: &mut Vec<i128>) -> Result<(), Overflow> {
        let (mut a, mut c) = (s.v[col] as i128, t.v[col] as i128);
        if c == 0 {
            return Ok(());
        }
        if a < 0 {
            a = -a;
            c = -c;
        }
        scratch.clear();
        let den = a * t.den as i128;
        scratch.push(den);
        let mut big = den.unsigned_abs();
        for (x, y) in t.v.iter().zip(&s.v).chain(t.a.iter().zip(&s.a)).chain(std::iter::once((&t.rhs, &s.rhs))) {
            let z = if *y == 0 { a * *x as i128 } else { a * *x as i128 - c * *y as i128 };
            big |= z.unsigned_abs();
            scratch.push(z);
        }
        let mut it = scratch.iter();
        if big < 1 << 62 {
            // Common case: everything fits a machine word.
            let mut g: u64 = 0;
            for z in scratch.iter() {
                if g == 1 {
                    break;
                }
                if *z != 0 {
                    g = g.gcd(&(z.unsigned_abs() as u64));
                }
            }
            let g = g as i64;
            let mut next = || {
                let z = *it.next().unwrap() as i64;
                if g == 1 { z } else { z / g }
            };
            t.den = next();
            for x in t.v.iter_mut().chain(t.a.iter_mut()) {
                *x = next();
            }
            t.rhs = next();
            return Ok(());
        }
        let mut g: i128 = 0;
        for z in scratch.iter() {
            if *z != 0 && g != 1 {
                g = g.gcd(z);
            }
        }
        // Excluding i64::MIN keeps every product and difference above in range.
        let fit = |z: i128| i64::try_from(z / g).ok().filter(|v| *v != i64::MIN).ok_or(Overflow);
        t.den = fit(*it.next().unwrap())?;
        for x in t.v.iter_mut().chain(t.a.iter_mut()) {
            *x = fit(*it.next().unwrap())?;
        }
        t.rhs = fit(*it.next().unwrap())?;
        Ok(())
    }
}

impl Int for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero_int() -> Self {
        Zero::zero()
    }
    fn sgn(&self) -> Ordering {
        self.cmp(&<BigInt as Zero>::zero())
    }
    fn negate(&self) -> Self {
        -self
    }
    fn cmp_ratio(r1: &Self, a1: &Self, r2: &Self, a2: &Self) -> Ordering {
        (r1 * a2).cmp(&(r2 * a1))
    }
    fn eliminate(t: &mut Line<BigInt>, s: &Line<BigInt>, col: usize, _: &mut Vec<i128>) -> Result<(), Overflow> {
        let (mut a, mut c) = (s.v[col].clone(), t.v[col].clone());
        if c.is_zero() {
            return Ok(());
        }
        if a.is_negative() {
            a = -a;
            c = -c;
        }
        t.den *= &a;
        let mut g = t.den.clone();
        for (x, y) in t.v.iter_mut().zip(&s.v).chain(t.a.iter_mut().zip(&s.a)).chain(std::iter::once((&mut t.rhs, &s.rhs))) {
            if x.is_zero() && y.is_zero() {
                continue;
            }
            *x = &a * &*x - &c * y;
            if !g.is_one() {
                g = g.gcd(x);
            }
        }
        if !g.is_one() {
            for x in t.v.iter_mut().chain(t.a.iter_mut()).chain(std::iter::once(&mut t.rhs)) {
                *x /= &g;
            }
            t.den /= &g;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Phase1 {
    /// Values of the structural columns.
    Feasible(Vec<Q>),
    /// One multiplier per row, or `None` when the inverse is not tracked.
    Infeasible(Option<Vec<Q>>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Basic {
    Structural(usize),
    Artificial(usize),
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_STREAK: u32 = 50;

/// Tableau `[B^-1 A | B^-1 | B^-1 b]` over nonnegative structural columns,
/// one artificial per row. Rows and columns can be appended between runs;
/// a new row is reduced against the current basis and enters with its own
/// artificial basic, so earlier work is kept.
#[derive(Clone, Debug)]
pub(crate) struct Tableau<I> {
    k: usize,
    lines: Vec<Line<I>>,
    basis: Vec<Basic>,
    /// Signed factor turning each caller row into the entered row.
    scale: Vec<Q>,
    track: bool,
    scratch: Vec<i128>,
    pub pivots: u64,
}

impl<I: Int> Tableau<I> {
    /// `track` keeps `B^-1` so infeasible runs can report multipliers.
    pub fn new(k: usize, track: bool) -> Self {
        Self { k, lines: Vec::new(), basis: Vec::new(), scale: Vec::new(), track, scratch: Vec::new(), pivots: 0 }
    }

    pub fn add_column(&mut self) {
        self.k += 1;
        for l in &mut self.lines {
            l.v.push(I::zero_int());
        }
    }

    /// Appends the row `coeffs . x = rhs`; `coeffs` has one entry per column.
    pub fn add_row(&mut self, coeffs: &[Q], rhs: &Q) -> Result<(), Overflow> {
        assert_eq!(coeffs.len(), self.k);
        let m = self.lines.len();
        let lcm = coeffs.iter().chain(std::iter::once(rhs)).fold(BigInt::one(), |l, q| l.lcm(q.denom()));
        let to_int = |q: &Q| I::from_big(&(q.numer() * (&lcm / q.denom()))).ok_or(Overflow);
        if self.track {
            for l in &mut self.lines {
                l.a.push(I::zero_int());
            }
        }
        let mut line = Line {
            v: coeffs.iter().map(to_int).collect::<Result<_, _>>()?,
            a: if self.track { vec![I::zero_int(); m + 1] } else { Vec::new() },
            rhs: to_int(rhs)?,
            den: I::from_big(&BigInt::one()).ok_or(Overflow)?,
        };
        for (i, b) in self.basis.iter().enumerate() {
            if let Basic::Structural(v) = *b {
                I::eliminate(&mut line, &self.lines[i], v, &mut self.scratch)?;
            }
        }
        let mut scale = Q::from_integer(lcm);
        if line.rhs.sgn() == Ordering::Less {
            for x in line.v.iter_mut().chain(line.a.iter_mut()) {
                *x = x.negate();
            }
            line.rhs = line.rhs.negate();
            scale = -scale;
        }
        if self.track {
            line.a[m] = line.den.clone();
        }
        self.lines.push(line);
        self.basis.push(Basic::Artificial(m));
        self.scale.push(scale);
        Ok(())
    }

    fn pivot(&mut self, p: usize, enter: usize, z: &mut Line<I>) -> Result<(), Overflow> {
        self.pivots += 1;
        let src = self.lines[p].clone();
        for (i, l) in self.lines.iter_mut().enumerate() {
            if i != p {
                I::eliminate(l, &src, enter, &mut self.scratch)?;
            }
        }
        I::eliminate(z, &src, enter, &mut self.scratch)?;
        let l = &mut self.lines[p];
        l.den = l.v[enter].clone();
        if l.den.sgn() == Ordering::Less {
            for x in l.v.iter_mut().chain(l.a.iter_mut()) {
                *x = x.negate();
            }
            l.rhs = l.rhs.negate();
            l.den = l.den.negate();
        }
        self.basis[p] = Basic::Structural(enter);
        Ok(())
    }

    /// Reduced costs of the phase-one objective, with `rhs = -w0`.
    fn objective(&self) -> Result<Line<I>, Overflow> {
        let lcm = self
            .lines
            .iter()
            .zip(&self.basis)
            .filter(|(_, b)| matches!(b, Basic::Artificial(_)))
            .fold(BigInt::one(), |acc, (l, _)| acc.lcm(&l.den.to_big()));
        let mut v = vec![<BigInt as Zero>::zero(); self.k];
        let mut rhs = <BigInt as Zero>::zero();
        for (l, b) in self.lines.iter().zip(&self.basis) {
            if let Basic::Artificial(_) = b {
                let f = &lcm / l.den.to_big();
                for (z, x) in v.iter_mut().zip(&l.v) {
                    if x.sgn() != Ordering::Equal {
                        *z -= &f * x.to_big();
                    }
                }
                rhs -= &f * l.rhs.to_big();
            }
        }
        let conv = |b: &BigInt| I::from_big(b).ok_or(Overflow);
        Ok(Line {
            v: v.iter().map(conv).collect::<Result<_, _>>()?,
            a: Vec::new(),
            rhs: conv(&rhs)?,
            den: conv(&lcm)?,
        })
    }

    /// Minimizes the sum of the artificials from the current basis.
    pub fn run(&mut self) -> Result<Phase1, Overflow> {
        let (m, k) = (self.lines.len(), self.k);
        let mut z = self.objective()?;
        let mut streak = 0u32;
        let mut bland = false;
        while z.rhs.sgn() == Ordering::Less {
            let enter = if bland {
                (0..k).find(|&j| z.v[j].sgn() == Ordering::Less)
            } else {
                let mut best: Option<usize> = None;
                for j in 0..k {
                    if z.v[j].sgn() == Ordering::Less && best.is_none_or(|b| z.v[j] < z.v[b]) {
                        best = Some(j);
                    }
                }
                best
            };
            let Some(enter) = enter else { break };
            let mut leave: Option<usize> = None;
            for i in 0..m {
                let l = &self.lines[i];
                if l.v[enter].sgn() != Ordering::Greater {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some(li) => {
                        let o = &self.lines[li];
                        match I::cmp_ratio(&l.rhs, &l.v[enter], &o.rhs, &o.v[enter]) {
                            Ordering::Less => true,
                            Ordering::Equal => self.order(i) < self.order(li),
                            Ordering::Greater => false,
                        }
                    }
                };
                if better {
                    leave = Some(i);
                }
            }
            let p = leave.expect("phase one objective is bounded below");
            if self.lines[p].rhs.sgn() == Ordering::Equal {
                streak += 1;
                if streak >= DEGENERATE_STREAK {
                    bland = true;
                }
            } else {
                streak = 0;
            }
            self.pivot(p, enter, &mut z)?;
        }
        if z.rhs.sgn() == Ordering::Equal {
            let mut x = vec![Q::zero(); k];
            for (l, b) in self.lines.iter().zip(&self.basis) {
                if let Basic::Structural(v) = *b {
                    x[v] = l.value(&l.rhs);
                }
            }
            return Ok(Phase1::Feasible(x));
        }
        if !self.track {
            return Ok(Phase1::Infeasible(None));
        }
        let mut y = vec![Q::zero(); m];
        for (l, b) in self.lines.iter().zip(&self.basis) {
            if let Basic::Artificial(_) = b {
                for (yr, x) in y.iter_mut().zip(&l.a) {
                    if x.sgn() != Ordering::Equal {
                        *yr += l.value(x);
                    }
                }
            }
        }
        for (yr, s) in y.iter_mut().zip(&self.scale) {
            *yr *= s;
        }
        Ok(Phase1::Infeasible(Some(y)))
    }

    /// `(row, column)` for each structural basic variable with positive value.
    pub fn positive_basics(&self) -> Vec<(usize, usize)> {
        self.lines
            .iter()
            .zip(&self.basis)
            .enumerate()
            .filter_map(|(i, (l, b))| match b {
                Basic::Structural(v) if l.rhs.sgn() == Ordering::Greater => Some((i, *v)),
                _ => None,
            })
            .collect()
    }

    /// Drops row `i` together with column `col`, which must be basic there.
    /// The column is then a unit vector, so the rest stays a valid tableau.
    pub fn remove(&mut self, i: usize, col: usize) {
        assert!(!self.track, "rows cannot be dropped while the inverse is tracked");
        assert_eq!(self.basis[i], Basic::Structural(col));
        self.lines.remove(i);
        self.basis.remove(i);
        self.scale.remove(i);
        for l in &mut self.lines {
            l.v.remove(col);
        }
        for b in &mut self.basis {
            if let Basic::Structural(v) = b {
                if *v > col {
                    *v -= 1;
                }
            }
        }
        self.k -= 1;
    }

    /// Bland's tie-break index of the basic variable in row `i`.
    fn order(&self, i: usize) -> usize {
        match self.basis[i] {
            Basic::Structural(v) => v,
            Basic::Artificial(r) => self.k + r,
        }
    }
}

/// One-shot phase one on dense rows over `k` nonnegative columns.
#[cfg(test)]
pub(crate) fn phase1<I: Int>(a: &[Vec<Q>], b: &[Q], k: usize, pivots: &mut u64) -> Result<Phase1, Overflow> {
    let mut tab = Tableau::<I>::new(k, true);
    for (row, rhs) in a.iter().zip(b) {
        tab.add_row(row, rhs)?;
    }
    let out = tab.run();
    *pivots += tab.pivots;
    out
}

/// Tries machine-word arithmetic first and falls back to big integers.
#[cfg(test)]
pub(crate) fn solve(a: &[Vec<Q>], b: &[Q], k: usize, pivots: &mut u64, wide: &mut bool) -> Phase1 {
    match phase1::<i64>(a, b, k, pivots) {
        Ok(r) => r,
        Err(Overflow) => {
            *wide = true;
            phase1::<BigInt>(a, b, k, pivots).unwrap_or_else(|_| unreachable!("big integers do not overflow"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn q(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn check_farkas(a: &[Vec<Q>], b: &[Q], y: &[Q]) {
        for j in 0..a[0].len() {
            let s: Q = a.iter().zip(y).map(|(r, yi)| &r[j] * yi).sum();
            assert!(!s.is_positive());
        }
        let s: Q = b.iter().zip(y).map(|(bi, yi)| bi * yi).sum();
        assert!(s.is_positive());
    }

    #[test]
    fn feasible_point() {
        let a = q(&[&[1, 1, 0], &[0, 1, 1]]);
        let b = vec![int(2), int(3)];
        let mut p = 0;
        match phase1::<i64>(&a, &b, 3, &mut p).unwrap() {
            Phase1::Feasible(x) => {
                assert_eq!(x[0].clone() + &x[1], int(2));
                assert_eq!(x[1].clone() + &x[2], int(3));
                assert!(x.iter().all(|v| !v.is_negative()));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_rows() {
        let a = vec![vec![frac(1, 2), frac(1, 3)], vec![frac(2, 7), int(-1)]];
        let b = vec![frac(5, 6), frac(-3, 14)];
        let mut p = 0;
        let Phase1::Feasible(x) = phase1::<i64>(&a, &b, 2, &mut p).unwrap() else { panic!() };
        for (row, rhs) in a.iter().zip(&b) {
            assert_eq!(row.iter().zip(&x).map(|(c, v)| c * v).sum::<Q>(), *rhs);
        }
    }

    #[test]
    fn infeasible_multipliers() {
        // x + y = -1 with x, y >= 0.
        let a = q(&[&[1, 1]]);
        let b = vec![int(-1)];
        let mut p = 0;
        let Phase1::Infeasible(Some(y)) = phase1::<i64>(&a, &b, 2, &mut p).unwrap() else { panic!() };
        assert!(y[0].is_negative());
        check_farkas(&a, &b, &y);
        // x - y = 1, x + y = 1/3 (scaled rows), x - 2y = 2.
        let a = vec![vec![int(1), int(-1)], vec![frac(1, 3), frac(1, 3)], vec![int(1), int(-2)]];
        let b = vec![int(1), frac(1, 9), int(2)];
        let Phase1::Infeasible(Some(y)) = phase1::<BigInt>(&a, &b, 2, &mut p).unwrap() else { panic!() };
        check_farkas(&a, &b, &y);
    }

    #[test]
    fn small_overflow_falls_back() {
        let big = i64::MAX / 3;
        let a = vec![vec![int(big), int(big - 1)], vec![int(big - 7), int(big)]];
        let b = vec![int(big), int(5)];
        let (mut p, mut wide) = (0, false);
        let r = solve(&a, &b, 2, &mut p, &mut wide);
        assert!(wide);
        let mut p2 = 0;
        assert_eq!(r, phase1::<BigInt>(&a, &b, 2, &mut p2).unwrap());
    }
}
