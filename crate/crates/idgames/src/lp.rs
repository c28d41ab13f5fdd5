//! Exact rational simplex for small dense linear programs.
//!
//! maximize c.x subject to A x = b, x >= 0, with integer data and b >= 0.
//! Two-phase method with Bland's anti-cycling rule throughout, so pivoting
//! terminates on degenerate polytopes. Arithmetic first runs on i128-backed
//! rationals with every operation overflow-checked; on overflow the solve is
//! redone with arbitrary-precision rationals. Either way every pivot is
//! exact.
//!
//! The returned solution is a basic feasible solution of the equality system
//! (a vertex when the rows are independent) together with the dual vector
//! read from the artificial columns, which callers verify against the
//! original data as an optimality certificate.

use crate::exact::Rational;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};
use std::cmp::Ordering;

pub(crate) trait LpScalar: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn is_positive(&self) -> bool;
    fn add_checked(&self, o: &Self) -> Option<Self>;
    fn sub_checked(&self, o: &Self) -> Option<Self>;
    fn mul_checked(&self, o: &Self) -> Option<Self>;
    fn div_checked(&self, o: &Self) -> Option<Self>;
    fn cmp_checked(&self, o: &Self) -> Option<Ordering>;
    fn to_rational(&self) -> Rational;
}

impl LpScalar for Ratio<i128> {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v as i128)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add_checked(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub_checked(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul_checked(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div_checked(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        self.checked_div(o)
    }
    fn cmp_checked(&self, o: &Self) -> Option<Ordering> {
        // Denominators are kept positive by Ratio, so cross-multiplication
        // preserves the order.
        let lhs = i128::checked_mul(*self.numer(), *o.denom())?;
        let rhs = i128::checked_mul(*o.numer(), *self.denom())?;
        Some(lhs.cmp(&rhs))
    }
    fn to_rational(&self) -> Rational {
        Rational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl LpScalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add_checked(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_checked(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_checked(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_checked(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            None
        } else {
            Some(self / o)
        }
    }
    fn cmp_checked(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
    fn to_rational(&self) -> Rational {
        self.clone()
    }
}

/// maximize `objective . x` s.t. `rows . x = rhs`, `x >= 0`.
#[derive(Debug, Clone)]
pub(crate) struct StandardLp {
    pub rows: Vec<Vec<i64>>,
    pub rhs: Vec<i64>,
    pub objective: Vec<i64>,
}

#[derive(Debug, Clone)]
pub(crate) struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per input row.
    pub dual: Vec<Rational>,
    /// Indices of basic variables, one per surviving row; the primal point
    /// is the basic feasible solution they describe.
    pub basis: Vec<usize>,
}

#[derive(Debug)]
enum SolveErr {
    Overflow,
    Infeasible,
    Unbounded,
}

struct Tableau<T> {
    rows: usize,
    cols: usize,
    body: Vec<T>,
    obj: Vec<T>,
    basis: Vec<usize>,
}

impl<T: LpScalar> Tableau<T> {
    fn at(&self, r: usize, c: usize) -> &T {
        &self.body[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: T) {
        self.body[r * self.cols + c] = v;
    }

    fn pivot(&mut self, pr: usize, pc: usize) -> std::result::Result<(), SolveErr> {
        let cols = self.cols;
        let inv = self.at(pr, pc).clone();
        for c in 0..cols {
            let v = self.at(pr, c).div_checked(&inv).ok_or(SolveErr::Overflow)?;
            self.set(pr, c, v);
        }
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc).clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..cols {
                let delta = factor
                    .mul_checked(self.at(pr, c))
                    .ok_or(SolveErr::Overflow)?;
                let v = self
                    .at(r, c)
                    .sub_checked(&delta)
                    .ok_or(SolveErr::Overflow)?;
                self.set(r, c, v);
            }
        }
        let factor = self.obj[pc].clone();
        if !factor.is_zero() {
            for c in 0..cols {
                let delta = factor
                    .mul_checked(self.at(pr, c))
                    .ok_or(SolveErr::Overflow)?;
                self.obj[c] = self.obj[c].sub_checked(&delta).ok_or(SolveErr::Overflow)?;
            }
        }
        self.basis[pr] = pc;
        Ok(())
    }

    /// Bland's rule: entering column is the lowest-index eligible column with
    /// negative reduced cost; leaving row minimizes the ratio with ties
    /// broken by the lowest basic variable index.
    fn run<F>(&mut self, eligible: F) -> std::result::Result<(), SolveErr>
    where
        F: Fn(usize) -> bool,
    {
        loop {
            let mut entering = None;
            for c in 0..self.cols - 1 {
                if eligible(c) && self.obj[c].is_negative() {
                    entering = Some(c);
                    break;
                }
            }
            let pc = match entering {
                Some(c) => c,
                None => return Ok(()),
            };
            let rhs_col = self.cols - 1;
            let mut leaving: Option<(usize, T)> = None;
            for r in 0..self.rows {
                let coef = self.at(r, pc);
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self
                    .at(r, rhs_col)
                    .div_checked(coef)
                    .ok_or(SolveErr::Overflow)?;
                match &leaving {
                    None => leaving = Some((r, ratio)),
                    Some((br, best)) => match ratio.cmp_checked(best).ok_or(SolveErr::Overflow)? {
                        Ordering::Less => leaving = Some((r, ratio)),
                        Ordering::Equal => {
                            if self.basis[r] < self.basis[*br] {
                                leaving = Some((r, ratio));
                            }
                        }
                        Ordering::Greater => {}
                    },
                }
            }
            let (pr, _) = leaving.ok_or(SolveErr::Unbounded)?;
            self.pivot(pr, pc)?;
        }
    }
}

fn simplex<T: LpScalar>(lp: &StandardLp) -> std::result::Result<LpSolution, SolveErr> {
    let m = lp.rows.len();
    let n = lp.objective.len();
    debug_assert!(lp.rows.iter().all(|r| r.len() == n));
    debug_assert!(lp.rhs.iter().all(|&b| b >= 0));

    let cols = n + m + 1;
    let mut t = Tableau {
        rows: m,
        cols,
        body: vec![T::zero(); m * cols],
        obj: vec![T::zero(); cols],
        basis: (n..n + m).collect(),
    };
    for (r, row) in lp.rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            if v != 0 {
                t.set(r, c, T::from_i64(v));
            }
        }
        t.set(r, n + r, T::one());
        t.set(r, cols - 1, T::from_i64(lp.rhs[r]));
    }

    // Phase 1: minimize the artificial sum, i.e. maximize -sum(a). With the
    // artificial basis, the reduced cost of original column j is
    // -sum_i A[i][j] and the objective value is -sum_i b[i].
    for c in 0..cols {
        let mut acc = T::zero();
        for r in 0..m {
            acc = acc.add_checked(t.at(r, c)).ok_or(SolveErr::Overflow)?;
        }
        if c < n || c == cols - 1 {
            t.obj[c] = T::zero().sub_checked(&acc).ok_or(SolveErr::Overflow)?;
        } else {
            t.obj[c] = T::zero();
        }
    }
    t.run(|c| c < n)?;
    if !t.obj[cols - 1].is_zero() {
        return Err(SolveErr::Infeasible);
    }

    // Drive leftover artificial variables out of the basis; rows that cannot
    // pivot on any original column are redundant and get dropped.
    let mut r = 0;
    while r < t.rows {
        if t.basis[r] >= n {
            let pivot_col = (0..n).find(|&c| !t.at(r, c).is_zero());
            match pivot_col {
                Some(c) => t.pivot(r, c)?,
                None => {
                    // Remove row r entirely.
                    let last = t.rows - 1;
                    for c in 0..cols {
                        let v = t.at(last, c).clone();
                        t.set(r, c, v);
                    }
                    t.basis[r] = t.basis[last];
                    t.rows -= 1;
                    t.basis.truncate(t.rows);
                    t.body.truncate(t.rows * cols);
                    continue;
                }
            }
        }
        r += 1;
    }

    // Phase 2: rebuild the reduced-cost row for the real objective.
    let rows = t.rows;
    for c in 0..cols {
        let mut acc = T::zero();
        for r in 0..rows {
            let b = t.basis[r];
            if b < n && lp.objective[b] != 0 {
                let cb = T::from_i64(lp.objective[b]);
                let term = cb.mul_checked(t.at(r, c)).ok_or(SolveErr::Overflow)?;
                acc = acc.add_checked(&term).ok_or(SolveErr::Overflow)?;
            }
        }
        if c < n {
            acc = acc
                .sub_checked(&T::from_i64(lp.objective[c]))
                .ok_or(SolveErr::Overflow)?;
        }
        t.obj[c] = acc;
    }
    t.run(|c| c < n)?;

    let mut primal = vec![Rational::from_integer(0.into()); n];
    for r in 0..t.rows {
        if t.basis[r] < n {
            primal[t.basis[r]] = t.at(r, cols - 1).to_rational();
        }
    }
    // The dual multiplier of input row i sits in the objective row under the
    // artificial column n + i: those columns never re-enter, so they still
    // hold the accumulated row-operation multipliers, and that reading stays
    // valid even when redundant rows were dropped.
    let dual = (0..m).map(|i| t.obj[n + i].to_rational()).collect();
    let value = t.obj[cols - 1].to_rational();
    let basis = t.basis.clone();
    Ok(LpSolution {
        value,
        primal,
        dual,
        basis,
    })
}

pub(crate) fn solve(lp: &StandardLp) -> Result<LpSolution> {
    match simplex::<Ratio<i128>>(lp) {
        Ok(sol) => Ok(sol),
        Err(SolveErr::Overflow) => match simplex::<Rational>(lp) {
            Ok(sol) => Ok(sol),
            Err(SolveErr::Overflow) => unreachable!("big rationals cannot overflow"),
            Err(SolveErr::Infeasible) => Err(Error::Parse("infeasible program".into())),
            Err(SolveErr::Unbounded) => Err(Error::Parse("unbounded program".into())),
        },
        Err(SolveErr::Infeasible) => Err(Error::Parse("infeasible program".into())),
        Err(SolveErr::Unbounded) => Err(Error::Parse("unbounded program".into())),
    }
}

/// Exact strong-duality check against the original data: the primal point is
/// feasible with matching objective, and the dual multipliers price out
/// every column (A^T y >= c componentwise, y free, y.b = value).
pub(crate) fn verify_certificate(lp: &StandardLp, sol: &LpSolution) -> bool {
    let n = lp.objective.len();
    if sol.primal.len() != n || sol.dual.len() != lp.rows.len() {
        return false;
    }
    if sol.primal.iter().any(Signed::is_negative) {
        return false;
    }
    let int = |v: i64| Rational::from_integer(v.into());
    for (row, &b) in lp.rows.iter().zip(&lp.rhs) {
        let lhs: Rational = row
            .iter()
            .zip(&sol.primal)
            .filter(|(&a, _)| a != 0)
            .map(|(&a, x)| int(a) * x)
            .sum();
        if lhs != int(b) {
            return false;
        }
    }
    let primal_value: Rational = lp
        .objective
        .iter()
        .zip(&sol.primal)
        .filter(|(&c, _)| c != 0)
        .map(|(&c, x)| int(c) * x)
        .sum();
    if primal_value != sol.value {
        return false;
    }
    for j in 0..n {
        let priced: Rational = lp
            .rows
            .iter()
            .zip(&sol.dual)
            .map(|(row, y)| int(row[j]) * y)
            .sum();
        if priced < int(lp.objective[j]) {
            return false;
        }
    }
    let dual_value: Rational = sol.dual.iter().zip(&lp.rhs).map(|(y, &b)| y * int(b)).sum();
    dual_value == sol.value
}

/// Indices of a maximal linearly independent subset of the rows (over the
/// rationals), scanning top to bottom.
pub(crate) fn independent_rows(rows: &[Vec<i64>]) -> Vec<usize> {
    if rows.is_empty() {
        return Vec::new();
    }
    let n = rows[0].len();
    let mut kept: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    let mut result = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut work: Vec<Rational> = row
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        for (r, &pc) in kept.iter().zip(&pivots) {
            if !Zero::is_zero(&work[pc]) {
                let factor = work[pc].clone();
                for c in 0..n {
                    let delta = &factor * &r[c];
                    work[c] -= delta;
                }
            }
        }
        if let Some(pc) = (0..n).find(|&c| !Zero::is_zero(&work[c])) {
            let inv = work[pc].clone();
            for v in work.iter_mut() {
                *v /= &inv;
            }
            kept.push(work);
            pivots.push(pc);
            result.push(idx);
        }
    }
    result
}

/// Rank of an integer matrix over the rationals.
pub(crate) fn rank(rows: &[Vec<i64>]) -> usize {
    independent_rows(rows).len()
}
