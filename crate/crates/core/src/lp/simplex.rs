//! Exact rational simplex on a condensed tableau.
//!
//! Solves `max c·x` subject to `A x <= b`, `x >= 0` with `b >= 0`, so the
//! all-slack basis is feasible and no phase one is needed. Rows and columns
//! may be appended after an optimal solve: new columns start nonbasic at zero
//! and new rows are re-optimized with the dual simplex.

use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

use super::LpError;
use crate::Rational;

/// Consecutive degenerate pivots before switching to Bland's rule.
const DEGENERATE_LIMIT: usize = 50;

fn add(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_add(b).ok_or(LpError::Overflow)
}

fn sub(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_sub(b).ok_or(LpError::Overflow)
}

fn mul(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_mul(b).ok_or(LpError::Overflow)
}

fn div(a: &Rational, b: &Rational) -> Result<Rational, LpError> {
    a.checked_div(b).ok_or(LpError::Overflow)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Loc {
    Basic(usize),
    Nonbasic(usize),
}

/// Handle to a structural variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

/// Handle to a constraint (its slack variable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RowId(usize);

#[derive(Debug, Default)]
pub struct Simplex {
    /// Location of every variable id (structural and slack share one id space).
    loc: Vec<Loc>,
    is_slack: Vec<bool>,
    basis: Vec<usize>,
    cols: Vec<usize>,
    beta: Vec<Rational>,
    t: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    z: Rational,
    pivots: usize,
    max_pivots: usize,
}

impl Simplex {
    pub fn new(max_pivots: usize) -> Self {
        Simplex { max_pivots, ..Default::default() }
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    pub fn row_count(&self) -> usize {
        self.basis.len()
    }

    pub fn var_count(&self) -> usize {
        self.cols.len()
    }

    pub fn objective(&self) -> Rational {
        self.z
    }

    /// New variable with objective coefficient `obj`; absent from existing rows.
    pub fn add_var(&mut self, obj: Rational) -> VarId {
        let id = self.loc.len();
        let col = self.cols.len();
        self.loc.push(Loc::Nonbasic(col));
        self.is_slack.push(false);
        self.cols.push(id);
        self.cost.push(obj);
        for row in &mut self.t {
            row.push(Rational::zero());
        }
        VarId(id)
    }

    /// Appends `Σ coeffs·x <= rhs`, expressed in the current basis.
    pub fn add_row(&mut self, coeffs: &[(VarId, Rational)], rhs: Rational) -> Result<RowId, LpError> {
        let mut beta = rhs;
        let mut row = vec![Rational::zero(); self.cols.len()];
        for (VarId(v), a) in coeffs {
            if a.is_zero() {
                continue;
            }
            match self.loc[*v] {
                Loc::Nonbasic(c) => row[c] = add(&row[c], a)?,
                Loc::Basic(r) => {
                    // x_v = beta_r - Σ t_rj x_j
                    beta = sub(&beta, &mul(a, &self.beta[r])?)?;
                    for (j, trj) in self.t[r].iter().enumerate() {
                        if !trj.is_zero() {
                            row[j] = sub(&row[j], &mul(a, trj)?)?;
                        }
                    }
                }
            }
        }
        // slack = beta - Σ row_j x_j
        let id = self.loc.len();
        self.loc.push(Loc::Basic(self.basis.len()));
        self.is_slack.push(true);
        self.basis.push(id);
        self.beta.push(beta);
        self.t.push(row);
        Ok(RowId(id))
    }

    fn pivot(&mut self, r: usize, j: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(LpError::PivotLimit(self.max_pivots));
        }
        let a = self.t[r][j];
        let nz: Vec<usize> = (0..self.cols.len()).filter(|&k| k != j && !self.t[r][k].is_zero()).collect();
        let beta_r = div(&self.beta[r], &a)?;
        let mut prow = std::mem::take(&mut self.t[r]);
        for &k in &nz {
            prow[k] = div(&prow[k], &a)?;
        }
        prow[j] = div(&Rational::from_integer(1), &a)?;
        for i in 0..self.t.len() {
            if i == r {
                continue;
            }
            let f = self.t[i][j];
            if f.is_zero() {
                continue;
            }
            self.beta[i] = sub(&self.beta[i], &mul(&f, &beta_r)?)?;
            let row = &mut self.t[i];
            for &k in &nz {
                row[k] = sub(&row[k], &mul(&f, &prow[k])?)?;
            }
            row[j] = -mul(&f, &prow[j])?;
        }
        let c = self.cost[j];
        if !c.is_zero() {
            self.z = add(&self.z, &mul(&c, &beta_r)?)?;
            for &k in &nz {
                self.cost[k] = sub(&self.cost[k], &mul(&c, &prow[k])?)?;
            }
            self.cost[j] = -mul(&c, &prow[j])?;
        }
        self.beta[r] = beta_r;
        self.t[r] = prow;
        let (leaving, entering) = (self.basis[r], self.cols[j]);
        self.basis[r] = entering;
        self.cols[j] = leaving;
        self.loc[entering] = Loc::Basic(r);
        self.loc[leaving] = Loc::Nonbasic(j);
        Ok(())
    }

    /// Restores primal feasibility after rows were appended to a dual-feasible tableau.
    fn dual_phase(&mut self) -> Result<(), LpError> {
        let mut streak = 0;
        loop {
            let bland = streak >= DEGENERATE_LIMIT;
            let candidates = (0..self.basis.len()).filter(|&i| self.beta[i].is_negative());
            let r = if bland {
                candidates.min_by_key(|&i| self.basis[i])
            } else {
                candidates.min_by(|&a, &b| self.beta[a].cmp(&self.beta[b]).then(self.basis[a].cmp(&self.basis[b])))
            };
            let Some(r) = r else { return Ok(()) };
            let mut best: Option<(usize, Rational)> = None;
            for j in 0..self.cols.len() {
                let trj = self.t[r][j];
                if !trj.is_negative() {
                    continue;
                }
                let ratio = div(&self.cost[j], &trj)?;
                let better = match &best {
                    None => true,
                    Some((bj, br)) => ratio < *br || (ratio == *br && self.cols[j] < self.cols[*bj]),
                };
                if better {
                    best = Some((j, ratio));
                }
            }
            let Some((j, ratio)) = best else { return Err(LpError::Infeasible) };
            streak = if ratio.is_zero() { streak + 1 } else { 0 };
            self.pivot(r, j)?;
        }
    }

    fn primal_phase(&mut self) -> Result<(), LpError> {
        let mut streak = 0;
        loop {
            let bland = streak >= DEGENERATE_LIMIT;
            let candidates = (0..self.cols.len()).filter(|&j| self.cost[j].is_positive());
            let j = if bland {
                candidates.min_by_key(|&j| self.cols[j])
            } else {
                candidates.max_by(|&a, &b| self.cost[a].cmp(&self.cost[b]).then(self.cols[b].cmp(&self.cols[a])))
            };
            let Some(j) = j else { return Ok(()) };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.basis.len() {
                let tij = self.t[i][j];
                if !tij.is_positive() {
                    continue;
                }
                let ratio = div(&self.beta[i], &tij)?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = best else { return Err(LpError::Unbounded) };
            streak = if ratio.is_zero() { streak + 1 } else { 0 };
            self.pivot(r, j)?;
        }
    }

    /// Optimizes from the current basis.
    pub fn solve(&mut self) -> Result<Rational, LpError> {
        if self.beta.iter().any(Signed::is_negative) {
            if self.cost.iter().any(Signed::is_positive) {
                return Err(LpError::Internal("tableau is neither primal nor dual feasible".into()));
            }
            self.dual_phase()?;
        }
        self.primal_phase()?;
        Ok(self.z)
    }

    pub fn value(&self, VarId(v): VarId) -> Rational {
        match self.loc[v] {
            Loc::Basic(r) => self.beta[r],
            Loc::Nonbasic(_) => Rational::zero(),
        }
    }

    /// Dual multiplier of a row at the current basis.
    pub fn dual(&self, RowId(s): RowId) -> Rational {
        match self.loc[s] {
            Loc::Basic(_) => Rational::zero(),
            Loc::Nonbasic(c) => -self.cost[c],
        }
    }

    /// Reduced cost of a structural variable (`<= 0` at optimum).
    pub fn reduced_cost(&self, VarId(v): VarId) -> Rational {
        debug_assert!(!self.is_slack[v]);
        match self.loc[v] {
            Loc::Basic(_) => Rational::zero(),
            Loc::Nonbasic(c) => self.cost[c],
        }
    }

    pub fn slack(&self, RowId(s): RowId) -> Rational {
        match self.loc[s] {
            Loc::Basic(r) => self.beta[r],
            Loc::Nonbasic(_) => Rational::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn int(v: i128) -> Rational {
        Rational::from_integer(v)
    }

    #[test]
    fn small_lp() {
        // max 3x + 2y st x + y <= 4, x + 3y <= 9, x <= 3
        let mut s = Simplex::new(1000);
        let x = s.add_var(int(3));
        let y = s.add_var(int(2));
        let r1 = s.add_row(&[(x, int(1)), (y, int(1))], int(4)).unwrap();
        s.add_row(&[(x, int(1)), (y, int(3))], int(9)).unwrap();
        let r3 = s.add_row(&[(x, int(1))], int(3)).unwrap();
        assert_eq!(s.solve().unwrap(), int(11));
        assert_eq!((s.value(x), s.value(y)), (int(3), int(1)));
        assert_eq!((s.dual(r1), s.dual(r3)), (int(2), int(1)));
    }

    #[test]
    fn rows_added_after_optimum() {
        let mut s = Simplex::new(1000);
        let x = s.add_var(int(1));
        let y = s.add_var(int(1));
        s.add_row(&[(x, int(1)), (y, int(2))], int(4)).unwrap();
        s.add_row(&[(x, int(3)), (y, int(1))], int(6)).unwrap();
        assert_eq!(s.solve().unwrap(), ratio(14, 5));
        s.add_row(&[(x, int(1)), (y, int(1))], int(2)).unwrap();
        assert_eq!(s.solve().unwrap(), int(2));
        let w = s.add_var(int(0));
        s.add_row(&[(w, int(1)), (x, int(-1))], int(0)).unwrap();
        assert_eq!(s.solve().unwrap(), int(2));
        assert!(s.value(w) <= s.value(x));
    }

    #[test]
    fn unbounded_is_reported() {
        let mut s = Simplex::new(100);
        let x = s.add_var(int(1));
        let y = s.add_var(int(0));
        s.add_row(&[(x, int(1)), (y, int(-1))], int(1)).unwrap();
        assert_eq!(s.solve(), Err(LpError::Unbounded));
    }
}
