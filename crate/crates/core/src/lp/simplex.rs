//! Two-phase tableau simplex over exact rationals with Bland's rule.
//!
//! Solves `max c·x` subject to `A x = b`, `x ≥ 0`, `b ≥ 0`. One artificial
//! column per row is kept to the end so that `B⁻¹` can be read off the final
//! tableau and the dual `y = c_B B⁻¹` recovered.

use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

pub(crate) struct Optimum {
    pub x: Vec<Rational>,
    pub y: Vec<Rational>,
    pub value: Rational,
}

struct Tableau {
    /// rows × (cols + rows) coefficients, then the right-hand side.
    t: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col].clone();
        for v in self.t[row].iter_mut() {
            *v = &*v / &p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                *v = &*v - &f * pv;
            }
        }
        self.basis[row] = col;
    }

    fn rhs(&self, row: usize) -> &Rational {
        self.t[row].last().expect("rhs column")
    }

    /// Optimize `cost` (over all columns) entering only columns `< allowed`.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> Result<()> {
        loop {
            let entering = (0..allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut d = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    d -= &cost[b] * &self.t[i][j];
                }
                d.is_positive()
            });
            let Some(j) = entering else { return Ok(()) };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.t.len() {
                if !self.t[i][j].is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / &self.t[i][j];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else {
                return Err(Error::Lp("unbounded"));
            };
            self.pivot(i, j);
        }
    }
}

pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> Result<Optimum> {
    let (m, n) = (a.len(), c.len());
    let width = n + m + 1;
    let mut t = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r = vec![Rational::zero(); width];
        r[..n].clone_from_slice(row);
        r[n + i] = Rational::one();
        r[width - 1] = b[i].clone();
        t.push(r);
    }
    let mut tab = Tableau {
        t,
        basis: (n..n + m).collect(),
        cols: n,
    };

    // Phase 1: drive the artificials to zero.
    let mut cost1 = vec![Rational::zero(); n + m];
    for c in &mut cost1[n..] {
        *c = -Rational::one();
    }
    tab.optimize(&cost1, n + m)?;
    if (0..m).any(|i| tab.basis[i] >= n && tab.rhs(i).is_positive()) {
        return Err(Error::Lp("infeasible"));
    }
    for i in 0..m {
        if tab.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !tab.t[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }

    // Phase 2 on the original objective; artificials may not re-enter.
    let mut cost2 = c.to_vec();
    cost2.resize(n + m, Rational::zero());
    tab.optimize(&cost2, tab.cols)?;

    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in tab.basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab.rhs(i).clone();
        }
    }
    let y = (0..m)
        .map(|k| {
            tab.basis
                .iter()
                .enumerate()
                .map(|(i, &bv)| &cost2[bv] * &tab.t[i][n + k])
                .sum()
        })
        .collect();
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(Optimum { x, y, value })
}
